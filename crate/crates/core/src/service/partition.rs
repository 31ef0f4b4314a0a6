use indexmap::IndexMap;

use crate::model::{ObjectId, SocialNetworkId};

/// The ids of one request that belong to one network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Batch {
    pub network: SocialNetworkId,
    /// Position of each id in the original request.
    pub positions: Vec<usize>,
    pub ids: Vec<ObjectId>,
}

/// Splits `ids` into one batch per distinct network, ordered by the first
/// appearance of each network. Within a batch ids keep request order and
/// duplicates are preserved.
pub fn partition(ids: &[ObjectId]) -> Vec<Batch> {
    let mut batches: IndexMap<&SocialNetworkId, Batch> = IndexMap::new();
    for (position, id) in ids.iter().enumerate() {
        let batch = batches.entry(&id.social_network).or_insert_with(|| Batch {
            network: id.social_network.clone(),
            positions: Vec::new(),
            ids: Vec::new(),
        });
        batch.positions.push(position);
        batch.ids.push(id.clone());
    }
    batches.into_values().collect()
}
