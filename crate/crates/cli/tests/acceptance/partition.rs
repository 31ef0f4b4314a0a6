//! Batch lookups reach each adaptor as network-homogeneous, disjoint batches
//! that together are a permutation of the input.

use std::collections::HashSet;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use async_trait::async_trait;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use socios_core::model::{
    Activity, Comment, MediaItem, MediaType, ObjectId, Person, SocialNetworkId,
};
use socios_core::sdk::{
    AdaptorCapability, AdaptorContext, AdaptorRegistry, AdaptorResult, Method, NetworkConfig,
    RateLimit, SnsAdaptor,
};
use socios_core::service::CoreService;

use crate::{ensure, Outcome};

const LISTS: usize = 1000;
const NETWORKS: [&str; 5] = ["alpha", "beta", "gamma", "delta", "epsilon"];
const METHODS: [Method; 4] = [
    Method::GetPersons,
    Method::GetMediaItems,
    Method::GetActivities,
    Method::GetComments,
];

type Log = Arc<Mutex<Vec<(SocialNetworkId, Vec<ObjectId>)>>>;

struct Recorder {
    context: AdaptorContext,
    log: Log,
}

impl Recorder {
    fn record(&self, ids: &[ObjectId]) {
        self.log
            .lock()
            .unwrap()
            .push((self.context.network.clone(), ids.to_vec()));
    }
}

#[async_trait]
impl SnsAdaptor for Recorder {
    fn network(&self) -> &SocialNetworkId {
        &self.context.network
    }

    fn capability(&self) -> &AdaptorCapability {
        &self.context.capability
    }

    async fn get_persons(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Person>> {
        self.record(ids);
        ids.iter().map(|id| Ok(Person::new(id.clone()))).collect()
    }

    async fn get_media_items(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<MediaItem>> {
        self.record(ids);
        ids.iter()
            .map(|id| Ok(MediaItem::new(id.clone(), MediaType::Text)))
            .collect()
    }

    async fn get_activities(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Activity>> {
        self.record(ids);
        ids.iter().map(|id| Ok(Activity::new(id.clone()))).collect()
    }

    async fn get_comments(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Comment>> {
        self.record(ids);
        ids.iter().map(|id| Ok(Comment::new(id.clone()))).collect()
    }
}

fn recording_core(log: &Log) -> CoreService {
    let registry = AdaptorRegistry::new();
    for name in NETWORKS {
        let log = log.clone();
        let factory = move |context: AdaptorContext| -> Box<dyn SnsAdaptor> {
            Box::new(Recorder {
                context,
                log: log.clone(),
            })
        };
        registry
            .register(
                SocialNetworkId::new(name).unwrap(),
                Arc::new(factory),
                AdaptorCapability::new(METHODS, RateLimit::new(u32::MAX, Duration::from_secs(1))),
                NetworkConfig::default(),
            )
            .unwrap();
    }
    CoreService::new(Arc::new(registry))
}

fn random_list(rng: &mut ChaCha8Rng, case: usize) -> Vec<ObjectId> {
    let mut networks = NETWORKS.to_vec();
    networks.shuffle(rng);
    networks.truncate(rng.gen_range(1..=NETWORKS.len()));
    (0..rng.gen_range(0..=50))
        .map(|i| {
            let sn = networks.choose(rng).unwrap();
            ObjectId::new(format!("o{case}-{i}"), SocialNetworkId::new(*sn).unwrap())
        })
        .collect()
}

fn returned_ids<T>(results: &[T], id: impl Fn(&T) -> &ObjectId) -> Vec<ObjectId> {
    results.iter().map(|r| id(r).clone()).collect()
}

async fn call(
    core: &CoreService,
    method: Method,
    ids: &[ObjectId],
) -> Result<Vec<ObjectId>, String> {
    let envelope_ids = match method {
        Method::GetPersons => core
            .get_persons(ids)
            .await
            .map(|e| returned_ids(&e.results, |p| &p.id)),
        Method::GetMediaItems => core
            .get_media_items(ids)
            .await
            .map(|e| returned_ids(&e.results, |m| &m.id)),
        Method::GetActivities => core
            .get_activities(ids)
            .await
            .map(|e| returned_ids(&e.results, |a| &a.id)),
        _ => core
            .get_comments(ids)
            .await
            .map(|e| returned_ids(&e.results, |c| &c.id)),
    };
    envelope_ids.map_err(|e| format!("{method}: {e}"))
}

fn sorted(ids: impl IntoIterator<Item = ObjectId>) -> Vec<(String, String)> {
    let mut v: Vec<_> = ids
        .into_iter()
        .map(|o| (o.social_network.to_string(), o.id))
        .collect();
    v.sort();
    v
}

pub async fn run() -> Outcome {
    let log: Log = Arc::default();
    let core = recording_core(&log);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let started = Instant::now();
    let mut batches = 0;
    for case in 0..LISTS {
        let ids = random_list(&mut rng, case);
        for method in METHODS {
            log.lock().unwrap().clear();
            let returned = call(&core, method, &ids).await?;
            let calls = std::mem::take(&mut *log.lock().unwrap());
            batches += calls.len();

            let mut seen = HashSet::new();
            for (network, batch) in &calls {
                ensure!(
                    batch.iter().all(|id| &id.social_network == network),
                    "list {case} {method}: batch for {network} holds foreign ids"
                );
                for id in batch {
                    ensure!(
                        seen.insert(id.clone()),
                        "list {case} {method}: {id:?} sent twice"
                    );
                }
            }
            let input = sorted(ids.iter().cloned());
            ensure!(
                sorted(calls.into_iter().flat_map(|(_, b)| b)) == input,
                "list {case} {method}: batches are not a permutation of the input"
            );
            ensure!(
                sorted(returned) == input,
                "list {case} {method}: results differ from the input ids"
            );
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "{LISTS} lists x {} methods, {batches} adaptor batches, {:.2}s",
        METHODS.len(),
        elapsed.as_secs_f64()
    ))
}
