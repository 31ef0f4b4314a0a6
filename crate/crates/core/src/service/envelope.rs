use serde::{Deserialize, Serialize};

use crate::model::{Canonical, ObjectId, SocialNetworkId};
use crate::sdk::{AdaptorError, ErrorCode, Method};

/// One failed query inside an otherwise successful aggregation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct QueryError {
    pub social_network: SocialNetworkId,
    pub operation: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_id: Option<ObjectId>,
    pub code: ErrorCode,
    pub message: String,
}

impl QueryError {
    pub fn from_adaptor(
        network: &SocialNetworkId,
        operation: Method,
        object_id: Option<&ObjectId>,
        err: AdaptorError,
    ) -> Self {
        Self {
            social_network: network.clone(),
            operation,
            object_id: object_id.cloned(),
            code: err.code,
            message: err.message,
        }
    }
}

/// Merged outcome of one request across every network it touched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ResultEnvelope<T> {
    pub results: Vec<T>,
    pub errors: Vec<QueryError>,
}

impl<T> Default for ResultEnvelope<T> {
    fn default() -> Self {
        Self {
            results: Vec::new(),
            errors: Vec::new(),
        }
    }
}

impl<T> ResultEnvelope<T> {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }

    pub(crate) fn absorb(&mut self, other: ResultEnvelope<T>) {
        self.results.extend(other.results);
        self.errors.extend(other.errors);
    }
}

impl<T: Canonical> Canonical for ResultEnvelope<T> {
    const KIND: &'static str = "ResultEnvelope";
}
