use axum::http::StatusCode;
use serde::{Deserialize, Serialize};

/// A state change applied to a mock network's dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "camelCase",
    rename_all_fields = "camelCase",
    deny_unknown_fields
)]
pub enum Mutation {
    /// Publishes a new item owned by `owner`.
    AddMediaItem {
        owner: String,
        text: String,
    },
    DeleteMediaItem {
        id: String,
    },
    RenamePerson {
        id: String,
        display_name: String,
    },
    DeletePerson {
        id: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MutationOutcome {
    /// Id of the object created or changed.
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MutationError {
    #[error("no such object: {0}")]
    UnknownTarget(String),
    #[error("invalid mutation: {0}")]
    Invalid(String),
}

impl MutationError {
    pub fn status(&self) -> StatusCode {
        match self {
            MutationError::UnknownTarget(_) => StatusCode::NOT_FOUND,
            MutationError::Invalid(_) => StatusCode::BAD_REQUEST,
        }
    }
}
