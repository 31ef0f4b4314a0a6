//! Canonical JSON wire format.
//!
//! Field names are the camelCase names of the object model, timestamps are
//! ISO-8601 UTC strings and absent optionals are omitted. Parsing is strict:
//! unknown fields and wrong kinds are rejected with the offending path.

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::types::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("PARSE_ERROR at {path:?}: {message}")]
pub struct ParseError {
    /// Dotted path of the offending field; `"."` is the document root.
    pub path: String,
    pub message: String,
}

/// A type with a canonical JSON representation.
pub trait Canonical: Serialize + DeserializeOwned {
    const KIND: &'static str;
}

macro_rules! canonical {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl Canonical for $ty {
            const KIND: &'static str = $kind;
        })*
    };
}

canonical! {
    ObjectId => "ObjectId",
    Name => "Name",
    Address => "Address",
    License => "License",
    Person => "Person",
    MediaItem => "MediaItem",
    Activity => "Activity",
    Comment => "Comment",
    DateTimeFilter => "DateTimeFilter",
    AreaFilter => "AreaFilter",
    AddressFilter => "AddressFilter",
    LocationFilter => "LocationFilter",
    PersonFilter => "PersonFilter",
    MediaItemFilter => "MediaItemFilter",
    ActivityFilter => "ActivityFilter",
}

pub fn serialize_canonical<T: Canonical>(object: &T) -> String {
    serde_json::to_string(object).expect("canonical types always serialize")
}

pub fn parse_canonical<T: Canonical>(text: &str) -> Result<T, ParseError> {
    let deserializer = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(deserializer).map_err(|err| ParseError {
        path: err.path().to_string(),
        message: format!("expected {}: {}", T::KIND, err.inner()),
    })?;
    Ok(value)
}
