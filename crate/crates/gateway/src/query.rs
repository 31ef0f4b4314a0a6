//! Strict query-string codec.
//!
//! Each parameter may appear once. List values are split on literal commas
//! before percent-decoding, so an encoded `%2C` stays inside its item.

use std::collections::BTreeMap;

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use crate::error::HttpError;

const COMPONENT: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

pub fn encode_component(text: &str) -> String {
    utf8_percent_encode(text, COMPONENT).to_string()
}

pub fn encode_list<S: AsRef<str>>(items: &[S]) -> String {
    items
        .iter()
        .map(|i| encode_component(i.as_ref()))
        .collect::<Vec<_>>()
        .join(",")
}

/// Builds a query string from already-encoded values.
pub fn join(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{}={v}", encode_component(k)))
        .collect::<Vec<_>>()
        .join("&")
}

fn decode(raw: &str) -> Result<String, HttpError> {
    let spaced = raw.replace('+', " ");
    percent_decode_str(&spaced)
        .decode_utf8()
        .map(|s| s.into_owned())
        .map_err(|_| HttpError::parse(format!("{raw:?} is not valid percent-encoded UTF-8")))
}

/// Raw (still encoded) parameter values by decoded name.
#[derive(Debug, Clone, Default)]
pub struct RawParams(BTreeMap<String, String>);

impl RawParams {
    pub fn parse(query: Option<&str>) -> Result<Self, HttpError> {
        let mut values = BTreeMap::new();
        for pair in query.unwrap_or("").split('&').filter(|p| !p.is_empty()) {
            let (key, value) = pair.split_once('=').unwrap_or((pair, ""));
            let key = decode(key)?;
            if values.insert(key.clone(), value.to_owned()).is_some() {
                return Err(HttpError::bad(format!(
                    "parameter {key} given more than once"
                )));
            }
        }
        Ok(Self(values))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn text(&self, name: &str) -> Result<Option<String>, HttpError> {
        self.0.get(name).map(|raw| decode(raw)).transpose()
    }

    /// Items of a list parameter; absent gives `None`, and every item must
    /// be non-empty.
    pub fn list(&self, name: &str) -> Result<Option<Vec<String>>, HttpError> {
        let Some(raw) = self.0.get(name) else {
            return Ok(None);
        };
        let items = raw.split(',').map(decode).collect::<Result<Vec<_>, _>>()?;
        if items.iter().any(String::is_empty) {
            return Err(HttpError::bad(format!("{name} has an empty item")));
        }
        Ok(Some(items))
    }
}
