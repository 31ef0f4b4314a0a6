//! Built-in adaptors: the three mock networks plus inert registrations for
//! networks without a live backend.

pub mod chirper;
pub mod picshare;
pub mod streamhub;
pub mod stub;

use std::collections::HashMap;
use std::future::Future;
use std::sync::Arc;
use std::time::Duration;

use futures::future::join_all;
use serde::Deserialize;

use crate::model::{MediaItem, MediaItemFilter, ObjectId, Timestamp};
use crate::sdk::{
    AdaptorCapability, AdaptorError, AdaptorFactory, AdaptorRegistry, AdaptorResult, ErrorCode,
    Method, NetworkConfig, RateLimit, RegistryError,
};
use crate::search;

/// Networks registered without a live backend, with whether each has
/// activities.
pub const STUB_NETWORKS: [(&str, bool); 7] = [
    ("flickr", false),
    ("facebook", true),
    ("twitter", false),
    ("youtube", true),
    ("dailymotion", true),
    ("googlep", true),
    ("instagram", false),
];

pub const MOCK_NETWORKS: [&str; 3] = ["chirper", "picshare", "streamhub"];

pub const DEFAULT_MOCK_RATE_LIMIT: RateLimit = RateLimit {
    max_calls: 1000,
    per_window: Duration::from_secs(1),
};

pub const DEFAULT_STUB_RATE_LIMIT: RateLimit = RateLimit {
    max_calls: 100,
    per_window: Duration::from_secs(1),
};

/// Per-network overrides, typically read from a config file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct NetworkSettings {
    #[serde(default)]
    pub endpoint: Option<String>,
    #[serde(default)]
    pub rate_limit: Option<RateLimit>,
    #[serde(default)]
    pub timeout_ms: Option<u64>,
}

impl NetworkSettings {
    pub fn endpoint(url: impl Into<String>) -> Self {
        Self {
            endpoint: Some(url.into()),
            ..Self::default()
        }
    }

    fn config(&self) -> NetworkConfig {
        NetworkConfig {
            endpoint: self.endpoint.clone(),
            timeout: self
                .timeout_ms
                .map(Duration::from_millis)
                .unwrap_or(NetworkConfig::DEFAULT_TIMEOUT),
        }
    }
}

const ACTIVITY_METHODS: [Method; 4] = Method::ACTIVITY_FAMILY;

pub fn chirper_capability(rate_limit: RateLimit) -> AdaptorCapability {
    let mut without = ACTIVITY_METHODS.to_vec();
    without.push(Method::GetMediaItemsForPage);
    AdaptorCapability::all_except(&without, rate_limit)
        .with_max_post_length(chirper::MAX_POST_LENGTH)
}

pub fn picshare_capability(rate_limit: RateLimit) -> AdaptorCapability {
    let mut without = ACTIVITY_METHODS.to_vec();
    without.push(Method::PostMessage);
    AdaptorCapability::all_except(&without, rate_limit)
}

pub fn streamhub_capability(rate_limit: RateLimit) -> AdaptorCapability {
    AdaptorCapability::all_except(
        &[Method::MyConnectedPersons, Method::PostMessage],
        rate_limit,
    )
}

pub fn stub_capability(
    network: &str,
    activities: bool,
    rate_limit: RateLimit,
) -> AdaptorCapability {
    let capability = if activities {
        AdaptorCapability::all_except(&[], rate_limit)
    } else {
        AdaptorCapability::all_except(&ACTIVITY_METHODS, rate_limit)
    };
    if network == "twitter" {
        capability.with_max_post_length(140)
    } else {
        capability
    }
}

/// Registers the seven stub networks and the three mock networks, in that
/// order, applying any per-network `settings`.
pub fn seeded_registry(
    settings: &HashMap<String, NetworkSettings>,
    http: reqwest::Client,
) -> Result<AdaptorRegistry, RegistryError> {
    let registry = AdaptorRegistry::new();
    let network =
        |name: &str| crate::model::SocialNetworkId::new(name).expect("built-in names are valid");
    let stub = stub::factory();
    for (name, activities) in STUB_NETWORKS {
        let own = settings.get(name).cloned().unwrap_or_default();
        let limit = own.rate_limit.unwrap_or(DEFAULT_STUB_RATE_LIMIT);
        registry.register(
            network(name),
            stub.clone(),
            stub_capability(name, activities, limit),
            own.config(),
        )?;
    }
    let mocks: [(&str, Arc<dyn AdaptorFactory>, CapabilityFn); 3] = [
        (
            "chirper",
            chirper::factory(http.clone()),
            chirper_capability,
        ),
        (
            "picshare",
            picshare::factory(http.clone()),
            picshare_capability,
        ),
        ("streamhub", streamhub::factory(http), streamhub_capability),
    ];
    for (name, factory, capability) in mocks {
        let own = settings.get(name).cloned().unwrap_or_default();
        let limit = own.rate_limit.unwrap_or(DEFAULT_MOCK_RATE_LIMIT);
        registry.register(network(name), factory, capability(limit), own.config())?;
    }
    Ok(registry)
}

type CapabilityFn = fn(RateLimit) -> AdaptorCapability;

pub(crate) fn internal(message: impl Into<String>) -> AdaptorError {
    AdaptorError::new(ErrorCode::Internal, message)
}

pub(crate) fn from_secs(secs: i64) -> AdaptorResult<Timestamp> {
    Timestamp::from_secs(secs).ok_or_else(|| internal(format!("timestamp {secs}s out of range")))
}

pub(crate) fn from_millis(millis: i64) -> AdaptorResult<Timestamp> {
    Timestamp::from_millis(millis)
        .ok_or_else(|| internal(format!("timestamp {millis}ms out of range")))
}

pub(crate) fn from_iso(text: &str) -> AdaptorResult<Timestamp> {
    Timestamp::parse_iso8601(text).map_err(|e| internal(e.to_string()))
}

/// Smallest whole second at or after `t`.
pub(crate) fn ceil_secs(t: Timestamp) -> i64 {
    t.millis().div_euclid(1000) + i64::from(t.millis().rem_euclid(1000) != 0)
}

/// Largest whole second at or before `t`.
pub(crate) fn floor_secs(t: Timestamp) -> i64 {
    t.millis().div_euclid(1000)
}

/// Looks up each id with its own backend call, keeping input order.
pub(crate) async fn each<'a, T, F, Fut>(ids: &'a [ObjectId], fetch: F) -> Vec<AdaptorResult<T>>
where
    F: Fn(&'a ObjectId) -> Fut,
    Fut: Future<Output = AdaptorResult<T>>,
{
    join_all(ids.iter().map(fetch)).await
}

pub(crate) fn map_all<N, T>(
    natives: Vec<N>,
    map: impl Fn(N) -> AdaptorResult<T>,
) -> AdaptorResult<Vec<T>> {
    natives.into_iter().map(map).collect()
}

/// Applies every filter clause exactly; backends only narrow by what they
/// support natively.
pub(crate) fn keep_matching(filter: &MediaItemFilter, items: Vec<MediaItem>) -> Vec<MediaItem> {
    items
        .into_iter()
        .filter(|item| search::media_item_matches(filter, item))
        .collect()
}

/// Comma-joined keywords for backends taking an any-of list. Splitting on
/// commas inside a keyword only widens the backend match; the exact match
/// is reapplied afterwards.
pub(crate) fn keyword_param(keywords: &[String]) -> String {
    keywords.join(",")
}
