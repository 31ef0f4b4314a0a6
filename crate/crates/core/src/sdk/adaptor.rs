use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};

use super::capability::AdaptorCapability;
use super::method::Method;
use super::ratelimit::CallBudget;
use crate::model::{
    Activity, ActivityFilter, Comment, MediaItem, MediaItemFilter, ObjectId, Person,
    SocialNetworkId, Timestamp,
};

/// Failure categories reported per query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    UnknownNetwork,
    UnsupportedOperation,
    NotFound,
    AuthRequired,
    AuthInvalid,
    BackendUnavailable,
    RateLimited,
    Timeout,
    BadRequest,
    Internal,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::UnknownNetwork => "UNKNOWN_NETWORK",
            ErrorCode::UnsupportedOperation => "UNSUPPORTED_OPERATION",
            ErrorCode::NotFound => "NOT_FOUND",
            ErrorCode::AuthRequired => "AUTH_REQUIRED",
            ErrorCode::AuthInvalid => "AUTH_INVALID",
            ErrorCode::BackendUnavailable => "BACKEND_UNAVAILABLE",
            ErrorCode::RateLimited => "RATE_LIMITED",
            ErrorCode::Timeout => "TIMEOUT",
            ErrorCode::BadRequest => "BAD_REQUEST",
            ErrorCode::Internal => "INTERNAL",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{code}: {message}")]
pub struct AdaptorError {
    pub code: ErrorCode,
    pub message: String,
}

impl AdaptorError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn unsupported(network: &SocialNetworkId, method: Method) -> Self {
        Self::new(
            ErrorCode::UnsupportedOperation,
            format!("{network} does not support {method}"),
        )
    }

    pub fn not_found(what: impl fmt::Display) -> Self {
        Self::new(ErrorCode::NotFound, format!("{what} not found"))
    }
}

pub type AdaptorResult<T> = Result<T, AdaptorError>;

/// Delegated user credential for one network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AuthToken {
    pub token: String,
    pub network: SocialNetworkId,
    /// Backend-native id of the user who granted the token.
    pub subject: String,
    pub expires_at: Timestamp,
}

impl AuthToken {
    pub fn is_expired_at(&self, now: Timestamp) -> bool {
        now >= self.expires_at
    }

    pub fn is_expired(&self) -> bool {
        self.is_expired_at(Timestamp::now())
    }
}

/// The four mutually exclusive ways of looking people up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PersonQuery {
    Keywords(Vec<String>),
    Username(String),
    MediaItem(ObjectId),
    Activity(ObjectId),
}

/// Selects a user either by id or by username.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UserRef {
    Id(ObjectId),
    Username(String),
}

/// Per-network translation layer. One instance serves one invocation.
///
/// Every id handed to an adaptor belongs to its network, and auth-requiring
/// methods receive a token that the core has already checked for network,
/// subject and expiry. Batch lookups return one result per input id, in
/// input order. Methods the network lacks keep the default body, which
/// fails without touching the backend.
#[async_trait]
pub trait SnsAdaptor: Send + Sync {
    fn network(&self) -> &SocialNetworkId;

    fn capability(&self) -> &AdaptorCapability;

    fn unsupported(&self, method: Method) -> AdaptorError {
        AdaptorError::unsupported(self.network(), method)
    }

    async fn get_persons(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Person>> {
        ids.iter()
            .map(|_| Err(self.unsupported(Method::GetPersons)))
            .collect()
    }

    async fn connected_persons(&self, _person: &ObjectId) -> AdaptorResult<Vec<Person>> {
        Err(self.unsupported(Method::ConnectedPersons))
    }

    async fn my_connected_persons(
        &self,
        _person: &ObjectId,
        _token: &AuthToken,
    ) -> AdaptorResult<Vec<Person>> {
        Err(self.unsupported(Method::MyConnectedPersons))
    }

    async fn find_persons(&self, _query: &PersonQuery) -> AdaptorResult<Vec<Person>> {
        Err(self.unsupported(Method::FindPersons))
    }

    async fn get_media_items(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<MediaItem>> {
        ids.iter()
            .map(|_| Err(self.unsupported(Method::GetMediaItems)))
            .collect()
    }

    async fn get_media_items_for_user(&self, _user: &UserRef) -> AdaptorResult<Vec<MediaItem>> {
        Err(self.unsupported(Method::GetMediaItemsForUser))
    }

    async fn get_media_items_for_page(&self, _page: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        Err(self.unsupported(Method::GetMediaItemsForPage))
    }

    /// Searches are expected to honor every clause of the filter; the `sns`
    /// list is the core's concern and is ignored here.
    async fn find_media_items(&self, _filter: &MediaItemFilter) -> AdaptorResult<Vec<MediaItem>> {
        Err(self.unsupported(Method::FindMediaItems))
    }

    async fn find_relevant_media_items(&self, _seed: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        Err(self.unsupported(Method::FindRelevantMediaItems))
    }

    async fn get_activities(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Activity>> {
        ids.iter()
            .map(|_| Err(self.unsupported(Method::GetActivities)))
            .collect()
    }

    async fn get_activities_for_user(&self, _person: &ObjectId) -> AdaptorResult<Vec<Activity>> {
        Err(self.unsupported(Method::GetActivitiesForUser))
    }

    async fn find_activities(&self, _filter: &ActivityFilter) -> AdaptorResult<Vec<Activity>> {
        Err(self.unsupported(Method::FindActivities))
    }

    async fn get_comments(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Comment>> {
        ids.iter()
            .map(|_| Err(self.unsupported(Method::GetComments)))
            .collect()
    }

    async fn get_comments_for_media_item(&self, _item: &ObjectId) -> AdaptorResult<Vec<Comment>> {
        Err(self.unsupported(Method::GetCommentsForMediaItem))
    }

    async fn get_comments_for_activity(&self, _activity: &ObjectId) -> AdaptorResult<Vec<Comment>> {
        Err(self.unsupported(Method::GetCommentsForActivity))
    }

    async fn post_message(
        &self,
        _person: &ObjectId,
        _text: &str,
        _token: &AuthToken,
    ) -> AdaptorResult<ObjectId> {
        Err(self.unsupported(Method::PostMessage))
    }
}

/// Backend connection settings for one network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkConfig {
    /// Base URL of the backend API; `None` for networks with no live backend.
    pub endpoint: Option<String>,
    /// Connect plus read timeout for a single backend call.
    pub timeout: Duration,
}

impl NetworkConfig {
    pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(5);

    pub fn new(endpoint: impl Into<String>) -> Self {
        Self {
            endpoint: Some(endpoint.into()),
            timeout: Self::DEFAULT_TIMEOUT,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            endpoint: None,
            timeout: Self::DEFAULT_TIMEOUT,
        }
    }
}

/// Everything an adaptor instance is configured with. Cloned into every
/// instance; the budget is shared by all instances of the network.
#[derive(Debug, Clone)]
pub struct AdaptorContext {
    pub network: SocialNetworkId,
    pub capability: Arc<AdaptorCapability>,
    pub config: Arc<NetworkConfig>,
    pub budget: Arc<CallBudget>,
}

pub trait AdaptorFactory: Send + Sync {
    fn create(&self, context: AdaptorContext) -> Box<dyn SnsAdaptor>;
}

impl<F> AdaptorFactory for F
where
    F: Fn(AdaptorContext) -> Box<dyn SnsAdaptor> + Send + Sync,
{
    fn create(&self, context: AdaptorContext) -> Box<dyn SnsAdaptor> {
        self(context)
    }
}
