//! The aggregation core: partitions each request by network, dispatches to
//! freshly built adaptors concurrently and merges everything into one
//! [`ResultEnvelope`].

mod envelope;
mod partition;

use std::future::Future;
use std::sync::Arc;
use std::time::Duration;

use futures::future::{join_all, BoxFuture, FutureExt};

pub use envelope::{QueryError, ResultEnvelope};
pub use partition::{partition, Batch};

use crate::model::{
    Activity, ActivityFilter, Comment, MediaItem, MediaItemFilter, ObjectId, Person, PersonFilter,
    SocialNetworkId, Timestamp, Validate,
};
use crate::sdk::{
    AdaptorCapability, AdaptorError, AdaptorRegistry, AdaptorResult, AuthToken, ErrorCode, Method,
    PersonQuery, SnsAdaptor, UserRef,
};

/// Rejection of a request as a whole, before any network is contacted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error("BAD_REQUEST: {0}")]
    BadRequest(String),
}

impl RequestError {
    fn bad(message: impl Into<String>) -> Self {
        Self::BadRequest(message.into())
    }
}

pub type RequestResult<T> = Result<ResultEnvelope<T>, RequestError>;

#[derive(Debug, Clone)]
pub struct CoreConfig {
    /// Time budget for one network's share of a request.
    pub fanout_deadline: Duration,
    pub search_cap: usize,
}

impl Default for CoreConfig {
    fn default() -> Self {
        Self {
            fanout_deadline: Duration::from_secs(10),
            search_cap: crate::search::SEARCH_RESULT_CAP,
        }
    }
}

/// Exactly one selector must be set.
#[derive(Debug, Clone, Default)]
pub struct FindPersons {
    pub person_filter: Option<PersonFilter>,
    pub media_item_id: Option<ObjectId>,
    pub activity_id: Option<ObjectId>,
    pub username: Option<(String, SocialNetworkId)>,
}

type Adaptor = Box<dyn SnsAdaptor>;

#[derive(Debug, Clone)]
pub struct CoreService {
    registry: Arc<AdaptorRegistry>,
    config: CoreConfig,
}

impl CoreService {
    pub fn new(registry: Arc<AdaptorRegistry>) -> Self {
        Self::with_config(registry, CoreConfig::default())
    }

    pub fn with_config(registry: Arc<AdaptorRegistry>, config: CoreConfig) -> Self {
        Self { registry, config }
    }

    pub fn registry(&self) -> &Arc<AdaptorRegistry> {
        &self.registry
    }

    pub fn config(&self) -> &CoreConfig {
        &self.config
    }

    pub async fn get_persons(&self, ids: &[ObjectId]) -> RequestResult<Person> {
        self.batched(Method::GetPersons, ids, |a, ids| {
            async move { a.get_persons(&ids).await }.boxed()
        })
        .await
    }

    pub async fn connected_persons(&self, person: &ObjectId) -> RequestResult<Person> {
        let target = person.clone();
        Ok(self
            .single(Method::ConnectedPersons, person, None, false, move |a| {
                async move { a.connected_persons(&target).await }.boxed()
            })
            .await)
    }

    pub async fn my_connected_persons(
        &self,
        person: &ObjectId,
        token: Option<&AuthToken>,
    ) -> RequestResult<Person> {
        let target = person.clone();
        let token = token.cloned();
        let auth = token.clone();
        Ok(self
            .single(
                Method::MyConnectedPersons,
                person,
                auth.as_ref(),
                false,
                move |a| {
                    async move {
                        let token = token.expect("auth gate checked the token");
                        a.my_connected_persons(&target, &token).await
                    }
                    .boxed()
                },
            )
            .await)
    }

    pub async fn find_persons(&self, request: FindPersons) -> RequestResult<Person> {
        let selectors = usize::from(request.person_filter.is_some())
            + usize::from(request.media_item_id.is_some())
            + usize::from(request.activity_id.is_some())
            + usize::from(request.username.is_some());
        if selectors != 1 {
            return Err(RequestError::bad(format!(
                "findPersons needs exactly one of personFilter, mediaItemId, activityId or username; got {selectors}"
            )));
        }
        if let Some(filter) = request.person_filter {
            check_keywords(&filter.keywords)?;
            check_valid(&filter)?;
            let query = PersonQuery::Keywords(filter.keywords.clone());
            return Ok(self
                .search(Method::FindPersons, &filter.sns, move |a| {
                    let query = query.clone();
                    async move { a.find_persons(&query).await }.boxed()
                })
                .await);
        }
        let (anchor, query, needs_activities) = if let Some(item) = request.media_item_id {
            (item.clone(), PersonQuery::MediaItem(item), false)
        } else if let Some(activity) = request.activity_id {
            (activity.clone(), PersonQuery::Activity(activity), true)
        } else {
            let (username, network) = request.username.expect("one selector is set");
            if username.is_empty() {
                return Err(RequestError::bad("username must not be empty"));
            }
            (
                ObjectId::new(username.clone(), network),
                PersonQuery::Username(username),
                false,
            )
        };
        let reported = match &query {
            PersonQuery::Username(_) => None,
            _ => Some(&anchor),
        };
        let error_anchor = reported.cloned();
        let cap = self.config.search_cap;
        Ok(self
            .single_at(
                Method::FindPersons,
                &anchor.social_network,
                error_anchor.as_ref(),
                None,
                needs_activities,
                move |a| {
                    async move {
                        a.find_persons(&query)
                            .await
                            .map(|found| truncate(found, cap))
                    }
                    .boxed()
                },
            )
            .await)
    }

    pub async fn get_media_items(&self, ids: &[ObjectId]) -> RequestResult<MediaItem> {
        self.batched(Method::GetMediaItems, ids, |a, ids| {
            async move { a.get_media_items(&ids).await }.boxed()
        })
        .await
    }

    pub async fn get_media_items_for_user(
        &self,
        person: Option<&ObjectId>,
        username: Option<(&str, &SocialNetworkId)>,
    ) -> RequestResult<MediaItem> {
        let (network, anchor, user) = match (person, username) {
            (Some(id), None) => (
                id.social_network.clone(),
                Some(id.clone()),
                UserRef::Id(id.clone()),
            ),
            (None, Some((name, network))) if !name.is_empty() => {
                (network.clone(), None, UserRef::Username(name.to_owned()))
            }
            (None, Some(_)) => return Err(RequestError::bad("username must not be empty")),
            _ => {
                return Err(RequestError::bad(
                    "getMediaItemsForUser needs exactly one of personId or username",
                ))
            }
        };
        Ok(self
            .single_at(
                Method::GetMediaItemsForUser,
                &network,
                anchor.as_ref(),
                None,
                false,
                move |a| async move { a.get_media_items_for_user(&user).await }.boxed(),
            )
            .await)
    }

    pub async fn get_media_items_for_page(&self, page: &ObjectId) -> RequestResult<MediaItem> {
        let target = page.clone();
        Ok(self
            .single(Method::GetMediaItemsForPage, page, None, false, move |a| {
                async move { a.get_media_items_for_page(&target).await }.boxed()
            })
            .await)
    }

    pub async fn find_media_items(&self, filter: &MediaItemFilter) -> RequestResult<MediaItem> {
        check_keywords(&filter.keywords)?;
        check_valid(filter)?;
        let shared = Arc::new(filter.clone());
        Ok(self
            .search(Method::FindMediaItems, &filter.sns, move |a| {
                let filter = shared.clone();
                async move { a.find_media_items(&filter).await }.boxed()
            })
            .await)
    }

    pub async fn find_relevant_media_items(&self, seed: &ObjectId) -> RequestResult<MediaItem> {
        let target = seed.clone();
        let cap = self.config.search_cap;
        Ok(self
            .single(
                Method::FindRelevantMediaItems,
                seed,
                None,
                false,
                move |a| {
                    async move {
                        a.find_relevant_media_items(&target)
                            .await
                            .map(|found| truncate(found, cap))
                    }
                    .boxed()
                },
            )
            .await)
    }

    pub async fn get_activities(&self, ids: &[ObjectId]) -> RequestResult<Activity> {
        self.batched(Method::GetActivities, ids, |a, ids| {
            async move { a.get_activities(&ids).await }.boxed()
        })
        .await
    }

    pub async fn get_activities_for_user(&self, person: &ObjectId) -> RequestResult<Activity> {
        let target = person.clone();
        Ok(self
            .single(
                Method::GetActivitiesForUser,
                person,
                None,
                false,
                move |a| async move { a.get_activities_for_user(&target).await }.boxed(),
            )
            .await)
    }

    pub async fn find_activities(&self, filter: &ActivityFilter) -> RequestResult<Activity> {
        check_keywords(&filter.keywords)?;
        check_valid(filter)?;
        let shared = Arc::new(filter.clone());
        Ok(self
            .search(Method::FindActivities, &filter.sns, move |a| {
                let filter = shared.clone();
                async move { a.find_activities(&filter).await }.boxed()
            })
            .await)
    }

    pub async fn get_comments(&self, ids: &[ObjectId]) -> RequestResult<Comment> {
        self.batched(Method::GetComments, ids, |a, ids| {
            async move { a.get_comments(&ids).await }.boxed()
        })
        .await
    }

    pub async fn get_comments_for_media_item(&self, item: &ObjectId) -> RequestResult<Comment> {
        let target = item.clone();
        Ok(self
            .single(
                Method::GetCommentsForMediaItem,
                item,
                None,
                false,
                move |a| async move { a.get_comments_for_media_item(&target).await }.boxed(),
            )
            .await)
    }

    pub async fn get_comments_for_activity(&self, activity: &ObjectId) -> RequestResult<Comment> {
        let target = activity.clone();
        Ok(self
            .single(
                Method::GetCommentsForActivity,
                activity,
                None,
                false,
                move |a| async move { a.get_comments_for_activity(&target).await }.boxed(),
            )
            .await)
    }

    pub async fn post_message(
        &self,
        person: &ObjectId,
        text: &str,
        token: Option<&AuthToken>,
    ) -> RequestResult<ObjectId> {
        if text.is_empty() {
            return Err(RequestError::bad("postText must not be empty"));
        }
        let target = person.clone();
        let text = text.to_owned();
        let token = token.cloned();
        let auth = token.clone();
        Ok(self
            .single(
                Method::PostMessage,
                person,
                auth.as_ref(),
                false,
                move |a| {
                    async move {
                        if let Some(max) = a.capability().max_post_length {
                            let length = text.chars().count();
                            if length > max {
                                return Err(AdaptorError::new(
                                    ErrorCode::BadRequest,
                                    format!(
                                        "message of {length} characters exceeds the limit of {max}"
                                    ),
                                ));
                            }
                        }
                        let token = token.expect("auth gate checked the token");
                        a.post_message(&target, &text, &token)
                            .await
                            .map(|id| vec![id])
                    }
                    .boxed()
                },
            )
            .await)
    }

    /// Runs the checks that must pass before an adaptor is built: the network
    /// exists, supports the method, and gets a usable token when it needs one.
    fn gate(
        &self,
        method: Method,
        network: &SocialNetworkId,
        target: Option<&ObjectId>,
        token: Option<&AuthToken>,
        needs_activities: bool,
    ) -> Result<(Adaptor, Arc<AdaptorCapability>), AdaptorError> {
        let unknown = |_| {
            AdaptorError::new(
                ErrorCode::UnknownNetwork,
                format!("{network} is not a registered social network"),
            )
        };
        let capability = self
            .registry
            .capability_of(network.as_str())
            .map_err(unknown)?;
        if !capability.supports(method) || (needs_activities && !capability.activities) {
            return Err(AdaptorError::unsupported(network, method));
        }
        if capability.needs_auth(method) {
            check_token(network, target, token, Timestamp::now())?;
        }
        let adaptor = self.registry.instantiate(network).map_err(unknown)?;
        Ok((adaptor, capability))
    }

    async fn batched<T, F>(&self, method: Method, ids: &[ObjectId], call: F) -> RequestResult<T>
    where
        T: Validate + Send + 'static,
        F: Fn(Adaptor, Vec<ObjectId>) -> BoxFuture<'static, Vec<AdaptorResult<T>>>,
    {
        if let Some(blank) = ids.iter().find(|id| id.id.is_empty()) {
            return Err(RequestError::bad(format!(
                "empty object id for network {}",
                blank.social_network
            )));
        }
        let dispatches = partition(ids).into_iter().map(|batch| {
            let gated = self.gate(method, &batch.network, None, None, false);
            let deadline = self.config.fanout_deadline;
            let call = gated.map(|(adaptor, _)| call(adaptor, batch.ids.clone()));
            async move {
                let outcomes = match call {
                    Ok(future) => match with_deadline(deadline, &batch.network, future).await {
                        Ok(outcomes) if outcomes.len() == batch.ids.len() => outcomes,
                        Ok(outcomes) => {
                            let err = AdaptorError::new(
                                ErrorCode::Internal,
                                format!(
                                    "{} adaptor returned {} results for {} ids",
                                    batch.network,
                                    outcomes.len(),
                                    batch.ids.len()
                                ),
                            );
                            failed_all(&err, batch.ids.len())
                        }
                        Err(err) => failed_all(&err, batch.ids.len()),
                    },
                    Err(err) => failed_all(&err, batch.ids.len()),
                };
                let mut envelope = ResultEnvelope::default();
                for (id, outcome) in batch.ids.iter().zip(outcomes) {
                    match outcome.and_then(|object| checked(&batch.network, object)) {
                        Ok(object) => envelope.results.push(object),
                        Err(err) => envelope.errors.push(QueryError::from_adaptor(
                            &batch.network,
                            method,
                            Some(id),
                            err,
                        )),
                    }
                }
                envelope
            }
        });
        Ok(merge(join_all(dispatches).await))
    }

    async fn single<T, F>(
        &self,
        method: Method,
        target: &ObjectId,
        token: Option<&AuthToken>,
        needs_activities: bool,
        call: F,
    ) -> ResultEnvelope<T>
    where
        T: Validate + Send + 'static,
        F: FnOnce(Adaptor) -> BoxFuture<'static, AdaptorResult<Vec<T>>>,
    {
        if target.id.is_empty() {
            return ResultEnvelope {
                results: Vec::new(),
                errors: vec![QueryError::from_adaptor(
                    &target.social_network,
                    method,
                    Some(target),
                    AdaptorError::new(ErrorCode::BadRequest, "empty object id"),
                )],
            };
        }
        self.single_at(
            method,
            &target.social_network,
            Some(target),
            token,
            needs_activities,
            call,
        )
        .await
    }

    async fn single_at<T, F>(
        &self,
        method: Method,
        network: &SocialNetworkId,
        target: Option<&ObjectId>,
        token: Option<&AuthToken>,
        needs_activities: bool,
        call: F,
    ) -> ResultEnvelope<T>
    where
        T: Validate + Send + 'static,
        F: FnOnce(Adaptor) -> BoxFuture<'static, AdaptorResult<Vec<T>>>,
    {
        let outcome = match self.gate(method, network, target, token, needs_activities) {
            Ok((adaptor, _)) => with_deadline(self.config.fanout_deadline, network, call(adaptor))
                .await
                .and_then(|outcome| outcome)
                .and_then(|found| checked_all(network, found)),
            Err(err) => Err(err),
        };
        list_envelope(network, method, target, outcome)
    }

    async fn search<T, F>(
        &self,
        method: Method,
        sns: &[SocialNetworkId],
        call: F,
    ) -> ResultEnvelope<T>
    where
        T: Validate + Send + 'static,
        F: Fn(Adaptor) -> BoxFuture<'static, AdaptorResult<Vec<T>>>,
    {
        let networks = self.search_targets(method, sns);
        let cap = self.config.search_cap;
        let dispatches = networks.into_iter().map(|network| {
            let gated = self.gate(method, &network, None, None, false);
            let deadline = self.config.fanout_deadline;
            let call = gated.map(|(adaptor, _)| call(adaptor));
            async move {
                let outcome = match call {
                    Ok(future) => with_deadline(deadline, &network, future)
                        .await
                        .and_then(|outcome| outcome)
                        .and_then(|found| checked_all(&network, truncate(found, cap))),
                    Err(err) => Err(err),
                };
                list_envelope(&network, method, None, outcome)
            }
        });
        merge(join_all(dispatches).await)
    }

    /// The requested networks without repeats, or every registered network
    /// supporting `method` when none are named.
    fn search_targets(&self, method: Method, sns: &[SocialNetworkId]) -> Vec<SocialNetworkId> {
        if sns.is_empty() {
            return self
                .registry
                .networks()
                .into_iter()
                .filter(|n| {
                    self.registry
                        .capability_of(n.as_str())
                        .is_ok_and(|c| c.supports(method))
                })
                .collect();
        }
        let mut seen = Vec::with_capacity(sns.len());
        for network in sns {
            if !seen.contains(network) {
                seen.push(network.clone());
            }
        }
        seen
    }
}

fn check_token(
    network: &SocialNetworkId,
    target: Option<&ObjectId>,
    token: Option<&AuthToken>,
    now: Timestamp,
) -> Result<(), AdaptorError> {
    let token = token
        .ok_or_else(|| AdaptorError::new(ErrorCode::AuthRequired, "a user token is required"))?;
    if &token.network != network {
        return Err(AdaptorError::new(
            ErrorCode::AuthInvalid,
            format!("token was issued for {}, not {network}", token.network),
        ));
    }
    if let Some(target) = target {
        if token.subject != target.id {
            return Err(AdaptorError::new(
                ErrorCode::AuthInvalid,
                format!(
                    "token subject {} does not match {}",
                    token.subject, target.id
                ),
            ));
        }
    }
    if token.is_expired_at(now) {
        return Err(AdaptorError::new(
            ErrorCode::AuthInvalid,
            format!("token expired at {}", token.expires_at),
        ));
    }
    Ok(())
}

fn check_keywords(keywords: &[String]) -> Result<(), RequestError> {
    if keywords.is_empty() {
        return Err(RequestError::bad("keywords must not be empty"));
    }
    if keywords.iter().any(String::is_empty) {
        return Err(RequestError::bad("keywords must not contain empty strings"));
    }
    Ok(())
}

fn check_valid(filter: &impl Validate) -> Result<(), RequestError> {
    let report = filter.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(RequestError::bad(format!("invalid filter: {report}")))
    }
}

async fn with_deadline<T>(
    deadline: Duration,
    network: &SocialNetworkId,
    future: impl Future<Output = T>,
) -> Result<T, AdaptorError> {
    tokio::time::timeout(deadline, future).await.map_err(|_| {
        AdaptorError::new(
            ErrorCode::Timeout,
            format!(
                "{network} did not answer within {} ms",
                deadline.as_millis()
            ),
        )
    })
}

/// Adaptor output that breaks the object model is reported, never passed on.
fn checked<T: Validate>(network: &SocialNetworkId, object: T) -> AdaptorResult<T> {
    let report = object.validate();
    if report.is_valid() {
        Ok(object)
    } else {
        Err(AdaptorError::new(
            ErrorCode::Internal,
            format!("{network} adaptor produced an invalid object: {report}"),
        ))
    }
}

fn checked_all<T: Validate>(network: &SocialNetworkId, objects: Vec<T>) -> AdaptorResult<Vec<T>> {
    objects.into_iter().map(|o| checked(network, o)).collect()
}

fn failed_all<T>(err: &AdaptorError, count: usize) -> Vec<AdaptorResult<T>> {
    std::iter::repeat_with(|| Err(err.clone()))
        .take(count)
        .collect()
}

fn truncate<T>(mut found: Vec<T>, cap: usize) -> Vec<T> {
    found.truncate(cap);
    found
}

fn list_envelope<T>(
    network: &SocialNetworkId,
    method: Method,
    target: Option<&ObjectId>,
    outcome: AdaptorResult<Vec<T>>,
) -> ResultEnvelope<T> {
    match outcome {
        Ok(results) => ResultEnvelope {
            results,
            errors: Vec::new(),
        },
        Err(err) => ResultEnvelope {
            results: Vec::new(),
            errors: vec![QueryError::from_adaptor(network, method, target, err)],
        },
    }
}

fn merge<T>(groups: Vec<ResultEnvelope<T>>) -> ResultEnvelope<T> {
    let mut merged = ResultEnvelope::default();
    for group in groups {
        merged.absorb(group);
    }
    merged
}
