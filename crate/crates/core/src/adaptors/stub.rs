//! Registered networks with no live backend. Every supported method reports
//! the backend as unavailable without doing any I/O.

use std::sync::Arc;

use async_trait::async_trait;

use crate::model::{
    Activity, ActivityFilter, Comment, MediaItem, MediaItemFilter, ObjectId, Person,
    SocialNetworkId,
};
use crate::sdk::{
    AdaptorCapability, AdaptorContext, AdaptorError, AdaptorFactory, AdaptorResult, AuthToken,
    ErrorCode, Method, PersonQuery, SnsAdaptor, UserRef,
};

pub fn factory() -> Arc<dyn AdaptorFactory> {
    Arc::new(|context: AdaptorContext| Box::new(StubAdaptor { context }) as Box<dyn SnsAdaptor>)
}

pub struct StubAdaptor {
    context: AdaptorContext,
}

impl StubAdaptor {
    fn unavailable(&self, method: Method) -> AdaptorError {
        if !self.context.capability.supports(method) {
            return self.unsupported(method);
        }
        AdaptorError::new(
            ErrorCode::BackendUnavailable,
            format!("{} has no backend for {method}", self.context.network),
        )
    }

    fn each<T>(&self, ids: &[ObjectId], method: Method) -> Vec<AdaptorResult<T>> {
        ids.iter().map(|_| Err(self.unavailable(method))).collect()
    }
}

#[async_trait]
impl SnsAdaptor for StubAdaptor {
    fn network(&self) -> &SocialNetworkId {
        &self.context.network
    }

    fn capability(&self) -> &AdaptorCapability {
        &self.context.capability
    }

    async fn get_persons(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Person>> {
        self.each(ids, Method::GetPersons)
    }

    async fn connected_persons(&self, _person: &ObjectId) -> AdaptorResult<Vec<Person>> {
        Err(self.unavailable(Method::ConnectedPersons))
    }

    async fn my_connected_persons(
        &self,
        _person: &ObjectId,
        _token: &AuthToken,
    ) -> AdaptorResult<Vec<Person>> {
        Err(self.unavailable(Method::MyConnectedPersons))
    }

    async fn find_persons(&self, _query: &PersonQuery) -> AdaptorResult<Vec<Person>> {
        Err(self.unavailable(Method::FindPersons))
    }

    async fn get_media_items(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<MediaItem>> {
        self.each(ids, Method::GetMediaItems)
    }

    async fn get_media_items_for_user(&self, _user: &UserRef) -> AdaptorResult<Vec<MediaItem>> {
        Err(self.unavailable(Method::GetMediaItemsForUser))
    }

    async fn get_media_items_for_page(&self, _page: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        Err(self.unavailable(Method::GetMediaItemsForPage))
    }

    async fn find_media_items(&self, _filter: &MediaItemFilter) -> AdaptorResult<Vec<MediaItem>> {
        Err(self.unavailable(Method::FindMediaItems))
    }

    async fn find_relevant_media_items(&self, _seed: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        Err(self.unavailable(Method::FindRelevantMediaItems))
    }

    async fn get_activities(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Activity>> {
        self.each(ids, Method::GetActivities)
    }

    async fn get_activities_for_user(&self, _person: &ObjectId) -> AdaptorResult<Vec<Activity>> {
        Err(self.unavailable(Method::GetActivitiesForUser))
    }

    async fn find_activities(&self, _filter: &ActivityFilter) -> AdaptorResult<Vec<Activity>> {
        Err(self.unavailable(Method::FindActivities))
    }

    async fn get_comments(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Comment>> {
        self.each(ids, Method::GetComments)
    }

    async fn get_comments_for_media_item(&self, _item: &ObjectId) -> AdaptorResult<Vec<Comment>> {
        Err(self.unavailable(Method::GetCommentsForMediaItem))
    }

    async fn get_comments_for_activity(&self, _activity: &ObjectId) -> AdaptorResult<Vec<Comment>> {
        Err(self.unavailable(Method::GetCommentsForActivity))
    }

    async fn post_message(
        &self,
        _person: &ObjectId,
        _text: &str,
        _token: &AuthToken,
    ) -> AdaptorResult<ObjectId> {
        Err(self.unavailable(Method::PostMessage))
    }
}
