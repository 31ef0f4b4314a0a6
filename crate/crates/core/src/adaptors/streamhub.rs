//! Adaptor for the streamhub video network.
//!
//! Videos become VIDEO media items, remarks become comments, channels serve
//! as pages and events become activities. Nested uploader and participant
//! stubs carry only id, handle and display name.

use std::sync::Arc;

use async_trait::async_trait;
use serde::Deserialize;

use super::{each, from_millis, keep_matching, keyword_param, map_all};
use crate::model::{
    Activity, ActivityFilter, Address, Comment, License, MediaItem, MediaItemFilter, MediaType,
    Name, ObjectId, Person, SocialNetworkId,
};
use crate::sdk::http::{path_segment as seg, BackendClient};
use crate::sdk::{
    AdaptorCapability, AdaptorContext, AdaptorFactory, AdaptorResult, ErrorCode, PersonQuery,
    SnsAdaptor, UserRef,
};
use crate::search::{activity_matches, person_matches, Keywords};

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Region {
    country_iso: String,
    area_name: String,
    zip: String,
    lat_deg: f64,
    lon_deg: f64,
}

impl From<Region> for Address {
    fn from(region: Region) -> Self {
        Address {
            country: Some(region.country_iso),
            region: Some(region.area_name),
            postal_code: Some(region.zip),
            latitude: Some(region.lat_deg),
            longitude: Some(region.lon_deg),
            ..Address::default()
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct AccountStub {
    account_id: String,
    handle: String,
    display_name: String,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Account {
    account_id: String,
    handle: String,
    display_name: String,
    channel_bio: Option<String>,
    joined_ms: i64,
    subscriber_total: u64,
    subscription_total: u64,
    avatar_link: String,
    channel_link: String,
    region: Option<Region>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Rights {
    rights_kind: String,
    rights_name: String,
    rights_href: String,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Video {
    video_id: String,
    uploader: AccountStub,
    headline: String,
    summary: Option<String>,
    published_ms: i64,
    length_sec: u64,
    keyword_list: Vec<String>,
    spoken_lang: Option<String>,
    rights: Option<Rights>,
    view_total: u64,
    like_total: u64,
    dislike_total: u64,
    remark_total: u64,
    share_total: u64,
    watch_link: String,
    still_link: String,
    #[allow(dead_code)]
    channel_id: Option<String>,
    place: Option<Region>,
    star_rating: Option<f64>,
    rating_votes: u64,
    byte_size: u64,
    featured_accounts: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Event {
    event_id: String,
    actor: String,
    verb: String,
    headline: String,
    summary: Option<String>,
    happened_ms: i64,
    clips: Vec<Video>,
    participants: Vec<AccountStub>,
    follow_ups: Vec<Event>,
    place: Option<Region>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Remark {
    remark_id: String,
    #[allow(dead_code)]
    on_video: Option<String>,
    #[allow(dead_code)]
    on_event: Option<String>,
    by: AccountStub,
    remark_text: String,
    posted_ms: i64,
    thumbs_up: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Items<T> {
    items: Vec<T>,
}

pub fn factory(http: reqwest::Client) -> Arc<dyn AdaptorFactory> {
    Arc::new(move |context: AdaptorContext| {
        Box::new(StreamhubAdaptor::new(context, http.clone())) as Box<dyn SnsAdaptor>
    })
}

pub struct StreamhubAdaptor {
    context: AdaptorContext,
    client: AdaptorResult<BackendClient>,
}

impl StreamhubAdaptor {
    pub fn new(context: AdaptorContext, http: reqwest::Client) -> Self {
        let client = BackendClient::new(context.clone(), http);
        Self { context, client }
    }

    fn client(&self) -> AdaptorResult<&BackendClient> {
        self.client.as_ref().map_err(Clone::clone)
    }

    fn oid(&self, id: String) -> ObjectId {
        ObjectId::new(id, self.context.network.clone())
    }

    async fn list<T: serde::de::DeserializeOwned>(
        &self,
        path: &str,
        query: &[(&str, String)],
    ) -> AdaptorResult<Vec<T>> {
        let found: Items<T> = self.client()?.get(path, query).await?;
        Ok(found.items)
    }

    fn person(&self, account: Account) -> AdaptorResult<Person> {
        let mut person = Person::new(self.oid(account.account_id));
        person.username = Some(account.handle);
        person.name = Some(Name {
            full_name: Some(account.display_name),
            ..Name::default()
        });
        person.about_me = account.channel_bio;
        person.member_since = Some(from_millis(account.joined_ms)?);
        person.in_degree = Some(account.subscriber_total);
        person.out_degree = Some(account.subscription_total);
        person.thumbnail_url = Some(account.avatar_link);
        person.profile_url = Some(account.channel_link);
        person.current_location = account.region.map(Address::from);
        Ok(person)
    }

    fn stub_person(&self, stub: AccountStub) -> Person {
        let mut person = Person::new(self.oid(stub.account_id));
        person.username = Some(stub.handle);
        person.name = Some(Name {
            full_name: Some(stub.display_name),
            ..Name::default()
        });
        person
    }

    fn media_item(&self, video: Video) -> AdaptorResult<MediaItem> {
        let mut item = MediaItem::new(self.oid(video.video_id), MediaType::Video);
        item.title = Some(video.headline);
        item.description = video.summary;
        item.created = Some(from_millis(video.published_ms)?);
        item.duration = Some(video.length_sec);
        item.tags = video.keyword_list;
        item.language = video.spoken_lang;
        item.license = video.rights.map(|r| License {
            license_type: Some(r.rights_kind),
            name: Some(r.rights_name),
            url: Some(r.rights_href),
        });
        item.num_views = Some(video.view_total);
        item.num_positive_votes = Some(video.like_total);
        item.num_negative_votes = Some(video.dislike_total);
        item.num_comments = Some(video.remark_total);
        item.num_resharings = Some(video.share_total);
        item.url = Some(video.watch_link);
        item.thumbnail_url = Some(video.still_link);
        item.location = video.place.map(Address::from);
        item.rating = video.star_rating;
        item.num_ratings = Some(video.rating_votes);
        item.file_size = Some(video.byte_size);
        item.tagged_people = video
            .featured_accounts
            .into_iter()
            .map(|id| self.oid(id))
            .collect();
        item.user_id = Some(self.oid(video.uploader.account_id));
        Ok(item)
    }

    fn activity(&self, event: Event) -> AdaptorResult<Activity> {
        let mut activity = Activity::new(self.oid(event.event_id));
        activity.actor_id = Some(self.oid(event.actor));
        activity.object_type = Some(event.verb);
        activity.title = Some(event.headline);
        activity.description = event.summary;
        activity.created = Some(from_millis(event.happened_ms)?);
        activity.location = event.place.map(Address::from);
        activity.media_items = map_all(event.clips, |v| self.media_item(v))?;
        activity.persons = event
            .participants
            .into_iter()
            .map(|p| self.stub_person(p))
            .collect();
        activity.activities = map_all(event.follow_ups, |e| self.activity(e))?;
        Ok(activity)
    }

    fn comment(&self, remark: Remark) -> AdaptorResult<Comment> {
        let mut comment = Comment::new(self.oid(remark.remark_id));
        comment.description = Some(remark.remark_text);
        comment.created = Some(from_millis(remark.posted_ms)?);
        comment.user_id = Some(self.oid(remark.by.account_id));
        comment.username = Some(remark.by.handle);
        comment.num_positive_votes = Some(remark.thumbs_up);
        Ok(comment)
    }

    async fn account_by_handle(&self, handle: &str) -> AdaptorResult<Account> {
        self.client()?
            .get("/v3/accounts", &[("handle", handle.to_owned())])
            .await
    }

    async fn persons_at(&self, path: String) -> AdaptorResult<Vec<Person>> {
        let accounts: Vec<Account> = self.list(&path, &[]).await?;
        map_all(accounts, |a| self.person(a))
    }

    async fn items_at(&self, path: String) -> AdaptorResult<Vec<MediaItem>> {
        let videos: Vec<Video> = self.list(&path, &[]).await?;
        map_all(videos, |v| self.media_item(v))
    }

    async fn comments_at(&self, path: String) -> AdaptorResult<Vec<Comment>> {
        let remarks: Vec<Remark> = self.list(&path, &[]).await?;
        map_all(remarks, |r| self.comment(r))
    }
}

#[async_trait]
impl SnsAdaptor for StreamhubAdaptor {
    fn network(&self) -> &SocialNetworkId {
        &self.context.network
    }

    fn capability(&self) -> &AdaptorCapability {
        &self.context.capability
    }

    async fn get_persons(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Person>> {
        each(ids, |id| async move {
            let account: Account = self
                .client()?
                .get(&format!("/v3/accounts/{}", seg(&id.id)), &[])
                .await?;
            self.person(account)
        })
        .await
    }

    async fn connected_persons(&self, person: &ObjectId) -> AdaptorResult<Vec<Person>> {
        self.persons_at(format!("/v3/accounts/{}/subscriptions", seg(&person.id)))
            .await
    }

    async fn find_persons(&self, query: &PersonQuery) -> AdaptorResult<Vec<Person>> {
        match query {
            PersonQuery::Keywords(keywords) => {
                let accounts: Vec<Account> = self
                    .list("/v3/accounts/search", &[("kw", keyword_param(keywords))])
                    .await?;
                let matcher = Keywords::new(keywords);
                let persons = map_all(accounts, |a| self.person(a))?;
                Ok(persons
                    .into_iter()
                    .filter(|p| person_matches(&matcher, p))
                    .collect())
            }
            PersonQuery::Username(handle) => match self.account_by_handle(handle).await {
                Ok(account) => Ok(vec![self.person(account)?]),
                Err(err) if err.code == ErrorCode::NotFound => Ok(Vec::new()),
                Err(err) => Err(err),
            },
            PersonQuery::MediaItem(item) => {
                self.persons_at(format!("/v3/videos/{}/audience", seg(&item.id)))
                    .await
            }
            PersonQuery::Activity(activity) => {
                self.persons_at(format!("/v3/events/{}/participants", seg(&activity.id)))
                    .await
            }
        }
    }

    async fn get_media_items(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<MediaItem>> {
        each(ids, |id| async move {
            let video: Video = self
                .client()?
                .get(&format!("/v3/videos/{}", seg(&id.id)), &[])
                .await?;
            self.media_item(video)
        })
        .await
    }

    async fn get_media_items_for_user(&self, user: &UserRef) -> AdaptorResult<Vec<MediaItem>> {
        let id = match user {
            UserRef::Id(id) => id.id.clone(),
            UserRef::Username(handle) => self.account_by_handle(handle).await?.account_id,
        };
        self.items_at(format!("/v3/accounts/{}/videos", seg(&id)))
            .await
    }

    async fn get_media_items_for_page(&self, page: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        self.items_at(format!("/v3/channels/{}/videos", seg(&page.id)))
            .await
    }

    async fn find_media_items(&self, filter: &MediaItemFilter) -> AdaptorResult<Vec<MediaItem>> {
        let mut query = vec![("kw", keyword_param(&filter.keywords))];
        if let Some(range) = &filter.created {
            if let Some(from) = range.from {
                query.push(("after-ms", from.millis().to_string()));
            }
            if let Some(to) = range.to {
                query.push(("before-ms", to.millis().to_string()));
            }
        }
        let videos: Vec<Video> = self.list("/v3/videos/search", &query).await?;
        Ok(keep_matching(
            filter,
            map_all(videos, |v| self.media_item(v))?,
        ))
    }

    async fn find_relevant_media_items(&self, seed: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        self.items_at(format!("/v3/videos/{}/related", seg(&seed.id)))
            .await
    }

    async fn get_activities(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Activity>> {
        each(ids, |id| async move {
            let event: Event = self
                .client()?
                .get(&format!("/v3/events/{}", seg(&id.id)), &[])
                .await?;
            self.activity(event)
        })
        .await
    }

    async fn get_activities_for_user(&self, person: &ObjectId) -> AdaptorResult<Vec<Activity>> {
        let events: Vec<Event> = self
            .list(&format!("/v3/accounts/{}/events", seg(&person.id)), &[])
            .await?;
        map_all(events, |e| self.activity(e))
    }

    async fn find_activities(&self, filter: &ActivityFilter) -> AdaptorResult<Vec<Activity>> {
        let events: Vec<Event> = self
            .list(
                "/v3/events/search",
                &[("kw", keyword_param(&filter.keywords))],
            )
            .await?;
        let matcher = Keywords::new(&filter.keywords);
        let activities = map_all(events, |e| self.activity(e))?;
        Ok(activities
            .into_iter()
            .filter(|a| activity_matches(&matcher, filter.language.as_deref(), a))
            .collect())
    }

    async fn get_comments(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Comment>> {
        each(ids, |id| async move {
            let remark: Remark = self
                .client()?
                .get(&format!("/v3/remarks/{}", seg(&id.id)), &[])
                .await?;
            self.comment(remark)
        })
        .await
    }

    async fn get_comments_for_media_item(&self, item: &ObjectId) -> AdaptorResult<Vec<Comment>> {
        self.comments_at(format!("/v3/videos/{}/remarks", seg(&item.id)))
            .await
    }

    async fn get_comments_for_activity(&self, activity: &ObjectId) -> AdaptorResult<Vec<Comment>> {
        self.comments_at(format!("/v3/events/{}/remarks", seg(&activity.id)))
            .await
    }
}
