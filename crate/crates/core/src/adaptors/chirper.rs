//! Adaptor for the chirper microblog.
//!
//! Posts become TEXT media items and replies become comments. The person
//! behind a media item is its author alone.

use std::sync::Arc;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};

use super::{ceil_secs, each, floor_secs, from_secs, keep_matching, keyword_param, map_all};
use crate::model::{
    Address, Comment, MediaItem, MediaItemFilter, MediaType, Name, ObjectId, Person,
    SocialNetworkId,
};
use crate::sdk::http::BackendClient;
use crate::sdk::{
    AdaptorCapability, AdaptorContext, AdaptorFactory, AdaptorResult, AuthToken, PersonQuery,
    SnsAdaptor, UserRef,
};

pub const MAX_POST_LENGTH: usize = 10_000;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomeTown {
    place_name: String,
    country_code: String,
    geo_lat: f64,
    geo_lon: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct User {
    user_id: String,
    screen_name: String,
    display_name: String,
    bio: Option<String>,
    home_town: Option<HomeTown>,
    joined_at: i64,
    follower_count: u64,
    following_count: u64,
    avatar_url: String,
    profile_link: String,
    utc_offset_secs: i32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeoPoint {
    geo_lat: f64,
    geo_lon: f64,
    country_code: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Post {
    post_id: String,
    author_id: String,
    body_text: String,
    posted_at: i64,
    hashtags: Vec<String>,
    lang_code: Option<String>,
    reply_count: u64,
    like_count: u64,
    repost_count: u64,
    geo_point: Option<GeoPoint>,
    permalink: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Reply {
    reply_id: String,
    #[allow(dead_code)]
    in_reply_to: String,
    author_id: String,
    author_screen_name: String,
    body_text: String,
    posted_at: i64,
    like_count: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Users {
    users: Vec<User>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Posts {
    posts: Vec<Post>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Replies {
    replies: Vec<Reply>,
}

#[derive(Serialize)]
struct NewPost<'a> {
    body_text: &'a str,
}

pub fn factory(http: reqwest::Client) -> Arc<dyn AdaptorFactory> {
    Arc::new(move |context: AdaptorContext| {
        Box::new(ChirperAdaptor::new(context, http.clone())) as Box<dyn SnsAdaptor>
    })
}

pub struct ChirperAdaptor {
    context: AdaptorContext,
    client: AdaptorResult<BackendClient>,
}

impl ChirperAdaptor {
    pub fn new(context: AdaptorContext, http: reqwest::Client) -> Self {
        let client = BackendClient::new(context.clone(), http);
        Self { context, client }
    }

    fn client(&self) -> AdaptorResult<&BackendClient> {
        self.client.as_ref().map_err(Clone::clone)
    }

    fn sn(&self) -> &SocialNetworkId {
        &self.context.network
    }

    fn oid(&self, id: String) -> ObjectId {
        ObjectId::new(id, self.sn().clone())
    }

    fn person(&self, user: User) -> AdaptorResult<Person> {
        let mut person = Person::new(self.oid(user.user_id));
        person.username = Some(user.screen_name);
        person.name = Some(Name {
            full_name: Some(user.display_name),
            ..Name::default()
        });
        person.about_me = user.bio;
        person.current_location = user.home_town.map(|town| Address {
            extended_address: Some(town.place_name),
            country: Some(town.country_code),
            latitude: Some(town.geo_lat),
            longitude: Some(town.geo_lon),
            ..Address::default()
        });
        person.member_since = Some(from_secs(user.joined_at)?);
        person.in_degree = Some(user.follower_count);
        person.out_degree = Some(user.following_count);
        person.thumbnail_url = Some(user.avatar_url);
        person.profile_url = Some(user.profile_link);
        person.utc_offset = Some(user.utc_offset_secs / 60);
        Ok(person)
    }

    fn media_item(&self, post: Post) -> AdaptorResult<MediaItem> {
        let mut item = MediaItem::new(self.oid(post.post_id), MediaType::Text);
        item.description = Some(post.body_text);
        item.created = Some(from_secs(post.posted_at)?);
        item.tags = post.hashtags;
        item.language = post.lang_code;
        item.num_comments = Some(post.reply_count);
        item.num_favorites = Some(post.like_count);
        item.num_resharings = Some(post.repost_count);
        item.location = post.geo_point.map(|geo| Address {
            country: Some(geo.country_code),
            latitude: Some(geo.geo_lat),
            longitude: Some(geo.geo_lon),
            ..Address::default()
        });
        item.url = Some(post.permalink);
        item.user_id = Some(self.oid(post.author_id));
        Ok(item)
    }

    fn comment(&self, reply: Reply) -> AdaptorResult<Comment> {
        let mut comment = Comment::new(self.oid(reply.reply_id));
        comment.description = Some(reply.body_text);
        comment.created = Some(from_secs(reply.posted_at)?);
        comment.user_id = Some(self.oid(reply.author_id));
        comment.username = Some(reply.author_screen_name);
        comment.num_positive_votes = Some(reply.like_count);
        Ok(comment)
    }

    async fn user_by_name(&self, name: &str) -> AdaptorResult<User> {
        self.client()?
            .get("/users/lookup", &[("screen_name", name.to_owned())])
            .await
    }
}

fn seg(id: &str) -> String {
    crate::sdk::http::path_segment(id)
}

#[async_trait]
impl SnsAdaptor for ChirperAdaptor {
    fn network(&self) -> &SocialNetworkId {
        self.sn()
    }

    fn capability(&self) -> &AdaptorCapability {
        &self.context.capability
    }

    async fn get_persons(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Person>> {
        each(ids, |id| async move {
            let user: User = self
                .client()?
                .get(&format!("/users/{}", seg(&id.id)), &[])
                .await?;
            self.person(user)
        })
        .await
    }

    async fn connected_persons(&self, person: &ObjectId) -> AdaptorResult<Vec<Person>> {
        let found: Users = self
            .client()?
            .get(&format!("/users/{}/following", seg(&person.id)), &[])
            .await?;
        map_all(found.users, |u| self.person(u))
    }

    async fn my_connected_persons(
        &self,
        person: &ObjectId,
        token: &AuthToken,
    ) -> AdaptorResult<Vec<Person>> {
        let path = format!("/users/{}/following/all", seg(&person.id));
        let found: Users = self.client()?.get_authed(&path, token).await?;
        map_all(found.users, |u| self.person(u))
    }

    async fn find_persons(&self, query: &PersonQuery) -> AdaptorResult<Vec<Person>> {
        match query {
            PersonQuery::Keywords(keywords) => {
                let found: Users = self
                    .client()?
                    .get("/users/search", &[("q", keyword_param(keywords))])
                    .await?;
                let matcher = crate::search::Keywords::new(keywords);
                let persons = map_all(found.users, |u| self.person(u))?;
                Ok(persons
                    .into_iter()
                    .filter(|p| crate::search::person_matches(&matcher, p))
                    .collect())
            }
            PersonQuery::Username(name) => match self.user_by_name(name).await {
                Ok(user) => Ok(vec![self.person(user)?]),
                Err(err) if err.code == crate::sdk::ErrorCode::NotFound => Ok(Vec::new()),
                Err(err) => Err(err),
            },
            PersonQuery::MediaItem(item) => {
                let user: User = self
                    .client()?
                    .get(&format!("/posts/{}/author", seg(&item.id)), &[])
                    .await?;
                Ok(vec![self.person(user)?])
            }
            PersonQuery::Activity(_) => Err(self.unsupported(crate::sdk::Method::FindPersons)),
        }
    }

    async fn get_media_items(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<MediaItem>> {
        each(ids, |id| async move {
            let post: Post = self
                .client()?
                .get(&format!("/posts/{}", seg(&id.id)), &[])
                .await?;
            self.media_item(post)
        })
        .await
    }

    async fn get_media_items_for_user(&self, user: &UserRef) -> AdaptorResult<Vec<MediaItem>> {
        let id = match user {
            UserRef::Id(id) => id.id.clone(),
            UserRef::Username(name) => self.user_by_name(name).await?.user_id,
        };
        let found: Posts = self
            .client()?
            .get(&format!("/users/{}/posts", seg(&id)), &[])
            .await?;
        map_all(found.posts, |p| self.media_item(p))
    }

    async fn find_media_items(&self, filter: &MediaItemFilter) -> AdaptorResult<Vec<MediaItem>> {
        let mut query = vec![("q", keyword_param(&filter.keywords))];
        if let Some(range) = &filter.created {
            if let Some(from) = range.from {
                query.push(("since", ceil_secs(from).to_string()));
            }
            if let Some(to) = range.to {
                query.push(("until", floor_secs(to).to_string()));
            }
        }
        let found: Posts = self.client()?.get("/search/posts", &query).await?;
        Ok(keep_matching(
            filter,
            map_all(found.posts, |p| self.media_item(p))?,
        ))
    }

    async fn find_relevant_media_items(&self, seed: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        let found: Posts = self
            .client()?
            .get(&format!("/posts/{}/related", seg(&seed.id)), &[])
            .await?;
        map_all(found.posts, |p| self.media_item(p))
    }

    async fn get_comments(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Comment>> {
        each(ids, |id| async move {
            let reply: Reply = self
                .client()?
                .get(&format!("/replies/{}", seg(&id.id)), &[])
                .await?;
            self.comment(reply)
        })
        .await
    }

    async fn get_comments_for_media_item(&self, item: &ObjectId) -> AdaptorResult<Vec<Comment>> {
        let found: Replies = self
            .client()?
            .get(&format!("/posts/{}/replies", seg(&item.id)), &[])
            .await?;
        map_all(found.replies, |r| self.comment(r))
    }

    async fn post_message(
        &self,
        person: &ObjectId,
        text: &str,
        token: &AuthToken,
    ) -> AdaptorResult<ObjectId> {
        let path = format!("/users/{}/posts", seg(&person.id));
        let post: Post = self
            .client()?
            .post_authed(&path, &NewPost { body_text: text }, token)
            .await?;
        Ok(self.oid(post.post_id))
    }
}
