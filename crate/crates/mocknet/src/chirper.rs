//! Microblog backend. snake_case keys, epoch-second timestamps, a follower
//! graph with private edges, and replies. No pages, no activities.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fixture::{self, Place};
use crate::mutation::{Mutation, MutationError, MutationOutcome};
use crate::server::{found, matches_any, rank_related, split_list, Backend, Shared};

pub const MAX_POST_LENGTH: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomeTown {
    pub place_name: String,
    pub country_code: String,
    pub geo_lat: f64,
    pub geo_lon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct User {
    pub user_id: String,
    pub screen_name: String,
    pub display_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bio: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub home_town: Option<HomeTown>,
    pub joined_at: i64,
    pub follower_count: u64,
    pub following_count: u64,
    pub avatar_url: String,
    pub profile_link: String,
    pub utc_offset_secs: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub geo_lat: f64,
    pub geo_lon: f64,
    pub country_code: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub post_id: String,
    pub author_id: String,
    pub body_text: String,
    pub posted_at: i64,
    pub hashtags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lang_code: Option<String>,
    pub reply_count: u64,
    pub like_count: u64,
    pub repost_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geo_point: Option<GeoPoint>,
    pub permalink: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reply {
    pub reply_id: String,
    pub in_reply_to: String,
    pub author_id: String,
    pub author_screen_name: String,
    pub body_text: String,
    pub posted_at: i64,
    pub like_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Follow {
    pub follower_id: String,
    pub followee_id: String,
    pub is_private: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chirper {
    pub users: Vec<User>,
    pub posts: Vec<Post>,
    pub replies: Vec<Reply>,
    pub follows: Vec<Follow>,
    #[serde(skip)]
    next_post: usize,
}

const UTC_OFFSETS: &[i32] = &[0, 3600, 7200, -18_000, 19_800, 32_400, -12_600];

fn home_town(rng: &mut rand_chacha::ChaCha8Rng, place: &Place) -> HomeTown {
    HomeTown {
        place_name: place.city.to_owned(),
        country_code: place.country.to_owned(),
        geo_lat: fixture::jitter(rng, place.lat),
        geo_lon: fixture::jitter(rng, place.lon),
    }
}

impl Chirper {
    pub fn user(&self, id: &str) -> Option<&User> {
        self.users.iter().find(|u| u.user_id == id)
    }

    pub fn post(&self, id: &str) -> Option<&Post> {
        self.posts.iter().find(|p| p.post_id == id)
    }

    fn following(&self, id: &str, include_private: bool) -> Vec<User> {
        let mut ids: Vec<&str> = self
            .follows
            .iter()
            .filter(|f| f.follower_id == id && (include_private || !f.is_private))
            .map(|f| f.followee_id.as_str())
            .collect();
        ids.sort_by(|a, b| fixture::numeric_order(a, b));
        ids.into_iter()
            .filter_map(|id| self.user(id))
            .cloned()
            .collect()
    }

    fn recount(&mut self) {
        for user in &mut self.users {
            user.follower_count = self
                .follows
                .iter()
                .filter(|f| f.followee_id == user.user_id)
                .count() as u64;
            user.following_count = self
                .follows
                .iter()
                .filter(|f| f.follower_id == user.user_id)
                .count() as u64;
        }
        for post in &mut self.posts {
            post.reply_count = self
                .replies
                .iter()
                .filter(|r| r.in_reply_to == post.post_id)
                .count() as u64;
        }
    }

    fn publish(&mut self, owner: &str, text: &str, posted_at: i64) -> Result<Post, MutationError> {
        if self.user(owner).is_none() {
            return Err(MutationError::UnknownTarget(owner.to_owned()));
        }
        if text.is_empty() || text.chars().count() > MAX_POST_LENGTH {
            return Err(MutationError::Invalid(format!(
                "body_text must hold 1 to {MAX_POST_LENGTH} characters"
            )));
        }
        self.next_post += 1;
        let post_id = fixture::media_id(self.next_post);
        let post = Post {
            permalink: format!("https://chirper.example/{owner}/status/{post_id}"),
            post_id,
            author_id: owner.to_owned(),
            body_text: text.to_owned(),
            posted_at,
            hashtags: Vec::new(),
            lang_code: None,
            reply_count: 0,
            like_count: 0,
            repost_count: 0,
            geo_point: None,
        };
        self.posts.push(post.clone());
        Ok(post)
    }
}

impl Backend for Chirper {
    const NAME: &'static str = "chirper";

    fn generate(seed: u64) -> Self {
        let mut rng = fixture::rng_for(seed, Self::NAME);
        let mut users = Vec::with_capacity(fixture::PERSONS);
        for n in 1..=fixture::PERSONS {
            let (first, last) = if n == 1 {
                ("Alice", "Martin")
            } else {
                (
                    *fixture::pick(&mut rng, fixture::FIRST_NAMES),
                    *fixture::pick(&mut rng, fixture::LAST_NAMES),
                )
            };
            let screen_name = if n == 1 {
                "alice".to_owned()
            } else {
                format!("{}_{n}", first.to_lowercase())
            };
            let place = *fixture::pick(&mut rng, fixture::PLACES);
            let user_id = fixture::person_id(n);
            users.push(User {
                bio: rng.gen_bool(0.7).then(|| fixture::sentence(&mut rng, 6)),
                home_town: rng.gen_bool(0.8).then(|| home_town(&mut rng, &place)),
                joined_at: fixture::instant_secs(&mut rng),
                follower_count: 0,
                following_count: 0,
                avatar_url: format!("https://img.chirper.example/avatar/{user_id}.png"),
                profile_link: format!("https://chirper.example/{screen_name}"),
                utc_offset_secs: *fixture::pick(&mut rng, UTC_OFFSETS),
                display_name: format!("{first} {last}"),
                screen_name,
                user_id,
            });
        }

        let mut follows = vec![
            Follow {
                follower_id: "u1".into(),
                followee_id: "u2".into(),
                is_private: false,
            },
            Follow {
                follower_id: "u1".into(),
                followee_id: "u3".into(),
                is_private: false,
            },
            Follow {
                follower_id: "u1".into(),
                followee_id: "u4".into(),
                is_private: true,
            },
        ];
        for n in 2..fixture::PERSONS {
            for followee in fixture::others(&mut rng, n, 6) {
                follows.push(Follow {
                    follower_id: fixture::person_id(n),
                    followee_id: followee,
                    is_private: rng.gen_bool(0.2),
                });
            }
        }

        let mut posts = Vec::with_capacity(fixture::MEDIA_ITEMS);
        for n in 1..=fixture::MEDIA_ITEMS {
            let author = if n <= 2 {
                1
            } else {
                rng.gen_range(2..=fixture::PERSONS)
            };
            let post_id = fixture::media_id(n);
            let words = rng.gen_range(4..10);
            let tags = rng.gen_range(0..4);
            let place = *fixture::pick(&mut rng, fixture::PLACES);
            let author_id = fixture::person_id(author);
            posts.push(Post {
                body_text: fixture::sentence(&mut rng, words),
                posted_at: fixture::instant_secs(&mut rng),
                hashtags: fixture::distinct_words(&mut rng, tags),
                lang_code: rng
                    .gen_bool(0.85)
                    .then(|| (*fixture::pick(&mut rng, fixture::LANGUAGES)).to_owned()),
                reply_count: 0,
                like_count: rng.gen_range(0..500),
                repost_count: rng.gen_range(0..100),
                geo_point: rng.gen_bool(0.6).then(|| GeoPoint {
                    geo_lat: fixture::jitter(&mut rng, place.lat),
                    geo_lon: fixture::jitter(&mut rng, place.lon),
                    country_code: place.country.to_owned(),
                }),
                permalink: format!("https://chirper.example/{author_id}/status/{post_id}"),
                post_id,
                author_id,
            });
        }

        let mut replies = Vec::new();
        for post in &posts {
            for _ in 0..rng.gen_range(0..3) {
                let author = users[rng.gen_range(0..users.len())].clone();
                let words = rng.gen_range(2..7);
                replies.push(Reply {
                    reply_id: format!("r{}", replies.len() + 1),
                    in_reply_to: post.post_id.clone(),
                    author_id: author.user_id,
                    author_screen_name: author.screen_name,
                    body_text: fixture::sentence(&mut rng, words),
                    posted_at: post.posted_at + rng.gen_range(60..86_400),
                    like_count: rng.gen_range(0..50),
                });
            }
        }

        let mut data = Self {
            users,
            posts,
            replies,
            follows,
            next_post: fixture::MEDIA_ITEMS,
        };
        data.recount();
        data
    }

    fn routes() -> Router<Arc<Shared<Self>>> {
        Router::new()
            .route("/users/lookup", get(lookup))
            .route("/users/search", get(search_users))
            .route("/users/{id}", get(get_user))
            .route("/users/{id}/following", get(following))
            .route("/users/{id}/following/all", get(following_all))
            .route("/users/{id}/posts", get(user_posts).post(publish))
            .route("/posts/{id}", get(get_post))
            .route("/posts/{id}/author", get(post_author))
            .route("/posts/{id}/replies", get(post_replies))
            .route("/posts/{id}/related", get(related_posts))
            .route("/replies/{id}", get(get_reply))
            .route("/search/posts", get(search_posts))
    }

    fn has_subject(&self, id: &str) -> bool {
        self.user(id).is_some()
    }

    fn mutate(&mut self, mutation: &Mutation) -> Result<MutationOutcome, MutationError> {
        match mutation {
            Mutation::AddMediaItem { owner, text } => {
                let now = chrono::Utc::now().timestamp();
                let post = self.publish(owner, text, now)?;
                Ok(MutationOutcome { id: post.post_id })
            }
            Mutation::DeleteMediaItem { id } => {
                let before = self.posts.len();
                self.posts.retain(|p| &p.post_id != id);
                if self.posts.len() == before {
                    return Err(MutationError::UnknownTarget(id.clone()));
                }
                self.replies.retain(|r| &r.in_reply_to != id);
                Ok(MutationOutcome { id: id.clone() })
            }
            Mutation::RenamePerson { id, display_name } => {
                let user = self
                    .users
                    .iter_mut()
                    .find(|u| &u.user_id == id)
                    .ok_or_else(|| MutationError::UnknownTarget(id.clone()))?;
                user.display_name = display_name.clone();
                Ok(MutationOutcome { id: id.clone() })
            }
            Mutation::DeletePerson { id } => {
                let before = self.users.len();
                self.users.retain(|u| &u.user_id != id);
                if self.users.len() == before {
                    return Err(MutationError::UnknownTarget(id.clone()));
                }
                self.follows
                    .retain(|f| &f.follower_id != id && &f.followee_id != id);
                let gone: Vec<String> = self
                    .posts
                    .iter()
                    .filter(|p| &p.author_id == id)
                    .map(|p| p.post_id.clone())
                    .collect();
                self.posts.retain(|p| &p.author_id != id);
                self.replies
                    .retain(|r| &r.author_id != id && !gone.contains(&r.in_reply_to));
                self.recount();
                Ok(MutationOutcome { id: id.clone() })
            }
        }
    }
}

type St = State<Arc<Shared<Chirper>>>;

#[derive(Serialize)]
struct Users {
    users: Vec<User>,
}

#[derive(Serialize)]
struct Posts {
    posts: Vec<Post>,
}

#[derive(Serialize)]
struct Replies {
    replies: Vec<Reply>,
}

async fn get_user(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().user(&id).cloned())
}

async fn lookup(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let Some(name) = q.get("screen_name") else {
        return StatusCode::BAD_REQUEST.into_response();
    };
    found(
        s.read()
            .users
            .iter()
            .find(|u| &u.screen_name == name)
            .cloned(),
    )
}

async fn search_users(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let keywords = split_list(q.get("q"));
    if keywords.is_empty() {
        return StatusCode::BAD_REQUEST.into_response();
    }
    let data = s.read();
    let users = data
        .users
        .iter()
        .filter(|u| matches_any(&keywords, &[&u.screen_name, &u.display_name]))
        .cloned()
        .collect();
    Json(Users { users }).into_response()
}

async fn following(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.user(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    Json(Users {
        users: data.following(&id, false),
    })
    .into_response()
}

async fn following_all(State(s): St, Path(id): Path<String>, headers: HeaderMap) -> Response {
    if let Err(status) = s.authorize(&headers, &id) {
        return status.into_response();
    }
    let data = s.read();
    if data.user(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    Json(Users {
        users: data.following(&id, true),
    })
    .into_response()
}

async fn user_posts(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.user(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    let posts = data
        .posts
        .iter()
        .filter(|p| p.author_id == id)
        .cloned()
        .collect();
    Json(Posts { posts }).into_response()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewPost {
    body_text: String,
}

async fn publish(
    State(s): St,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Option<Json<NewPost>>,
) -> Response {
    if let Err(status) = s.authorize(&headers, &id) {
        return status.into_response();
    }
    let Some(Json(body)) = body else {
        return StatusCode::BAD_REQUEST.into_response();
    };
    let now = chrono::Utc::now().timestamp();
    let outcome = s.mutate_with(|data| data.publish(&id, &body.body_text, now));
    match outcome {
        Ok(post) => (StatusCode::CREATED, Json(post)).into_response(),
        Err(err) => (err.status(), err.to_string()).into_response(),
    }
}

async fn get_post(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().post(&id).cloned())
}

async fn post_author(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    found(
        data.post(&id)
            .and_then(|p| data.user(&p.author_id))
            .cloned(),
    )
}

async fn post_replies(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.post(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    let replies = data
        .replies
        .iter()
        .filter(|r| r.in_reply_to == id)
        .cloned()
        .collect();
    Json(Replies { replies }).into_response()
}

async fn related_posts(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    let Some(seed) = data.post(&id) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    let posts = rank_related(
        &seed.post_id,
        &seed.hashtags,
        &data.posts,
        |p| &p.post_id,
        |p| &p.hashtags,
    )
    .into_iter()
    .cloned()
    .collect();
    Json(Posts { posts }).into_response()
}

async fn get_reply(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().replies.iter().find(|r| r.reply_id == id).cloned())
}

/// `q` is a comma-separated any-of keyword list matched against the body
/// and hashtags; `since` and `until` are inclusive epoch seconds.
async fn search_posts(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let keywords = split_list(q.get("q"));
    let bound = |key: &str| q.get(key).map(|v| v.parse::<i64>()).transpose();
    let (Ok(since), Ok(until)) = (bound("since"), bound("until")) else {
        return StatusCode::BAD_REQUEST.into_response();
    };
    if keywords.is_empty() {
        return StatusCode::BAD_REQUEST.into_response();
    }
    let data = s.read();
    let posts = data
        .posts
        .iter()
        .filter(|p| {
            since.is_none_or(|t| p.posted_at >= t) && until.is_none_or(|t| p.posted_at <= t)
        })
        .filter(|p| {
            let mut fields: Vec<&str> = vec![&p.body_text];
            fields.extend(p.hashtags.iter().map(String::as_str));
            matches_any(&keywords, &fields)
        })
        .cloned()
        .collect();
    Json(Posts { posts }).into_response()
}
