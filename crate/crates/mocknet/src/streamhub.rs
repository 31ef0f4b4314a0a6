//! Video backend. kebab-case keys, epoch-millisecond timestamps, uploader
//! records nested inside every item, channels and activity events.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fixture::{self, Place};
use crate::mutation::{Mutation, MutationError, MutationOutcome};
use crate::server::{found, matches_any, rank_related, split_list, Backend, Shared};

pub const CHANNELS: usize = 10;

const VERBS: &[(&str, &str)] = &[
    ("upload", "uploaded"),
    ("like", "liked"),
    ("share", "shared"),
    ("comment", "commented on"),
    ("subscribe", "subscribed to"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Region {
    pub country_iso: String,
    pub area_name: String,
    pub zip: String,
    pub lat_deg: f64,
    pub lon_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AccountStub {
    pub account_id: String,
    pub handle: String,
    pub display_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Account {
    pub account_id: String,
    pub handle: String,
    pub display_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_bio: Option<String>,
    pub joined_ms: i64,
    pub subscriber_total: u64,
    pub subscription_total: u64,
    pub avatar_link: String,
    pub channel_link: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

impl Account {
    fn stub(&self) -> AccountStub {
        AccountStub {
            account_id: self.account_id.clone(),
            handle: self.handle.clone(),
            display_name: self.display_name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Rights {
    pub rights_kind: String,
    pub rights_name: String,
    pub rights_href: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Video {
    pub video_id: String,
    pub uploader: AccountStub,
    pub headline: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    pub published_ms: i64,
    pub length_sec: u64,
    pub keyword_list: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spoken_lang: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rights: Option<Rights>,
    pub view_total: u64,
    pub like_total: u64,
    pub dislike_total: u64,
    pub remark_total: u64,
    pub share_total: u64,
    pub watch_link: String,
    pub still_link: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<Region>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_rating: Option<f64>,
    pub rating_votes: u64,
    pub byte_size: u64,
    pub featured_accounts: Vec<String>,
}

/// Stored form of an event; related objects are kept by id and expanded
/// when served.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Event {
    pub event_id: String,
    pub actor: String,
    pub verb: String,
    pub headline: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    pub happened_ms: i64,
    pub clip_ids: Vec<String>,
    pub participant_ids: Vec<String>,
    pub follow_up_ids: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<Region>,
}

/// Served form of an event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct EventView {
    pub event_id: String,
    pub actor: String,
    pub verb: String,
    pub headline: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    pub happened_ms: i64,
    pub clips: Vec<Video>,
    pub participants: Vec<AccountStub>,
    /// Expanded one level deep; nested follow-ups are left empty.
    pub follow_ups: Vec<EventView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<Region>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Remark {
    pub remark_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub on_video: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub on_event: Option<String>,
    pub by: AccountStub,
    pub remark_text: String,
    pub posted_ms: i64,
    pub thumbs_up: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Channel {
    pub channel_id: String,
    pub channel_name: String,
    pub owner_id: String,
    pub video_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Subscription {
    pub subscriber_id: String,
    pub target_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Streamhub {
    pub accounts: Vec<Account>,
    pub videos: Vec<Video>,
    pub events: Vec<Event>,
    pub remarks: Vec<Remark>,
    pub channels: Vec<Channel>,
    pub subscriptions: Vec<Subscription>,
    #[serde(skip)]
    next_video: usize,
}

fn region(rng: &mut rand_chacha::ChaCha8Rng, place: &Place) -> Region {
    Region {
        country_iso: place.country.to_owned(),
        area_name: place.region.to_owned(),
        zip: place.postal_code.to_owned(),
        lat_deg: fixture::jitter(rng, place.lat),
        lon_deg: fixture::jitter(rng, place.lon),
    }
}

fn millis(rng: &mut rand_chacha::ChaCha8Rng) -> i64 {
    fixture::instant_secs(rng) * 1000 + rng.gen_range(0..1000)
}

impl Streamhub {
    pub fn account(&self, id: &str) -> Option<&Account> {
        self.accounts.iter().find(|a| a.account_id == id)
    }

    pub fn video(&self, id: &str) -> Option<&Video> {
        self.videos.iter().find(|v| v.video_id == id)
    }

    pub fn event(&self, id: &str) -> Option<&Event> {
        self.events.iter().find(|e| e.event_id == id)
    }

    fn expand(&self, event: &Event, depth: usize) -> EventView {
        EventView {
            event_id: event.event_id.clone(),
            actor: event.actor.clone(),
            verb: event.verb.clone(),
            headline: event.headline.clone(),
            summary: event.summary.clone(),
            happened_ms: event.happened_ms,
            clips: event
                .clip_ids
                .iter()
                .filter_map(|id| self.video(id))
                .cloned()
                .collect(),
            participants: event
                .participant_ids
                .iter()
                .filter_map(|id| self.account(id))
                .map(Account::stub)
                .collect(),
            follow_ups: if depth == 0 {
                event
                    .follow_up_ids
                    .iter()
                    .filter_map(|id| self.event(id))
                    .map(|e| self.expand(e, depth + 1))
                    .collect()
            } else {
                Vec::new()
            },
            place: event.place.clone(),
        }
    }

    pub fn event_view(&self, id: &str) -> Option<EventView> {
        self.event(id).map(|e| self.expand(e, 0))
    }

    fn accounts_by_id<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Vec<Account> {
        let mut seen: Vec<&str> = Vec::new();
        for id in ids {
            if !seen.contains(&id) {
                seen.push(id);
            }
        }
        seen.into_iter()
            .filter_map(|id| self.account(id))
            .cloned()
            .collect()
    }

    /// Uploader first, then everyone who remarked, in remark order.
    fn audience(&self, video: &Video) -> Vec<Account> {
        let remarkers = self
            .remarks
            .iter()
            .filter(|r| r.on_video.as_deref() == Some(video.video_id.as_str()))
            .map(|r| r.by.account_id.as_str());
        self.accounts_by_id(std::iter::once(video.uploader.account_id.as_str()).chain(remarkers))
    }

    /// Actor first, then participants.
    fn involved(&self, event: &Event) -> Vec<Account> {
        self.accounts_by_id(
            std::iter::once(event.actor.as_str())
                .chain(event.participant_ids.iter().map(String::as_str)),
        )
    }

    fn recount(&mut self) {
        for account in &mut self.accounts {
            account.subscriber_total = self
                .subscriptions
                .iter()
                .filter(|s| s.target_id == account.account_id)
                .count() as u64;
            account.subscription_total = self
                .subscriptions
                .iter()
                .filter(|s| s.subscriber_id == account.account_id)
                .count() as u64;
        }
        for video in &mut self.videos {
            video.remark_total = self
                .remarks
                .iter()
                .filter(|r| r.on_video.as_deref() == Some(video.video_id.as_str()))
                .count() as u64;
        }
        for channel in &mut self.channels {
            channel.video_ids = self
                .videos
                .iter()
                .filter(|v| v.channel_id.as_deref() == Some(channel.channel_id.as_str()))
                .map(|v| v.video_id.clone())
                .collect();
        }
    }
}

impl Backend for Streamhub {
    const NAME: &'static str = "streamhub";

    fn generate(seed: u64) -> Self {
        let mut rng = fixture::rng_for(seed, Self::NAME);
        let mut accounts = Vec::with_capacity(fixture::PERSONS);
        for n in 1..=fixture::PERSONS {
            let first = *fixture::pick(&mut rng, fixture::FIRST_NAMES);
            let last = *fixture::pick(&mut rng, fixture::LAST_NAMES);
            let account_id = fixture::person_id(n);
            let handle = format!("{}{}tv", first.to_lowercase(), n);
            let place = *fixture::pick(&mut rng, fixture::PLACES);
            accounts.push(Account {
                display_name: format!("{first} {last}"),
                channel_bio: rng.gen_bool(0.6).then(|| fixture::sentence(&mut rng, 7)),
                joined_ms: millis(&mut rng),
                subscriber_total: 0,
                subscription_total: 0,
                avatar_link: format!("https://streamhub.example/a/{account_id}/avatar"),
                channel_link: format!("https://streamhub.example/@{handle}"),
                region: rng.gen_bool(0.7).then(|| region(&mut rng, &place)),
                handle,
                account_id,
            });
        }

        let mut subscriptions = Vec::new();
        for n in 1..=fixture::PERSONS {
            for target in fixture::others(&mut rng, n, 5) {
                subscriptions.push(Subscription {
                    subscriber_id: fixture::person_id(n),
                    target_id: target,
                });
            }
        }

        let channels: Vec<Channel> = (1..=CHANNELS)
            .map(|n| {
                let words = rng.gen_range(1..3);
                Channel {
                    channel_id: format!("c{n}"),
                    channel_name: fixture::sentence(&mut rng, words),
                    owner_id: fixture::person_id(n),
                    video_ids: Vec::new(),
                }
            })
            .collect();

        let mut videos = Vec::with_capacity(fixture::MEDIA_ITEMS);
        for n in 1..=fixture::MEDIA_ITEMS {
            // u1 uploads exactly the first three videos, all into c1.
            let owner = if n <= 3 {
                1
            } else {
                rng.gen_range(2..=fixture::PERSONS)
            };
            let uploader = accounts[owner - 1].stub();
            let video_id = fixture::media_id(n);
            let place = *fixture::pick(&mut rng, fixture::PLACES);
            let words = rng.gen_range(2..7);
            let tags = rng.gen_range(0..5);
            let votes = rng.gen_range(0..100);
            videos.push(Video {
                headline: fixture::sentence(&mut rng, words),
                summary: rng.gen_bool(0.7).then(|| fixture::sentence(&mut rng, 12)),
                published_ms: millis(&mut rng),
                length_sec: rng.gen_range(5..3600),
                keyword_list: fixture::distinct_words(&mut rng, tags),
                spoken_lang: rng
                    .gen_bool(0.9)
                    .then(|| (*fixture::pick(&mut rng, fixture::LANGUAGES)).to_owned()),
                rights: rng.gen_bool(0.7).then(|| {
                    let (code, label, link) = *fixture::pick(&mut rng, fixture::LICENSES);
                    Rights {
                        rights_kind: code.to_owned(),
                        rights_name: label.to_owned(),
                        rights_href: link.to_owned(),
                    }
                }),
                view_total: rng.gen_range(0..1_000_000),
                like_total: rng.gen_range(0..10_000),
                dislike_total: rng.gen_range(0..1_000),
                remark_total: 0,
                share_total: rng.gen_range(0..500),
                watch_link: format!("https://streamhub.example/watch/{video_id}"),
                still_link: format!("https://streamhub.example/still/{video_id}.jpg"),
                channel_id: (owner <= CHANNELS).then(|| format!("c{owner}")),
                place: rng.gen_bool(0.5).then(|| region(&mut rng, &place)),
                star_rating: (votes > 0).then(|| f64::from(rng.gen_range(0..=100_u8)) / 20.0),
                rating_votes: votes,
                byte_size: rng.gen_range(1_000_000..900_000_000),
                featured_accounts: fixture::others(&mut rng, owner, 2),
                uploader,
                video_id,
            });
        }

        let mut events: Vec<Event> = Vec::with_capacity(fixture::ACTIVITIES);
        for n in 1..=fixture::ACTIVITIES {
            let actor = if n == 1 {
                1
            } else {
                rng.gen_range(1..=fixture::PERSONS)
            };
            let actor_id = fixture::person_id(actor);
            let (verb, past) = if n == 1 {
                VERBS[0]
            } else {
                *fixture::pick(&mut rng, VERBS)
            };
            let actor_name = accounts[actor - 1].display_name.clone();
            let mut participants = fixture::others(&mut rng, actor, 3);
            let (clip_ids, object) = if verb == "subscribe" {
                let target = participants
                    .first()
                    .cloned()
                    .unwrap_or_else(|| fixture::person_id(actor % fixture::PERSONS + 1));
                if participants.is_empty() {
                    participants.push(target.clone());
                }
                let name = accounts
                    .iter()
                    .find(|a| a.account_id == target)
                    .map(|a| a.display_name.clone());
                (Vec::new(), name.unwrap_or(target))
            } else {
                let own: Vec<&Video> = videos
                    .iter()
                    .filter(|v| v.uploader.account_id == actor_id)
                    .collect();
                let pool: Vec<&Video> = if verb == "upload" && !own.is_empty() {
                    own
                } else {
                    videos.iter().collect()
                };
                let count = if n == 1 { 2 } else { rng.gen_range(1..3) };
                let mut chosen: Vec<String> = Vec::new();
                while chosen.len() < count.min(pool.len()) {
                    let id = &fixture::pick(&mut rng, &pool).video_id;
                    if !chosen.contains(id) {
                        chosen.push(id.clone());
                    }
                }
                chosen.sort_by(|a, b| fixture::numeric_order(a, b));
                let first = videos
                    .iter()
                    .find(|v| v.video_id == chosen[0])
                    .map(|v| v.headline.clone());
                (chosen, format!("\"{}\"", first.unwrap_or_default()))
            };
            let follow_up_ids = if n > 1 && rng.gen_bool(0.3) {
                vec![format!("a{}", rng.gen_range(1..n))]
            } else {
                Vec::new()
            };
            let place = *fixture::pick(&mut rng, fixture::PLACES);
            events.push(Event {
                event_id: format!("a{n}"),
                actor: actor_id,
                verb: verb.to_owned(),
                headline: format!("{actor_name} {past} {object}"),
                summary: rng.gen_bool(0.6).then(|| fixture::sentence(&mut rng, 9)),
                happened_ms: millis(&mut rng),
                clip_ids,
                participant_ids: participants,
                follow_up_ids,
                place: rng.gen_bool(0.4).then(|| region(&mut rng, &place)),
            });
        }

        let mut remarks = Vec::new();
        let mut remark = |rng: &mut rand_chacha::ChaCha8Rng,
                          on_video: Option<String>,
                          on_event: Option<String>,
                          after: i64| {
            let by = accounts[rng.gen_range(0..accounts.len())].stub();
            let words = rng.gen_range(2..9);
            remarks.push(Remark {
                remark_id: format!("r{}", remarks.len() + 1),
                on_video,
                on_event,
                by,
                remark_text: fixture::sentence(rng, words),
                posted_ms: after + rng.gen_range(1_000..500_000_000),
                thumbs_up: rng.gen_range(0..80),
            });
        };
        for video in &videos {
            for _ in 0..rng.gen_range(0..4) {
                remark(
                    &mut rng,
                    Some(video.video_id.clone()),
                    None,
                    video.published_ms,
                );
            }
        }
        for event in &events {
            for _ in 0..rng.gen_range(0..3) {
                remark(
                    &mut rng,
                    None,
                    Some(event.event_id.clone()),
                    event.happened_ms,
                );
            }
        }

        let mut data = Self {
            accounts,
            videos,
            events,
            remarks,
            channels,
            subscriptions,
            next_video: fixture::MEDIA_ITEMS,
        };
        data.recount();
        data
    }

    fn routes() -> Router<Arc<Shared<Self>>> {
        Router::new()
            .route("/v3/accounts", get(account_by_handle))
            .route("/v3/accounts/search", get(search_accounts))
            .route("/v3/accounts/{id}", get(get_account))
            .route("/v3/accounts/{id}/subscriptions", get(subscriptions))
            .route("/v3/accounts/{id}/videos", get(account_videos))
            .route("/v3/accounts/{id}/events", get(account_events))
            .route("/v3/videos/search", get(search_videos))
            .route("/v3/videos/{id}", get(get_video))
            .route("/v3/videos/{id}/audience", get(video_audience))
            .route("/v3/videos/{id}/remarks", get(video_remarks))
            .route("/v3/videos/{id}/related", get(related_videos))
            .route("/v3/channels/{id}/videos", get(channel_videos))
            .route("/v3/events/search", get(search_events))
            .route("/v3/events/{id}", get(get_event))
            .route("/v3/events/{id}/participants", get(event_participants))
            .route("/v3/events/{id}/remarks", get(event_remarks))
            .route("/v3/remarks/{id}", get(get_remark))
    }

    fn has_subject(&self, id: &str) -> bool {
        self.account(id).is_some()
    }

    fn mutate(&mut self, mutation: &Mutation) -> Result<MutationOutcome, MutationError> {
        match mutation {
            Mutation::AddMediaItem { owner, text } => {
                let uploader = self
                    .account(owner)
                    .map(Account::stub)
                    .ok_or_else(|| MutationError::UnknownTarget(owner.clone()))?;
                self.next_video += 1;
                let video_id = fixture::media_id(self.next_video);
                let channel_id = self
                    .channels
                    .iter()
                    .find(|c| &c.owner_id == owner)
                    .map(|c| c.channel_id.clone());
                self.videos.push(Video {
                    uploader,
                    headline: text.clone(),
                    summary: None,
                    published_ms: chrono::Utc::now().timestamp_millis(),
                    length_sec: 0,
                    keyword_list: Vec::new(),
                    spoken_lang: None,
                    rights: None,
                    view_total: 0,
                    like_total: 0,
                    dislike_total: 0,
                    remark_total: 0,
                    share_total: 0,
                    watch_link: format!("https://streamhub.example/watch/{video_id}"),
                    still_link: format!("https://streamhub.example/still/{video_id}.jpg"),
                    channel_id,
                    place: None,
                    star_rating: None,
                    rating_votes: 0,
                    byte_size: 0,
                    featured_accounts: Vec::new(),
                    video_id: video_id.clone(),
                });
                self.recount();
                Ok(MutationOutcome { id: video_id })
            }
            Mutation::DeleteMediaItem { id } => {
                let before = self.videos.len();
                self.videos.retain(|v| &v.video_id != id);
                if self.videos.len() == before {
                    return Err(MutationError::UnknownTarget(id.clone()));
                }
                self.remarks.retain(|r| r.on_video.as_ref() != Some(id));
                for event in &mut self.events {
                    event.clip_ids.retain(|c| c != id);
                }
                self.recount();
                Ok(MutationOutcome { id: id.clone() })
            }
            Mutation::RenamePerson { id, display_name } => {
                let account = self
                    .accounts
                    .iter_mut()
                    .find(|a| &a.account_id == id)
                    .ok_or_else(|| MutationError::UnknownTarget(id.clone()))?;
                account.display_name = display_name.clone();
                for video in self
                    .videos
                    .iter_mut()
                    .filter(|v| &v.uploader.account_id == id)
                {
                    video.uploader.display_name = display_name.clone();
                }
                for remark in self.remarks.iter_mut().filter(|r| &r.by.account_id == id) {
                    remark.by.display_name = display_name.clone();
                }
                Ok(MutationOutcome { id: id.clone() })
            }
            Mutation::DeletePerson { id } => {
                let before = self.accounts.len();
                self.accounts.retain(|a| &a.account_id != id);
                if self.accounts.len() == before {
                    return Err(MutationError::UnknownTarget(id.clone()));
                }
                self.subscriptions
                    .retain(|s| &s.subscriber_id != id && &s.target_id != id);
                self.videos.retain(|v| &v.uploader.account_id != id);
                self.events.retain(|e| &e.actor != id);
                let videos: Vec<String> = self.videos.iter().map(|v| v.video_id.clone()).collect();
                let events: Vec<String> = self.events.iter().map(|e| e.event_id.clone()).collect();
                for event in &mut self.events {
                    event.participant_ids.retain(|p| p != id);
                    event.clip_ids.retain(|c| videos.contains(c));
                    event.follow_up_ids.retain(|f| events.contains(f));
                }
                for video in &mut self.videos {
                    video.featured_accounts.retain(|a| a != id);
                }
                self.remarks.retain(|r| {
                    &r.by.account_id != id
                        && r.on_video.as_ref().is_none_or(|v| videos.contains(v))
                        && r.on_event.as_ref().is_none_or(|e| events.contains(e))
                });
                self.recount();
                Ok(MutationOutcome { id: id.clone() })
            }
        }
    }
}

type St = State<Arc<Shared<Streamhub>>>;

#[derive(Serialize)]
struct Items<T> {
    items: Vec<T>,
}

fn items<T: Serialize>(items: Vec<T>) -> Response {
    Json(Items { items }).into_response()
}

async fn get_account(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().account(&id).cloned())
}

async fn account_by_handle(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let Some(handle) = q.get("handle") else {
        return StatusCode::BAD_REQUEST.into_response();
    };
    found(
        s.read()
            .accounts
            .iter()
            .find(|a| &a.handle == handle)
            .cloned(),
    )
}

async fn search_accounts(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let keywords = split_list(q.get("kw"));
    if keywords.is_empty() {
        return StatusCode::BAD_REQUEST.into_response();
    }
    let data = s.read();
    items(
        data.accounts
            .iter()
            .filter(|a| matches_any(&keywords, &[&a.handle, &a.display_name]))
            .cloned()
            .collect(),
    )
}

async fn subscriptions(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.account(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    let mut targets: Vec<&str> = data
        .subscriptions
        .iter()
        .filter(|x| x.subscriber_id == id)
        .map(|x| x.target_id.as_str())
        .collect();
    targets.sort_by(|a, b| fixture::numeric_order(a, b));
    items(data.accounts_by_id(targets))
}

async fn account_videos(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.account(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    items(
        data.videos
            .iter()
            .filter(|v| v.uploader.account_id == id)
            .cloned()
            .collect(),
    )
}

async fn account_events(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.account(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    items(
        data.events
            .iter()
            .filter(|e| e.actor == id)
            .map(|e| data.expand(e, 0))
            .collect(),
    )
}

async fn get_video(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().video(&id).cloned())
}

async fn video_audience(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    match data.video(&id) {
        Some(video) => items(data.audience(video)),
        None => StatusCode::NOT_FOUND.into_response(),
    }
}

async fn video_remarks(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.video(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    items(
        data.remarks
            .iter()
            .filter(|r| r.on_video.as_deref() == Some(id.as_str()))
            .cloned()
            .collect(),
    )
}

async fn related_videos(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    let Some(seed) = data.video(&id) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    items(
        rank_related(
            &seed.video_id,
            &seed.keyword_list,
            &data.videos,
            |v| &v.video_id,
            |v| &v.keyword_list,
        )
        .into_iter()
        .cloned()
        .collect(),
    )
}

async fn channel_videos(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    let Some(channel) = data.channels.iter().find(|c| c.channel_id == id) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    items(
        channel
            .video_ids
            .iter()
            .filter_map(|v| data.video(v))
            .cloned()
            .collect(),
    )
}

/// `kw` is a comma-separated any-of keyword list over headline, summary and
/// keywords; `after-ms`/`before-ms` are inclusive epoch milliseconds.
async fn search_videos(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let keywords = split_list(q.get("kw"));
    let bound = |key: &str| q.get(key).map(|v| v.parse::<i64>()).transpose();
    let (Ok(after), Ok(before)) = (bound("after-ms"), bound("before-ms")) else {
        return StatusCode::BAD_REQUEST.into_response();
    };
    if keywords.is_empty() {
        return StatusCode::BAD_REQUEST.into_response();
    }
    let data = s.read();
    items(
        data.videos
            .iter()
            .filter(|v| {
                after.is_none_or(|t| v.published_ms >= t)
                    && before.is_none_or(|t| v.published_ms <= t)
            })
            .filter(|v| {
                let mut fields: Vec<&str> = vec![&v.headline];
                fields.extend(v.summary.as_deref());
                fields.extend(v.keyword_list.iter().map(String::as_str));
                matches_any(&keywords, &fields)
            })
            .cloned()
            .collect(),
    )
}

async fn search_events(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let keywords = split_list(q.get("kw"));
    if keywords.is_empty() {
        return StatusCode::BAD_REQUEST.into_response();
    }
    let data = s.read();
    items(
        data.events
            .iter()
            .filter(|e| {
                let mut fields: Vec<&str> = vec![&e.headline];
                fields.extend(e.summary.as_deref());
                matches_any(&keywords, &fields)
            })
            .map(|e| data.expand(e, 0))
            .collect(),
    )
}

async fn get_event(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().event_view(&id))
}

async fn event_participants(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    match data.event(&id) {
        Some(event) => items(data.involved(event)),
        None => StatusCode::NOT_FOUND.into_response(),
    }
}

async fn event_remarks(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.event(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    items(
        data.remarks
            .iter()
            .filter(|r| r.on_event.as_deref() == Some(id.as_str()))
            .cloned()
            .collect(),
    )
}

async fn get_remark(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().remarks.iter().find(|r| r.remark_id == id).cloned())
}
