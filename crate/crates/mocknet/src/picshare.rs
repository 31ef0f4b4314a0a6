//! Photo-sharing backend. camelCase keys, ISO-8601 timestamps, geotags,
//! licences, tagged members and galleries. No activities, no posting.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::{DateTime, SecondsFormat, Utc};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fixture::{self, Place};
use crate::mutation::{Mutation, MutationError, MutationOutcome};
use crate::server::{found, matches_any, rank_related, split_list, Backend, Shared};

pub const GALLERIES: usize = 10;

/// Tag carried by exactly one photo.
pub const UNIQUE_TAG: &str = "lighthouse";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RealName {
    pub given: String,
    pub family: String,
    pub formatted: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Locality {
    pub country_code: String,
    pub region_name: String,
    pub postal_code: String,
    pub city_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub street_line: Option<String>,
    pub lat: f64,
    pub lng: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Member {
    pub member_id: String,
    pub login: String,
    pub real_name: RealName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub about_text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub birth_date: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gender_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contact_email: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hometown: Option<Locality>,
    pub member_since: String,
    pub avatar_url: String,
    pub profile_page: String,
    pub photo_urls: Vec<String>,
    pub contact_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Licence {
    pub code: String,
    pub label: String,
    pub link: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Photo {
    pub photo_id: String,
    pub owner_id: String,
    pub caption: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub taken_at: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geo_tag: Option<Locality>,
    pub tag_list: Vec<String>,
    pub tagged_member_ids: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub licence: Option<Licence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lang_tag: Option<String>,
    pub size_bytes: u64,
    pub fav_count: u64,
    pub view_count: u64,
    pub comment_count: u64,
    pub image_url: String,
    pub thumb_url: String,
    pub gallery_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stars: Option<f64>,
    pub star_votes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhotoComment {
    pub comment_id: String,
    pub photo_id: String,
    pub author_id: String,
    pub author_login: String,
    pub message: String,
    pub posted_at: String,
    pub upvotes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Gallery {
    pub gallery_id: String,
    pub gallery_title: String,
    pub photo_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Contact {
    pub from_member: String,
    pub to_member: String,
    pub is_hidden: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Picshare {
    pub members: Vec<Member>,
    pub photos: Vec<Photo>,
    pub comments: Vec<PhotoComment>,
    pub galleries: Vec<Gallery>,
    pub contacts: Vec<Contact>,
    #[serde(skip)]
    next_photo: usize,
}

pub fn iso(secs: i64) -> String {
    DateTime::<Utc>::from_timestamp(secs, 0)
        .expect("fixture instants are in range")
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Inverse of [`iso`], used for search bounds.
pub fn parse_iso(text: &str) -> Option<i64> {
    DateTime::parse_from_rfc3339(text)
        .ok()
        .map(|t| t.timestamp())
}

fn locality(rng: &mut rand_chacha::ChaCha8Rng, place: &Place) -> Locality {
    Locality {
        country_code: place.country.to_owned(),
        region_name: place.region.to_owned(),
        postal_code: place.postal_code.to_owned(),
        city_name: place.city.to_owned(),
        street_line: rng.gen_bool(0.3).then(|| {
            format!(
                "{} {}",
                rng.gen_range(1..200),
                fixture::pick(rng, &["Rue Lepic", "High Street", "Main St"])
            )
        }),
        lat: fixture::jitter(rng, place.lat),
        lng: fixture::jitter(rng, place.lon),
    }
}

impl Picshare {
    pub fn member(&self, id: &str) -> Option<&Member> {
        self.members.iter().find(|m| m.member_id == id)
    }

    pub fn photo(&self, id: &str) -> Option<&Photo> {
        self.photos.iter().find(|p| p.photo_id == id)
    }

    fn contacts_of(&self, id: &str, include_hidden: bool) -> Vec<Member> {
        let mut ids: Vec<&str> = self
            .contacts
            .iter()
            .filter(|c| c.from_member == id && (include_hidden || !c.is_hidden))
            .map(|c| c.to_member.as_str())
            .collect();
        ids.sort_by(|a, b| fixture::numeric_order(a, b));
        ids.into_iter()
            .filter_map(|id| self.member(id))
            .cloned()
            .collect()
    }

    /// Owner first, then tagged members in tag order, without repeats.
    fn people_in(&self, photo: &Photo) -> Vec<Member> {
        let mut ids = vec![photo.owner_id.as_str()];
        for tagged in &photo.tagged_member_ids {
            if !ids.contains(&tagged.as_str()) {
                ids.push(tagged);
            }
        }
        ids.into_iter()
            .filter_map(|id| self.member(id))
            .cloned()
            .collect()
    }

    fn recount(&mut self) {
        for member in &mut self.members {
            member.contact_count = self
                .contacts
                .iter()
                .filter(|c| c.from_member == member.member_id)
                .count() as u64;
        }
        for photo in &mut self.photos {
            photo.comment_count = self
                .comments
                .iter()
                .filter(|c| c.photo_id == photo.photo_id)
                .count() as u64;
        }
        for gallery in &mut self.galleries {
            gallery.photo_ids = self
                .photos
                .iter()
                .filter(|p| p.gallery_id == gallery.gallery_id)
                .map(|p| p.photo_id.clone())
                .collect();
        }
    }
}

impl Backend for Picshare {
    const NAME: &'static str = "picshare";

    fn generate(seed: u64) -> Self {
        let mut rng = fixture::rng_for(seed, Self::NAME);
        let mut members = Vec::with_capacity(fixture::PERSONS);
        for n in 1..=fixture::PERSONS {
            let given = *fixture::pick(&mut rng, fixture::FIRST_NAMES);
            let family = *fixture::pick(&mut rng, fixture::LAST_NAMES);
            let member_id = fixture::person_id(n);
            let login = format!("{}{n}", given.to_lowercase());
            let place = *fixture::pick(&mut rng, fixture::PLACES);
            let birth = rng.gen_bool(0.6).then(|| {
                format!(
                    "{}-{:02}-{:02}",
                    rng.gen_range(1950..2000),
                    rng.gen_range(1..=12),
                    rng.gen_range(1..=28)
                )
            });
            let photos = rng.gen_range(0..3);
            members.push(Member {
                real_name: RealName {
                    given: given.to_owned(),
                    family: family.to_owned(),
                    formatted: format!("{given} {family}"),
                },
                about_text: rng.gen_bool(0.5).then(|| fixture::sentence(&mut rng, 8)),
                birth_date: birth,
                gender_label: rng
                    .gen_bool(0.5)
                    .then(|| (*fixture::pick(&mut rng, &["female", "male", "other"])).to_owned()),
                contact_email: rng.gen_bool(0.4).then(|| format!("{login}@mail.example")),
                hometown: rng.gen_bool(0.75).then(|| locality(&mut rng, &place)),
                member_since: iso(fixture::instant_secs(&mut rng)),
                avatar_url: format!("https://picshare.example/avatars/{member_id}.jpg"),
                profile_page: format!("https://picshare.example/people/{login}"),
                photo_urls: (1..=photos)
                    .map(|k| format!("https://picshare.example/avatars/{member_id}-{k}.jpg"))
                    .collect(),
                contact_count: 0,
                login,
                member_id,
            });
        }

        let mut contacts = Vec::new();
        for n in 1..=fixture::PERSONS {
            for to in fixture::others(&mut rng, n, 5) {
                contacts.push(Contact {
                    from_member: fixture::person_id(n),
                    to_member: to,
                    is_hidden: rng.gen_bool(0.25),
                });
            }
        }

        let mut photos = Vec::with_capacity(fixture::MEDIA_ITEMS);
        for n in 1..=fixture::MEDIA_ITEMS {
            let photo_id = fixture::media_id(n);
            let owner = if n == 1 {
                1
            } else {
                rng.gen_range(1..=fixture::PERSONS)
            };
            let tag_count = rng.gen_range(1..5);
            let mut tag_list = fixture::distinct_words(&mut rng, tag_count);
            let mut tagged = fixture::others(&mut rng, owner, 3);
            let mut licence = rng
                .gen_bool(0.9)
                .then(|| fixture::pick(&mut rng, fixture::LICENSES))
                .map(|(code, label, link)| Licence {
                    code: (*code).to_owned(),
                    label: (*label).to_owned(),
                    link: (*link).to_owned(),
                });
            if n == 1 {
                if !tag_list.iter().any(|t| t == "sunset") {
                    tag_list.insert(0, "sunset".to_owned());
                }
                tagged = vec!["u2".to_owned(), "u3".to_owned()];
                let (code, label, link) = fixture::LICENSES[0];
                licence = Some(Licence {
                    code: code.into(),
                    label: label.into(),
                    link: link.into(),
                });
            }
            if n == fixture::MEDIA_ITEMS {
                tag_list = vec![UNIQUE_TAG.to_owned()];
            }
            let place = *fixture::pick(&mut rng, fixture::PLACES);
            let caption_words = rng.gen_range(2..6);
            let votes = rng.gen_range(0..40);
            photos.push(Photo {
                owner_id: fixture::person_id(owner),
                caption: fixture::sentence(&mut rng, caption_words),
                notes: rng.gen_bool(0.5).then(|| fixture::sentence(&mut rng, 10)),
                taken_at: iso(fixture::instant_secs(&mut rng)),
                geo_tag: rng.gen_bool(0.8).then(|| locality(&mut rng, &place)),
                tag_list,
                tagged_member_ids: tagged,
                licence,
                lang_tag: rng
                    .gen_bool(0.8)
                    .then(|| (*fixture::pick(&mut rng, fixture::LANGUAGES)).to_owned()),
                size_bytes: rng.gen_range(40_000..8_000_000),
                fav_count: rng.gen_range(0..300),
                view_count: rng.gen_range(0..20_000),
                comment_count: 0,
                image_url: format!("https://picshare.example/photos/{photo_id}.jpg"),
                thumb_url: format!("https://picshare.example/photos/{photo_id}_t.jpg"),
                gallery_id: format!("g{}", rng.gen_range(1..=GALLERIES)),
                stars: (votes > 0).then(|| f64::from(rng.gen_range(10..=50_u8)) / 10.0),
                star_votes: votes,
                photo_id,
            });
        }

        let mut comments = Vec::new();
        for photo in &photos {
            let count = if photo.photo_id == "m1" {
                2
            } else {
                rng.gen_range(0..4)
            };
            for _ in 0..count {
                let author = members[rng.gen_range(0..members.len())].clone();
                let words = rng.gen_range(2..8);
                let posted =
                    parse_iso(&photo.taken_at).expect("generated") + rng.gen_range(600..400_000);
                comments.push(PhotoComment {
                    comment_id: format!("c{}", comments.len() + 1),
                    photo_id: photo.photo_id.clone(),
                    author_id: author.member_id,
                    author_login: author.login,
                    message: fixture::sentence(&mut rng, words),
                    posted_at: iso(posted),
                    upvotes: rng.gen_range(0..30),
                });
            }
        }

        let galleries = (1..=GALLERIES)
            .map(|n| {
                let title_words = rng.gen_range(1..4);
                Gallery {
                    gallery_id: format!("g{n}"),
                    gallery_title: fixture::sentence(&mut rng, title_words),
                    photo_ids: Vec::new(),
                }
            })
            .collect();

        let mut data = Self {
            members,
            photos,
            comments,
            galleries,
            contacts,
            next_photo: fixture::MEDIA_ITEMS,
        };
        data.recount();
        data
    }

    fn routes() -> Router<Arc<Shared<Self>>> {
        Router::new()
            .route("/api/members", get(member_by_login))
            .route("/api/members/search", get(search_members))
            .route("/api/members/{id}", get(get_member))
            .route("/api/members/{id}/contacts", get(contacts))
            .route("/api/members/{id}/contacts/all", get(all_contacts))
            .route("/api/members/{id}/photos", get(member_photos))
            .route("/api/photos/search", get(search_photos))
            .route("/api/photos/{id}", get(get_photo))
            .route("/api/photos/{id}/people", get(photo_people))
            .route("/api/photos/{id}/comments", get(photo_comments))
            .route("/api/photos/{id}/related", get(related_photos))
            .route("/api/galleries/{id}/photos", get(gallery_photos))
            .route("/api/comments/{id}", get(get_comment))
    }

    fn has_subject(&self, id: &str) -> bool {
        self.member(id).is_some()
    }

    fn mutate(&mut self, mutation: &Mutation) -> Result<MutationOutcome, MutationError> {
        match mutation {
            Mutation::AddMediaItem { owner, text } => {
                if self.member(owner).is_none() {
                    return Err(MutationError::UnknownTarget(owner.clone()));
                }
                self.next_photo += 1;
                let photo_id = fixture::media_id(self.next_photo);
                self.photos.push(Photo {
                    owner_id: owner.clone(),
                    caption: text.clone(),
                    notes: None,
                    taken_at: iso(Utc::now().timestamp()),
                    geo_tag: None,
                    tag_list: Vec::new(),
                    tagged_member_ids: Vec::new(),
                    licence: None,
                    lang_tag: None,
                    size_bytes: 0,
                    fav_count: 0,
                    view_count: 0,
                    comment_count: 0,
                    image_url: format!("https://picshare.example/photos/{photo_id}.jpg"),
                    thumb_url: format!("https://picshare.example/photos/{photo_id}_t.jpg"),
                    gallery_id: "g1".to_owned(),
                    stars: None,
                    star_votes: 0,
                    photo_id: photo_id.clone(),
                });
                self.recount();
                Ok(MutationOutcome { id: photo_id })
            }
            Mutation::DeleteMediaItem { id } => {
                let before = self.photos.len();
                self.photos.retain(|p| &p.photo_id != id);
                if self.photos.len() == before {
                    return Err(MutationError::UnknownTarget(id.clone()));
                }
                self.comments.retain(|c| &c.photo_id != id);
                self.recount();
                Ok(MutationOutcome { id: id.clone() })
            }
            Mutation::RenamePerson { id, display_name } => {
                let member = self
                    .members
                    .iter_mut()
                    .find(|m| &m.member_id == id)
                    .ok_or_else(|| MutationError::UnknownTarget(id.clone()))?;
                member.real_name.formatted = display_name.clone();
                Ok(MutationOutcome { id: id.clone() })
            }
            Mutation::DeletePerson { id } => {
                let before = self.members.len();
                self.members.retain(|m| &m.member_id != id);
                if self.members.len() == before {
                    return Err(MutationError::UnknownTarget(id.clone()));
                }
                self.contacts
                    .retain(|c| &c.from_member != id && &c.to_member != id);
                self.photos.retain(|p| &p.owner_id != id);
                for photo in &mut self.photos {
                    photo.tagged_member_ids.retain(|t| t != id);
                }
                let photos: Vec<String> = self.photos.iter().map(|p| p.photo_id.clone()).collect();
                self.comments
                    .retain(|c| &c.author_id != id && photos.contains(&c.photo_id));
                self.recount();
                Ok(MutationOutcome { id: id.clone() })
            }
        }
    }
}

type St = State<Arc<Shared<Picshare>>>;

#[derive(Serialize)]
struct Members {
    members: Vec<Member>,
}

#[derive(Serialize)]
struct Photos {
    photos: Vec<Photo>,
}

#[derive(Serialize)]
struct Comments {
    comments: Vec<PhotoComment>,
}

async fn get_member(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().member(&id).cloned())
}

async fn member_by_login(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let Some(login) = q.get("login") else {
        return StatusCode::BAD_REQUEST.into_response();
    };
    found(s.read().members.iter().find(|m| &m.login == login).cloned())
}

async fn search_members(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let keywords = split_list(q.get("text"));
    if keywords.is_empty() {
        return StatusCode::BAD_REQUEST.into_response();
    }
    let data = s.read();
    let members = data
        .members
        .iter()
        .filter(|m| matches_any(&keywords, &[&m.login, &m.real_name.formatted]))
        .cloned()
        .collect();
    Json(Members { members }).into_response()
}

async fn contacts(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.member(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    Json(Members {
        members: data.contacts_of(&id, false),
    })
    .into_response()
}

async fn all_contacts(State(s): St, Path(id): Path<String>, headers: HeaderMap) -> Response {
    if let Err(status) = s.authorize(&headers, &id) {
        return status.into_response();
    }
    let data = s.read();
    if data.member(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    Json(Members {
        members: data.contacts_of(&id, true),
    })
    .into_response()
}

async fn member_photos(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.member(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    let photos = data
        .photos
        .iter()
        .filter(|p| p.owner_id == id)
        .cloned()
        .collect();
    Json(Photos { photos }).into_response()
}

async fn get_photo(State(s): St, Path(id): Path<String>) -> Response {
    found(s.read().photo(&id).cloned())
}

async fn photo_people(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    let Some(photo) = data.photo(&id) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    Json(Members {
        members: data.people_in(photo),
    })
    .into_response()
}

async fn photo_comments(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    if data.photo(&id).is_none() {
        return StatusCode::NOT_FOUND.into_response();
    }
    let comments = data
        .comments
        .iter()
        .filter(|c| c.photo_id == id)
        .cloned()
        .collect();
    Json(Comments { comments }).into_response()
}

async fn related_photos(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    let Some(seed) = data.photo(&id) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    let photos = rank_related(
        &seed.photo_id,
        &seed.tag_list,
        &data.photos,
        |p| &p.photo_id,
        |p| &p.tag_list,
    )
    .into_iter()
    .cloned()
    .collect();
    Json(Photos { photos }).into_response()
}

async fn gallery_photos(State(s): St, Path(id): Path<String>) -> Response {
    let data = s.read();
    let Some(gallery) = data.galleries.iter().find(|g| g.gallery_id == id) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    let photos = gallery
        .photo_ids
        .iter()
        .filter_map(|p| data.photo(p))
        .cloned()
        .collect();
    Json(Photos { photos }).into_response()
}

async fn get_comment(State(s): St, Path(id): Path<String>) -> Response {
    found(
        s.read()
            .comments
            .iter()
            .find(|c| c.comment_id == id)
            .cloned(),
    )
}

/// `text` is a comma-separated any-of keyword list over caption, notes and
/// tags. `minTakenAt`/`maxTakenAt` are inclusive ISO-8601 bounds; `licence`
/// and `lang` must match exactly.
async fn search_photos(State(s): St, Query(q): Query<HashMap<String, String>>) -> Response {
    let keywords = split_list(q.get("text"));
    let bound = |key: &str| match q.get(key) {
        None => Ok(None),
        Some(v) => parse_iso(v).map(Some).ok_or(()),
    };
    let (Ok(min), Ok(max)) = (bound("minTakenAt"), bound("maxTakenAt")) else {
        return StatusCode::BAD_REQUEST.into_response();
    };
    if keywords.is_empty() {
        return StatusCode::BAD_REQUEST.into_response();
    }
    let licence = q.get("licence");
    let lang = q.get("lang");
    let data = s.read();
    let photos = data
        .photos
        .iter()
        .filter(|p| {
            let taken = parse_iso(&p.taken_at).unwrap_or(i64::MIN);
            min.is_none_or(|t| taken >= t) && max.is_none_or(|t| taken <= t)
        })
        .filter(|p| licence.is_none_or(|l| p.licence.as_ref().is_some_and(|x| &x.code == l)))
        .filter(|p| lang.is_none_or(|l| p.lang_tag.as_ref() == Some(l)))
        .filter(|p| {
            let mut fields: Vec<&str> = vec![&p.caption];
            fields.extend(p.notes.as_deref());
            fields.extend(p.tag_list.iter().map(String::as_str));
            matches_any(&keywords, &fields)
        })
        .cloned()
        .collect();
    Json(Photos { photos }).into_response()
}
