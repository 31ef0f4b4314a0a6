//! Adaptor for the picshare photo network.
//!
//! Photos become IMAGE media items, galleries serve as pages, and the
//! persons behind a photo are its owner followed by everyone tagged in it.

use std::sync::Arc;

use async_trait::async_trait;
use serde::Deserialize;

use super::{
    ceil_secs, each, floor_secs, from_iso, internal, keep_matching, keyword_param, map_all,
};
use crate::model::{
    Address, Comment, Date, License, MediaItem, MediaItemFilter, MediaType, Name, ObjectId, Person,
    SocialNetworkId, Timestamp,
};
use crate::sdk::http::{path_segment as seg, BackendClient};
use crate::sdk::{
    AdaptorCapability, AdaptorContext, AdaptorError, AdaptorFactory, AdaptorResult, AuthToken,
    ErrorCode, Method, PersonQuery, SnsAdaptor, UserRef,
};

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RealName {
    given: String,
    family: String,
    formatted: String,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Locality {
    country_code: String,
    region_name: String,
    postal_code: String,
    city_name: String,
    street_line: Option<String>,
    lat: f64,
    lng: f64,
}

impl From<Locality> for Address {
    fn from(place: Locality) -> Self {
        Address {
            country: Some(place.country_code),
            region: Some(place.region_name),
            postal_code: Some(place.postal_code),
            extended_address: Some(place.city_name),
            street_address: place.street_line,
            latitude: Some(place.lat),
            longitude: Some(place.lng),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Member {
    member_id: String,
    login: String,
    real_name: RealName,
    about_text: Option<String>,
    birth_date: Option<String>,
    gender_label: Option<String>,
    contact_email: Option<String>,
    hometown: Option<Locality>,
    member_since: String,
    avatar_url: String,
    profile_page: String,
    photo_urls: Vec<String>,
    contact_count: u64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Licence {
    code: String,
    label: String,
    link: String,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Photo {
    photo_id: String,
    owner_id: String,
    caption: String,
    notes: Option<String>,
    taken_at: String,
    geo_tag: Option<Locality>,
    tag_list: Vec<String>,
    tagged_member_ids: Vec<String>,
    licence: Option<Licence>,
    lang_tag: Option<String>,
    size_bytes: u64,
    fav_count: u64,
    view_count: u64,
    comment_count: u64,
    image_url: String,
    thumb_url: String,
    #[allow(dead_code)]
    gallery_id: String,
    stars: Option<f64>,
    star_votes: u64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct PhotoComment {
    comment_id: String,
    #[allow(dead_code)]
    photo_id: String,
    author_id: String,
    author_login: String,
    message: String,
    posted_at: String,
    upvotes: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Members {
    members: Vec<Member>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Photos {
    photos: Vec<Photo>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Comments {
    comments: Vec<PhotoComment>,
}

pub fn factory(http: reqwest::Client) -> Arc<dyn AdaptorFactory> {
    Arc::new(move |context: AdaptorContext| {
        Box::new(PicshareAdaptor::new(context, http.clone())) as Box<dyn SnsAdaptor>
    })
}

fn iso_secs(secs: i64) -> AdaptorResult<String> {
    Timestamp::from_secs(secs)
        .map(Timestamp::to_iso8601)
        .ok_or_else(|| {
            AdaptorError::new(ErrorCode::BadRequest, format!("bound {secs}s out of range"))
        })
}

pub struct PicshareAdaptor {
    context: AdaptorContext,
    client: AdaptorResult<BackendClient>,
}

impl PicshareAdaptor {
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

    fn person(&self, member: Member) -> AdaptorResult<Person> {
        let mut person = Person::new(self.oid(member.member_id));
        person.username = Some(member.login);
        person.name = Some(Name {
            first_name: Some(member.real_name.given),
            last_name: Some(member.real_name.family),
            full_name: Some(member.real_name.formatted),
            additional_name: None,
        });
        person.about_me = member.about_text;
        person.birthday = member
            .birth_date
            .map(|d| Date::parse(&d).ok_or_else(|| internal(format!("bad birthDate {d:?}"))))
            .transpose()?;
        person.gender = member.gender_label;
        person.email = member.contact_email;
        person.addresses = member.hometown.into_iter().map(Address::from).collect();
        person.member_since = Some(from_iso(&member.member_since)?);
        person.thumbnail_url = Some(member.avatar_url);
        person.profile_url = Some(member.profile_page);
        person.photos = member.photo_urls;
        person.num_friends = Some(member.contact_count);
        Ok(person)
    }

    fn media_item(&self, photo: Photo) -> AdaptorResult<MediaItem> {
        let mut item = MediaItem::new(self.oid(photo.photo_id), MediaType::Image);
        item.title = Some(photo.caption);
        item.description = photo.notes;
        item.created = Some(from_iso(&photo.taken_at)?);
        item.location = photo.geo_tag.map(Address::from);
        item.tags = photo.tag_list;
        item.tagged_people = photo
            .tagged_member_ids
            .into_iter()
            .map(|id| self.oid(id))
            .collect();
        item.license = photo.licence.map(|l| License {
            license_type: Some(l.code),
            name: Some(l.label),
            url: Some(l.link),
        });
        item.language = photo.lang_tag;
        item.file_size = Some(photo.size_bytes);
        item.num_favorites = Some(photo.fav_count);
        item.num_views = Some(photo.view_count);
        item.num_comments = Some(photo.comment_count);
        item.url = Some(photo.image_url);
        item.thumbnail_url = Some(photo.thumb_url);
        item.rating = photo.stars;
        item.num_ratings = Some(photo.star_votes);
        item.user_id = Some(self.oid(photo.owner_id));
        Ok(item)
    }

    fn comment(&self, native: PhotoComment) -> AdaptorResult<Comment> {
        let mut comment = Comment::new(self.oid(native.comment_id));
        comment.description = Some(native.message);
        comment.created = Some(from_iso(&native.posted_at)?);
        comment.user_id = Some(self.oid(native.author_id));
        comment.username = Some(native.author_login);
        comment.num_positive_votes = Some(native.upvotes);
        Ok(comment)
    }

    async fn member_by_login(&self, login: &str) -> AdaptorResult<Member> {
        self.client()?
            .get("/api/members", &[("login", login.to_owned())])
            .await
    }
}

#[async_trait]
impl SnsAdaptor for PicshareAdaptor {
    fn network(&self) -> &SocialNetworkId {
        &self.context.network
    }

    fn capability(&self) -> &AdaptorCapability {
        &self.context.capability
    }

    async fn get_persons(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Person>> {
        each(ids, |id| async move {
            let member: Member = self
                .client()?
                .get(&format!("/api/members/{}", seg(&id.id)), &[])
                .await?;
            self.person(member)
        })
        .await
    }

    async fn connected_persons(&self, person: &ObjectId) -> AdaptorResult<Vec<Person>> {
        let path = format!("/api/members/{}/contacts", seg(&person.id));
        let found: Members = self.client()?.get(&path, &[]).await?;
        map_all(found.members, |m| self.person(m))
    }

    async fn my_connected_persons(
        &self,
        person: &ObjectId,
        token: &AuthToken,
    ) -> AdaptorResult<Vec<Person>> {
        let path = format!("/api/members/{}/contacts/all", seg(&person.id));
        let found: Members = self.client()?.get_authed(&path, token).await?;
        map_all(found.members, |m| self.person(m))
    }

    async fn find_persons(&self, query: &PersonQuery) -> AdaptorResult<Vec<Person>> {
        match query {
            PersonQuery::Keywords(keywords) => {
                let found: Members = self
                    .client()?
                    .get("/api/members/search", &[("text", keyword_param(keywords))])
                    .await?;
                let matcher = crate::search::Keywords::new(keywords);
                let persons = map_all(found.members, |m| self.person(m))?;
                Ok(persons
                    .into_iter()
                    .filter(|p| crate::search::person_matches(&matcher, p))
                    .collect())
            }
            PersonQuery::Username(login) => match self.member_by_login(login).await {
                Ok(member) => Ok(vec![self.person(member)?]),
                Err(err) if err.code == ErrorCode::NotFound => Ok(Vec::new()),
                Err(err) => Err(err),
            },
            PersonQuery::MediaItem(item) => {
                let path = format!("/api/photos/{}/people", seg(&item.id));
                let found: Members = self.client()?.get(&path, &[]).await?;
                map_all(found.members, |m| self.person(m))
            }
            PersonQuery::Activity(_) => Err(self.unsupported(Method::FindPersons)),
        }
    }

    async fn get_media_items(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<MediaItem>> {
        each(ids, |id| async move {
            let photo: Photo = self
                .client()?
                .get(&format!("/api/photos/{}", seg(&id.id)), &[])
                .await?;
            self.media_item(photo)
        })
        .await
    }

    async fn get_media_items_for_user(&self, user: &UserRef) -> AdaptorResult<Vec<MediaItem>> {
        let id = match user {
            UserRef::Id(id) => id.id.clone(),
            UserRef::Username(login) => self.member_by_login(login).await?.member_id,
        };
        let found: Photos = self
            .client()?
            .get(&format!("/api/members/{}/photos", seg(&id)), &[])
            .await?;
        map_all(found.photos, |p| self.media_item(p))
    }

    async fn get_media_items_for_page(&self, page: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        let path = format!("/api/galleries/{}/photos", seg(&page.id));
        let found: Photos = self.client()?.get(&path, &[]).await?;
        map_all(found.photos, |p| self.media_item(p))
    }

    async fn find_media_items(&self, filter: &MediaItemFilter) -> AdaptorResult<Vec<MediaItem>> {
        let mut query = vec![("text", keyword_param(&filter.keywords))];
        if let Some(range) = &filter.created {
            if let Some(from) = range.from {
                query.push(("minTakenAt", iso_secs(ceil_secs(from))?));
            }
            if let Some(to) = range.to {
                query.push(("maxTakenAt", iso_secs(floor_secs(to))?));
            }
        }
        if let Some(licence) = &filter.license_type {
            query.push(("licence", licence.clone()));
        }
        if let Some(lang) = &filter.language {
            query.push(("lang", lang.clone()));
        }
        let found: Photos = self.client()?.get("/api/photos/search", &query).await?;
        Ok(keep_matching(
            filter,
            map_all(found.photos, |p| self.media_item(p))?,
        ))
    }

    async fn find_relevant_media_items(&self, seed: &ObjectId) -> AdaptorResult<Vec<MediaItem>> {
        let path = format!("/api/photos/{}/related", seg(&seed.id));
        let found: Photos = self.client()?.get(&path, &[]).await?;
        map_all(found.photos, |p| self.media_item(p))
    }

    async fn get_comments(&self, ids: &[ObjectId]) -> Vec<AdaptorResult<Comment>> {
        each(ids, |id| async move {
            let native: PhotoComment = self
                .client()?
                .get(&format!("/api/comments/{}", seg(&id.id)), &[])
                .await?;
            self.comment(native)
        })
        .await
    }

    async fn get_comments_for_media_item(&self, item: &ObjectId) -> AdaptorResult<Vec<Comment>> {
        let path = format!("/api/photos/{}/comments", seg(&item.id));
        let found: Comments = self.client()?.get(&path, &[]).await?;
        map_all(found.comments, |c| self.comment(c))
    }
}
