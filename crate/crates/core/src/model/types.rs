use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize};

use super::time::{Date, Timestamp};

/// Name of a social network as used in requests and object ids.
///
/// A lowercase token matching `[a-z][a-z0-9_]*`. Whether the network is
/// actually usable is decided by the adaptor registry, not by this type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SocialNetworkId(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid social network name {0:?}: expected [a-z][a-z0-9_]*")]
pub struct InvalidNetworkName(pub String);

impl SocialNetworkId {
    pub fn new(name: impl Into<String>) -> Result<Self, InvalidNetworkName> {
        let name = name.into();
        if Self::is_valid_token(&name) {
            Ok(Self(name))
        } else {
            Err(InvalidNetworkName(name))
        }
    }

    pub fn is_valid_token(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some('a'..='z'))
            && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SocialNetworkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for SocialNetworkId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl std::str::FromStr for SocialNetworkId {
    type Err = InvalidNetworkName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl<'de> Deserialize<'de> for SocialNetworkId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        Self::new(name).map_err(de::Error::custom)
    }
}

/// Addresses one object in one network. The `id` is opaque to the core and
/// is handed back to the owning adaptor exactly as received.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ObjectId {
    #[serde(deserialize_with = "nonempty_string")]
    pub id: String,
    pub social_network: SocialNetworkId,
}

impl ObjectId {
    pub fn new(id: impl Into<String>, social_network: SocialNetworkId) -> Self {
        Self {
            id: id.into(),
            social_network,
        }
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.id, self.social_network)
    }
}

fn nonempty_string<'de, D: Deserializer<'de>>(deserializer: D) -> Result<String, D::Error> {
    let text = String::deserialize(deserializer)?;
    if text.is_empty() {
        return Err(de::Error::custom("must not be empty"));
    }
    Ok(text)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Name {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub additional_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_name: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Address {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extended_address: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub latitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub longitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub postal_code: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub street_address: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct License {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub license_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
}

/// A user's profile on one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Person {
    pub id: ObjectId,
    pub sn: SocialNetworkId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub about_me: Option<String>,
    #[serde(default)]
    pub addresses: Vec<Address>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub birthday: Option<Date>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub current_location: Option<Address>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub username: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gender: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<Name>,
    /// Image URLs.
    #[serde(default)]
    pub photos: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_url: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member_since: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thumbnail_url: Option<String>,
    /// Signed offset from UTC in minutes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utc_offset: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_friends: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_degree: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_degree: Option<u64>,
}

impl Person {
    /// A person with only the mandatory fields set.
    pub fn new(id: ObjectId) -> Self {
        Self {
            sn: id.social_network.clone(),
            id,
            about_me: None,
            addresses: Vec::new(),
            birthday: None,
            current_location: None,
            username: None,
            email: None,
            gender: None,
            name: None,
            photos: Vec::new(),
            profile_url: None,
            member_since: None,
            thumbnail_url: None,
            utc_offset: None,
            num_friends: None,
            in_degree: None,
            out_degree: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MediaType {
    Text,
    Image,
    Video,
}

/// A post published by a user: a text post, an image or a video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MediaItem {
    pub id: ObjectId,
    pub sn: SocialNetworkId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thumbnail_url: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Seconds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Address>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub license: Option<License>,
    /// Bytes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file_size: Option<u64>,
    /// Backend-native scale; not normalized across networks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rating: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_ratings: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_positive_votes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_negative_votes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_comments: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_views: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_resharings: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_favorites: Option<u64>,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default)]
    pub tagged_people: Vec<ObjectId>,
    #[serde(rename = "type")]
    pub media_type: MediaType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub user_id: Option<ObjectId>,
    #[serde(default)]
    pub comments: Vec<Comment>,
}

impl MediaItem {
    pub fn new(id: ObjectId, media_type: MediaType) -> Self {
        Self {
            sn: id.social_network.clone(),
            id,
            created: None,
            title: None,
            thumbnail_url: None,
            description: None,
            duration: None,
            location: None,
            language: None,
            license: None,
            file_size: None,
            rating: None,
            num_ratings: None,
            num_positive_votes: None,
            num_negative_votes: None,
            num_comments: None,
            num_views: None,
            num_resharings: None,
            num_favorites: None,
            tags: Vec::new(),
            tagged_people: Vec::new(),
            media_type,
            url: None,
            user_id: None,
            comments: Vec::new(),
        }
    }
}

/// An action performed by a user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Activity {
    pub id: ObjectId,
    pub sn: SocialNetworkId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Address>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actor_id: Option<ObjectId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object_type: Option<String>,
    #[serde(default)]
    pub media_items: Vec<MediaItem>,
    #[serde(default)]
    pub persons: Vec<Person>,
    #[serde(default)]
    pub activities: Vec<Activity>,
}

impl Activity {
    pub fn new(id: ObjectId) -> Self {
        Self {
            sn: id.social_network.clone(),
            id,
            created: None,
            title: None,
            description: None,
            location: None,
            actor_id: None,
            object_type: None,
            media_items: Vec::new(),
            persons: Vec::new(),
            activities: Vec::new(),
        }
    }
}

/// A comment on a media item or an activity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Comment {
    pub id: ObjectId,
    pub sn: SocialNetworkId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub user_id: Option<ObjectId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub username: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_positive_votes: Option<u64>,
}

impl Comment {
    pub fn new(id: ObjectId) -> Self {
        Self {
            sn: id.social_network.clone(),
            id,
            created: None,
            description: None,
            user_id: None,
            username: None,
            num_positive_votes: None,
        }
    }
}

// Filters.

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DateTimeFilter {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<Timestamp>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaFilter {
    pub latitude: f64,
    pub longitude: f64,
    /// Kilometers.
    pub radius: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AddressFilter {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub postal_code: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
}

impl AddressFilter {
    pub fn is_empty(&self) -> bool {
        self.country.is_none() && self.postal_code.is_none() && self.region.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LocationFilter {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub address_filter: Option<AddressFilter>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_filter: Option<AreaFilter>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersonFilter {
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(default)]
    pub sns: Vec<SocialNetworkId>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MediaItemFilter {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created: Option<DateTimeFilter>,
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<LocationFilter>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub license_type: Option<String>,
    #[serde(default)]
    pub sns: Vec<SocialNetworkId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivityFilter {
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default)]
    pub sns: Vec<SocialNetworkId>,
}
