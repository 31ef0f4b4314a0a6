use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The sixteen operations of the aggregation API.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Method {
    GetPersons,
    ConnectedPersons,
    MyConnectedPersons,
    FindPersons,
    GetMediaItems,
    GetMediaItemsForUser,
    GetMediaItemsForPage,
    FindMediaItems,
    FindRelevantMediaItems,
    GetActivities,
    GetActivitiesForUser,
    FindActivities,
    GetComments,
    GetCommentsForMediaItem,
    GetCommentsForActivity,
    PostMessage,
}

impl Method {
    pub const ALL: [Method; 16] = [
        Method::GetPersons,
        Method::ConnectedPersons,
        Method::MyConnectedPersons,
        Method::FindPersons,
        Method::GetMediaItems,
        Method::GetMediaItemsForUser,
        Method::GetMediaItemsForPage,
        Method::FindMediaItems,
        Method::FindRelevantMediaItems,
        Method::GetActivities,
        Method::GetActivitiesForUser,
        Method::FindActivities,
        Method::GetComments,
        Method::GetCommentsForMediaItem,
        Method::GetCommentsForActivity,
        Method::PostMessage,
    ];

    /// Methods that only make sense on networks with a notion of activity.
    pub const ACTIVITY_FAMILY: [Method; 4] = [
        Method::GetActivities,
        Method::GetActivitiesForUser,
        Method::FindActivities,
        Method::GetCommentsForActivity,
    ];

    /// Methods that act with a user's delegated credentials.
    pub const AUTHENTICATED: [Method; 2] = [Method::MyConnectedPersons, Method::PostMessage];

    pub fn name(self) -> &'static str {
        match self {
            Method::GetPersons => "getPersons",
            Method::ConnectedPersons => "connectedPersons",
            Method::MyConnectedPersons => "myConnectedPersons",
            Method::FindPersons => "findPersons",
            Method::GetMediaItems => "getMediaItems",
            Method::GetMediaItemsForUser => "getMediaItemsForUser",
            Method::GetMediaItemsForPage => "getMediaItemsForPage",
            Method::FindMediaItems => "findMediaItems",
            Method::FindRelevantMediaItems => "findRelevantMediaItems",
            Method::GetActivities => "getActivities",
            Method::GetActivitiesForUser => "getActivitiesForUser",
            Method::FindActivities => "findActivities",
            Method::GetComments => "getComments",
            Method::GetCommentsForMediaItem => "getCommentsForMediaItem",
            Method::GetCommentsForActivity => "getCommentsForActivity",
            Method::PostMessage => "postMessage",
        }
    }

    pub fn is_activity_family(self) -> bool {
        Self::ACTIVITY_FAMILY.contains(&self)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown method {0:?}")]
pub struct UnknownMethod(pub String);

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMethod(s.to_owned()))
    }
}
