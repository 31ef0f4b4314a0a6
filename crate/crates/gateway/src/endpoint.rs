//! The nineteen REST endpoints and the parameters each accepts.

use serde::Serialize;
use socios_core::sdk::Method;

pub const BASE_PATH: &str = "/sociosapi/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verb {
    Get,
    Post,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ParamKind {
    Text,
    /// Comma-separated; commas inside an item are percent-encoded.
    List,
    Timestamp,
    Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Param {
    pub name: &'static str,
    pub kind: ParamKind,
    pub required: bool,
    pub help: &'static str,
}

const fn p(name: &'static str, kind: ParamKind, required: bool, help: &'static str) -> Param {
    Param {
        name,
        kind,
        required,
        help,
    }
}

const ID: Param = p("id", ParamKind::Text, true, "native object id");
const SN: Param = p("sn", ParamKind::Text, true, "social network name");
const IDS: Param = p("id", ParamKind::List, true, "native object ids");
const SNS_FOR_IDS: Param = p(
    "sn",
    ParamKind::List,
    true,
    "one network for every id, or one per id in the same order",
);
const SNS: Param = p(
    "sns",
    ParamKind::List,
    false,
    "networks to search; default all that support the call",
);
const KEYWORDS: Param = p(
    "keywords",
    ParamKind::List,
    true,
    "any-of keywords, case-insensitive",
);
const LANG: Param = p("lang", ParamKind::Text, false, "language tag");
const SUBJECT: Param = p(
    "subject",
    ParamKind::Text,
    false,
    "native id of the user who granted the token; required with a token",
);
const FORMAT: Param = p(
    "format",
    ParamKind::Text,
    false,
    "response format; only json",
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Endpoint {
    pub name: &'static str,
    pub verb: Verb,
    pub operation: Method,
    /// Needs `Authorization: Bearer <token>`.
    pub auth: bool,
    pub params: &'static [Param],
}

impl Endpoint {
    pub fn path(&self) -> String {
        format!("{BASE_PATH}/{}", self.name)
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn by_name(name: &str) -> Option<&'static Endpoint> {
        ENDPOINTS.iter().find(|e| e.name == name)
    }
}

const fn get(name: &'static str, operation: Method, params: &'static [Param]) -> Endpoint {
    Endpoint {
        name,
        verb: Verb::Get,
        operation,
        auth: false,
        params,
    }
}

pub const ENDPOINTS: [Endpoint; 19] = [
    get("getPerson", Method::GetPersons, &[IDS, SNS_FOR_IDS, FORMAT]),
    get(
        "connectedPersons",
        Method::ConnectedPersons,
        &[ID, SN, FORMAT],
    ),
    Endpoint {
        name: "myConnectedPersons",
        verb: Verb::Get,
        operation: Method::MyConnectedPersons,
        auth: true,
        params: &[ID, SN, SUBJECT, FORMAT],
    },
    get(
        "findPersonsByKeyword",
        Method::FindPersons,
        &[KEYWORDS, SNS, FORMAT],
    ),
    get(
        "findPersonsByUsername",
        Method::FindPersons,
        &[
            p("username", ParamKind::Text, true, "username on the network"),
            SN,
            FORMAT,
        ],
    ),
    get(
        "findPersonsByMediaItem",
        Method::FindPersons,
        &[ID, SN, FORMAT],
    ),
    get(
        "findPersonsByActivity",
        Method::FindPersons,
        &[ID, SN, FORMAT],
    ),
    get(
        "getMediaItem",
        Method::GetMediaItems,
        &[IDS, SNS_FOR_IDS, FORMAT],
    ),
    get(
        "getMediaItemsForUser",
        Method::GetMediaItemsForUser,
        &[
            p(
                "id",
                ParamKind::Text,
                false,
                "person id; give this or username",
            ),
            SN,
            p(
                "username",
                ParamKind::Text,
                false,
                "username; give this or id",
            ),
            FORMAT,
        ],
    ),
    get(
        "getMediaItemsForPage",
        Method::GetMediaItemsForPage,
        &[ID, SN, FORMAT],
    ),
    get(
        "findMediaItems",
        Method::FindMediaItems,
        &[
            p(
                "from",
                ParamKind::Timestamp,
                false,
                "earliest creation time, ISO-8601, inclusive",
            ),
            p(
                "to",
                ParamKind::Timestamp,
                false,
                "latest creation time, ISO-8601, inclusive",
            ),
            KEYWORDS,
            p(
                "country",
                ParamKind::Text,
                false,
                "country code of the item location",
            ),
            p(
                "lat",
                ParamKind::Number,
                false,
                "area center latitude in degrees",
            ),
            p(
                "lon",
                ParamKind::Number,
                false,
                "area center longitude in degrees",
            ),
            p("rad", ParamKind::Number, false, "area radius in km"),
            LANG,
            p("lic", ParamKind::Text, false, "license type"),
            SNS,
            FORMAT,
        ],
    ),
    get(
        "findRelevantMediaItems",
        Method::FindRelevantMediaItems,
        &[ID, SN, FORMAT],
    ),
    get(
        "getActivity",
        Method::GetActivities,
        &[IDS, SNS_FOR_IDS, FORMAT],
    ),
    get(
        "getActivitiesForUser",
        Method::GetActivitiesForUser,
        &[ID, SN, FORMAT],
    ),
    get(
        "findActivities",
        Method::FindActivities,
        &[KEYWORDS, LANG, SNS, FORMAT],
    ),
    get(
        "getComment",
        Method::GetComments,
        &[IDS, SNS_FOR_IDS, FORMAT],
    ),
    get(
        "getCommentsForMediaItem",
        Method::GetCommentsForMediaItem,
        &[ID, SN, FORMAT],
    ),
    get(
        "getCommentsForActivity",
        Method::GetCommentsForActivity,
        &[ID, SN, FORMAT],
    ),
    Endpoint {
        name: "postMessage",
        verb: Verb::Post,
        operation: Method::PostMessage,
        auth: true,
        params: &[
            ID,
            SN,
            p("msg", ParamKind::Text, true, "message text"),
            SUBJECT,
            FORMAT,
        ],
    },
];

/// Machine-readable description of the whole REST surface.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiDescription {
    pub base_path: &'static str,
    pub endpoints: Vec<EndpointDescription>,
}

#[derive(Debug, Serialize)]
pub struct EndpointDescription {
    pub path: String,
    #[serde(flatten)]
    pub endpoint: Endpoint,
}

pub fn describe() -> ApiDescription {
    ApiDescription {
        base_path: BASE_PATH,
        endpoints: ENDPOINTS
            .iter()
            .map(|e| EndpointDescription {
                path: e.path(),
                endpoint: *e,
            })
            .collect(),
    }
}
