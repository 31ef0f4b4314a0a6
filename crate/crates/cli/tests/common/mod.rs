#![allow(dead_code)]

use std::net::SocketAddr;
use std::sync::Arc;

use serde_json::Value;
use socios_core::adaptors::seeded_registry;
use socios_core::sdk::http::default_http_client;
use socios_core::service::{CoreConfig, CoreService};
use socios_mocknet::{fixture, Harness};

pub const API: &str = "/sociosapi/v1";

/// Mock networks, adaptors, core and gateway, all in process.
pub struct Stack {
    pub harness: Harness,
    pub core: CoreService,
    pub base: String,
    pub http: reqwest::Client,
}

impl Stack {
    pub async fn start() -> Self {
        Self::start_with(CoreConfig::default()).await
    }

    pub async fn start_with(config: CoreConfig) -> Self {
        let harness = Harness::start(fixture::DEFAULT_SEED)
            .await
            .expect("mock networks start");
        let registry =
            seeded_registry(&harness.settings(), default_http_client()).expect("registry");
        let core = CoreService::with_config(Arc::new(registry), config);
        let (addr, _task) =
            socios_gateway::start(core.clone(), SocketAddr::from(([127, 0, 0, 1], 0)))
                .await
                .expect("gateway starts");
        Self {
            harness,
            core,
            base: format!("http://{addr}"),
            http: default_http_client(),
        }
    }

    /// Status and body of `GET /sociosapi/v1/{name}?{query}`.
    pub async fn raw(&self, name: &str, query: &str) -> (u16, String) {
        self.send(self.http.get(format!("{}{API}/{name}?{query}", self.base)))
            .await
    }

    pub async fn send(&self, request: reqwest::RequestBuilder) -> (u16, String) {
        let response = request.send().await.expect("gateway answers");
        let status = response.status().as_u16();
        (status, response.text().await.expect("body"))
    }

    /// A 200 envelope, parsed.
    pub async fn api(&self, name: &str, query: &str) -> Value {
        let (status, body) = self.raw(name, query).await;
        assert_eq!(status, 200, "{name}?{query}: {body}");
        serde_json::from_str(&body).expect("json body")
    }
}

/// Validator for one definition of the published schema.
pub fn schema(def: &str) -> jsonschema::Validator {
    let mut doc: Value =
        serde_json::from_str(include_str!("../../../../docs/canonical-schema.json")).unwrap();
    doc["$ref"] = Value::String(format!("#/$defs/{def}"));
    jsonschema::validator_for(&doc).unwrap()
}

pub fn results(envelope: &Value) -> &Vec<Value> {
    envelope["results"].as_array().expect("results array")
}

pub fn errors(envelope: &Value) -> &Vec<Value> {
    envelope["errors"].as_array().expect("errors array")
}

/// `id@sn` of each result.
pub fn keys(envelope: &Value) -> Vec<String> {
    results(envelope).iter().map(key).collect()
}

pub fn key(object: &Value) -> String {
    format!(
        "{}@{}",
        object["id"]["id"].as_str().unwrap(),
        object["sn"].as_str().unwrap()
    )
}

/// One call per endpoint, each expected to succeed with no errors.
/// `{subject}` in an auth call is the chirper user the token belongs to.
pub struct Call {
    pub endpoint: &'static str,
    pub query: &'static str,
    pub post: bool,
    pub auth: bool,
    pub envelope: &'static str,
}

const fn get(endpoint: &'static str, query: &'static str, envelope: &'static str) -> Call {
    Call {
        endpoint,
        query,
        post: false,
        auth: false,
        envelope,
    }
}

pub const SCRIPT: [Call; 19] = [
    get(
        "getPerson",
        "id=u1,u2,u3&sn=chirper,picshare,streamhub",
        "PersonEnvelope",
    ),
    get("connectedPersons", "id=u1&sn=picshare", "PersonEnvelope"),
    Call {
        endpoint: "myConnectedPersons",
        query: "id=u1&sn=chirper&subject=u1",
        post: false,
        auth: true,
        envelope: "PersonEnvelope",
    },
    get(
        "findPersonsByKeyword",
        "keywords=ali,bo&sns=chirper,picshare,streamhub",
        "PersonEnvelope",
    ),
    get(
        "findPersonsByUsername",
        "username=alice&sn=chirper",
        "PersonEnvelope",
    ),
    get(
        "findPersonsByMediaItem",
        "id=m1&sn=picshare",
        "PersonEnvelope",
    ),
    get(
        "findPersonsByActivity",
        "id=a1&sn=streamhub",
        "PersonEnvelope",
    ),
    get(
        "getMediaItem",
        "id=m1,m2,m3&sn=chirper,picshare,streamhub",
        "MediaItemEnvelope",
    ),
    get(
        "getMediaItemsForUser",
        "id=u2&sn=picshare",
        "MediaItemEnvelope",
    ),
    get(
        "getMediaItemsForPage",
        "id=c1&sn=streamhub",
        "MediaItemEnvelope",
    ),
    get(
        "findMediaItems",
        "keywords=sunset,river&lat=48.8566&lon=2.3522&rad=50&sns=chirper,picshare,streamhub",
        "MediaItemEnvelope",
    ),
    get(
        "findRelevantMediaItems",
        "id=m5&sn=streamhub",
        "MediaItemEnvelope",
    ),
    get("getActivity", "id=a1,a2&sn=streamhub", "ActivityEnvelope"),
    get(
        "getActivitiesForUser",
        "id=u3&sn=streamhub",
        "ActivityEnvelope",
    ),
    get(
        "findActivities",
        "keywords=uploaded&sns=streamhub",
        "ActivityEnvelope",
    ),
    get(
        "getComment",
        "id=r1,c1,r1&sn=chirper,picshare,streamhub",
        "CommentEnvelope",
    ),
    get(
        "getCommentsForMediaItem",
        "id=m1&sn=picshare",
        "CommentEnvelope",
    ),
    get(
        "getCommentsForActivity",
        "id=a1&sn=streamhub",
        "CommentEnvelope",
    ),
    Call {
        endpoint: "postMessage",
        query: "id=u1&sn=chirper&subject=u1&msg=scripted%20post",
        post: true,
        auth: true,
        envelope: "ObjectIdEnvelope",
    },
];

/// Great-circle distance in km on a sphere of radius 6371 km.
pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = (lat2 - lat1).to_radians();
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * 6371.0 * a.sqrt().asin()
}
