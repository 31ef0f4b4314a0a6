//! HTTP/JSON front for the aggregation core.
//!
//! Every endpoint lives under [`endpoint::BASE_PATH`] and answers 200 with a
//! result envelope whenever the request itself is well formed, even if some
//! queries inside it failed. Malformed requests get 400 and unknown paths
//! 404, both with an [`HttpErrorBody`].

pub mod call;
pub mod endpoint;
pub mod error;
pub mod query;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{RawQuery, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, MethodRouter};
use axum::Router;
use serde::Serialize;
use socios_core::sdk::AdaptorCapability;
use socios_core::service::{CoreService, RequestError};
use tokio::task::JoinHandle;

pub use call::{decode, execute, Bearer, Call};
pub use endpoint::{Endpoint, ENDPOINTS};
pub use error::{HttpError, HttpErrorBody};

use crate::endpoint::Verb;
use crate::query::RawParams;

type Core = Arc<CoreService>;

pub fn router(core: CoreService) -> Router {
    let mut router = Router::new().route("/health", get(health));
    for endpoint in &ENDPOINTS {
        let handler = move |state: State<Core>, query: RawQuery, headers: HeaderMap| {
            handle(endpoint, state, query, headers)
        };
        let route: MethodRouter<Core> = match endpoint.verb {
            Verb::Get => get(handler),
            Verb::Post => post(handler),
        };
        router = router.route(&endpoint.path(), route);
    }
    router
        .fallback(|| async {
            HttpError::new(StatusCode::NOT_FOUND, "NOT_FOUND", "no such endpoint")
        })
        .method_not_allowed_fallback(|| async {
            HttpError::new(
                StatusCode::METHOD_NOT_ALLOWED,
                "BAD_REQUEST",
                "method not allowed on this endpoint",
            )
        })
        .with_state(Arc::new(core))
}

/// Serves until the listener fails or the task is dropped.
pub async fn serve(listener: tokio::net::TcpListener, core: CoreService) -> std::io::Result<()> {
    axum::serve(listener, router(core)).await
}

/// Binds `addr` and serves in a background task, returning the bound
/// address.
pub async fn start(
    core: CoreService,
    addr: SocketAddr,
) -> std::io::Result<(SocketAddr, JoinHandle<()>)> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let bound = listener.local_addr()?;
    let task = tokio::spawn(async move {
        if let Err(err) = serve(listener, core).await {
            eprintln!("gateway stopped: {err}");
        }
    });
    Ok((bound, task))
}

async fn handle(
    endpoint: &'static Endpoint,
    State(core): State<Core>,
    RawQuery(query): RawQuery,
    headers: HeaderMap,
) -> Response {
    match respond(endpoint, &core, query.as_deref(), &headers).await {
        Ok(body) => ([(header::CONTENT_TYPE, "application/json")], body).into_response(),
        Err(err) => err.into_response(),
    }
}

/// The HTTP body for one request, or the error response.
pub async fn respond(
    endpoint: &Endpoint,
    core: &CoreService,
    query: Option<&str>,
    headers: &HeaderMap,
) -> Result<String, HttpError> {
    let params = RawParams::parse(query)?;
    let call = decode(endpoint, &params, Bearer::from_headers(headers)?)?;
    execute(core, call).await.map_err(|err| match err {
        RequestError::BadRequest(message) => HttpError::bad(message),
    })
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NetworkSummary {
    pub name: String,
    pub capability: AdaptorCapability,
}

#[derive(Debug, Serialize)]
pub struct Health {
    pub status: &'static str,
    pub networks: Vec<NetworkSummary>,
}

pub fn health_of(core: &CoreService) -> Health {
    let registry = core.registry();
    let networks = registry
        .networks()
        .into_iter()
        .filter_map(|name| {
            let capability = registry.capability_of(name.as_str()).ok()?;
            Some(NetworkSummary {
                name: name.to_string(),
                capability: (*capability).clone(),
            })
        })
        .collect();
    Health {
        status: "ok",
        networks,
    }
}

async fn health(State(core): State<Core>) -> Response {
    axum::Json(health_of(&core)).into_response()
}
