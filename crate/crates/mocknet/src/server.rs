//! HTTP hosting shared by the mock networks: request log, declarative fault
//! injection, bearer tokens and the `/_admin` control surface.

use std::collections::HashMap;
use std::fmt;
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::{Request, State};
use axum::http::{HeaderMap, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::{Mutex, RwLock};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use socios_core::model::{SocialNetworkId, Timestamp};
use socios_core::sdk::AuthToken;
use tokio::task::JoinHandle;

use crate::mutation::{Mutation, MutationError, MutationOutcome};

/// One native dataset plus the routes that serve it.
pub trait Backend: Sized + Send + Sync + 'static {
    const NAME: &'static str;

    fn generate(seed: u64) -> Self;

    fn routes() -> Router<Arc<Shared<Self>>>;

    fn has_subject(&self, id: &str) -> bool;

    fn mutate(&mut self, mutation: &Mutation) -> Result<MutationOutcome, MutationError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FaultProfile {
    /// Stop listening altogether; callers see connection refused.
    #[serde(default)]
    pub down: bool,
    /// Delay added before every response.
    #[serde(default, with = "millis")]
    pub latency: Duration,
    /// Fraction of requests, in `[0, 1]`, answered with `error_status`.
    #[serde(default)]
    pub error_rate: f64,
    #[serde(default = "default_error_status")]
    pub error_status: u16,
}

fn default_error_status() -> u16 {
    500
}

impl Default for FaultProfile {
    fn default() -> Self {
        Self {
            down: false,
            latency: Duration::ZERO,
            error_rate: 0.0,
            error_status: default_error_status(),
        }
    }
}

impl FaultProfile {
    pub fn down() -> Self {
        Self {
            down: true,
            ..Self::default()
        }
    }

    pub fn slow(latency: Duration) -> Self {
        Self {
            latency,
            ..Self::default()
        }
    }

    pub fn failing(error_rate: f64) -> Self {
        Self {
            error_rate,
            ..Self::default()
        }
    }
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Duration, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(value.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Duration, D::Error> {
        u64::deserialize(deserializer).map(Duration::from_millis)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LogEntry {
    pub seq: u64,
    #[serde(skip)]
    pub at: Instant,
    /// Milliseconds since the mock was created.
    pub offset_ms: u64,
    pub method: String,
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
}

struct Grant {
    subject: String,
    expires_at: Timestamp,
}

/// State shared by every handler of one mock network.
pub struct Shared<D> {
    pub network: SocialNetworkId,
    data: RwLock<D>,
    log: Mutex<Vec<LogEntry>>,
    fault: Mutex<FaultProfile>,
    fault_rng: Mutex<ChaCha8Rng>,
    tokens: Mutex<HashMap<String, Grant>>,
    token_rng: Mutex<ChaCha8Rng>,
    created: Instant,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TokenError {
    #[error("unknown subject {0}")]
    UnknownSubject(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenRejection {
    Missing,
    Unknown,
    Expired,
    WrongSubject,
}

impl<D: Backend> Shared<D> {
    fn new(seed: u64) -> Self {
        Self {
            network: SocialNetworkId::new(D::NAME).expect("backend names are valid tokens"),
            data: RwLock::new(D::generate(seed)),
            log: Mutex::new(Vec::new()),
            fault: Mutex::new(FaultProfile::default()),
            fault_rng: Mutex::new(ChaCha8Rng::seed_from_u64(seed)),
            tokens: Mutex::new(HashMap::new()),
            token_rng: Mutex::new(ChaCha8Rng::seed_from_u64(seed.rotate_left(17))),
            created: Instant::now(),
        }
    }

    pub fn read(&self) -> parking_lot::RwLockReadGuard<'_, D> {
        self.data.read()
    }

    pub fn mutate(&self, mutation: &Mutation) -> Result<MutationOutcome, MutationError> {
        self.data.write().mutate(mutation)
    }

    /// Runs `change` with exclusive access, so writes stay serialized.
    pub fn mutate_with<R>(&self, change: impl FnOnce(&mut D) -> R) -> R {
        change(&mut self.data.write())
    }

    pub fn issue_token(&self, subject: &str, ttl: Duration) -> Result<AuthToken, TokenError> {
        if !self.data.read().has_subject(subject) {
            return Err(TokenError::UnknownSubject(subject.to_owned()));
        }
        let mut tokens = self.tokens.lock();
        let secret: u64 = self.token_rng.lock().gen();
        let token = format!("{}_{:04}_{secret:016x}", D::NAME, tokens.len() + 1);
        let ttl_ms = i64::try_from(ttl.as_millis()).unwrap_or(i64::MAX);
        let expires_at = Timestamp::now().saturating_add_millis(ttl_ms);
        tokens.insert(
            token.clone(),
            Grant {
                subject: subject.to_owned(),
                expires_at,
            },
        );
        Ok(AuthToken {
            token,
            network: self.network.clone(),
            subject: subject.to_owned(),
            expires_at,
        })
    }

    /// The subject a token was granted to, if the token is known and live.
    pub fn validate_token(&self, token: &str) -> Result<String, TokenRejection> {
        let tokens = self.tokens.lock();
        let grant = tokens.get(token).ok_or(TokenRejection::Unknown)?;
        if Timestamp::now() >= grant.expires_at {
            return Err(TokenRejection::Expired);
        }
        Ok(grant.subject.clone())
    }

    /// Checks the bearer token in `headers` grants access to `subject`.
    pub fn authorize(&self, headers: &HeaderMap, subject: &str) -> Result<(), StatusCode> {
        let bearer = headers
            .get(axum::http::header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .ok_or(StatusCode::UNAUTHORIZED)?;
        match self.validate_token(bearer) {
            Ok(granted) if granted == subject => Ok(()),
            Ok(_) => Err(StatusCode::FORBIDDEN),
            Err(_) => Err(StatusCode::UNAUTHORIZED),
        }
    }

    fn record(&self, request: &Request) {
        let mut log = self.log.lock();
        let now = Instant::now();
        let seq = log.len() as u64;
        log.push(LogEntry {
            seq,
            at: now,
            offset_ms: now.duration_since(self.created).as_millis() as u64,
            method: request.method().to_string(),
            path: request.uri().path().to_owned(),
            query: request.uri().query().map(str::to_owned),
        });
    }

    /// Decides whether this request is answered with an injected error.
    fn roll_fault(&self) -> (Duration, Option<StatusCode>) {
        let fault = self.fault.lock().clone();
        let fails = fault.error_rate >= 1.0
            || (fault.error_rate > 0.0 && self.fault_rng.lock().gen_bool(fault.error_rate));
        let status = fails.then(|| {
            StatusCode::from_u16(fault.error_status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR)
        });
        (fault.latency, status)
    }
}

async fn observe<D: Backend>(
    State(shared): State<Arc<Shared<D>>>,
    request: Request,
    next: Next,
) -> Response {
    if request.uri().path().starts_with("/_admin") {
        return next.run(request).await;
    }
    shared.record(&request);
    let (latency, injected) = shared.roll_fault();
    if !latency.is_zero() {
        tokio::time::sleep(latency).await;
    }
    if let Some(status) = injected {
        return (status, "injected fault").into_response();
    }
    next.run(request).await
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct TokenRequest {
    subject: String,
    ttl_ms: u64,
}

async fn admin_issue_token<D: Backend>(
    State(shared): State<Arc<Shared<D>>>,
    Json(body): Json<TokenRequest>,
) -> Response {
    match shared.issue_token(&body.subject, Duration::from_millis(body.ttl_ms)) {
        Ok(token) => Json(token).into_response(),
        Err(err) => (StatusCode::NOT_FOUND, err.to_string()).into_response(),
    }
}

async fn admin_mutate<D: Backend>(
    State(shared): State<Arc<Shared<D>>>,
    Json(mutation): Json<Mutation>,
) -> Response {
    match shared.mutate(&mutation) {
        Ok(outcome) => Json(outcome).into_response(),
        Err(err) => (err.status(), err.to_string()).into_response(),
    }
}

async fn admin_log<D: Backend>(State(shared): State<Arc<Shared<D>>>) -> Json<Vec<LogEntry>> {
    Json(shared.log.lock().clone())
}

async fn admin_clear_log<D: Backend>(State(shared): State<Arc<Shared<D>>>) -> StatusCode {
    shared.log.lock().clear();
    StatusCode::NO_CONTENT
}

fn app<D: Backend>(shared: Arc<Shared<D>>) -> Router {
    let admin = Router::new()
        .route("/_admin/tokens", post(admin_issue_token::<D>))
        .route("/_admin/mutate", post(admin_mutate::<D>))
        .route(
            "/_admin/log",
            get(admin_log::<D>).delete(admin_clear_log::<D>),
        );
    D::routes()
        .merge(admin)
        .layer(middleware::from_fn_with_state(shared.clone(), observe::<D>))
        .with_state(shared)
}

/// A running (or deliberately stopped) mock network.
pub struct MockNetwork<D: Backend> {
    shared: Arc<Shared<D>>,
    addr: SocketAddr,
    server: Mutex<Option<JoinHandle<()>>>,
}

impl<D: Backend> MockNetwork<D> {
    /// Generates the fixture for `seed` and starts serving it on `addr`
    /// (port 0 picks a free port).
    pub async fn start(seed: u64, addr: SocketAddr) -> std::io::Result<Self> {
        let shared = Arc::new(Shared::new(seed));
        let listener = tokio::net::TcpListener::bind(addr).await?;
        let addr = listener.local_addr()?;
        let network = Self {
            shared,
            addr,
            server: Mutex::new(None),
        };
        network.serve(listener);
        Ok(network)
    }

    pub async fn start_local(seed: u64) -> std::io::Result<Self> {
        Self::start(seed, SocketAddr::from(([127, 0, 0, 1], 0))).await
    }

    fn serve(&self, listener: tokio::net::TcpListener) {
        let app = app(self.shared.clone());
        let handle = tokio::spawn(async move {
            if let Err(err) = axum::serve(listener, app).await {
                tracing::warn!("mock server stopped: {err}");
            }
        });
        *self.server.lock() = Some(handle);
    }

    pub fn shared(&self) -> &Arc<Shared<D>> {
        &self.shared
    }

    pub fn data(&self) -> parking_lot::RwLockReadGuard<'_, D> {
        self.shared.read()
    }
}

/// Control surface common to every mock network.
#[async_trait::async_trait]
pub trait MockControl: Send + Sync {
    fn name(&self) -> &'static str;

    fn addr(&self) -> SocketAddr;

    fn url(&self) -> String {
        format!("http://{}", self.addr())
    }

    fn log(&self) -> Vec<LogEntry>;

    fn clear_log(&self);

    fn fault(&self) -> FaultProfile;

    /// Applies `fault`; `down` stops or restarts the listener on the same
    /// address.
    async fn set_fault(&self, fault: FaultProfile) -> std::io::Result<()>;

    fn issue_token(&self, subject: &str, ttl: Duration) -> Result<AuthToken, TokenError>;

    fn mutate(&self, mutation: &Mutation) -> Result<MutationOutcome, MutationError>;

    /// Native dataset as JSON.
    fn snapshot(&self) -> serde_json::Value;
}

#[async_trait::async_trait]
impl<D: Backend + Serialize> MockControl for MockNetwork<D> {
    fn name(&self) -> &'static str {
        D::NAME
    }

    fn addr(&self) -> SocketAddr {
        self.addr
    }

    fn log(&self) -> Vec<LogEntry> {
        self.shared.log.lock().clone()
    }

    fn clear_log(&self) {
        self.shared.log.lock().clear();
    }

    fn fault(&self) -> FaultProfile {
        self.shared.fault.lock().clone()
    }

    async fn set_fault(&self, fault: FaultProfile) -> std::io::Result<()> {
        let down = fault.down;
        *self.shared.fault.lock() = fault;
        let running = self.server.lock().take();
        match (down, running) {
            (true, Some(handle)) => {
                handle.abort();
                let _ = handle.await;
            }
            (false, None) => {
                let listener = tokio::net::TcpListener::bind(self.addr).await?;
                self.serve(listener);
            }
            (_, running) => *self.server.lock() = running,
        }
        Ok(())
    }

    fn issue_token(&self, subject: &str, ttl: Duration) -> Result<AuthToken, TokenError> {
        self.shared.issue_token(subject, ttl)
    }

    fn mutate(&self, mutation: &Mutation) -> Result<MutationOutcome, MutationError> {
        self.shared.mutate(mutation)
    }

    fn snapshot(&self) -> serde_json::Value {
        serde_json::to_value(&*self.shared.read()).expect("datasets serialize")
    }
}

impl<D: Backend> Drop for MockNetwork<D> {
    fn drop(&mut self) {
        if let Some(handle) = self.server.lock().take() {
            handle.abort();
        }
    }
}

impl<D: Backend> fmt::Debug for MockNetwork<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MockNetwork")
            .field("network", &D::NAME)
            .field("addr", &self.addr)
            .finish()
    }
}

/// JSON body helper: 404 when absent.
pub fn found<T: Serialize>(value: Option<T>) -> Response {
    match value {
        Some(value) => Json(value).into_response(),
        None => StatusCode::NOT_FOUND.into_response(),
    }
}

/// Splits a comma-separated query value into its nonempty parts.
pub fn split_list(value: Option<&String>) -> Vec<String> {
    value
        .map(|v| {
            v.split(',')
                .filter(|s| !s.is_empty())
                .map(str::to_owned)
                .collect()
        })
        .unwrap_or_default()
}

/// Case-insensitive any-of substring match, the native search behavior of
/// every mock network.
pub fn matches_any(keywords: &[String], fields: &[&str]) -> bool {
    let fields: Vec<String> = fields.iter().map(|f| f.to_lowercase()).collect();
    keywords.iter().any(|k| {
        let k = k.to_lowercase();
        fields.iter().any(|f| f.contains(&k))
    })
}

/// Ranks candidates by the number of tags shared with `seed_tags`: most
/// shared first, ties by id ascending; candidates sharing none are dropped.
pub fn rank_related<'a, T>(
    seed_id: &str,
    seed_tags: &[String],
    candidates: impl IntoIterator<Item = &'a T>,
    id_of: impl Fn(&T) -> &str,
    tags_of: impl Fn(&T) -> &[String],
) -> Vec<&'a T>
where
    T: 'a,
{
    let mut ranked: Vec<(usize, &T)> = candidates
        .into_iter()
        .filter(|c| id_of(c) != seed_id)
        .map(|c| {
            let mut shared: Vec<&String> = tags_of(c)
                .iter()
                .filter(|t| seed_tags.contains(t))
                .collect();
            shared.dedup();
            (shared.len(), c)
        })
        .filter(|(shared, _)| *shared > 0)
        .collect();
    ranked.sort_by(|(sa, a), (sb, b)| sb.cmp(sa).then_with(|| id_of(a).cmp(id_of(b))));
    ranked.into_iter().map(|(_, c)| c).collect()
}
