//! Shared plumbing for adaptors that talk to a REST backend.

use std::time::Duration;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use reqwest::{Method as HttpMethod, RequestBuilder, StatusCode};
use serde::de::DeserializeOwned;
use serde::Serialize;

use super::adaptor::{AdaptorContext, AdaptorError, AdaptorResult, AuthToken, ErrorCode};

/// Builds the process-wide HTTP client used by every REST adaptor.
///
/// Idle connections are not pooled, so a backend that stops listening is
/// observed as unavailable on the very next call.
pub fn default_http_client() -> reqwest::Client {
    reqwest::Client::builder()
        .no_proxy()
        .pool_max_idle_per_host(0)
        .connect_timeout(Duration::from_secs(5))
        .build()
        .expect("static client configuration is valid")
}

/// A budgeted JSON client bound to one network's backend.
#[derive(Debug, Clone)]
pub struct BackendClient {
    http: reqwest::Client,
    base: String,
    context: AdaptorContext,
}

impl BackendClient {
    pub fn new(context: AdaptorContext, http: reqwest::Client) -> AdaptorResult<Self> {
        let base = context
            .config
            .endpoint
            .clone()
            .ok_or_else(|| {
                AdaptorError::new(
                    ErrorCode::BackendUnavailable,
                    format!("no backend endpoint configured for {}", context.network),
                )
            })?
            .trim_end_matches('/')
            .to_owned();
        Ok(Self {
            http,
            base,
            context,
        })
    }

    pub fn context(&self) -> &AdaptorContext {
        &self.context
    }

    pub async fn get<T: DeserializeOwned>(
        &self,
        path: &str,
        query: &[(&str, String)],
    ) -> AdaptorResult<T> {
        let request = self.request(HttpMethod::GET, path).query(query);
        self.send(request, path).await
    }

    pub async fn get_authed<T: DeserializeOwned>(
        &self,
        path: &str,
        token: &AuthToken,
    ) -> AdaptorResult<T> {
        let request = self
            .request(HttpMethod::GET, path)
            .bearer_auth(&token.token);
        self.send(request, path).await
    }

    pub async fn post_authed<B: Serialize + ?Sized, T: DeserializeOwned>(
        &self,
        path: &str,
        body: &B,
        token: &AuthToken,
    ) -> AdaptorResult<T> {
        let request = self
            .request(HttpMethod::POST, path)
            .bearer_auth(&token.token)
            .json(body);
        self.send(request, path).await
    }

    fn request(&self, method: HttpMethod, path: &str) -> RequestBuilder {
        self.http
            .request(method, format!("{}{}", self.base, path))
            .timeout(self.context.config.timeout)
    }

    async fn send<T: DeserializeOwned>(
        &self,
        request: RequestBuilder,
        path: &str,
    ) -> AdaptorResult<T> {
        let network = &self.context.network;
        if !self.context.budget.try_acquire() {
            let limit = self.context.budget.limit();
            return Err(AdaptorError::new(
                ErrorCode::RateLimited,
                format!(
                    "{network} call budget of {} per {} ms exhausted",
                    limit.max_calls,
                    limit.per_window.as_millis()
                ),
            ));
        }
        let response = request
            .send()
            .await
            .map_err(|err| transport_error(network.as_str(), path, &err))?;
        let status = response.status();
        if status.is_success() {
            return response.json::<T>().await.map_err(|err| {
                if err.is_timeout() {
                    transport_error(network.as_str(), path, &err)
                } else {
                    AdaptorError::new(
                        ErrorCode::Internal,
                        format!("{network} returned an undecodable body for {path}: {err}"),
                    )
                }
            });
        }
        Err(status_error(network.as_str(), path, status))
    }
}

/// Percent-encodes an opaque id for use as one URL path segment.
pub fn path_segment(id: &str) -> String {
    const SEGMENT: &AsciiSet = &NON_ALPHANUMERIC
        .remove(b'-')
        .remove(b'.')
        .remove(b'_')
        .remove(b'~');
    utf8_percent_encode(id, SEGMENT).to_string()
}

fn transport_error(network: &str, path: &str, err: &reqwest::Error) -> AdaptorError {
    if err.is_timeout() {
        AdaptorError::new(ErrorCode::Timeout, format!("{network} timed out on {path}"))
    } else {
        AdaptorError::new(
            ErrorCode::BackendUnavailable,
            format!("{network} unreachable on {path}"),
        )
    }
}

pub fn status_error(network: &str, path: &str, status: StatusCode) -> AdaptorError {
    let code = match status {
        StatusCode::NOT_FOUND => ErrorCode::NotFound,
        StatusCode::UNAUTHORIZED | StatusCode::FORBIDDEN => ErrorCode::AuthInvalid,
        StatusCode::TOO_MANY_REQUESTS => ErrorCode::RateLimited,
        StatusCode::BAD_REQUEST | StatusCode::UNPROCESSABLE_ENTITY => ErrorCode::BadRequest,
        s if s.is_server_error() => ErrorCode::BackendUnavailable,
        _ => ErrorCode::Internal,
    };
    AdaptorError::new(
        code,
        format!("{network} answered {} on {path}", status.as_u16()),
    )
}
