//! Live HTTP client and the client trait shared with replay.

use crate::{CompletionRequest, CompletionResponse, GatewayError};
use std::fmt;
use std::time::Duration;

/// Environment variable naming the chat-completions endpoint URL.
pub const ENDPOINT_VAR: &str = "MORPHOCAST_ENDPOINT";
/// Environment variable holding the bearer token, if the endpoint needs one.
pub const API_KEY_VAR: &str = "MORPHOCAST_API_KEY";

/// Anything that can answer a completion request: a live endpoint, a
/// cassette replay, or a recorder wrapping either.
pub trait ChatClient: Send + Sync {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, GatewayError>;
}

/// Blocking client for an OpenAI-compatible chat-completions endpoint.
///
/// Transient failures (connect errors, timeouts, HTTP 429 and 5xx) are
/// retried up to [`HttpClient::ATTEMPTS`] times with exponential backoff;
/// anything else fails immediately.
pub struct HttpClient {
    http: reqwest::blocking::Client,
    endpoint: String,
    api_key: Option<String>,
    backoff_base: Duration,
}

impl fmt::Debug for HttpClient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpClient")
            .field("endpoint", &self.endpoint)
            .field("api_key", &self.api_key.as_ref().map(|_| "<redacted>"))
            .field("backoff_base", &self.backoff_base)
            .finish()
    }
}

impl HttpClient {
    /// Total attempts per request, counting the first.
    pub const ATTEMPTS: u32 = 3;

    pub fn new(endpoint: impl Into<String>, api_key: Option<String>) -> Self {
        HttpClient {
            http: reqwest::blocking::Client::new(),
            endpoint: endpoint.into(),
            api_key,
            backoff_base: Duration::from_millis(500),
        }
    }

    /// Reads the endpoint and optional API key from the environment.
    pub fn from_env() -> Result<Self, GatewayError> {
        let endpoint = std::env::var(ENDPOINT_VAR).map_err(|_| {
            GatewayError::Transport(format!("{ENDPOINT_VAR} is not set and no endpoint was given"))
        })?;
        Ok(Self::new(endpoint, std::env::var(API_KEY_VAR).ok()))
    }

    /// Overrides the first backoff delay; doubling still applies. Tests use
    /// a millisecond base to keep retries fast.
    pub fn with_backoff_base(mut self, base: Duration) -> Self {
        self.backoff_base = base;
        self
    }

    fn send_once(&self, request: &CompletionRequest) -> Result<reqwest::blocking::Response, GatewayError> {
        let mut builder = self.http.post(&self.endpoint).json(request);
        if let Some(key) = &self.api_key {
            builder = builder.bearer_auth(key);
        }
        builder
            .send()
            .map_err(|err| GatewayError::Transport(format!("request to {} failed: {err}", self.endpoint)))
    }
}

impl ChatClient for HttpClient {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, GatewayError> {
        let mut last_error = None;
        for attempt in 0..Self::ATTEMPTS {
            if attempt > 0 {
                std::thread::sleep(self.backoff_base * 2u32.pow(attempt - 1));
            }
            match self.send_once(request) {
                Err(err) => last_error = Some(err),
                Ok(response) => {
                    let status = response.status();
                    if status.as_u16() == 429 {
                        last_error = Some(GatewayError::RateLimited {
                            attempts: attempt + 1,
                            message: format!("endpoint {} returned 429", self.endpoint),
                        });
                        continue;
                    }
                    if status.is_server_error() {
                        last_error = Some(GatewayError::Transport(format!(
                            "endpoint {} returned {status}",
                            self.endpoint
                        )));
                        continue;
                    }
                    if !status.is_success() {
                        return Err(GatewayError::Transport(format!(
                            "endpoint {} returned {status}",
                            self.endpoint
                        )));
                    }
                    let body: serde_json::Value = response.json().map_err(|err| {
                        GatewayError::MalformedResponse(format!("body is not JSON: {err}"))
                    })?;
                    return CompletionResponse::from_api_body(&body);
                }
            }
        }
        Err(match last_error.expect("at least one attempt ran") {
            GatewayError::RateLimited { message, .. } => {
                GatewayError::RateLimited { attempts: Self::ATTEMPTS, message }
            }
            other => other,
        })
    }
}
