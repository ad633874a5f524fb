//! Chat-completion client over any OpenAI-compatible tools endpoint, with
//! deterministic record/replay cassettes for offline runs.

mod cassette;
mod client;
mod error;
mod fingerprint;
mod scripted;
mod wire;

pub use cassette::{read_cassette, write_cassette, CassetteEntry, RecordingClient, ReplayClient};
pub use client::{ChatClient, HttpClient, API_KEY_VAR, ENDPOINT_VAR};
pub use error::GatewayError;
pub use fingerprint::{canonical_json, fingerprint_request};
pub use scripted::ScriptedClient;
pub use wire::{
    ChatMessage, CompletionRequest, CompletionResponse, FinishReason, FunctionCall, Role,
    ToolCall, Usage,
};
