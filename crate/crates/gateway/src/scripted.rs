//! A canned-response client for scripting conversations that have not been
//! recorded yet.

use std::collections::VecDeque;
use std::sync::Mutex;

use crate::{ChatClient, CompletionRequest, CompletionResponse, GatewayError};

/// Hands out a fixed response sequence in order, recording every request it
/// receives. Unlike [`ReplayClient`](crate::ReplayClient) it performs no
/// fingerprint checks, so it can stand in for a live endpoint when building
/// fixtures or driving tests.
pub struct ScriptedClient {
    total: usize,
    responses: Mutex<VecDeque<CompletionResponse>>,
    requests: Mutex<Vec<CompletionRequest>>,
}

impl ScriptedClient {
    pub fn new(responses: Vec<CompletionResponse>) -> Self {
        ScriptedClient {
            total: responses.len(),
            responses: Mutex::new(responses.into()),
            requests: Mutex::new(Vec::new()),
        }
    }

    /// Requests received so far, in call order.
    pub fn requests(&self) -> Vec<CompletionRequest> {
        self.requests.lock().expect("requests lock").clone()
    }

    /// Scripted responses not yet handed out.
    pub fn remaining(&self) -> usize {
        self.responses.lock().expect("responses lock").len()
    }
}

impl ChatClient for ScriptedClient {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, GatewayError> {
        self.requests
            .lock()
            .expect("requests lock")
            .push(request.clone());
        self.responses
            .lock()
            .expect("responses lock")
            .pop_front()
            .ok_or(GatewayError::CassetteExhausted(self.total))
    }
}
