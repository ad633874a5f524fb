//! Record/replay cassettes: JSONL of fingerprinted completions.

use crate::{fingerprint_request, ChatClient, CompletionRequest, CompletionResponse, GatewayError};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

/// One recorded exchange: the request's fingerprint and the canned response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub fingerprint: String,
    pub response: CompletionResponse,
}

/// Reads a cassette file, one JSON entry per line. Blank lines are ignored.
pub fn read_cassette(path: impl AsRef<Path>) -> Result<Vec<CassetteEntry>, GatewayError> {
    let file = std::fs::File::open(path.as_ref())?;
    let mut entries = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let entry: CassetteEntry = serde_json::from_str(&line).map_err(|err| {
            GatewayError::MalformedResponse(format!(
                "cassette line {} is not a valid entry: {err}",
                idx + 1
            ))
        })?;
        entries.push(entry);
    }
    Ok(entries)
}

/// Writes entries as JSONL, replacing any existing file.
pub fn write_cassette(
    path: impl AsRef<Path>,
    entries: &[CassetteEntry],
) -> Result<(), GatewayError> {
    let mut file = std::fs::File::create(path.as_ref())?;
    for entry in entries {
        serde_json::to_writer(&mut file, entry)
            .map_err(|err| GatewayError::MalformedResponse(format!("entry serialization: {err}")))?;
        file.write_all(b"\n")?;
    }
    Ok(())
}

/// Client that answers from a cassette, strictly in recorded order. Each
/// request must hash to the next entry's fingerprint.
pub struct ReplayClient {
    entries: Vec<CassetteEntry>,
    cursor: Mutex<usize>,
}

impl ReplayClient {
    pub fn from_entries(entries: Vec<CassetteEntry>) -> Self {
        ReplayClient { entries, cursor: Mutex::new(0) }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, GatewayError> {
        Ok(Self::from_entries(read_cassette(path)?))
    }

    /// Entries not yet replayed.
    pub fn remaining(&self) -> usize {
        self.entries.len() - *self.cursor.lock().expect("cursor lock")
    }
}

impl ChatClient for ReplayClient {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, GatewayError> {
        let mut cursor = self.cursor.lock().expect("cursor lock");
        let entry = self
            .entries
            .get(*cursor)
            .ok_or(GatewayError::CassetteExhausted(self.entries.len()))?;
        let got = fingerprint_request(request);
        if got != entry.fingerprint {
            return Err(GatewayError::CassetteMismatch {
                expected: entry.fingerprint.clone(),
                got,
            });
        }
        *cursor += 1;
        Ok(entry.response.clone())
    }
}

/// Client wrapper that forwards to an inner client and keeps every
/// successful exchange for later [`write_cassette`].
pub struct RecordingClient {
    inner: Box<dyn ChatClient>,
    entries: Mutex<Vec<CassetteEntry>>,
}

impl RecordingClient {
    pub fn new(inner: Box<dyn ChatClient>) -> Self {
        RecordingClient { inner, entries: Mutex::new(Vec::new()) }
    }

    /// Everything recorded so far, in completion order.
    pub fn entries(&self) -> Vec<CassetteEntry> {
        self.entries.lock().expect("entries lock").clone()
    }

    /// Writes the recorded session to a cassette file.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), GatewayError> {
        write_cassette(path, &self.entries())
    }
}

impl ChatClient for RecordingClient {
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, GatewayError> {
        let response = self.inner.complete(request)?;
        self.entries.lock().expect("entries lock").push(CassetteEntry {
            fingerprint: fingerprint_request(request),
            response: response.clone(),
        });
        Ok(response)
    }
}
