//! Live-client behavior against a scripted local HTTP server: retry on
//! transient statuses, fail fast on malformed bodies, auth header handling.

use morphocast_gateway::{ChatClient, ChatMessage, CompletionRequest, FinishReason, HttpClient};
use std::io::{Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::time::Duration;

/// Serves one canned HTTP response per accepted connection, recording each
/// raw request. The listener closes after the script runs out.
fn scripted_server(responses: Vec<String>) -> (String, Arc<Mutex<Vec<String>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub server");
    let endpoint = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    let seen_writer = Arc::clone(&seen);

    std::thread::spawn(move || {
        for body in responses {
            let (mut stream, _) = match listener.accept() {
                Ok(conn) => conn,
                Err(_) => return,
            };
            let mut raw = Vec::new();
            let mut buf = [0u8; 4096];
            let request = loop {
                let n = stream.read(&mut buf).unwrap_or(0);
                if n == 0 {
                    break String::from_utf8_lossy(&raw).into_owned();
                }
                raw.extend_from_slice(&buf[..n]);
                let text = String::from_utf8_lossy(&raw);
                if let Some(header_end) = text.find("\r\n\r\n") {
                    let content_length = text
                        .lines()
                        .find_map(|line| line.strip_prefix("content-length: "))
                        .or_else(|| text.lines().find_map(|l| l.strip_prefix("Content-Length: ")))
                        .and_then(|v| v.trim().parse::<usize>().ok())
                        .unwrap_or(0);
                    if raw.len() >= header_end + 4 + content_length {
                        break text.into_owned();
                    }
                }
            };
            seen_writer.lock().unwrap().push(request);
            stream.write_all(body.as_bytes()).ok();
        }
    });

    (endpoint, seen)
}

fn http_response(status: &str, body: &str) -> String {
    format!(
        "HTTP/1.1 {status}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
        body.len()
    )
}

fn ok_body() -> String {
    r#"{"choices":[{"message":{"role":"assistant","content":"hello"},"finish_reason":"stop"}],"usage":{"prompt_tokens":5,"completion_tokens":1,"total_tokens":6}}"#
        .to_string()
}

fn request() -> CompletionRequest {
    CompletionRequest {
        model: "test-model".into(),
        messages: vec![ChatMessage::user("ping")],
        tools: None,
        temperature: Some(0.0),
        max_tokens: Some(64),
        seed: None,
    }
}

fn fast_client(endpoint: &str, api_key: Option<String>) -> HttpClient {
    HttpClient::new(endpoint, api_key).with_backoff_base(Duration::from_millis(1))
}

#[test]
fn success_parses_message_and_usage() {
    let (endpoint, seen) = scripted_server(vec![http_response("200 OK", &ok_body())]);
    let response = fast_client(&endpoint, None).complete(&request()).unwrap();

    assert_eq!(response.message.content.as_deref(), Some("hello"));
    assert_eq!(response.finish_reason, FinishReason::Stop);
    assert_eq!(response.usage.unwrap().total_tokens, 6);
    assert_eq!(seen.lock().unwrap().len(), 1);
}

#[test]
fn rate_limit_then_success_recovers_after_backoff() {
    let (endpoint, seen) = scripted_server(vec![
        http_response("429 Too Many Requests", "{}"),
        http_response("200 OK", &ok_body()),
    ]);
    let response = fast_client(&endpoint, None).complete(&request()).unwrap();
    assert_eq!(response.message.content.as_deref(), Some("hello"));
    assert_eq!(seen.lock().unwrap().len(), 2);
}

#[test]
fn persistent_rate_limiting_exhausts_retries() {
    let (endpoint, seen) = scripted_server(vec![
        http_response("429 Too Many Requests", "{}"),
        http_response("429 Too Many Requests", "{}"),
        http_response("429 Too Many Requests", "{}"),
    ]);
    let err = fast_client(&endpoint, None).complete(&request()).unwrap_err();
    assert_eq!(err.code(), "RATE_LIMITED");
    assert_eq!(seen.lock().unwrap().len(), 3);
}

#[test]
fn server_errors_are_retried_then_transport() {
    let (endpoint, seen) = scripted_server(vec![
        http_response("500 Internal Server Error", "{}"),
        http_response("502 Bad Gateway", "{}"),
        http_response("500 Internal Server Error", "{}"),
    ]);
    let err = fast_client(&endpoint, None).complete(&request()).unwrap_err();
    assert_eq!(err.code(), "TRANSPORT");
    assert_eq!(seen.lock().unwrap().len(), 3);
}

#[test]
fn server_error_then_success_recovers() {
    let (endpoint, _) = scripted_server(vec![
        http_response("500 Internal Server Error", "{}"),
        http_response("200 OK", &ok_body()),
    ]);
    assert!(fast_client(&endpoint, None).complete(&request()).is_ok());
}

#[test]
fn malformed_body_fails_without_retry() {
    let (endpoint, seen) = scripted_server(vec![
        http_response("200 OK", "{not json"),
        http_response("200 OK", &ok_body()),
    ]);
    let err = fast_client(&endpoint, None).complete(&request()).unwrap_err();
    assert_eq!(err.code(), "MALFORMED_RESPONSE");
    assert_eq!(seen.lock().unwrap().len(), 1, "malformed bodies must not be retried");
}

#[test]
fn client_errors_fail_without_retry() {
    let (endpoint, seen) = scripted_server(vec![http_response("403 Forbidden", "{}")]);
    let err = fast_client(&endpoint, None).complete(&request()).unwrap_err();
    assert_eq!(err.code(), "TRANSPORT");
    assert_eq!(seen.lock().unwrap().len(), 1);
}

#[test]
fn bearer_token_is_sent_only_when_configured() {
    let (endpoint, seen) = scripted_server(vec![http_response("200 OK", &ok_body())]);
    fast_client(&endpoint, Some("sk-test-key".into())).complete(&request()).unwrap();
    let raw = seen.lock().unwrap()[0].clone();
    assert!(raw.contains("authorization: Bearer sk-test-key") || raw.contains("Authorization: Bearer sk-test-key"));

    let (endpoint, seen) = scripted_server(vec![http_response("200 OK", &ok_body())]);
    fast_client(&endpoint, None).complete(&request()).unwrap();
    let raw = seen.lock().unwrap()[0].clone();
    assert!(!raw.to_lowercase().contains("authorization:"));
}

#[test]
fn unreachable_endpoint_is_transport() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let endpoint = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    drop(listener);

    let err = fast_client(&endpoint, None).complete(&request()).unwrap_err();
    assert_eq!(err.code(), "TRANSPORT");
}
