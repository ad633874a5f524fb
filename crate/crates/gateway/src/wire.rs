//! Chat-completion wire types in the OpenAI-compatible tools dialect.

use crate::GatewayError;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Speaker of a chat message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
    Tool,
}

/// Function payload of a tool call. `arguments` is a JSON-encoded string,
/// as the chat-completions API transmits it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionCall {
    pub name: String,
    pub arguments: String,
}

/// One tool call requested by the assistant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolCall {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub function: FunctionCall,
}

impl ToolCall {
    /// A `function`-typed call with the arguments serialized compactly.
    pub fn function(id: impl Into<String>, name: impl Into<String>, arguments: &Value) -> Self {
        ToolCall {
            id: id.into(),
            kind: "function".into(),
            function: FunctionCall {
                name: name.into(),
                arguments: serde_json::to_string(arguments).expect("arguments serialize"),
            },
        }
    }

    /// Parses the argument string back into JSON.
    pub fn parsed_arguments(&self) -> Result<Value, GatewayError> {
        serde_json::from_str(&self.function.arguments).map_err(|err| {
            GatewayError::MalformedResponse(format!(
                "tool call {} carries unparseable arguments: {err}",
                self.id
            ))
        })
    }
}

/// One message of a conversation. Tool messages reference the assistant
/// call they answer through `tool_call_id`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tool_calls: Option<Vec<ToolCall>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tool_call_id: Option<String>,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::System,
            content: Some(content.into()),
            tool_calls: None,
            tool_call_id: None,
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            content: Some(content.into()),
            tool_calls: None,
            tool_call_id: None,
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content: Some(content.into()),
            tool_calls: None,
            tool_call_id: None,
        }
    }

    pub fn assistant_with_calls(content: Option<String>, calls: Vec<ToolCall>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content,
            tool_calls: Some(calls),
            tool_call_id: None,
        }
    }

    /// Tool-role reply to the call with the given id.
    pub fn tool(call_id: impl Into<String>, content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Tool,
            content: Some(content.into()),
            tool_calls: None,
            tool_call_id: Some(call_id.into()),
        }
    }

    /// Tool calls of an assistant message, empty for other roles.
    pub fn calls(&self) -> &[ToolCall] {
        self.tool_calls.as_deref().unwrap_or(&[])
    }
}

/// Why the model stopped generating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinishReason {
    Stop,
    ToolCalls,
    Length,
}

/// Token accounting reported by the endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
}

/// One chat-completion request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tools: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// The assistant turn produced for one request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub message: ChatMessage,
    pub finish_reason: FinishReason,
    pub usage: Option<Usage>,
}

impl CompletionResponse {
    /// Extracts the first choice from a chat-completions response body.
    pub fn from_api_body(body: &Value) -> Result<Self, GatewayError> {
        let choice = body["choices"]
            .get(0)
            .ok_or_else(|| GatewayError::MalformedResponse("body has no choices".into()))?;
        let message: ChatMessage = serde_json::from_value(choice["message"].clone())
            .map_err(|err| GatewayError::MalformedResponse(format!("bad message: {err}")))?;
        if message.role != Role::Assistant {
            return Err(GatewayError::MalformedResponse(format!(
                "completion message has role {:?}, expected assistant",
                message.role
            )));
        }
        if message.content.is_none() && message.calls().is_empty() {
            return Err(GatewayError::MalformedResponse(
                "assistant message carries neither content nor tool calls".into(),
            ));
        }
        let finish_reason: FinishReason =
            serde_json::from_value(choice["finish_reason"].clone()).map_err(|_| {
                GatewayError::MalformedResponse(format!(
                    "finish_reason {} is not one of stop, tool_calls, length",
                    choice["finish_reason"]
                ))
            })?;
        let usage = match body.get("usage") {
            Some(Value::Null) | None => None,
            Some(raw) => Some(serde_json::from_value(raw.clone()).map_err(|err| {
                GatewayError::MalformedResponse(format!("bad usage block: {err}"))
            })?),
        };
        Ok(CompletionResponse { message, finish_reason, usage })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tool_call_serializes_in_function_format() {
        let call = ToolCall::function("call_1", "quantile", &json!({"left": 0, "right": 4, "q": 0.5}));
        let wire = serde_json::to_value(&call).unwrap();
        assert_eq!(wire["id"], "call_1");
        assert_eq!(wire["type"], "function");
        assert_eq!(wire["function"]["name"], "quantile");
        let args: Value = serde_json::from_str(wire["function"]["arguments"].as_str().unwrap()).unwrap();
        assert_eq!(args["q"], json!(0.5));
    }

    #[test]
    fn tool_message_carries_tool_call_id() {
        let wire = serde_json::to_value(ChatMessage::tool("call_9", "{\"value\":1.0}")).unwrap();
        assert_eq!(wire["role"], "tool");
        assert_eq!(wire["tool_call_id"], "call_9");
        assert!(wire.get("tool_calls").is_none());
    }

    #[test]
    fn plain_messages_omit_call_fields() {
        let wire = serde_json::to_value(ChatMessage::user("hello")).unwrap();
        assert_eq!(wire.as_object().unwrap().len(), 2);
        assert_eq!(wire["content"], "hello");
    }

    #[test]
    fn message_round_trips() {
        let msg = ChatMessage::assistant_with_calls(
            Some("thinking".into()),
            vec![ToolCall::function("c1", "standard_deviation", &json!({"left": 0, "right": 9}))],
        );
        let text = serde_json::to_string(&msg).unwrap();
        let back: ChatMessage = serde_json::from_str(&text).unwrap();
        assert_eq!(back, msg);
    }

    #[test]
    fn response_parses_from_api_body() {
        let body = json!({
            "id": "cmpl-1",
            "choices": [{
                "index": 0,
                "message": {"role": "assistant", "content": "done"},
                "finish_reason": "stop"
            }],
            "usage": {"prompt_tokens": 12, "completion_tokens": 3, "total_tokens": 15}
        });
        let response = CompletionResponse::from_api_body(&body).unwrap();
        assert_eq!(response.message.content.as_deref(), Some("done"));
        assert_eq!(response.finish_reason, FinishReason::Stop);
        assert_eq!(response.usage.unwrap().completion_tokens, 3);
    }

    #[test]
    fn response_without_usage_parses() {
        let body = json!({
            "choices": [{"message": {"role": "assistant", "content": "ok"}, "finish_reason": "stop"}]
        });
        assert!(CompletionResponse::from_api_body(&body).unwrap().usage.is_none());
    }

    #[test]
    fn unknown_finish_reason_is_malformed() {
        let body = json!({
            "choices": [{"message": {"role": "assistant", "content": "ok"}, "finish_reason": "content_filter"}]
        });
        let err = CompletionResponse::from_api_body(&body).unwrap_err();
        assert_eq!(err.code(), "MALFORMED_RESPONSE");
    }

    #[test]
    fn empty_assistant_message_is_malformed() {
        let body = json!({
            "choices": [{"message": {"role": "assistant", "content": null}, "finish_reason": "stop"}]
        });
        let err = CompletionResponse::from_api_body(&body).unwrap_err();
        assert_eq!(err.code(), "MALFORMED_RESPONSE");
    }

    #[test]
    fn missing_choices_is_malformed() {
        let err = CompletionResponse::from_api_body(&json!({"choices": []})).unwrap_err();
        assert_eq!(err.code(), "MALFORMED_RESPONSE");
    }

    #[test]
    fn bad_tool_arguments_surface_on_parse() {
        let call = ToolCall {
            id: "c1".into(),
            kind: "function".into(),
            function: FunctionCall { name: "quantile".into(), arguments: "{not json".into() },
        };
        assert_eq!(call.parsed_arguments().unwrap_err().code(), "MALFORMED_RESPONSE");
    }
}
