//! Prompt renderers for the agent conversation and the three judges.
//!
//! The wording is fixed; renderers only substitute budgets, sample fields,
//! and judge inputs. Absent timestamp bounds render as `unavailable`.

use morphocast_series::{format_values, UNAVAILABLE};

use crate::{RolloutConfig, SampleContext};

const ANALYST_ROLE: &str = "You are an expert time-series forecasting analyst with strong \
domain knowledge. When metadata is available, use it cautiously. When metadata is \
unavailable, operate as a domain-agnostic morphology forecaster.";

const TOOL_ACCESS: &str = "You have access to external tools for local window analysis. \
Use tools first to inspect shape details, then produce one final paragraph.";

const TOOL_POLICY: &str = "Tool-usage policy: Prefer evidence from tools over unaided \
guessing. For every tool call, always include left and right (right is exclusive). Before \
forecasting, inspect at least one broad window that covers most or all of the history. \
Also inspect at least one targeted local window near the end of the history, because the \
short-term forecast should be grounded in the most recent regime. If needed, inspect \
additional windows around suspected turning points, repeating segments, or regime \
boundaries. Use additional tool calls only when they materially reduce uncertainty. After \
enough evidence is collected, stop calling tools and write the final answer. Do not \
mention tools, tool names, or tool outputs in the final answer.";

const METADATA_RULES: &str = "Metadata rules: Some samples may contain missing or \
intentionally masked metadata. The token unavailable means the information is absent and \
carries zero semantic weight. Treat unavailable as missing information, not as a weak \
hint. Do not infer domain, units, variable identity, calendar semantics, or real-world \
causes from fields marked as unavailable. If frequency or timestamps are unavailable, \
reason only in relative positions such as early, middle, late, recent, and broader \
history. If metadata is unavailable, rely only on the numeric history and tool evidence. \
Do not mention missing or unavailable metadata in the final answer.";

const INTERPRETATION_PRINCIPLES: &str = "Interpretation principles: Use history only; do \
not assume unsupported external events. When reliable metadata is available, use domain \
knowledge only to interpret plausible persistence, recurrence, seasonality, or regime \
evolution that is consistent with the observed history. When metadata is unavailable or \
masked, do not guess hidden semantics; rely on morphology and tool evidence only. Base \
claims on visible evidence such as trend, periodicity, cycle shape, regimes, events, \
extreme placement, transition sharpness, intermittency, roughness, volatility, and \
amplitude change. If evidence is weak or conflicting, hedge explicitly instead of \
overclaiming.";

const OUTPUT_REQUIREMENTS: &str = "Output requirements: Final answer must contain exactly \
two paragraphs. The first paragraph must begin with \"In the short term,\" The second \
paragraph must begin with \"In the long term,\" Each paragraph should describe predicted \
morphology only. Do not output chain-of-thought, hidden reasoning, or process narration. \
Avoid exact numbers, timestamps, dataset names, units, domain knowledge and causal \
stories. Be specific but conservative. Use 3-5 sentences per paragraph. Keep the full \
answer under 300 words.";

const BUDGET_TEMPLATE: &str = "Use tools when needed before writing the final answer. You \
can output at most {max_assistant_turns} assistant replies in total, and in each reply at \
most {max_parallel_calls} tool calls will be executed.";

/// The system prompt with the turn and parallel-call budgets substituted.
pub fn render_system_prompt(config: &RolloutConfig) -> String {
    let budget = BUDGET_TEMPLATE
        .replace(
            "{max_assistant_turns}",
            &config.max_assistant_turns.to_string(),
        )
        .replace(
            "{max_parallel_calls}",
            &config.max_parallel_calls.to_string(),
        );
    [
        ANALYST_ROLE,
        TOOL_ACCESS,
        TOOL_POLICY,
        METADATA_RULES,
        INTERPRETATION_PRINCIPLES,
        OUTPUT_REQUIREMENTS,
        &budget,
    ]
    .join("\n\n")
}

const AVOID_WITH_METADATA: &str = "Avoid exact numbers, timestamps, dataset names, units, \
domain knowledge and causal stories in final morphology output, only use them in your \
reasoning.";

const AVOID_MASKED: &str = "Avoid exact numbers, timestamps in final morphology output.";

const HISTORY_VALUES_HEADER: &str = "History values (comma-separated, earliest to latest):";

/// The user prompt for one sample; picks the masked or the full-metadata
/// variant according to `metadata_masked`.
pub fn render_user_prompt(sample: &SampleContext) -> String {
    if sample.metadata_masked {
        render_masked_user_prompt(sample)
    } else {
        render_available_user_prompt(sample)
    }
}

fn render_available_user_prompt(sample: &SampleContext) -> String {
    let m = &sample.metadata;
    [
        format!(
            "Dataset: {}\nDomain: {}\nFrequency: {}\nDataset description: {}",
            m.dataset, m.domain, m.freq, m.dataset_description
        ),
        format!(
            "Variable name: {}\nVariable description: {}\nUnit: {}\n{}",
            m.var_name, m.var_desc, m.unit, AVOID_WITH_METADATA
        ),
        window_block(
            "History window",
            bound(&sample.history_start),
            bound(&sample.history_end),
            "length",
            sample.history.len(),
        ),
        window_block(
            "Future window (short term)",
            bound(&sample.future_short_start),
            bound(&sample.future_short_end),
            "horizon",
            sample.horizon_short,
        ),
        window_block(
            "Future window (long term)",
            bound(&sample.future_long_start),
            bound(&sample.future_long_end),
            "horizon",
            sample.horizon_long,
        ),
        history_values_block(&sample.history),
    ]
    .join("\n\n")
}

fn render_masked_user_prompt(sample: &SampleContext) -> String {
    [
        "Metadata availability: unavailable".to_string(),
        AVOID_MASKED.to_string(),
        window_block(
            "History window",
            UNAVAILABLE,
            UNAVAILABLE,
            "length",
            sample.history.len(),
        ),
        window_block(
            "Future window (short term)",
            UNAVAILABLE,
            UNAVAILABLE,
            "horizon",
            sample.horizon_short,
        ),
        window_block(
            "Future window (long term)",
            UNAVAILABLE,
            UNAVAILABLE,
            "horizon",
            sample.horizon_long,
        ),
        history_values_block(&sample.history),
    ]
    .join("\n\n")
}

fn bound(value: &Option<String>) -> &str {
    value.as_deref().unwrap_or(UNAVAILABLE)
}

fn window_block(title: &str, start: &str, end: &str, count_label: &str, count: usize) -> String {
    format!(
        "{title}:\n  - start_time: {start}\n  - end_time: {end}\n  - {count_label}: {count}"
    )
}

fn history_values_block(history: &[f64]) -> String {
    format!("{HISTORY_VALUES_HEADER}\n{}", format_values(history))
}

const VERDICT_INSTRUCTION: &str =
    "Return JSON only:\n\n{\"pass\": true/false, \"evidence\": \"<=60 words\"}";

const LEAK_JUDGE_TASK: &str = "Determine whether the forecast text contains forbidden \
metadata-like content. Forbidden content includes exact numbers, timestamps, dataset \
names, variable names, units, domain labels.";

const USAGE_JUDGE_TASK: &str = "Determine whether the model's reasoning meaningfully uses \
the provided metadata context and tool outputs, instead of ignoring them and producing a \
generic answer. If metadata is unavailable, judge whether the reasoning meaningfully uses \
the numeric history and tool outputs.";

const ACCURACY_JUDGE_TASK: &str = "Determine whether the forecast text is broadly \
consistent with the actual future morphology shown in the short-term and long-term future \
values. Focus on morphology only: trend, periodicity, roughness, volatility, regime \
change, turning points, and overall structure.";

/// Judge prompt: does the final text leak metadata-like content?
pub fn render_leak_judge_prompt(forecast_text: &str, metadata_context: &str) -> String {
    format!(
        "You are a strict judge for time-series morphology forecasts.\n\n\
         {LEAK_JUDGE_TASK}\n\n{VERDICT_INSTRUCTION}\n\n\
         Forecast text: {forecast_text}\n\
         Reference metadata / context: {metadata_context}"
    )
}

/// Judge prompt: did the reasoning actually use the context and tools?
pub fn render_usage_judge_prompt(metadata_context: &str, messages_text: &str) -> String {
    format!(
        "You are a strict judge for tool-using time-series reasoning.\n\n\
         {USAGE_JUDGE_TASK}\n\n{VERDICT_INSTRUCTION}\n\n\
         Metadata context: {metadata_context}\n\
         Serialized conversation: {messages_text}"
    )
}

/// Judge prompt: is the forecast consistent with the actual future values?
pub fn render_accuracy_judge_prompt(
    forecast_text: &str,
    future_short_text: &str,
    future_long_text: &str,
) -> String {
    format!(
        "You are a strict judge for time-series morphology forecast accuracy.\n\n\
         {ACCURACY_JUDGE_TASK}\n\n{VERDICT_INSTRUCTION}\n\n\
         Forecast text: {forecast_text}\n\
         Short-term future values: {future_short_text}\n\
         Long-term future values: {future_long_text}"
    )
}
