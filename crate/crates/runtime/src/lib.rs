//! Multi-turn forecasting agent runtime.
//!
//! Renders the analyst prompts, drives the tool-calling loop against a chat
//! endpoint under turn and parallel-call budgets, elicits the per-turn
//! morphology descriptions used for credit assignment, and checks the final
//! answer's structure.

mod error;
mod format;
mod prompts;
mod rollout;
mod sample;
mod trajectory;

pub use error::RuntimeError;
pub use format::{
    validate_final_format, ForbiddenContentFlags, FormatReport, LONG_TERM_PREFIX,
    SHORT_TERM_PREFIX, WORD_LIMIT,
};
pub use prompts::{
    render_accuracy_judge_prompt, render_leak_judge_prompt, render_system_prompt,
    render_usage_judge_prompt, render_user_prompt,
};
pub use rollout::{elicit_turn_descriptions, run_rollout, RolloutConfig};
pub use sample::{nullable_floats, SampleContext};
pub use trajectory::{
    read_trajectories, write_trajectories, Trajectory, TrajectoryStats, TurnBoundary,
};
