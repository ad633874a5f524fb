//! Turn-level credit assignment for the forecasting agent.
//!
//! Scores each turn's morphology description with a frozen forecaster,
//! turns score improvements into discounted returns, normalizes returns
//! across a group of rollouts, and lays the advantages onto assistant token
//! spans for an external RL trainer.

mod batch;
mod credit;
mod error;
mod group;
mod spans;

pub use batch::{build_rl_records, read_rl_batch, write_rl_batch, RlRecord};
pub use credit::{compute_deltas, compute_returns, compute_scores, TurnCredit};
pub use error::RewardError;
pub use group::{group_normalize, GroupBatch, ADV_EPSILON};
pub use spans::{attach_token_advantages, TokenSpan};
