//! Enumeration of the terms an ECTA accepts, one compact state at a time.
//!
//! States bind variables to partially built terms whose unexpanded parts
//! are u-nodes: a node plus the constraint fragments still restricting it.

mod engine;
mod expand;
mod measure;
mod naive;
mod rules;
mod state;

pub use engine::{enumerate, Candidate, EnumConfig, EnumStats, Enumerator, Schedule, Scheduler};
pub use expand::{expand, expand_bounded};
pub use measure::Measure;
pub use naive::{enumerate_naive, enumerate_naive_each, NaiveConfig, NaiveStats, NAIVE_UNFOLD_DEPTH};
pub use rules::{all_suspendable, find_suspendable, step_choose, step_choose_mu, step_subst, step_suspend, Location, Outcome, RuleError};
pub use state::{project, EnumState, Fragment, PTerm, VarId};
