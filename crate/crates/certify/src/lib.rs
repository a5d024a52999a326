//! Certified search over Markov values: inequality verification, extremal
//! values over subshifts, good-interval certificates, maximal-gap
//! certification, and the local-uniqueness / self-replication pipeline.

pub mod engine;
pub mod gap;
pub mod node;

pub use gap::{certify_gap, exclusion_position, GapReport, GapSpec, TriggerSpec, Verdict};
pub use engine::{contains_claim, Engine, EngineCfg, Goal, Outcome, Transcript};
pub use node::{Bounds, LambdaRange, Node, SideState, TailRange};
