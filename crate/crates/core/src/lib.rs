//! Synthesis of minimum-cost robot behaviors for LTL tasks and token-based
//! allocation of newly introduced sub-tasks across a heterogeneous team.

pub mod allocation;
pub mod buchi;
pub mod graph;
pub mod harness;
pub mod ltl;
pub mod models;
pub mod synthesis;
