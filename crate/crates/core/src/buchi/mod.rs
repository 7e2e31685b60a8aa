//! Büchi automata: LTL translation, intersection over differing alphabets,
//! reachable-part restriction and HOA exchange.

mod automaton;
mod guard;
mod hoa;
mod intersect;
mod translate;

use thiserror::Error;

pub use automaton::{BuchiAutomaton, Edge, StateId};
pub use guard::{Cube, Guard};
pub use hoa::{export_hoa, import_hoa};
pub use intersect::{intersect, intersect_with_states, IntersectionState};
pub use translate::translate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuchiError {
    #[error("unknown automaton state {0}")]
    UnknownState(StateId),
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("HOA: {0}")]
    Hoa(String),
}
