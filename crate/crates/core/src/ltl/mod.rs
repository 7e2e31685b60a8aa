//! LTL syntax, negation normal form and lasso-word semantics.

mod eval;
mod formula;
mod parser;
mod word;

pub use eval::eval_lasso;
pub use formula::Formula;
pub use parser::{parse_ltl, ParseError};
pub use word::{LassoWord, Letter};
