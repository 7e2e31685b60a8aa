use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// The set of propositions that hold at one position. Anything absent is false.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub BTreeSet<String>);

impl Letter {
    pub fn empty() -> Self {
        Letter::default()
    }

    pub fn contains(&self, prop: &str) -> bool {
        self.0.contains(prop)
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }

    /// Keeps only the propositions in `props`.
    pub fn restrict(&self, props: &BTreeSet<String>) -> Letter {
        Letter(self.0.intersection(props).cloned().collect())
    }
}

impl<S: Into<String>> FromIterator<S> for Letter {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Letter(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// An ultimately periodic word `prefix · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    prefix: Vec<Letter>,
    #[serde(rename = "loop")]
    cycle: Vec<Letter>,
}

impl LassoWord {
    /// Returns `None` when `cycle` is empty.
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Option<Self> {
        if cycle.is_empty() {
            None
        } else {
            Some(LassoWord { prefix, cycle })
        }
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    /// Number of distinct positions in the finite quotient.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn letter(&self, pos: usize) -> &Letter {
        if pos < self.prefix.len() {
            &self.prefix[pos]
        } else {
            &self.cycle[(pos - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor position in the quotient; the last position loops back.
    pub fn succ(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// Same word, with every letter restricted to `props`.
    pub fn restrict(&self, props: &BTreeSet<String>) -> LassoWord {
        LassoWord {
            prefix: self.prefix.iter().map(|l| l.restrict(props)).collect(),
            cycle: self.cycle.iter().map(|l| l.restrict(props)).collect(),
        }
    }

    /// Same word with the loop written out `times` times.
    pub fn unroll(&self, times: usize) -> LassoWord {
        let cycle = (0..times.max(1)).flat_map(|_| self.cycle.iter().cloned()).collect();
        LassoWord {
            prefix: self.prefix.clone(),
            cycle,
        }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            write!(f, "{l} ")?;
        }
        write!(f, "(")?;
        for (i, l) in self.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")^w")
    }
}
