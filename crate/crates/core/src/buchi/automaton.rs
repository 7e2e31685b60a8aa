use std::collections::{BTreeSet, HashMap};

use crate::graph;
use crate::ltl::LassoWord;

use super::{BuchiError, Guard};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub guard: Guard,
    pub target: StateId,
}

/// Nondeterministic Büchi automaton with guard-labeled edges and state-based
/// acceptance. States are dense ids `0..num_states()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton {
    alphabet: BTreeSet<String>,
    names: Vec<String>,
    initial: StateId,
    accepting: BTreeSet<StateId>,
    edges: Vec<Vec<Edge>>,
}

impl BuchiAutomaton {
    /// Checks endpoint and alphabet invariants. Edges with a false guard are dropped.
    pub fn new(
        alphabet: BTreeSet<String>,
        names: Vec<String>,
        initial: StateId,
        accepting: BTreeSet<StateId>,
        edges: Vec<Vec<Edge>>,
    ) -> Result<Self, BuchiError> {
        let n = names.len();
        if edges.len() != n {
            return Err(BuchiError::Malformed(format!(
                "{} states but {} edge lists",
                n,
                edges.len()
            )));
        }
        if initial >= n {
            return Err(BuchiError::UnknownState(initial));
        }
        if let Some(&bad) = accepting.iter().find(|&&s| s >= n) {
            return Err(BuchiError::UnknownState(bad));
        }
        let mut edges = edges;
        for out in &mut edges {
            out.retain(|e| !e.guard.is_false());
            for e in out.iter() {
                if e.target >= n {
                    return Err(BuchiError::UnknownState(e.target));
                }
                if let Some(p) = e.guard.cubes().iter().flat_map(|c| c.keys()).find(|p| !alphabet.contains(*p)) {
                    return Err(BuchiError::Malformed(format!(
                        "guard mentions `{p}` outside the alphabet"
                    )));
                }
            }
        }
        Ok(BuchiAutomaton {
            alphabet,
            names,
            initial,
            accepting,
            edges,
        })
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting.contains(&s)
    }

    pub fn edges(&self, s: StateId) -> &[Edge] {
        &self.edges[s]
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.num_states()
    }

    /// Whether some run over `w` visits an accepting state infinitely often.
    ///
    /// Unrolls the lasso into `(state, position)` pairs and looks for a
    /// reachable accepting pair lying on a cycle; such cycles necessarily
    /// stay inside the loop segment.
    pub fn accepts_lasso(&self, w: &LassoWord) -> bool {
        let positions = w.positions();
        let n = self.num_states() * positions;
        let node = |z: StateId, p: usize| z * positions + p;
        let succ = |v: usize| {
            let (z, p) = (v / positions, v % positions);
            let letter = w.letter(p);
            let np = w.succ(p);
            self.edges[z]
                .iter()
                .filter(move |e| e.guard.sat_by(letter))
                .map(move |e| node(e.target, np))
                .collect::<Vec<_>>()
        };
        let root = node(self.initial, 0);
        let cyclic = graph::on_cycle(n, root, succ);
        cyclic
            .iter()
            .enumerate()
            .any(|(v, &c)| c && self.is_accepting(v / positions))
    }

    /// Whether the language is empty: no reachable accepting state lies on a cycle.
    pub fn is_empty(&self) -> bool {
        let cyclic = graph::on_cycle(self.num_states(), self.initial, |z| {
            self.edges[z].iter().map(|e| e.target).collect::<Vec<_>>()
        });
        !self.accepting.iter().any(|&z| cyclic[z])
    }

    /// The sub-automaton forward-reachable from `z`, with `z` as the new initial
    /// state. States are renumbered in breadth-first order from `z`.
    pub fn restrict_reachable(&self, z: StateId) -> Result<BuchiAutomaton, BuchiError> {
        if z >= self.num_states() {
            return Err(BuchiError::UnknownState(z));
        }
        let order = graph::reachable_bfs(self.num_states(), z, |s| {
            self.edges[s].iter().map(|e| e.target).collect::<Vec<_>>()
        });
        let index: HashMap<StateId, StateId> =
            order.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let names = order.iter().map(|&s| self.names[s].clone()).collect();
        let accepting = order
            .iter()
            .enumerate()
            .filter(|(_, s)| self.accepting.contains(s))
            .map(|(i, _)| i)
            .collect();
        let edges = order
            .iter()
            .map(|&s| {
                self.edges[s]
                    .iter()
                    .map(|e| Edge {
                        guard: e.guard.clone(),
                        target: index[&e.target],
                    })
                    .collect()
            })
            .collect();
        Ok(BuchiAutomaton {
            alphabet: self.alphabet.clone(),
            names,
            initial: 0,
            accepting,
            edges,
        })
    }

    /// Successor states of `z` on `letter`.
    pub fn step<'a>(
        &'a self,
        z: StateId,
        letter: &'a crate::ltl::Letter,
    ) -> impl Iterator<Item = StateId> + 'a {
        self.edges[z]
            .iter()
            .filter(move |e| e.guard.sat_by(letter))
            .map(|e| e.target)
    }
}
