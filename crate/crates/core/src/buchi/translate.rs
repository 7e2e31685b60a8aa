//! Tableau translation from LTL to a state-based Büchi automaton.
//!
//! The formula is put in negation normal form and its subformulas are
//! interned. A tableau state is a set of obligations that must hold from the
//! current position on. Expanding a state yields covers: a consistent set of
//! literals for the letter read now plus the obligations passed to the next
//! state. Each cover carries one acceptance mark per `Until` subformula
//! (fulfilled or not pending), giving a generalized Büchi automaton with
//! marks on transitions. A level counter `0..=k` over the `k` Until
//! subformulas, in post-order, degeneralizes it; states at level `k` accept.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::ltl::Formula;

use super::{BuchiAutomaton, Cube, Edge, Guard};

type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(String, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

#[derive(Default)]
struct Closure {
    nodes: Vec<Node>,
    formulas: Vec<Formula>,
    index: HashMap<Node, NodeId>,
    /// Until subformulas in post-order, as (until, right operand).
    untils: Vec<(NodeId, NodeId)>,
}

impl Closure {
    fn intern(&mut self, f: &Formula) -> NodeId {
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Prop(p) => Node::Lit(p.clone(), true),
            Formula::Not(g) => match &**g {
                Formula::Prop(p) => Node::Lit(p.clone(), false),
                _ => unreachable!("input is in negation normal form"),
            },
            Formula::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Formula::Next(a) => Node::Next(self.intern(a)),
            Formula::Until(a, b) => Node::Until(self.intern(a), self.intern(b)),
            Formula::Release(a, b) => Node::Release(self.intern(a), self.intern(b)),
            _ => unreachable!("input is in negation normal form"),
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        if let Node::Until(_, b) = node {
            self.untils.push((id, b));
        }
        self.index.insert(node.clone(), id);
        self.nodes.push(node);
        self.formulas.push(f.clone());
        id
    }

    fn complement(&self, id: NodeId) -> Option<NodeId> {
        match &self.nodes[id as usize] {
            Node::Lit(p, pos) => self.index.get(&Node::Lit(p.clone(), !pos)).copied(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Cover {
    literals: Vec<NodeId>,
    next: Vec<NodeId>,
    marks: u64,
}

struct Partial {
    todo: Vec<NodeId>,
    old: BTreeSet<NodeId>,
    next: BTreeSet<NodeId>,
}

fn expand(closure: &Closure, obligations: &[NodeId]) -> Vec<Cover> {
    let mut covers = BTreeSet::new();
    let mut stack = vec![Partial {
        todo: obligations.to_vec(),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    }];
    'partial: while let Some(mut node) = stack.pop() {
        while let Some(id) = node.todo.pop() {
            if node.old.contains(&id) {
                continue;
            }
            match closure.nodes[id as usize] {
                Node::True => {
                    node.old.insert(id);
                }
                Node::False => continue 'partial,
                Node::Lit(..) => {
                    if closure.complement(id).is_some_and(|c| node.old.contains(&c)) {
                        continue 'partial;
                    }
                    node.old.insert(id);
                }
                Node::And(a, b) => {
                    node.old.insert(id);
                    node.todo.push(a);
                    node.todo.push(b);
                }
                Node::Next(a) => {
                    node.old.insert(id);
                    node.next.insert(a);
                }
                Node::Or(a, b) => {
                    node.old.insert(id);
                    let mut other = Partial {
                        todo: node.todo.clone(),
                        old: node.old.clone(),
                        next: node.next.clone(),
                    };
                    other.todo.push(b);
                    stack.push(other);
                    node.todo.push(a);
                }
                Node::Until(a, b) => {
                    // a U b  ==  b | (a & X(a U b))
                    node.old.insert(id);
                    let mut postpone = Partial {
                        todo: node.todo.clone(),
                        old: node.old.clone(),
                        next: node.next.clone(),
                    };
                    postpone.todo.push(a);
                    postpone.next.insert(id);
                    stack.push(postpone);
                    node.todo.push(b);
                }
                Node::Release(a, b) => {
                    // a R b  ==  b & (a | X(a R b))
                    node.old.insert(id);
                    let mut postpone = Partial {
                        todo: node.todo.clone(),
                        old: node.old.clone(),
                        next: node.next.clone(),
                    };
                    postpone.todo.push(b);
                    postpone.next.insert(id);
                    stack.push(postpone);
                    node.todo.push(a);
                    node.todo.push(b);
                }
            }
        }
        let literals = node
            .old
            .iter()
            .copied()
            .filter(|&id| matches!(closure.nodes[id as usize], Node::Lit(..)))
            .collect();
        let marks = closure
            .untils
            .iter()
            .enumerate()
            .filter(|(_, (u, b))| !node.old.contains(u) || node.old.contains(b))
            .fold(0u64, |m, (i, _)| m | (1 << i));
        covers.insert(Cover {
            literals,
            next: canonical(closure, node.next),
            marks,
        });
    }
    covers.into_iter().collect()
}

/// Obligation sets drop `true`, which constrains nothing.
fn canonical(closure: &Closure, set: BTreeSet<NodeId>) -> Vec<NodeId> {
    set.into_iter()
        .filter(|&id| closure.nodes[id as usize] != Node::True)
        .collect()
}

/// Translates `f` into a Büchi automaton accepting exactly the words that satisfy it.
///
/// The alphabet is `f.atomic_props()` and every state is reachable from the
/// initial one.
pub fn translate(f: &Formula) -> BuchiAutomaton {
    let nnf = f.to_nnf();
    let mut closure = Closure::default();
    let root = closure.intern(&nnf);
    assert!(
        closure.untils.len() < 64,
        "at most 63 Until subformulas are supported"
    );
    let k = closure.untils.len();

    let mut ids: HashMap<(Vec<NodeId>, usize), usize> = HashMap::new();
    let mut states: Vec<(Vec<NodeId>, usize)> = Vec::new();
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    let mut cover_cache: HashMap<Vec<NodeId>, Vec<Cover>> = HashMap::new();
    let mut queue = VecDeque::new();

    let init = (canonical(&closure, BTreeSet::from([root])), 0usize);
    ids.insert(init.clone(), 0);
    states.push(init.clone());
    queue.push_back(0usize);

    while let Some(sid) = queue.pop_front() {
        let (obligations, level) = states[sid].clone();
        let covers = cover_cache
            .entry(obligations.clone())
            .or_insert_with(|| expand(&closure, &obligations))
            .clone();
        let mut out: BTreeMap<usize, Guard> = BTreeMap::new();
        for cover in covers {
            let mut target_level = if level == k { 0 } else { level };
            while target_level < k && cover.marks & (1 << target_level) != 0 {
                target_level += 1;
            }
            let key = (cover.next, target_level);
            let tid = match ids.get(&key) {
                Some(&t) => t,
                None => {
                    let t = states.len();
                    ids.insert(key.clone(), t);
                    states.push(key);
                    queue.push_back(t);
                    t
                }
            };
            let cube: Cube = cover
                .literals
                .iter()
                .map(|&id| match &closure.nodes[id as usize] {
                    Node::Lit(p, pos) => (p.clone(), *pos),
                    _ => unreachable!(),
                })
                .collect();
            let guard = Guard::from_cube(cube);
            out.entry(tid)
                .and_modify(|g| *g = g.or(&guard))
                .or_insert(guard);
        }
        if edges.len() <= sid {
            edges.resize_with(sid + 1, Vec::new);
        }
        edges[sid] = out
            .into_iter()
            .map(|(target, guard)| Edge { guard, target })
            .collect();
    }
    edges.resize_with(states.len(), Vec::new);

    let names = states
        .iter()
        .map(|(obl, level)| {
            let parts: Vec<String> = obl
                .iter()
                .map(|&id| closure.formulas[id as usize].to_string())
                .collect();
            format!("{{{}}}#{}", parts.join(", "), level)
        })
        .collect();
    let accepting = states
        .iter()
        .enumerate()
        .filter(|(_, (_, level))| *level == k)
        .map(|(i, _)| i)
        .collect();
    BuchiAutomaton::new(f.atomic_props(), names, 0, accepting, edges)
        .expect("tableau construction produces a well-formed automaton")
}
