use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{BuchiAutomaton, Edge, Guard, StateId};

/// State of an intersection automaton: one state of each operand plus the
/// round-robin counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntersectionState {
    pub left: StateId,
    pub right: StateId,
    pub counter: u8,
}

impl IntersectionState {
    /// Counter after moving to `(left_target, right_target)`.
    ///
    /// 0 waits for a left accepting target, 1 waits for a right accepting
    /// target, 2 (accepting) always returns to 0.
    pub fn next_counter(counter: u8, left_accepting: bool, right_accepting: bool) -> u8 {
        match counter {
            0 if left_accepting => 1,
            0 => 0,
            1 if right_accepting => 2,
            1 => 1,
            _ => 0,
        }
    }
}

/// Intersection of two automata, possibly over different alphabets.
///
/// The result's alphabet is the union. A product edge carries the conjunction
/// of the component guards; since each guard only mentions its own alphabet,
/// this reads each letter projected onto each operand's propositions.
/// Only states reachable from the initial triple are built.
pub fn intersect(b1: &BuchiAutomaton, b2: &BuchiAutomaton) -> BuchiAutomaton {
    intersect_with_states(b1, b2).0
}

/// [`intersect`], also returning the triple behind every result state.
pub fn intersect_with_states(
    b1: &BuchiAutomaton,
    b2: &BuchiAutomaton,
) -> (BuchiAutomaton, Vec<IntersectionState>) {
    let start = IntersectionState {
        left: b1.initial(),
        right: b2.initial(),
        counter: 0,
    };
    // Operands reuse a few guards on many edges; conjoin each pair once.
    let (g1, ids1) = intern_guards(b1);
    let (g2, ids2) = intern_guards(b2);
    let mut conj: HashMap<(usize, usize), Option<Guard>> = HashMap::new();
    let mut ids = HashMap::from([(start, 0usize)]);
    let mut states = vec![start];
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(sid) = queue.pop_front() {
        let s = states[sid];
        let mut out: BTreeMap<usize, Guard> = BTreeMap::new();
        for (e1, &i1) in b1.edges(s.left).iter().zip(&ids1[s.left]) {
            for (e2, &i2) in b2.edges(s.right).iter().zip(&ids2[s.right]) {
                let guard = conj.entry((i1, i2)).or_insert_with(|| {
                    let g = g1[i1].and(g2[i2]);
                    (!g.is_false()).then_some(g)
                });
                let Some(guard) = guard else {
                    continue;
                };
                let t = IntersectionState {
                    left: e1.target,
                    right: e2.target,
                    counter: IntersectionState::next_counter(
                        s.counter,
                        b1.is_accepting(e1.target),
                        b2.is_accepting(e2.target),
                    ),
                };
                let tid = *ids.entry(t).or_insert_with(|| {
                    states.push(t);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                out.entry(tid)
                    .and_modify(|g| *g = g.or(guard))
                    .or_insert_with(|| guard.clone());
            }
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

    let alphabet = b1.alphabet().union(b2.alphabet()).cloned().collect();
    let names = states
        .iter()
        .map(|s| format!("({}, {}, {})", b1.name(s.left), b2.name(s.right), s.counter))
        .collect();
    let accepting = states
        .iter()
        .enumerate()
        .filter(|(_, s)| s.counter == 2)
        .map(|(i, _)| i)
        .collect();
    let product = BuchiAutomaton::new(alphabet, names, 0, accepting, edges)
        .expect("intersection of well-formed automata is well-formed");
    (product, states)
}

/// Distinct guards of `b` and, per state, the guard index of each edge.
fn intern_guards(b: &BuchiAutomaton) -> (Vec<&Guard>, Vec<Vec<usize>>) {
    let mut guards = Vec::new();
    let mut index: HashMap<&Guard, usize> = HashMap::new();
    let per_state = b
        .states()
        .map(|z| {
            b.edges(z)
                .iter()
                .map(|e| {
                    *index.entry(&e.guard).or_insert_with(|| {
                        guards.push(&e.guard);
                        guards.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    (guards, per_state)
}
