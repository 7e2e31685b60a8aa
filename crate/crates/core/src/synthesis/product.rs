use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::buchi::{BuchiAutomaton, StateId};
use crate::ltl::Letter;
use crate::models::RobotModel;

/// A product state: robot composite state and automaton state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub robot: usize,
    pub buchi: StateId,
}

/// Product of a robot model with a Büchi automaton, restricted to the part
/// reachable from the initial state (always id 0).
///
/// Moving to `(s', z')` reads the letter `L(s') ∩ AP^φ`, so the initial
/// state's own label is never read by the automaton.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    alphabet: BTreeSet<String>,
    states: Vec<ProductState>,
    /// Distinct letters; `label_ids` points into this per state.
    letters: Vec<Letter>,
    label_ids: Vec<u32>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(usize, f64)>>,
}

impl ProductGraph {
    /// Builds a graph directly from adjacency lists; node 0 is initial. Labels
    /// are empty and each node's product state is `(node, 0)`.
    pub fn from_adjacency(accepting: Vec<bool>, edges: Vec<Vec<(usize, f64)>>) -> Self {
        assert_eq!(accepting.len(), edges.len());
        assert!(!edges.is_empty(), "graph needs an initial node");
        let n = edges.len();
        assert!(
            edges.iter().flatten().all(|&(t, w)| t < n && w >= 0.0),
            "edge targets must exist and weights must be nonnegative"
        );
        ProductGraph {
            alphabet: BTreeSet::new(),
            states: (0..n).map(|i| ProductState { robot: i, buchi: 0 }).collect(),
            letters: vec![Letter::empty()],
            label_ids: vec![0; n],
            accepting,
            edges,
        }
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn state(&self, q: usize) -> ProductState {
        self.states[q]
    }

    pub fn label(&self, q: usize) -> &Letter {
        &self.letters[self.label_ids[q] as usize]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn edges(&self, q: usize) -> &[(usize, f64)] {
        &self.edges[q]
    }

    pub fn index_of(&self, s: ProductState) -> Option<usize> {
        self.states.iter().position(|&x| x == s)
    }
}

const UNSEEN: u32 = u32::MAX;

/// Builds `a × b` from `(a.initial(), b.initial())`.
pub fn build_product(a: &RobotModel, b: &BuchiAutomaton) -> ProductGraph {
    let alphabet = b.alphabet().clone();
    // Robot states mostly share a handful of projected letters.
    let mut letters: Vec<Letter> = Vec::new();
    let mut letter_index: HashMap<Letter, u32> = HashMap::new();
    let letter_of: Vec<u32> = (0..a.num_states())
        .map(|s| {
            let l = Letter(a.label(s).intersection(&alphabet).cloned().collect());
            *letter_index.entry(l).or_insert_with_key(|l| {
                letters.push(l.clone());
                (letters.len() - 1) as u32
            })
        })
        .collect();

    // Automaton successors per (state, letter), filled on first use.
    let nl = letters.len();
    let mut succ: Vec<Option<Vec<StateId>>> = vec![None; b.num_states() * nl];
    let nb = b.num_states();
    let mut ids = vec![UNSEEN; a.num_states() * nb];

    let start = ProductState {
        robot: a.initial(),
        buchi: b.initial(),
    };
    ids[start.robot * nb + start.buchi] = 0;
    let mut states = vec![start];
    let mut label_ids = vec![letter_of[start.robot]];
    let mut edges: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(qid) = queue.pop_front() {
        let q = states[qid];
        let mut out = Vec::new();
        for &(s2, w) in a.transitions(q.robot) {
            let l = letter_of[s2];
            let targets = succ[q.buchi * nl + l as usize].get_or_insert_with(|| {
                let sigma = &letters[l as usize];
                b.edges(q.buchi)
                    .iter()
                    .filter(|e| e.guard.sat_by(sigma))
                    .map(|e| e.target)
                    .collect()
            });
            for &z2 in targets.iter() {
                let slot = &mut ids[s2 * nb + z2];
                if *slot == UNSEEN {
                    *slot = states.len() as u32;
                    states.push(ProductState { robot: s2, buchi: z2 });
                    label_ids.push(l);
                    queue.push_back(states.len() - 1);
                }
                out.push((*slot as usize, w));
            }
        }
        if edges.len() <= qid {
            edges.resize_with(qid + 1, Vec::new);
        }
        edges[qid] = out;
    }
    edges.resize_with(states.len(), Vec::new);
    let accepting = states.iter().map(|q| b.is_accepting(q.buchi)).collect();
    ProductGraph {
        alphabet,
        states,
        letters,
        label_ids,
        accepting,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buchi::translate;
    use crate::ltl::{parse_ltl, Formula};
    use crate::models::{compose_robot, CapabilityTS, StateSpec};

    fn motion(rooms: &[&str], links: &[(&str, &str, f64)]) -> CapabilityTS {
        let regions: Vec<String> = rooms.iter().map(|s| s.to_string()).collect();
        CapabilityTS::motion(
            &regions,
            links.iter().map(|(a, b, w)| (a.to_string(), b.to_string(), *w)),
        )
        .unwrap()
    }

    fn two_rooms() -> CapabilityTS {
        motion(
            &["room_1", "room_2"],
            &[
                ("room_1", "room_1", 0.0),
                ("room_1", "room_2", 1.0),
                ("room_2", "room_1", 1.0),
                ("room_2", "room_2", 0.0),
            ],
        )
    }

    #[test]
    fn universal_automaton_gives_robot_graph() {
        let robot = compose_robot(&two_rooms(), &[], 1).unwrap();
        let g = build_product(&robot, &translate(&Formula::True));
        assert_eq!(g.num_states(), robot.num_states());
        for q in 0..g.num_states() {
            assert!(g.is_accepting(q));
            let s = g.state(q).robot;
            let mut mapped: Vec<(usize, f64)> = g
                .edges(q)
                .iter()
                .map(|&(t, w)| (g.state(t).robot, w))
                .collect();
            mapped.sort_by_key(|&(t, _)| t);
            assert_eq!(mapped, robot.transitions(s));
        }
    }

    #[test]
    fn labels_are_projected_onto_the_task_alphabet() {
        let cam = CapabilityTS::new(
            "camera",
            ["c"],
            vec![StateSpec::new("off", &[]), StateSpec::new("on", &["c"])],
            "off",
            [
                ("off".to_string(), "on".to_string(), 0.5),
                ("on".to_string(), "off".to_string(), 0.0),
            ],
        )
        .unwrap();
        let robot = compose_robot(&two_rooms(), &[cam], 1).unwrap();
        let g = build_product(&robot, &translate(&parse_ltl("F room_2").unwrap()));
        assert!(g.num_states() > 1);
        for q in 0..g.num_states() {
            assert!(!g.label(q).contains("c"));
        }
    }

    #[test]
    fn two_room_eventually_hand_enumeration() {
        let robot = compose_robot(&two_rooms(), &[], 1).unwrap();
        let b = translate(&parse_ltl("F room_2").unwrap());
        // The tableau for F room_2 has a waiting state {F room_2}#0 and a
        // fulfilled state {}#1 (accepting).
        assert_eq!(b.num_states(), 2);
        let g = build_product(&robot, &b);
        let r1 = robot.state_of(&["room_1"]).unwrap();
        let r2 = robot.state_of(&["room_2"]).unwrap();
        // Reading room_2 from (r1, wait) may fulfil (r2, done) or keep
        // waiting (r2, wait); (r1, done) follows from (r2, done).
        assert_eq!(g.num_states(), 4);
        let accepting: BTreeSet<ProductState> = (0..g.num_states())
            .filter(|&q| g.is_accepting(q))
            .map(|q| g.state(q))
            .collect();
        assert_eq!(
            accepting,
            BTreeSet::from([
                ProductState { robot: r1, buchi: 1 },
                ProductState { robot: r2, buchi: 1 }
            ])
        );
        // Staying in room_1 never fulfills the eventuality.
        assert!(g
            .edges(0)
            .iter()
            .any(|&(t, _)| g.state(t) == ProductState { robot: r1, buchi: 0 }));
    }
}
