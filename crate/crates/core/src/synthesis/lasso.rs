use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::graph;
use crate::ltl::{LassoWord, Letter};

use super::ProductGraph;

/// One position of a behavior.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    /// Product-graph node id.
    pub node: usize,
    pub robot_state: usize,
    pub buchi_state: usize,
    pub label: Letter,
}

/// An accepting lasso `q0 … qℓ (c1 … ck)^ω` with `ck = qℓ` accepting.
///
/// `cost` sums prefix edge weights only; an infeasible behavior is empty
/// with infinite cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Behavior {
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
    #[serde(serialize_with = "serialize_cost")]
    pub cost: f64,
    #[serde(serialize_with = "serialize_cost")]
    pub cycle_cost: f64,
}

pub(crate) fn serialize_cost<S: serde::Serializer>(c: &f64, s: S) -> Result<S::Ok, S::Error> {
    if c.is_finite() {
        s.serialize_f64(*c)
    } else {
        s.serialize_none()
    }
}

impl Behavior {
    pub fn empty() -> Self {
        Behavior {
            prefix: Vec::new(),
            cycle: Vec::new(),
            cost: f64::INFINITY,
            cycle_cost: f64::INFINITY,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    /// Number of prefix edges (ℓ).
    pub fn prefix_len(&self) -> usize {
        self.prefix.len().saturating_sub(1)
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// Step reached after walking `t` edges along prefix then cycle.
    pub fn position(&self, t: usize) -> Option<&Step> {
        if self.is_empty() {
            return None;
        }
        let l = self.prefix_len();
        if t <= l {
            Some(&self.prefix[t])
        } else {
            Some(&self.cycle[(t - l - 1) % self.cycle.len()])
        }
    }

    /// Labels of every visited state, `L(q0) L(q1) …`.
    pub fn label_trace(&self) -> Option<LassoWord> {
        if self.is_empty() {
            return None;
        }
        let l = self.prefix_len();
        let prefix = self.prefix[..l].iter().map(|s| s.label.clone()).collect();
        // The loop starts at qℓ and walks c1 … c(k-1) before returning.
        let k = self.cycle.len();
        let cycle = std::iter::once(&self.prefix[l])
            .chain(&self.cycle[..k - 1])
            .map(|s| s.label.clone())
            .collect();
        LassoWord::new(prefix, cycle)
    }

    /// Letters read by the automaton along the lasso, `L(q1) L(q2) …`. The
    /// first state's label is not read.
    pub fn consumed_word(&self) -> Option<LassoWord> {
        if self.is_empty() {
            return None;
        }
        let prefix = self.prefix[1..].iter().map(|s| s.label.clone()).collect();
        let cycle = self.cycle.iter().map(|s| s.label.clone()).collect();
        LassoWord::new(prefix, cycle)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Item {
    cost: f64,
    node: usize,
}

impl Eq for Item {}

impl Ord for Item {
    // Min-heap on (cost, node).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from the given seeds `(node, initial cost, predecessor)`.
fn dijkstra(
    g: &ProductGraph,
    seeds: &[(usize, f64, Option<usize>)],
) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = g.num_states();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut heap = BinaryHeap::new();
    for &(v, c, p) in seeds {
        if c < dist[v] {
            dist[v] = c;
            pred[v] = p;
            heap.push(Item { cost: c, node: v });
        }
    }
    let mut done = vec![false; n];
    while let Some(Item { cost, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        for &(t, w) in g.edges(node) {
            let c = cost + w;
            if c < dist[t] {
                dist[t] = c;
                pred[t] = Some(node);
                heap.push(Item { cost: c, node: t });
            }
        }
    }
    (dist, pred)
}

fn walk_back(pred: &[Option<usize>], from: usize, stop: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut path = vec![from];
    let mut v = from;
    while !stop(v) {
        v = pred[v].expect("predecessor chain reaches the source");
        path.push(v);
    }
    path.reverse();
    path
}

/// Minimum nonempty cycle through `f`: its cost and the nodes `c1 … ck = f`.
fn min_cycle(g: &ProductGraph, f: usize) -> Option<(f64, Vec<usize>)> {
    // Seed with f's successors, remembering f as their predecessor; a
    // self-loop seeds f itself.
    let seeds: Vec<(usize, f64, Option<usize>)> =
        g.edges(f).iter().map(|&(t, w)| (t, w, Some(f))).collect();
    let (dist, pred) = dijkstra(g, &seeds);
    if !dist[f].is_finite() {
        return None;
    }
    // Walk back from f (as cycle end) to the first node after f.
    let mut path = vec![f];
    let mut v = pred[f].expect("cycle end has a predecessor");
    while v != f {
        path.push(v);
        v = pred[v].expect("cycle predecessor chain reaches f");
    }
    path.reverse();
    Some((dist[f], path))
}

/// Minimum-cost accepting lasso of `g`.
///
/// Among accepting nodes lying on a cycle, picks the one with the cheapest
/// path from the initial node; ties go to the cheaper cycle, then the smaller
/// node id. Returns [`Behavior::empty`] when no accepting node lies on a
/// reachable cycle.
pub fn shortest_accepting_lasso(g: &ProductGraph) -> Behavior {
    let (dist, pred) = dijkstra(g, &[(0, 0.0, None)]);
    let cyclic = graph::on_cycle(g.num_states(), 0, |q| {
        g.edges(q).iter().map(|&(t, _)| t).collect::<Vec<_>>()
    });
    let best_prefix = (0..g.num_states())
        .filter(|&q| g.is_accepting(q) && cyclic[q] && dist[q].is_finite())
        .map(|q| dist[q])
        .min_by(f64::total_cmp);
    let Some(best_prefix) = best_prefix else {
        return Behavior::empty();
    };
    let mut chosen: Option<(f64, usize, Vec<usize>)> = None;
    for q in 0..g.num_states() {
        if !(g.is_accepting(q) && cyclic[q] && dist[q] == best_prefix) {
            continue;
        }
        let (cost, nodes) = min_cycle(g, q).expect("node lies on a cycle");
        if chosen.as_ref().is_none_or(|(c, _, _)| cost < *c) {
            chosen = Some((cost, q, nodes));
        }
    }
    let (cycle_cost, accept, cycle_nodes) = chosen.expect("at least one candidate");
    let prefix_nodes = walk_back(&pred, accept, |v| v == 0);
    let step = |q: usize| {
        let s = g.state(q);
        Step {
            node: q,
            robot_state: s.robot,
            buchi_state: s.buchi,
            label: g.label(q).clone(),
        }
    };
    Behavior {
        prefix: prefix_nodes.into_iter().map(step).collect(),
        cycle: cycle_nodes.into_iter().map(step).collect(),
        cost: best_prefix,
        cycle_cost,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, accepting: &[usize], edges: &[(usize, usize, f64)]) -> ProductGraph {
        let mut adj = vec![Vec::new(); n];
        for &(a, b, w) in edges {
            adj[a].push((b, w));
        }
        let acc = (0..n).map(|q| accepting.contains(&q)).collect();
        ProductGraph::from_adjacency(acc, adj)
    }

    #[test]
    fn line_world_prefix_cost() {
        // room_1 - room_2 - room_3, unit moves, free self-loops; only room_3 accepts.
        let g = graph(
            3,
            &[2],
            &[
                (0, 0, 0.0),
                (0, 1, 1.0),
                (1, 0, 1.0),
                (1, 1, 0.0),
                (1, 2, 1.0),
                (2, 1, 1.0),
                (2, 2, 0.0),
            ],
        );
        let b = shortest_accepting_lasso(&g);
        assert_eq!(b.cost, 2.0);
        assert_eq!(b.cycle_cost, 0.0);
        let nodes: Vec<usize> = b.prefix.iter().map(|s| s.node).collect();
        assert_eq!(nodes, vec![0, 1, 2]);
        assert_eq!(b.cycle.iter().map(|s| s.node).collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn accepting_initial_self_loop() {
        let g = graph(1, &[0], &[(0, 0, 0.0)]);
        let b = shortest_accepting_lasso(&g);
        assert_eq!(b.cost, 0.0);
        assert_eq!(b.prefix.len(), 1);
        assert_eq!(b.prefix_len(), 0);
    }

    #[test]
    fn acyclic_accepting_states_are_infeasible() {
        // 0 -> 1 (accepting) -> 2 -> 2, and 1 is never revisited.
        let g = graph(3, &[1], &[(0, 1, 1.0), (1, 2, 1.0), (2, 2, 0.0)]);
        let b = shortest_accepting_lasso(&g);
        assert!(b.is_empty());
        assert!(b.cost.is_infinite());
        assert!(b.label_trace().is_none());
    }

    #[test]
    fn prefers_cheaper_cycle_on_equal_prefix() {
        // Two accepting nodes at prefix cost 1; node 2 has a cheaper cycle.
        let g = graph(
            4,
            &[1, 2],
            &[
                (0, 1, 1.0),
                (0, 2, 1.0),
                (1, 3, 5.0),
                (3, 1, 5.0),
                (2, 2, 1.0),
            ],
        );
        let b = shortest_accepting_lasso(&g);
        assert_eq!(b.cost, 1.0);
        assert_eq!(b.cycle_cost, 1.0);
        assert_eq!(b.prefix.last().unwrap().node, 2);
    }

    #[test]
    fn cost_ignores_cycle_weight() {
        let edges = |w: f64| vec![(0, 1, 2.0), (1, 2, w), (2, 1, w)];
        let cheap = shortest_accepting_lasso(&graph(3, &[1], &edges(1.0)));
        let dear = shortest_accepting_lasso(&graph(3, &[1], &edges(10.0)));
        assert_eq!(cheap.cost, dear.cost);
        assert_eq!(dear.cycle_cost, 20.0);
    }

    #[test]
    fn walking_the_lasso_is_periodic() {
        let g = graph(4, &[2], &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 2, 1.0)]);
        let b = shortest_accepting_lasso(&g);
        assert_eq!(b.prefix_len(), 2);
        assert_eq!(b.cycle_len(), 2);
        for t in 2..10 {
            assert_eq!(b.position(t), b.position(t + b.cycle_len()));
        }
        assert_eq!(b.position(3).unwrap().node, 3);
        assert_eq!(b.position(4).unwrap().node, 2);
    }
}
