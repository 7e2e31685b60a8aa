//! Random formulas, lasso words and graphs shared by the integration tests.
#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taskforge::ltl::{Formula, LassoWord, Letter};
use taskforge::synthesis::ProductGraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula of depth at most `depth` over `props`, using every
/// operator of the surface syntax.
pub fn formula(rng: &mut impl Rng, props: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::prop(*props.choose(rng).unwrap()),
        };
    }
    let d = depth - 1;
    match rng.random_range(0..11) {
        0 => Formula::not(formula(rng, props, d)),
        1 => Formula::and(formula(rng, props, d), formula(rng, props, d)),
        2 => Formula::or(formula(rng, props, d), formula(rng, props, d)),
        3 => Formula::implies(formula(rng, props, d), formula(rng, props, d)),
        4 => Formula::iff(formula(rng, props, d), formula(rng, props, d)),
        5 => Formula::next(formula(rng, props, d)),
        6 => Formula::until(formula(rng, props, d), formula(rng, props, d)),
        7 => Formula::release(formula(rng, props, d), formula(rng, props, d)),
        8 => Formula::eventually(formula(rng, props, d)),
        9 => Formula::always(formula(rng, props, d)),
        _ => Formula::prop(*props.choose(rng).unwrap()),
    }
}

pub fn letter(rng: &mut impl Rng, props: &[&str]) -> Letter {
    props
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .copied()
        .collect()
}

/// Random lasso word with prefix length `0..=max_prefix` and loop length
/// `1..=max_loop`.
pub fn word(rng: &mut impl Rng, props: &[&str], max_prefix: usize, max_loop: usize) -> LassoWord {
    let p = rng.random_range(0..=max_prefix);
    let l = rng.random_range(1..=max_loop);
    LassoWord::new(
        (0..p).map(|_| letter(rng, props)).collect(),
        (0..l).map(|_| letter(rng, props)).collect(),
    )
    .unwrap()
}

/// Random weighted graph with integer weights; node 0 is initial.
pub struct RawGraph {
    pub accepting: Vec<bool>,
    pub edges: Vec<Vec<(usize, f64)>>,
}

impl RawGraph {
    pub fn random(rng: &mut impl Rng, n: usize, max_out: usize, accept_p: f64, max_w: u32) -> Self {
        let accepting = (0..n).map(|_| rng.random_bool(accept_p)).collect();
        let edges = (0..n)
            .map(|_| {
                let k = rng.random_range(0..=max_out);
                let mut out: Vec<(usize, f64)> = Vec::new();
                for _ in 0..k {
                    let t = rng.random_range(0..n);
                    if out.iter().all(|&(x, _)| x != t) {
                        out.push((t, f64::from(rng.random_range(0..=max_w))));
                    }
                }
                out
            })
            .collect();
        RawGraph { accepting, edges }
    }

    pub fn product(&self) -> ProductGraph {
        ProductGraph::from_adjacency(self.accepting.clone(), self.edges.clone())
    }
}

/// Cheapest walk cost from `src` to every node using at most `max_len`
/// edges, by plain layered relaxation.
pub fn bounded_walks(edges: &[Vec<(usize, f64)>], src: usize, max_len: usize) -> Vec<f64> {
    let n = edges.len();
    let mut best = vec![f64::INFINITY; n];
    best[src] = 0.0;
    let mut layer = best.clone();
    for _ in 0..max_len {
        let mut next = vec![f64::INFINITY; n];
        for (v, out) in edges.iter().enumerate() {
            if layer[v].is_finite() {
                for &(t, w) in out {
                    next[t] = next[t].min(layer[v] + w);
                }
            }
        }
        for v in 0..n {
            best[v] = best[v].min(next[v]);
        }
        layer = next;
    }
    best
}

/// Cheapest nonempty cycle through `f` using at most `n` edges.
pub fn bounded_cycle(edges: &[Vec<(usize, f64)>], f: usize) -> f64 {
    edges[f]
        .iter()
        .map(|&(t, w)| w + bounded_walks(edges, t, edges.len())[f])
        .fold(f64::INFINITY, f64::min)
}

/// Minimum prefix cost over accepting nodes on a cycle, by exhaustive
/// relaxation over all walks of length at most `|Q|`.
pub fn oracle_prefix_cost(g: &RawGraph) -> f64 {
    let n = g.edges.len();
    let from0 = bounded_walks(&g.edges, 0, n);
    (0..n)
        .filter(|&f| g.accepting[f] && bounded_cycle(&g.edges, f).is_finite())
        .map(|f| from0[f])
        .fold(f64::INFINITY, f64::min)
}

/// Same optimum by depth-first enumeration of simple paths; only for small
/// graphs.
pub fn enumerated_prefix_cost(g: &RawGraph) -> f64 {
    fn dfs(g: &RawGraph, v: usize, cost: f64, seen: &mut Vec<bool>, out: &mut Vec<f64>) {
        out[v] = out[v].min(cost);
        for &(t, w) in &g.edges[v] {
            if !seen[t] {
                seen[t] = true;
                dfs(g, t, cost + w, seen, out);
                seen[t] = false;
            }
        }
    }
    fn on_cycle(g: &RawGraph, f: usize) -> bool {
        let mut stack: Vec<usize> = g.edges[f].iter().map(|&(t, _)| t).collect();
        let mut seen = vec![false; g.edges.len()];
        while let Some(v) = stack.pop() {
            if v == f {
                return true;
            }
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(g.edges[v].iter().map(|&(t, _)| t));
            }
        }
        false
    }
    let n = g.edges.len();
    let mut best = vec![f64::INFINITY; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    dfs(g, 0, 0.0, &mut seen, &mut best);
    (0..n)
        .filter(|&f| g.accepting[f] && on_cycle(g, f))
        .map(|f| best[f])
        .fold(f64::INFINITY, f64::min)
}
