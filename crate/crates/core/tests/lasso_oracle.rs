mod common;

use common::RawGraph;
use taskforge::synthesis::shortest_accepting_lasso;

fn check_shape(g: &RawGraph) {
    let b = shortest_accepting_lasso(&g.product());
    if b.is_empty() {
        return;
    }
    let weight = |a: usize, c: usize| {
        g.edges[a]
            .iter()
            .find(|&&(t, _)| t == c)
            .map(|&(_, w)| w)
            .expect("consecutive steps are edges")
    };
    assert_eq!(b.prefix[0].node, 0);
    let prefix_cost: f64 = b.prefix.windows(2).map(|p| weight(p[0].node, p[1].node)).sum();
    assert_eq!(prefix_cost, b.cost);
    let last = b.prefix.last().unwrap().node;
    assert!(g.accepting[last]);
    assert_eq!(b.cycle.last().unwrap().node, last);
    let mut cyc = vec![last];
    cyc.extend(b.cycle.iter().map(|s| s.node));
    let cycle_cost: f64 = cyc.windows(2).map(|p| weight(p[0], p[1])).sum();
    assert_eq!(cycle_cost, b.cycle_cost);
}

#[test]
fn small_graphs_match_simple_path_enumeration() {
    let mut rng = common::rng(21);
    for _ in 0..300 {
        let n = 1 + (rand::Rng::random_range(&mut rng, 0..10));
        let g = RawGraph::random(&mut rng, n, 3, 0.3, 5);
        let got = shortest_accepting_lasso(&g.product()).cost;
        assert_eq!(got, common::enumerated_prefix_cost(&g));
        assert_eq!(got, common::oracle_prefix_cost(&g));
        check_shape(&g);
    }
}

#[test]
fn larger_graphs_match_bounded_walks() {
    let mut rng = common::rng(22);
    for _ in 0..100 {
        let n = rand::Rng::random_range(&mut rng, 10..=60);
        let g = RawGraph::random(&mut rng, n, 3, 0.1, 9);
        assert_eq!(shortest_accepting_lasso(&g.product()).cost, common::oracle_prefix_cost(&g));
        check_shape(&g);
    }
}

#[test]
fn doubling_cycle_weights_keeps_cost() {
    let mut rng = common::rng(23);
    for _ in 0..100 {
        let n = rand::Rng::random_range(&mut rng, 2..=20);
        let g = RawGraph::random(&mut rng, n, 3, 0.3, 5);
        let b = shortest_accepting_lasso(&g.product());
        if b.is_empty() {
            continue;
        }
        let prefix: Vec<(usize, usize)> = b.prefix.windows(2).map(|p| (p[0].node, p[1].node)).collect();
        let last = b.prefix.last().unwrap().node;
        let mut cyc = vec![last];
        cyc.extend(b.cycle.iter().map(|s| s.node));
        let cycle: Vec<(usize, usize)> = cyc.windows(2).map(|p| (p[0], p[1])).collect();
        if cycle.iter().any(|e| prefix.contains(e)) {
            continue;
        }
        let mut h = RawGraph { accepting: g.accepting.clone(), edges: g.edges.clone() };
        for &(a, c) in &cycle {
            for e in h.edges[a].iter_mut() {
                if e.0 == c {
                    e.1 *= 2.0;
                }
            }
        }
        assert_eq!(shortest_accepting_lasso(&h.product()).cost, b.cost);
    }
}
