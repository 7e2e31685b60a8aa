mod common;

use taskforge::buchi::{export_hoa, import_hoa, intersect, translate};
use taskforge::ltl::{eval_lasso, parse_ltl, Formula};

const PROPS: &[&str] = &["a", "b", "c"];

#[test]
fn translation_agrees_with_semantics() {
    let mut rng = common::rng(11);
    for _ in 0..150 {
        let f = common::formula(&mut rng, PROPS, 3);
        let b = translate(&f);
        for _ in 0..60 {
            let w = common::word(&mut rng, PROPS, 3, 3);
            assert_eq!(b.accepts_lasso(&w), eval_lasso(&f, &w), "{f} on {w}");
        }
    }
}

#[test]
fn intersection_with_disjoint_alphabets() {
    let mut rng = common::rng(12);
    let all = ["a", "b", "x", "y"];
    for _ in 0..60 {
        let f = common::formula(&mut rng, &["a", "b"], 3);
        let g = common::formula(&mut rng, &["x", "y"], 3);
        let (bf, bg) = (translate(&f), translate(&g));
        let both = intersect(&bf, &bg);
        for _ in 0..40 {
            let w = common::word(&mut rng, &all, 3, 3);
            let expect = bf.accepts_lasso(&w.restrict(bf.alphabet()))
                && bg.accepts_lasso(&w.restrict(bg.alphabet()));
            assert_eq!(both.accepts_lasso(&w), expect, "{f} & {g} on {w}");
        }
    }
}

#[test]
fn hoa_round_trip_preserves_language() {
    let mut rng = common::rng(13);
    for _ in 0..60 {
        let f = common::formula(&mut rng, PROPS, 3);
        let b = translate(&f);
        let back = import_hoa(&export_hoa(&b)).unwrap();
        assert_eq!(back.num_states(), b.num_states());
        assert_eq!(back.accepting(), b.accepting());
        for _ in 0..30 {
            let w = common::word(&mut rng, PROPS, 3, 3);
            assert_eq!(back.accepts_lasso(&w), b.accepts_lasso(&w));
        }
    }
}

#[test]
fn eventually_round_trips_on_many_words() {
    let b = translate(&parse_ltl("F p").unwrap());
    let back = import_hoa(&export_hoa(&b)).unwrap();
    let mut rng = common::rng(14);
    for _ in 0..100 {
        let w = common::word(&mut rng, &["p", "q"], 4, 3);
        assert_eq!(back.accepts_lasso(&w), b.accepts_lasso(&w));
    }
}

#[test]
fn empty_language_round_trip() {
    let b = translate(&parse_ltl("G a & F !a").unwrap());
    assert!(b.is_empty());
    assert!(import_hoa(&export_hoa(&b)).unwrap().is_empty());

    let text = "HOA: v1\nStates: 2\nStart: 0\nAP: 1 \"a\"\nacc-name: Buchi\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[0] 1\n[!0] 0\nState: 1\n[t] 1\n--END--\n";
    let none = import_hoa(text).unwrap();
    assert!(none.accepting().is_empty());
    let back = import_hoa(&export_hoa(&none)).unwrap();
    assert!(back.accepting().is_empty());
    assert_eq!(back.num_states(), 2);
}

#[test]
fn universal_automaton_hoa() {
    let text = export_hoa(&translate(&Formula::True));
    assert!(text.contains("States: 1"));
    assert!(text.contains("Acceptance: 1 Inf(0)"));
    assert!(text.contains("[t] 0 {0}"));
}

#[test]
fn intersect_with_universal_is_identity() {
    let mut rng = common::rng(15);
    let t = translate(&Formula::True);
    for _ in 0..40 {
        let f = common::formula(&mut rng, PROPS, 3);
        let b = translate(&f);
        let i = intersect(&b, &t);
        for _ in 0..20 {
            let w = common::word(&mut rng, PROPS, 2, 3);
            assert_eq!(i.accepts_lasso(&w), b.accepts_lasso(&w));
        }
    }
}

/// Residual language after restricting to a state equals the residual
/// formula's language.
#[test]
fn restriction_after_first_until() {
    let f = parse_ltl("(!(room_1 & scan) U (room_4 & scan)) & F (room_1 & scan)").unwrap();
    let b = translate(&f);
    let props = ["room_1", "room_4", "scan"];
    let residual = parse_ltl("F (room_1 & scan)").unwrap();
    let first: taskforge::ltl::Letter = ["room_4", "scan"].into_iter().collect();
    let mut rng = common::rng(16);
    // Some successor after reading room_4 & scan carries exactly the residual.
    let found = b.step(b.initial(), &first).any(|z| {
        let r = b.restrict_reachable(z).unwrap();
        (0..200).all(|_| {
            let w = common::word(&mut rng, &props, 3, 3);
            r.accepts_lasso(&w) == eval_lasso(&residual, &w)
        })
    });
    assert!(found);
}

#[test]
fn restriction_to_dead_state() {
    // Once `a` is violated nothing is accepted.
    let b = translate(&parse_ltl("G a").unwrap());
    let mut rng = common::rng(17);
    for z in b.states() {
        let r = b.restrict_reachable(z).unwrap();
        if r.is_empty() {
            for _ in 0..50 {
                assert!(!r.accepts_lasso(&common::word(&mut rng, &["a"], 2, 2)));
            }
        }
    }
    assert!(b.restrict_reachable(b.num_states()).is_err());
}
