//! Direct LTL semantics on lasso words.
//!
//! Every subformula gets a truth vector over the finite quotient of positions
//! `0 .. |prefix| + |loop|`, where the last position's successor is the start
//! of the loop. Until is a least fixpoint and Release a greatest fixpoint of
//! their one-step unfoldings over that successor function.

use super::{Formula, LassoWord};

/// Whether `prefix · loop^ω` satisfies `f` at position 0.
pub fn eval_lasso(f: &Formula, w: &LassoWord) -> bool {
    truth(f, w)[0]
}

fn truth(f: &Formula, w: &LassoWord) -> Vec<bool> {
    let n = w.positions();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Prop(p) => (0..n).map(|i| w.letter(i).contains(p)).collect(),
        Formula::Not(g) => truth(g, w).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => zip(truth(a, w), truth(b, w), |x, y| x && y),
        Formula::Or(a, b) => zip(truth(a, w), truth(b, w), |x, y| x || y),
        Formula::Implies(a, b) => zip(truth(a, w), truth(b, w), |x, y| !x || y),
        Formula::Iff(a, b) => zip(truth(a, w), truth(b, w), |x, y| x == y),
        Formula::Next(g) => {
            let inner = truth(g, w);
            (0..n).map(|i| inner[w.succ(i)]).collect()
        }
        Formula::Until(a, b) => until(&truth(a, w), &truth(b, w), w),
        Formula::Release(a, b) => release(&truth(a, w), &truth(b, w), w),
        Formula::Eventually(g) => until(&vec![true; n], &truth(g, w), w),
        Formula::Always(g) => release(&vec![false; n], &truth(g, w), w),
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn until(a: &[bool], b: &[bool], w: &LassoWord) -> Vec<bool> {
    fixpoint(vec![false; a.len()], w, |v, i| b[i] || (a[i] && v[w.succ(i)]))
}

fn release(a: &[bool], b: &[bool], w: &LassoWord) -> Vec<bool> {
    fixpoint(vec![true; a.len()], w, |v, i| b[i] && (a[i] || v[w.succ(i)]))
}

fn fixpoint(
    mut v: Vec<bool>,
    w: &LassoWord,
    step: impl Fn(&[bool], usize) -> bool,
) -> Vec<bool> {
    // Monotone in v; stabilizes after at most |positions| + 1 sweeps.
    loop {
        let mut changed = false;
        for i in (0..w.positions()).rev() {
            let nv = step(&v, i);
            if nv != v[i] {
                v[i] = nv;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, Letter};

    fn letter(props: &[&str]) -> Letter {
        props.iter().copied().collect()
    }

    fn word(prefix: &[&[&str]], cycle: &[&[&str]]) -> LassoWord {
        LassoWord::new(
            prefix.iter().map(|l| letter(l)).collect(),
            cycle.iter().map(|l| letter(l)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn recurrence_on_alternating_loop() {
        let f = parse_ltl("G F p").unwrap();
        assert!(eval_lasso(&f, &word(&[], &[&["p"], &[]])));
    }

    #[test]
    fn eventuality_never_met() {
        let f = parse_ltl("F p").unwrap();
        assert!(!eval_lasso(&f, &word(&[&[]], &[&[]])));
    }

    #[test]
    fn pick_up_then_drop_off_sequence() {
        let f = parse_ltl(
            "(!drop_off U (room_2 & pick_up)) & (!drop_off U (room_3 & drop_off))",
        )
        .unwrap();
        let w = word(&[&["room_2", "pick_up"], &["room_3", "drop_off"]], &[&[]]);
        assert!(eval_lasso(&f, &w));
        // Dropping off before picking up violates the first conjunct.
        let bad = word(&[&["room_3", "drop_off"], &["room_2", "pick_up"]], &[&[]]);
        assert!(!eval_lasso(&f, &bad));
    }

    #[test]
    fn next_wraps_into_loop() {
        let f = parse_ltl("X X X p").unwrap();
        // Position 3 is the first loop letter again.
        assert!(!eval_lasso(&f, &word(&[&[]], &[&[], &["p"]])));
        assert!(eval_lasso(&f, &word(&[&[]], &[&["p"], &[]])));
    }

    #[test]
    fn release_holds_forever_when_never_released() {
        let f = parse_ltl("a R b").unwrap();
        assert!(eval_lasso(&f, &word(&[], &[&["b"]])));
        assert!(!eval_lasso(&f, &word(&[&["b"]], &[&[]])));
        assert!(eval_lasso(&f, &word(&[&["b"], &["a", "b"]], &[&[]])));
    }

    #[test]
    fn letters_outside_the_formula_are_ignored() {
        let f = parse_ltl("G !a").unwrap();
        assert!(eval_lasso(&f, &word(&[&["b", "c"]], &[&["z"]])));
    }
}
