use std::collections::BTreeSet;
use std::fmt;

/// LTL abstract syntax tree.
///
/// `Release` is not part of the surface grammar's primitive set but is needed
/// to push negation through `Until`; it is printed and parsed as `R`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Self {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Self {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Self {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn iff(f: Formula, g: Formula) -> Self {
        Formula::Iff(Box::new(f), Box::new(g))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(f: Formula, g: Formula) -> Self {
        Formula::Until(Box::new(f), Box::new(g))
    }

    pub fn release(f: Formula, g: Formula) -> Self {
        Formula::Release(Box::new(f), Box::new(g))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    /// Left-nested conjunction of `parts` in the given order; `True` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Names of all propositions occurring in the formula.
    pub fn atomic_props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Prop(p) => {
                out.insert(p.clone());
            }
            Formula::Not(f) | Formula::Next(f) | Formula::Eventually(f) | Formula::Always(f) => {
                f.collect_props(out)
            }
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g)
            | Formula::Until(f, g)
            | Formula::Release(f, g) => {
                f.collect_props(out);
                g.collect_props(out);
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => 1,
            Formula::Not(f) | Formula::Next(f) | Formula::Eventually(f) | Formula::Always(f) => {
                1 + f.size()
            }
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g)
            | Formula::Until(f, g)
            | Formula::Release(f, g) => 1 + f.size() + g.size(),
        }
    }

    /// True when negation only appears directly above propositions and no
    /// implication, equivalence, eventually or always nodes remain.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => true,
            Formula::Not(f) => matches!(**f, Formula::Prop(_)),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Until(f, g)
            | Formula::Release(f, g) => f.is_nnf() && g.is_nnf(),
            Formula::Next(f) => f.is_nnf(),
            Formula::Implies(..) | Formula::Iff(..) | Formula::Eventually(_) | Formula::Always(_) => {
                false
            }
        }
    }

    /// Negation normal form over `True`, `False`, literals, `And`, `Or`,
    /// `Next`, `Until` and `Release`.
    ///
    /// `F f` becomes `true U f` and `G f` becomes `false R f`.
    pub fn to_nnf(&self) -> Formula {
        nnf(self, false)
    }
}

fn nnf(f: &Formula, negated: bool) -> Formula {
    use Formula::*;
    match (f, negated) {
        (True, false) | (False, true) => True,
        (False, false) | (True, true) => False,
        (Prop(p), false) => Prop(p.clone()),
        (Prop(p), true) => Formula::not(Prop(p.clone())),
        (Not(g), neg) => nnf(g, !neg),
        (And(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
        (And(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
        (Or(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
        (Or(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
        (Implies(a, b), false) => Formula::or(nnf(a, true), nnf(b, false)),
        (Implies(a, b), true) => Formula::and(nnf(a, false), nnf(b, true)),
        (Iff(a, b), false) => Formula::or(
            Formula::and(nnf(a, false), nnf(b, false)),
            Formula::and(nnf(a, true), nnf(b, true)),
        ),
        (Iff(a, b), true) => Formula::or(
            Formula::and(nnf(a, false), nnf(b, true)),
            Formula::and(nnf(a, true), nnf(b, false)),
        ),
        (Next(g), neg) => Formula::next(nnf(g, neg)),
        (Until(a, b), false) => Formula::until(nnf(a, false), nnf(b, false)),
        (Until(a, b), true) => Formula::release(nnf(a, true), nnf(b, true)),
        (Release(a, b), false) => Formula::release(nnf(a, false), nnf(b, false)),
        (Release(a, b), true) => Formula::until(nnf(a, true), nnf(b, true)),
        (Eventually(g), false) => Formula::until(True, nnf(g, false)),
        (Eventually(g), true) => Formula::release(False, nnf(g, true)),
        (Always(g), false) => Formula::release(False, nnf(g, false)),
        (Always(g), true) => Formula::until(True, nnf(g, true)),
    }
}

/// Fully parenthesized binary operators, so the output reparses to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Prop(p) => write!(f, "{p}"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::Next(g) => write!(f, "X {g}"),
            Formula::Eventually(g) => write!(f, "F {g}"),
            Formula::Always(g) => write!(f, "G {g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}
