use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::ltl::Letter;

/// A conjunction of literals: proposition name to required polarity.
pub type Cube = BTreeMap<String, bool>;

/// Propositional edge guard kept in disjunctive normal form.
///
/// The cube list is sorted, free of duplicates and of cubes subsumed by a
/// weaker cube. No cubes means false; a single empty cube means true.
/// Guards are immutable and cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Guard {
    cubes: Arc<[Cube]>,
}

impl Guard {
    pub fn top() -> Self {
        Guard {
            cubes: Arc::from([Cube::new()]),
        }
    }

    pub fn bottom() -> Self {
        Guard { cubes: Arc::from([]) }
    }

    pub fn literal(prop: impl Into<String>, positive: bool) -> Self {
        Guard {
            cubes: Arc::from([Cube::from([(prop.into(), positive)])]),
        }
    }

    pub fn from_cube(cube: Cube) -> Self {
        Guard {
            cubes: Arc::from([cube]),
        }
    }

    pub fn from_cubes(cubes: impl IntoIterator<Item = Cube>) -> Self {
        Guard {
            cubes: normalize(cubes.into_iter().collect()).into(),
        }
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn is_true(&self) -> bool {
        self.cubes.len() == 1 && self.cubes[0].is_empty()
    }

    pub fn is_false(&self) -> bool {
        self.cubes.is_empty()
    }

    /// Closed-world evaluation: propositions absent from the letter are false.
    pub fn sat_by(&self, letter: &Letter) -> bool {
        self.cubes
            .iter()
            .any(|c| c.iter().all(|(p, &pos)| letter.contains(p) == pos))
    }

    pub fn props(&self) -> BTreeSet<String> {
        self.cubes
            .iter()
            .flat_map(|c| c.keys().cloned())
            .collect()
    }

    pub fn and(&self, other: &Guard) -> Guard {
        let mut cubes = Vec::with_capacity(self.cubes.len() * other.cubes.len());
        for a in self.cubes.iter() {
            'next: for b in other.cubes.iter() {
                let mut merged = a.clone();
                for (p, &pos) in b {
                    match merged.get(p) {
                        Some(&existing) if existing != pos => continue 'next,
                        _ => {
                            merged.insert(p.clone(), pos);
                        }
                    }
                }
                cubes.push(merged);
            }
        }
        Guard::from_cubes(cubes)
    }

    pub fn or(&self, other: &Guard) -> Guard {
        Guard::from_cubes(self.cubes.iter().chain(other.cubes.iter()).cloned())
    }

    pub fn not(&self) -> Guard {
        // De Morgan: conjunction over cubes of the disjunction of flipped literals.
        self.cubes.iter().fold(Guard::top(), |acc, cube| {
            let clause = Guard::from_cubes(
                cube.iter()
                    .map(|(p, &pos)| Cube::from([(p.clone(), !pos)])),
            );
            acc.and(&clause)
        })
    }

    /// Semantic equivalence by truth-table comparison over the union of
    /// mentioned propositions.
    pub fn equivalent(&self, other: &Guard) -> bool {
        let props: Vec<String> = self.props().union(&other.props()).cloned().collect();
        assert!(props.len() < 24, "guard too wide for truth-table comparison");
        (0u32..1 << props.len()).all(|bits| {
            let letter: Letter = props
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect();
            self.sat_by(&letter) == other.sat_by(&letter)
        })
    }
}

fn normalize(mut cubes: Vec<Cube>) -> Vec<Cube> {
    cubes.sort();
    cubes.dedup();
    if cubes.iter().any(|c| c.is_empty()) {
        return vec![Cube::new()];
    }
    cubes
        .iter()
        .filter(|c| {
            !cubes
                .iter()
                .any(|d| d != *c && d.len() < c.len() && subsumes(d, c))
        })
        .cloned()
        .collect()
}

/// `weaker` is implied by `stronger`: every literal of `weaker` appears in `stronger`.
fn subsumes(weaker: &Cube, stronger: &Cube) -> bool {
    weaker.iter().all(|(p, pos)| stronger.get(p) == Some(pos))
}

/// Renders as `a & !b | c`, `t` or `f`.
impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_false() {
            return write!(f, "f");
        }
        if self.is_true() {
            return write!(f, "t");
        }
        for (i, cube) in self.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            for (j, (p, pos)) in cube.iter().enumerate() {
                if j > 0 {
                    write!(f, " & ")?;
                }
                if !pos {
                    write!(f, "!")?;
                }
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}
