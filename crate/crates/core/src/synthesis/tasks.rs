use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// A set of new sub-task indices (0-based), stored as a bitmask.
///
/// `Ord` follows the numeric mask; [`TaskSet::lex_cmp`] compares the sorted
/// index lists instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TaskSet(u64);

impl TaskSet {
    pub const EMPTY: TaskSet = TaskSet(0);
    /// Largest supported number of sub-tasks; subset tables grow as `2^m`.
    pub const MAX_TASKS: usize = 24;

    pub fn single(j: usize) -> Self {
        assert!(j < 64, "task index {j} out of range");
        TaskSet(1 << j)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(Self::EMPTY, |s, j| s.with(j))
    }

    /// `{0, …, m-1}`.
    pub fn full(m: usize) -> Self {
        if m >= 64 {
            TaskSet(u64::MAX)
        } else {
            TaskSet((1u64 << m) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        TaskSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, j: usize) -> bool {
        j < 64 && self.0 >> j & 1 == 1
    }

    pub fn with(self, j: usize) -> Self {
        self.union(Self::single(j))
    }

    pub fn without(self, j: usize) -> Self {
        self.minus(Self::single(j))
    }

    pub fn union(self, o: Self) -> Self {
        TaskSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        TaskSet(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        TaskSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(j)
        })
    }

    /// Every subset, the empty set first, in ascending mask order.
    pub fn subsets(self) -> impl Iterator<Item = TaskSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur | !mask).wrapping_add(1) & mask)
            };
            Some(TaskSet(cur))
        })
    }

    /// Lexicographic order on the ascending index lists.
    pub fn lex_cmp(self, o: Self) -> Ordering {
        self.iter().cmp(o.iter())
    }
}

impl FromIterator<usize> for TaskSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Self::from_indices(it)
    }
}

impl fmt::Display for TaskSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for TaskSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|j| j + 1))
    }
}

/// Per-robot satisfiability bits, one per new sub-task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SatVector(Vec<bool>);

impl SatVector {
    pub fn new(m: usize) -> Self {
        SatVector(vec![false; m])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        SatVector(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> bool {
        self.0.get(j).copied().unwrap_or(false)
    }

    pub fn set(&mut self, j: usize, v: bool) {
        self.0[j] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Indices of satisfiable sub-tasks.
    pub fn as_set(&self) -> TaskSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Subset costs for one robot; subsets without an entry cost `+∞`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CostTable {
    m: usize,
    costs: BTreeMap<TaskSet, f64>,
}

impl CostTable {
    pub fn new(m: usize) -> Self {
        CostTable {
            m,
            costs: BTreeMap::new(),
        }
    }

    /// Builds a table from explicit entries; handy for hand-made instances.
    pub fn from_entries<I: IntoIterator<Item = (TaskSet, f64)>>(m: usize, entries: I) -> Self {
        let mut t = CostTable::new(m);
        for (k, c) in entries {
            t.insert(k, c);
        }
        t
    }

    pub fn num_tasks(&self) -> usize {
        self.m
    }

    pub fn insert(&mut self, k: TaskSet, cost: f64) {
        assert!(k.is_subset(TaskSet::full(self.m)), "subset {k} out of range");
        assert!(!cost.is_nan() && cost >= 0.0, "cost must be nonnegative");
        self.costs.insert(k, cost);
    }

    pub fn get(&self, k: TaskSet) -> f64 {
        self.costs.get(&k).copied().unwrap_or(f64::INFINITY)
    }

    pub fn is_finite(&self, k: TaskSet) -> bool {
        self.get(k).is_finite()
    }

    /// Sub-tasks whose singleton entry is finite.
    pub fn satisfiable(&self) -> TaskSet {
        (0..self.m)
            .filter(|&j| self.is_finite(TaskSet::single(j)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TaskSet, f64)> + '_ {
        self.costs.iter().map(|(&k, &c)| (k, c))
    }
}

impl Serialize for CostTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.costs.len()))?;
        for (k, c) in &self.costs {
            let c = if c.is_finite() { Some(*c) } else { None };
            map.serialize_entry(&k.to_string(), &c)?;
        }
        map.end()
    }
}
