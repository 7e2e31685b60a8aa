//! Token-based allocation of new sub-tasks and an exhaustive optimal baseline.

mod optimal;
mod token;

use std::fmt;
use std::time::Duration;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::synthesis::{serialize_cost, Behavior, CostTable, SatVector, TaskSet};

pub use optimal::{optimal_allocate, optimal_allocate_counted, OptimalOutcome};
pub use token::{token_allocate, token_allocate_traced, update_assignment, TokenOutcome};

/// Cost differences below this are treated as ties.
pub const COST_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocationError {
    #[error("assigned sets overlap: {0}")]
    Overlap(TaskSet),
    #[error("conflict set {given} does not match satisfiable-and-held set {expected}")]
    BadConflicts { given: TaskSet, expected: TaskSet },
}

/// Owner of each sub-task: 0 leaves it unassigned, `i ≥ 1` names robot `i`
/// by its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AssignmentToken(Vec<usize>);

impl AssignmentToken {
    pub fn unassigned(m: usize) -> Self {
        AssignmentToken(vec![0; m])
    }

    pub fn from_vec(entries: Vec<usize>) -> Self {
        AssignmentToken(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn set(&mut self, j: usize, robot: usize) {
        self.0[j] = robot;
    }

    /// `p_i`, the tasks held by robot `i` (1-based).
    pub fn tasks_of(&self, i: usize) -> TaskSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &r)| r == i)
            .map(|(j, _)| j)
            .collect()
    }

    /// Replaces robot `i`'s holdings with `set`; tasks it gives up become
    /// unassigned.
    pub fn assign_set(&mut self, i: usize, set: TaskSet) {
        for (j, r) in self.0.iter_mut().enumerate() {
            if set.contains(j) {
                *r = i;
            } else if *r == i {
                *r = 0;
            }
        }
    }

    pub fn assigned_count(&self) -> usize {
        self.0.iter().filter(|&&r| r != 0).count()
    }

    pub fn unassigned_tasks(&self) -> TaskSet {
        self.tasks_of(0)
    }

    pub fn is_complete(&self) -> bool {
        self.0.iter().all(|&r| r != 0)
    }
}

impl fmt::Display for AssignmentToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, r) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for AssignmentToken {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Sum of every robot's table entry for its holdings, including `Γ_i[∅]`
/// for robots holding nothing. Infinite if any entry is.
pub fn total_cost(alpha: &AssignmentToken, tables: &[CostTable]) -> f64 {
    tables
        .iter()
        .enumerate()
        .map(|(i, t)| t.get(alpha.tasks_of(i + 1)))
        .sum()
}

/// Checks the token against the satisfiability vectors and cost tables:
/// owners exist and can do their tasks, and every nonempty holding is
/// finitely priced.
pub fn check_token(alpha: &AssignmentToken, sat: &[SatVector], tables: &[CostTable]) -> bool {
    let n = tables.len();
    alpha.entries().iter().enumerate().all(|(j, &r)| {
        r == 0 || (r <= n && sat[r - 1].get(j))
    }) && (1..=n).all(|i| {
        let p = alpha.tasks_of(i);
        p.is_empty() || tables[i - 1].is_finite(p)
    })
}

/// Everything one robot contributes to an allocation run.
#[derive(Debug, Clone, Serialize)]
pub struct RobotReport {
    pub id: String,
    /// Composite robot state when the new tasks arrive.
    pub start_state: String,
    /// Automaton state of the current task when the new tasks arrive.
    pub buchi_state: usize,
    pub sat: SatVector,
    pub costs: CostTable,
    /// Sub-tasks the token allocator gave this robot.
    pub assigned: TaskSet,
    /// Behavior for the remaining current task plus `assigned`.
    pub behavior: Behavior,
}

#[derive(Debug, Clone, Serialize)]
pub struct AllocationReport {
    pub num_robots: usize,
    pub num_tasks: usize,
    pub token_assignment: AssignmentToken,
    #[serde(serialize_with = "serialize_cost")]
    pub token_cost: f64,
    #[serde(serialize_with = "serialize_duration")]
    pub token_time: Duration,
    pub token_evaluations: u64,
    pub optimal_assignment: Option<AssignmentToken>,
    #[serde(serialize_with = "serialize_opt_cost")]
    pub optimal_cost: Option<f64>,
    #[serde(serialize_with = "serialize_opt_duration")]
    pub optimal_time: Option<Duration>,
    pub optimal_candidates: Option<u64>,
    /// 1-based indices of sub-tasks no robot was given.
    pub unassigned: Vec<usize>,
    pub robots: Vec<RobotReport>,
}

impl AllocationReport {
    pub fn is_complete(&self) -> bool {
        self.unassigned.is_empty()
    }
}

fn serialize_duration<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

fn serialize_opt_duration<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
    match d {
        Some(d) => serialize_duration(d, s),
        None => s.serialize_none(),
    }
}

fn serialize_opt_cost<S: Serializer>(c: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(c) => serialize_cost(c, s),
        None => s.serialize_none(),
    }
}
