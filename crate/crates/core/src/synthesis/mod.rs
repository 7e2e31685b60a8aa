//! Behavior synthesis: product graphs, minimum-cost accepting lassos, and the
//! per-robot satisfiability vector and subset cost table.

mod lasso;
mod product;
mod tasks;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use thiserror::Error;

use crate::buchi::{intersect, translate, BuchiAutomaton, BuchiError, StateId};
use crate::ltl::Formula;
use crate::models::RobotModel;

pub use lasso::{shortest_accepting_lasso, Behavior, Step};
pub(crate) use lasso::serialize_cost;
pub use product::{build_product, ProductGraph, ProductState};
pub use tasks::{CostTable, SatVector, TaskSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Automaton(#[from] BuchiError),
    #[error("at most {max} new sub-tasks are supported, got {got}")]
    TooManyTasks { max: usize, got: usize },
}

/// Memoized LTL translation, shared between robots and subsets.
#[derive(Default)]
pub struct TranslationCache {
    map: Mutex<HashMap<Formula, Arc<BuchiAutomaton>>>,
}

impl TranslationCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, f: &Formula) -> Arc<BuchiAutomaton> {
        if let Some(b) = self.map.lock().expect("cache lock").get(f) {
            return Arc::clone(b);
        }
        let b = Arc::new(translate(f));
        self.map
            .lock()
            .expect("cache lock")
            .entry(f.clone())
            .or_insert(b)
            .clone()
    }
}

/// Behavior of a robot for its remaining current task conjoined with `phi_k`.
///
/// Translates `phi_k`, restricts `b_curr` to what is reachable from `z_i`,
/// intersects the two and searches the product with the robot model for the
/// cheapest accepting lasso. An infeasible combination yields the empty
/// behavior with infinite cost.
pub fn synthesize_behavior(
    a: &RobotModel,
    z_i: StateId,
    b_curr: &BuchiAutomaton,
    phi_k: &Formula,
) -> Result<Behavior, SynthesisError> {
    let remaining = b_curr.restrict_reachable(z_i)?;
    Ok(synthesize_with(a, &remaining, &translate(phi_k)))
}

/// [`synthesize_behavior`] with both automata already built; `remaining` is
/// the current-task automaton already restricted to the robot's progress.
pub fn synthesize_with(a: &RobotModel, remaining: &BuchiAutomaton, b_new: &BuchiAutomaton) -> Behavior {
    let combined = intersect(b_new, remaining);
    if combined.is_empty() {
        return Behavior::empty();
    }
    shortest_accepting_lasso(&build_product(a, &combined))
}

/// Satisfiability vector and subset cost table for one robot.
///
/// Each sub-task is tried alone; every subset of two or more feasible
/// sub-tasks is then tried as an ascending-index conjunction. The empty set
/// is priced as the remaining current task alone.
pub fn compute_sat_cost(
    a: &RobotModel,
    z_i: StateId,
    b_curr: &BuchiAutomaton,
    new_tasks: &[Formula],
) -> Result<(SatVector, CostTable), SynthesisError> {
    compute_sat_cost_cached(a, z_i, b_curr, new_tasks, &TranslationCache::new())
}

/// [`compute_sat_cost`] reusing translations from `cache`.
pub fn compute_sat_cost_cached(
    a: &RobotModel,
    z_i: StateId,
    b_curr: &BuchiAutomaton,
    new_tasks: &[Formula],
    cache: &TranslationCache,
) -> Result<(SatVector, CostTable), SynthesisError> {
    let m = new_tasks.len();
    if m > TaskSet::MAX_TASKS {
        return Err(SynthesisError::TooManyTasks {
            max: TaskSet::MAX_TASKS,
            got: m,
        });
    }
    let remaining = b_curr.restrict_reachable(z_i)?;
    let cost_of = |set: TaskSet| -> f64 {
        let phi = Formula::conjunction(set.iter().map(|j| new_tasks[j].clone()));
        synthesize_with(a, &remaining, &cache.get(&phi)).cost
    };

    let mut table = CostTable::new(m);
    let singles: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| cost_of(TaskSet::single(j)))
        .collect();
    let mut sat = SatVector::new(m);
    for (j, &c) in singles.iter().enumerate() {
        table.insert(TaskSet::single(j), c);
        sat.set(j, c.is_finite());
    }
    table.insert(TaskSet::EMPTY, cost_of(TaskSet::EMPTY));

    let feasible = sat.as_set();
    let combos: Vec<TaskSet> = feasible.subsets().filter(|k| k.len() > 1).collect();
    let costs: Vec<f64> = combos.par_iter().map(|&k| cost_of(k)).collect();
    for (k, c) in combos.into_iter().zip(costs) {
        table.insert(k, c);
    }
    Ok((sat, table))
}
