use std::time::Instant;

use rayon::prelude::*;

use crate::allocation::{
    optimal_allocate_counted, token_allocate, total_cost, AllocationReport, RobotReport,
};
use crate::ltl::Formula;
use crate::synthesis::{compute_sat_cost_cached, synthesize_with, CostTable, SatVector, TranslationCache};

use super::{advance_along, HarnessError, Scenario};

#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineOptions {
    pub skip_optimal: bool,
}

struct RobotPrep {
    start: crate::models::RobotModel,
    remaining: crate::buchi::BuchiAutomaton,
    buchi_state: usize,
    sat: SatVector,
    costs: CostTable,
}

/// Runs synthesis for every robot, both allocators, and plans each robot's
/// final behavior for the subset the token allocator gave it.
pub fn run_pipeline(scenario: &Scenario, opts: &PipelineOptions) -> Result<AllocationReport, HarnessError> {
    let n = scenario.num_robots();
    let m = scenario.num_tasks();
    let cache = TranslationCache::new();

    let preps: Vec<RobotPrep> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<RobotPrep, HarnessError> {
            let b_curr = cache.get(scenario.current_task(i));
            let a = scenario.robot_model(i);
            let progress = advance_along(a, &b_curr, scenario.progress_steps(i))
                .ok_or_else(|| HarnessError::UnsatisfiableCurrentTask(scenario.robot_id(i).into()))?;
            let start = a.with_initial(progress.robot_state);
            let (sat, costs) =
                compute_sat_cost_cached(&start, progress.buchi_state, &b_curr, scenario.new_tasks(), &cache)?;
            let remaining = b_curr
                .restrict_reachable(progress.buchi_state)
                .map_err(|e| HarnessError::Internal(e.to_string()))?;
            Ok(RobotPrep {
                start,
                remaining,
                buchi_state: progress.buchi_state,
                sat,
                costs,
            })
        })
        .collect::<Result<_, _>>()?;

    let sats: Vec<SatVector> = preps.iter().map(|p| p.sat.clone()).collect();
    let tables: Vec<CostTable> = preps.iter().map(|p| p.costs.clone()).collect();

    let t0 = Instant::now();
    let token = token_allocate(&sats, &tables, m);
    let token_time = t0.elapsed();
    let token_cost = total_cost(&token.alpha, &tables);

    let optimal = (!opts.skip_optimal).then(|| {
        let t0 = Instant::now();
        let out = optimal_allocate_counted(&sats, &tables, m);
        (out, t0.elapsed())
    });

    let robots = preps
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| {
            let assigned = token.alpha.tasks_of(i + 1);
            let phi = Formula::conjunction(assigned.iter().map(|j| scenario.new_tasks()[j].clone()));
            let behavior = synthesize_with(&p.start, &p.remaining, &cache.get(&phi));
            RobotReport {
                id: scenario.robot_id(i).to_string(),
                start_state: p.start.state_name(p.start.initial()),
                buchi_state: p.buchi_state,
                sat: p.sat,
                costs: p.costs,
                assigned,
                behavior,
            }
        })
        .collect();

    Ok(AllocationReport {
        num_robots: n,
        num_tasks: m,
        unassigned: token.alpha.unassigned_tasks().iter().map(|j| j + 1).collect(),
        token_assignment: token.alpha,
        token_cost,
        token_time,
        token_evaluations: token.evaluations,
        optimal_cost: optimal.as_ref().map(|(o, _)| o.cost),
        optimal_time: optimal.as_ref().map(|(_, t)| *t),
        optimal_candidates: optimal.as_ref().map(|(o, _)| o.candidates),
        optimal_assignment: optimal.map(|(o, _)| o.alpha),
        robots,
    })
}
