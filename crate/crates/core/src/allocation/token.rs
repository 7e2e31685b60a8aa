use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::synthesis::{CostTable, SatVector, TaskSet};

use super::{AllocationError, AssignmentToken, COST_EPS};

/// Result of a token pass.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenOutcome {
    pub alpha: AssignmentToken,
    /// Candidate splits examined across all conflict resolutions.
    pub evaluations: u64,
    /// Number of pairwise conflict resolutions performed.
    pub resolutions: u64,
    /// Largest number of candidates examined by a single resolution.
    pub max_evaluations_per_resolution: u64,
}

/// Re-splits the tasks held by robots `i` and `k` to minimize their joint
/// cost.
///
/// Robot `i` may keep its own tasks and take any of `conflicts`; robot `k`
/// may keep its own and take those of `i`'s it can do alone. Splits with an
/// infinite side are discarded. Ties go to the split moving the fewest tasks,
/// then to the lexicographically smallest share for `i`. With no finite
/// split the inputs come back unchanged. The third value counts candidate
/// splits examined.
pub fn update_assignment(
    assign_i: TaskSet,
    assign_k: TaskSet,
    satis_i: TaskSet,
    conflicts: TaskSet,
    gamma_i: &CostTable,
    gamma_k: &CostTable,
) -> Result<(TaskSet, TaskSet, u64), AllocationError> {
    let overlap = assign_i.intersection(assign_k);
    if !overlap.is_empty() {
        return Err(AllocationError::Overlap(overlap));
    }
    let expected = satis_i.intersection(assign_k);
    if conflicts != expected {
        return Err(AllocationError::BadConflicts {
            given: conflicts,
            expected,
        });
    }
    let all = assign_i.union(assign_k);
    let satis_k = gamma_k.satisfiable();
    let allowed_i = assign_i.union(conflicts);
    let allowed_k = assign_k.union(assign_i.intersection(satis_k));

    let mut best: Option<(f64, usize, TaskSet)> = None;
    let mut evaluations = 0;
    for s_i in allowed_i.subsets() {
        evaluations += 1;
        let s_k = all.minus(s_i);
        if !s_k.is_subset(allowed_k) {
            continue;
        }
        let cost = gamma_i.get(s_i) + gamma_k.get(s_k);
        if !cost.is_finite() {
            continue;
        }
        let moved = s_i.minus(assign_i).len() + s_k.minus(assign_k).len();
        let better = match &best {
            None => true,
            Some((bc, bm, bs)) => {
                if cost < bc - COST_EPS {
                    true
                } else if cost > bc + COST_EPS {
                    false
                } else {
                    (moved, s_i.lex_cmp(*bs)).cmp(&(*bm, Ordering::Equal)) == Ordering::Less
                }
            }
        };
        if better {
            best = Some((cost, moved, s_i));
        }
    }
    Ok(match best {
        Some((_, _, s_i)) => (s_i, all.minus(s_i), evaluations),
        None => (assign_i, assign_k, evaluations),
    })
}

/// One pass of the assignment token over robots `1..=n`.
pub fn token_allocate(sat: &[SatVector], tables: &[CostTable], m: usize) -> TokenOutcome {
    token_allocate_traced(sat, tables, m, |_| {})
}

/// [`token_allocate`] calling `observe` on the token after every change.
pub fn token_allocate_traced(
    sat: &[SatVector],
    tables: &[CostTable],
    m: usize,
    mut observe: impl FnMut(&AssignmentToken),
) -> TokenOutcome {
    assert_eq!(sat.len(), tables.len(), "one table per robot");
    let mut alpha = AssignmentToken::unassigned(m);
    let mut out = TokenOutcome {
        alpha: AssignmentToken::default(),
        evaluations: 0,
        resolutions: 0,
        max_evaluations_per_resolution: 0,
    };

    for i in 1..=sat.len() {
        let zeta = &sat[i - 1];
        let gamma_i = &tables[i - 1];
        let satis_i = zeta.as_set();

        // Take every free task this robot can do.
        for j in satis_i.iter() {
            if alpha.get(j) == 0 {
                alpha.set(j, i);
            }
        }
        observe(&alpha);

        // Resolve against each other holder of a task this robot can do.
        let mut compared = BTreeSet::new();
        for j in satis_i.iter() {
            let k = alpha.get(j);
            if k == 0 || k == i || !compared.insert(k) {
                continue;
            }
            let assign_i = alpha.tasks_of(i);
            let assign_k = alpha.tasks_of(k);
            let conflicts = satis_i.intersection(assign_k);
            let (s_i, s_k, evals) = update_assignment(
                assign_i,
                assign_k,
                satis_i,
                conflicts,
                gamma_i,
                &tables[k - 1],
            )
            .expect("token holdings are disjoint by construction");
            out.evaluations += evals;
            out.resolutions += 1;
            out.max_evaluations_per_resolution = out.max_evaluations_per_resolution.max(evals);
            alpha.assign_set(i, s_i);
            alpha.assign_set(k, s_k);
            observe(&alpha);
        }

        // A combination the robot cannot do jointly is shed down to the
        // largest affordable subset; released tasks stay free for later robots.
        let held = alpha.tasks_of(i);
        if !gamma_i.is_finite(held) {
            alpha.assign_set(i, best_affordable_subset(held, gamma_i));
            observe(&alpha);
        }
    }
    out.alpha = alpha;
    out
}

/// Largest subset with finite cost; ties go to lower cost, then to the
/// lexicographically smallest set.
fn best_affordable_subset(held: TaskSet, gamma: &CostTable) -> TaskSet {
    let mut best: Option<(usize, f64, TaskSet)> = None;
    for s in held.subsets() {
        let c = gamma.get(s);
        if !c.is_finite() && !s.is_empty() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bl, bc, bs)) => {
                s.len() > *bl
                    || (s.len() == *bl
                        && (c < bc - COST_EPS
                            || ((c - bc).abs() <= COST_EPS && s.lex_cmp(*bs) == Ordering::Less)))
            }
        };
        if better {
            best = Some((s.len(), c, s));
        }
    }
    best.map_or(TaskSet::EMPTY, |(_, _, s)| s)
}
