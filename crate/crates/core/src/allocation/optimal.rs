use crate::synthesis::{CostTable, SatVector, TaskSet};

use super::{AssignmentToken, COST_EPS};

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalOutcome {
    pub alpha: AssignmentToken,
    pub cost: f64,
    /// Complete mappings priced during the search.
    pub candidates: u64,
}

/// Exhaustive search over every mapping of tasks to `{unassigned} ∪ robots`
/// consistent with the satisfiability vectors and finite cost tables.
///
/// Prefers more assigned tasks, then lower total cost, then the
/// lexicographically smallest token.
pub fn optimal_allocate(sat: &[SatVector], tables: &[CostTable], m: usize) -> AssignmentToken {
    optimal_allocate_counted(sat, tables, m).alpha
}

/// [`optimal_allocate`] also reporting the optimum's cost and search size.
pub fn optimal_allocate_counted(sat: &[SatVector], tables: &[CostTable], m: usize) -> OptimalOutcome {
    assert_eq!(sat.len(), tables.len(), "one table per robot");
    // Owners tried for each task, in token order.
    let choices: Vec<Vec<usize>> = (0..m)
        .map(|j| {
            std::iter::once(0)
                .chain((1..=sat.len()).filter(|&i| sat[i - 1].get(j)))
                .collect()
        })
        .collect();
    let mut search = Search {
        tables,
        choices: &choices,
        alpha: vec![0; m],
        held: vec![TaskSet::EMPTY; tables.len()],
        best: None,
        candidates: 0,
    };
    search.visit(0, 0);
    let (assigned, cost, alpha) = search.best.expect("the empty assignment is always a candidate");
    debug_assert_eq!(assigned, alpha.iter().filter(|&&r| r != 0).count());
    OptimalOutcome {
        alpha: AssignmentToken::from_vec(alpha),
        cost,
        candidates: search.candidates,
    }
}

struct Search<'a> {
    tables: &'a [CostTable],
    choices: &'a [Vec<usize>],
    alpha: Vec<usize>,
    held: Vec<TaskSet>,
    best: Option<(usize, f64, Vec<usize>)>,
    candidates: u64,
}

impl Search<'_> {
    fn visit(&mut self, j: usize, assigned: usize) {
        if j == self.alpha.len() {
            self.candidates += 1;
            let cost: f64 = self
                .tables
                .iter()
                .zip(&self.held)
                .map(|(t, &p)| t.get(p))
                .sum();
            let better = match &self.best {
                None => true,
                Some((ba, bc, _)) => assigned > *ba || (assigned == *ba && cost < bc - COST_EPS),
            };
            if better {
                self.best = Some((assigned, cost, self.alpha.clone()));
            }
            return;
        }
        for idx in 0..self.choices[j].len() {
            let r = self.choices[j][idx];
            if r == 0 {
                self.visit(j + 1, assigned);
                continue;
            }
            let prev = self.held[r - 1];
            let next = prev.with(j);
            // Supersets of an infeasible combination are infeasible too.
            if !self.tables[r - 1].is_finite(next) {
                continue;
            }
            self.held[r - 1] = next;
            self.alpha[j] = r;
            self.visit(j + 1, assigned + 1);
            self.alpha[j] = 0;
            self.held[r - 1] = prev;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::{token_allocate, total_cost};

    fn table(m: usize, entries: &[(&[usize], f64)]) -> CostTable {
        CostTable::from_entries(
            m,
            entries
                .iter()
                .map(|(k, c)| (k.iter().copied().collect(), *c)),
        )
    }

    fn sat_of(t: &CostTable) -> SatVector {
        SatVector::from_bits((0..t.num_tasks()).map(|j| t.is_finite(TaskSet::single(j))).collect())
    }

    #[test]
    fn single_task_argmin() {
        let tables = [
            table(1, &[(&[], 1.0), (&[0], 5.0)]),
            table(1, &[(&[], 2.0), (&[0], 4.0)]),
            table(1, &[(&[], 0.0)]),
        ];
        let sat: Vec<SatVector> = tables.iter().map(sat_of).collect();
        let out = optimal_allocate_counted(&sat, &tables, 1);
        // Robot 2 adds 2 while robot 1 adds 4.
        assert_eq!(out.alpha.entries(), &[2]);
        assert_eq!(out.cost, 5.0);
        assert_eq!(out.candidates, 3);
    }

    #[test]
    fn complete_beats_cheaper_incomplete() {
        let tables = [table(1, &[(&[], 0.0), (&[0], 100.0)])];
        let sat: Vec<SatVector> = tables.iter().map(sat_of).collect();
        assert_eq!(optimal_allocate(&sat, &tables, 1).entries(), &[1]);
    }

    #[test]
    fn never_worse_than_token() {
        let tables = [
            table(2, &[(&[], 0.0), (&[0], 3.0), (&[1], 3.0), (&[0, 1], 4.0)]),
            table(2, &[(&[], 0.0), (&[0], 1.0), (&[1], 2.5), (&[0, 1], 6.0)]),
        ];
        let sat: Vec<SatVector> = tables.iter().map(sat_of).collect();
        let opt = optimal_allocate(&sat, &tables, 2);
        let tok = token_allocate(&sat, &tables, 2).alpha;
        assert!(total_cost(&tok, &tables) >= total_cost(&opt, &tables));
        assert_eq!(opt.entries(), &[1, 1]);
        assert_eq!(total_cost(&opt, &tables), 4.0);
    }

    #[test]
    fn empty_task_list() {
        let tables = [table(0, &[(&[], 1.5)])];
        let sat: Vec<SatVector> = tables.iter().map(sat_of).collect();
        let out = optimal_allocate_counted(&sat, &tables, 0);
        assert!(out.alpha.is_empty());
        assert_eq!(out.cost, 1.5);
    }
}
