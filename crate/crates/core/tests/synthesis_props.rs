use taskforge::buchi::translate;
use taskforge::harness::{advance_along, generate_random, BenchConfig};
use taskforge::ltl::{eval_lasso, Formula};
use taskforge::synthesis::{compute_sat_cost, synthesize_behavior, TaskSet};

#[test]
fn tables_and_behaviors_on_random_scenarios() {
    let config = BenchConfig::default();
    let mut checked = 0;
    let mut below_empty = Vec::new();
    for trial in 0..8 {
        let s = generate_random(&config, 3, 3, trial).unwrap();
        let tasks = s.new_tasks();
        for i in 0..s.num_robots() {
            let b_curr = translate(s.current_task(i));
            let p = advance_along(s.robot_model(i), &b_curr, s.progress_steps(i)).unwrap();
            let a = s.robot_model(i).with_initial(p.robot_state);
            let (sat, table) = compute_sat_cost(&a, p.buchi_state, &b_curr, tasks).unwrap();
            let residual = b_curr.restrict_reachable(p.buchi_state).unwrap();

            for j in 0..tasks.len() {
                assert_eq!(sat.get(j), table.is_finite(TaskSet::single(j)));
            }
            let feasible = sat.as_set();
            for (k, c) in table.iter() {
                if k.len() > 1 {
                    assert!(k.is_subset(feasible), "combination {k} contains an infeasible task");
                }
                if c < table.get(TaskSet::EMPTY) {
                    below_empty.push((trial, i, k, c));
                }
                let phi = Formula::conjunction(k.iter().map(|j| tasks[j].clone()));
                let b = synthesize_behavior(&a, p.buchi_state, &b_curr, &phi).unwrap();
                assert_eq!(b.cost, c);
                if let Some(w) = b.consumed_word() {
                    assert!(eval_lasso(&phi, &w), "behavior violates {phi}");
                    assert!(residual.accepts_lasso(&w), "behavior violates the remaining current task");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 20);
    assert!(below_empty.is_empty(), "{below_empty:?}");
}

#[test]
fn progress_is_periodic_on_the_cycle() {
    let config = BenchConfig::default();
    for trial in 0..5 {
        let s = generate_random(&config, 2, 1, trial).unwrap();
        for i in 0..s.num_robots() {
            let b = translate(s.current_task(i));
            let a = s.robot_model(i);
            let p0 = advance_along(a, &b, 0).unwrap();
            assert_eq!(p0.buchi_state, b.initial());
            assert_eq!(p0.robot_state, a.initial());
            let l = p0.behavior.prefix_len();
            let k = p0.behavior.cycle_len();
            for t in l..l + 2 * k {
                let x = advance_along(a, &b, t).unwrap();
                let y = advance_along(a, &b, t + 3 * k).unwrap();
                assert_eq!(x.buchi_state, y.buchi_state);
                assert_eq!(x.robot_state, y.robot_state);
            }
        }
    }
}
