use crate::buchi::{translate, BuchiAutomaton, StateId};
use crate::models::RobotModel;
use crate::synthesis::{build_product, shortest_accepting_lasso, Behavior};

use super::{HarnessError, Scenario};

/// Where a robot is in its current plan when new tasks arrive.
#[derive(Debug, Clone)]
pub struct Progress {
    /// Composite robot state reached.
    pub robot_state: usize,
    /// Current-task automaton state reached (`z_i`).
    pub buchi_state: StateId,
    /// The plan being followed.
    pub behavior: Behavior,
}

/// Plans `b_curr` for `a` and walks `steps` edges along prefix then cycle.
pub fn advance_along(
    a: &RobotModel,
    b_curr: &BuchiAutomaton,
    steps: usize,
) -> Option<Progress> {
    let behavior = shortest_accepting_lasso(&build_product(a, b_curr));
    let step = behavior.position(steps)?;
    Some(Progress {
        robot_state: step.robot_state,
        buchi_state: step.buchi_state,
        behavior: behavior.clone(),
    })
}

/// Progress of robot `robot_id` after `steps` plan steps.
pub fn advance_progress(
    scenario: &Scenario,
    robot_id: &str,
    steps: usize,
) -> Result<Progress, HarnessError> {
    let i = scenario
        .robot_index(robot_id)
        .ok_or_else(|| HarnessError::UnknownRobot(robot_id.to_string()))?;
    let b = translate(scenario.current_task(i));
    advance_along(scenario.robot_model(i), &b, steps)
        .ok_or_else(|| HarnessError::UnsatisfiableCurrentTask(robot_id.to_string()))
}
