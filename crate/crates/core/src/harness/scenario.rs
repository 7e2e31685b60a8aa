use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::buchi::translate;
use crate::ltl::{parse_ltl, Formula};
use crate::models::{compose_robot, CapabilityTS, RobotModel, StateSpec};
use crate::synthesis::{build_product, shortest_accepting_lasso};

use super::HarnessError;

/// Key of the motion component in a robot's `initial` map.
pub const MOTION: &str = "motion";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    pub regions: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpecJson {
    pub id: String,
    #[serde(default)]
    pub label: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapabilitySpec {
    pub props: Vec<String>,
    pub states: Vec<StateSpecJson>,
    pub edges: Vec<EdgeSpec>,
    pub initial: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotSpec {
    pub id: String,
    pub capabilities: Vec<String>,
    /// Initial state per component; `motion` names the starting region and
    /// omitted capabilities start in their declared initial state.
    pub initial: BTreeMap<String, String>,
    pub current_task: String,
    #[serde(default)]
    pub progress_steps: usize,
}

/// On-disk scenario layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub capabilities: BTreeMap<String, CapabilitySpec>,
    pub robots: Vec<RobotSpec>,
    #[serde(default)]
    pub new_tasks: Vec<String>,
}

/// A validated scenario: models built, formulas parsed.
#[derive(Debug, Clone)]
pub struct Scenario {
    spec: ScenarioSpec,
    motion: CapabilityTS,
    library: BTreeMap<String, CapabilityTS>,
    models: Vec<RobotModel>,
    current: Vec<Formula>,
    new_tasks: Vec<Formula>,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

fn edges(list: &[EdgeSpec]) -> Vec<(String, String, f64)> {
    list.iter()
        .map(|e| (e.from.clone(), e.to.clone(), e.weight))
        .collect()
}

fn parse_at(text: &str, location: String) -> Result<Formula, HarnessError> {
    parse_ltl(text).map_err(|source| HarnessError::Ltl { location, source })
}

impl Scenario {
    /// Validates `spec`: builds every model, parses every formula, checks
    /// that the new sub-tasks are jointly satisfiable and that each robot can
    /// satisfy its current task.
    pub fn from_spec(spec: ScenarioSpec) -> Result<Self, HarnessError> {
        let motion = CapabilityTS::motion(&spec.environment.regions, edges(&spec.environment.edges))
            .map_err(|source| HarnessError::Model {
                context: "environment".into(),
                source,
            })?;
        let mut library = BTreeMap::new();
        for (name, c) in &spec.capabilities {
            if name == MOTION {
                return Err(HarnessError::BadCapabilityName(name.clone()));
            }
            let states = c
                .states
                .iter()
                .map(|s| StateSpec {
                    id: s.id.clone(),
                    label: s.label.clone(),
                })
                .collect();
            let ts = CapabilityTS::new(name.clone(), c.props.iter().cloned(), states, &c.initial, edges(&c.edges))
                .map_err(|source| HarnessError::Model {
                    context: format!("capability `{name}`"),
                    source,
                })?;
            library.insert(name.clone(), ts);
        }

        let mut seen = BTreeSet::new();
        let mut models = Vec::new();
        let mut current = Vec::new();
        for (idx, r) in spec.robots.iter().enumerate() {
            if !seen.insert(r.id.as_str()) {
                return Err(HarnessError::DuplicateRobot(r.id.clone()));
            }
            models.push(build_robot(r, idx + 1, &motion, &library)?);
            current.push(parse_at(&r.current_task, format!("robots[{idx}].current_task"))?);
        }
        let new_tasks = spec
            .new_tasks
            .iter()
            .enumerate()
            .map(|(j, t)| parse_at(t, format!("new_tasks[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;

        if translate(&Formula::conjunction(new_tasks.iter().cloned())).is_empty() {
            return Err(HarnessError::ConflictingTasks);
        }
        for ((r, a), f) in spec.robots.iter().zip(&models).zip(&current) {
            if shortest_accepting_lasso(&build_product(a, &translate(f))).is_empty() {
                return Err(HarnessError::UnsatisfiableCurrentTask(r.id.clone()));
            }
        }
        Ok(Scenario {
            spec,
            motion,
            library,
            models,
            current,
            new_tasks,
        })
    }

    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    pub fn motion(&self) -> &CapabilityTS {
        &self.motion
    }

    pub fn capability(&self, name: &str) -> Option<&CapabilityTS> {
        self.library.get(name)
    }

    pub fn num_robots(&self) -> usize {
        self.models.len()
    }

    pub fn num_tasks(&self) -> usize {
        self.new_tasks.len()
    }

    pub fn robot_id(&self, i: usize) -> &str {
        &self.spec.robots[i].id
    }

    /// Position of the robot named `id`.
    pub fn robot_index(&self, id: &str) -> Option<usize> {
        self.spec.robots.iter().position(|r| r.id == id)
    }

    /// Composed model of robot `i`, starting from its initial state.
    pub fn robot_model(&self, i: usize) -> &RobotModel {
        &self.models[i]
    }

    pub fn current_task(&self, i: usize) -> &Formula {
        &self.current[i]
    }

    pub fn progress_steps(&self, i: usize) -> usize {
        self.spec.robots[i].progress_steps
    }

    pub fn new_tasks(&self) -> &[Formula] {
        &self.new_tasks
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.spec).expect("scenario serializes")
    }
}

fn build_robot(
    r: &RobotSpec,
    position: usize,
    motion: &CapabilityTS,
    library: &BTreeMap<String, CapabilityTS>,
) -> Result<RobotModel, HarnessError> {
    let bad = |message: String| HarnessError::InitialState {
        robot: r.id.clone(),
        message,
    };
    for key in r.initial.keys() {
        if key != MOTION && !r.capabilities.contains(key) {
            return Err(bad(format!("initial state given for `{key}`, which the robot lacks")));
        }
    }
    let region = r
        .initial
        .get(MOTION)
        .ok_or_else(|| bad("no initial region under `motion`".into()))?;
    let model_err = |source| HarnessError::Model {
        context: format!("robot `{}`", r.id),
        source,
    };
    let motion = motion.with_initial(region).map_err(model_err)?;
    let mut caps = Vec::new();
    let mut names = BTreeSet::new();
    for name in &r.capabilities {
        if !names.insert(name) {
            return Err(bad(format!("capability `{name}` listed twice")));
        }
        let c = library
            .get(name)
            .ok_or_else(|| HarnessError::UnknownCapability {
                robot: r.id.clone(),
                name: name.clone(),
            })?;
        caps.push(match r.initial.get(name) {
            Some(s) => c.with_initial(s).map_err(model_err)?,
            None => c.clone(),
        });
    }
    compose_robot(&motion, &caps, position).map_err(model_err)
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Parses and validates scenario JSON text.
pub fn parse_scenario(text: &str) -> Result<Scenario, HarnessError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: ScenarioSpec = serde_path_to_error::deserialize(de).map_err(|e| HarnessError::Json {
        pointer: json_pointer(e.path()),
        message: e.inner().to_string(),
    })?;
    Scenario::from_spec(spec)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, HarnessError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

pub fn save_scenario(s: &Scenario, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    fs::write(path, s.to_json() + "\n").map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "environment": {
            "regions": ["a", "b"],
            "edges": [
                {"from": "a", "to": "a", "weight": 0},
                {"from": "a", "to": "b", "weight": 1},
                {"from": "b", "to": "a", "weight": 1},
                {"from": "b", "to": "b", "weight": 0}
            ]
        },
        "robots": [
            {"id": "r1", "capabilities": [], "initial": {"motion": "a"}, "current_task": "G F b"}
        ]
    }"#;

    #[test]
    fn minimal_scenario() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.num_tasks(), 0);
        assert_eq!(s.num_robots(), 1);
        assert_eq!(s.robot_index("r1"), Some(0));
        assert_eq!(parse_scenario(&s.to_json()).unwrap(), s);
    }

    fn with(f: impl FnOnce(&mut serde_json::Value)) -> Result<Scenario, HarnessError> {
        let mut v: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
        f(&mut v);
        parse_scenario(&v.to_string())
    }

    #[test]
    fn conflicting_new_tasks() {
        let r = with(|v| v["new_tasks"] = serde_json::json!(["G a", "G !a"]));
        assert!(matches!(r, Err(HarnessError::ConflictingTasks)));
    }

    #[test]
    fn json_pointer_on_type_error() {
        let r = with(|v| v["robots"][0]["progress_steps"] = serde_json::json!("three"));
        match r {
            Err(HarnessError::Json { pointer, .. }) => assert_eq!(pointer, "/robots/0/progress_steps"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ltl_error_carries_offset() {
        let r = with(|v| v["new_tasks"] = serde_json::json!(["F (a &"]));
        match r {
            Err(HarnessError::Ltl { location, source }) => {
                assert_eq!(location, "new_tasks[0]");
                assert_eq!(source.offset, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_capability() {
        let r = with(|v| v["robots"][0]["capabilities"] = serde_json::json!(["laser"]));
        assert!(matches!(r, Err(HarnessError::UnknownCapability { .. })));
    }

    #[test]
    fn unsatisfiable_current_task() {
        let r = with(|v| v["robots"][0]["current_task"] = serde_json::json!("F zzz"));
        assert!(matches!(r, Err(HarnessError::UnsatisfiableCurrentTask(_))));
    }
}
