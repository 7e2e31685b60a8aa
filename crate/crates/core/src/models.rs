//! Weighted transition systems for capabilities and their synchronous
//! product into robot models.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("capability `{0}` has no states")]
    NoStates(String),
    #[error("capability `{cap}`: unknown state `{state}`")]
    UnknownState { cap: String, state: String },
    #[error("capability `{cap}`: duplicate state `{state}`")]
    DuplicateState { cap: String, state: String },
    #[error("capability `{cap}`: duplicate transition {from} -> {to}")]
    DuplicateTransition { cap: String, from: String, to: String },
    #[error("capability `{cap}`: state `{state}` has no outgoing transition")]
    NoSuccessor { cap: String, state: String },
    #[error("capability `{cap}`: transition {from} -> {to} has invalid weight {weight}")]
    BadWeight {
        cap: String,
        from: String,
        to: String,
        weight: f64,
    },
    #[error("capability `{cap}`: label `{prop}` of state `{state}` is not a declared proposition")]
    UndeclaredLabel {
        cap: String,
        state: String,
        prop: String,
    },
    #[error("proposition `{prop}` is declared by both `{first}` and `{second}`")]
    SharedProposition {
        prop: String,
        first: String,
        second: String,
    },
    #[error("robot model would have {0} states, above the supported limit")]
    TooLarge(usize),
}

/// A capability (or the motion model) as a weighted transition system.
#[derive(Debug, Clone, PartialEq)]
pub struct CapabilityTS {
    name: String,
    props: BTreeSet<String>,
    states: Vec<String>,
    initial: usize,
    labels: Vec<BTreeSet<String>>,
    /// Outgoing `(target, weight)` per state, sorted by target.
    transitions: Vec<Vec<(usize, f64)>>,
}

/// One state of a capability for [`CapabilityTS::new`].
#[derive(Debug, Clone)]
pub struct StateSpec {
    pub id: String,
    pub label: Vec<String>,
}

impl StateSpec {
    pub fn new(id: impl Into<String>, label: &[&str]) -> Self {
        StateSpec {
            id: id.into(),
            label: label.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl CapabilityTS {
    /// Builds and validates a capability. Every state needs an outgoing
    /// transition and every weight must be finite and nonnegative.
    pub fn new(
        name: impl Into<String>,
        props: impl IntoIterator<Item = impl Into<String>>,
        states: Vec<StateSpec>,
        initial: &str,
        transitions: impl IntoIterator<Item = (String, String, f64)>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let props: BTreeSet<String> = props.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(ModelError::NoStates(name));
        }
        let mut index = BTreeMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateState {
                    cap: name,
                    state: s.id.clone(),
                });
            }
            if let Some(p) = s.label.iter().find(|p| !props.contains(*p)) {
                return Err(ModelError::UndeclaredLabel {
                    cap: name,
                    state: s.id.clone(),
                    prop: p.clone(),
                });
            }
        }
        let lookup = |id: &str| {
            index.get(id).copied().ok_or_else(|| ModelError::UnknownState {
                cap: name.clone(),
                state: id.to_string(),
            })
        };
        let initial = lookup(initial)?;
        let mut out: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); states.len()];
        for (from, to, weight) in transitions {
            let (f, t) = (lookup(&from)?, lookup(&to)?);
            if !weight.is_finite() || weight < 0.0 {
                return Err(ModelError::BadWeight {
                    cap: name.clone(),
                    from,
                    to,
                    weight,
                });
            }
            if out[f].insert(t, weight).is_some() {
                return Err(ModelError::DuplicateTransition {
                    cap: name.clone(),
                    from,
                    to,
                });
            }
        }
        if let Some(i) = out.iter().position(BTreeMap::is_empty) {
            return Err(ModelError::NoSuccessor {
                cap: name,
                state: states[i].id.clone(),
            });
        }
        Ok(CapabilityTS {
            name,
            props,
            labels: states
                .iter()
                .map(|s| s.label.iter().cloned().collect())
                .collect(),
            states: states.into_iter().map(|s| s.id).collect(),
            initial,
            transitions: out.into_iter().map(|m| m.into_iter().collect()).collect(),
        })
    }

    /// Motion model over `regions`: one state per region labeled with its own
    /// name, transitions given as directed `(from, to, weight)` edges.
    pub fn motion(
        regions: &[String],
        edges: impl IntoIterator<Item = (String, String, f64)>,
    ) -> Result<Self, ModelError> {
        CapabilityTS::new(
            "motion",
            regions.iter().cloned(),
            regions
                .iter()
                .map(|r| StateSpec {
                    id: r.clone(),
                    label: vec![r.clone()],
                })
                .collect(),
            regions.first().map(String::as_str).unwrap_or(""),
            edges,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn props(&self) -> &BTreeSet<String> {
        &self.props
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_id(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s == id)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn label(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn transitions(&self, s: usize) -> &[(usize, f64)] {
        &self.transitions[s]
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<f64> {
        self.transitions[from]
            .iter()
            .find(|(t, _)| *t == to)
            .map(|(_, w)| *w)
    }

    /// Same system with a different initial state.
    pub fn with_initial(&self, id: &str) -> Result<Self, ModelError> {
        let initial = self.state_index(id).ok_or_else(|| ModelError::UnknownState {
            cap: self.name.clone(),
            state: id.to_string(),
        })?;
        Ok(CapabilityTS {
            initial,
            ..self.clone()
        })
    }
}

/// Upper bound on composite states, to catch runaway products early.
pub const MAX_ROBOT_STATES: usize = 1 << 20;

/// Synchronous product of a motion model and capabilities.
///
/// Composite states are tuples (motion first) encoded as dense ids in
/// mixed radix. A composite transition exists for every combination of
/// component transitions; its weight is their sum and a composite label is
/// the union of component labels.
#[derive(Debug, Clone)]
pub struct RobotModel {
    robot_id: usize,
    components: Vec<CapabilityTS>,
    props: BTreeSet<String>,
    radix: Vec<usize>,
    initial: usize,
    labels: Vec<BTreeSet<String>>,
    transitions: Vec<Vec<(usize, f64)>>,
}

/// Composes `motion` with `caps` into the robot model of robot `robot_id`.
pub fn compose_robot(
    motion: &CapabilityTS,
    caps: &[CapabilityTS],
    robot_id: usize,
) -> Result<RobotModel, ModelError> {
    let components: Vec<CapabilityTS> = std::iter::once(motion.clone())
        .chain(caps.iter().cloned())
        .collect();
    let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
    for c in &components {
        for p in &c.props {
            if let Some(first) = owner.insert(p, &c.name) {
                return Err(ModelError::SharedProposition {
                    prop: p.clone(),
                    first: first.to_string(),
                    second: c.name.clone(),
                });
            }
        }
    }
    let radix: Vec<usize> = components.iter().map(CapabilityTS::num_states).collect();
    let total = radix
        .iter()
        .try_fold(1usize, |acc, &r| acc.checked_mul(r))
        .filter(|&t| t <= MAX_ROBOT_STATES)
        .ok_or(ModelError::TooLarge(usize::MAX))?;

    let decode = |mut id: usize| -> Vec<usize> {
        let mut tuple = vec![0; radix.len()];
        for (k, &r) in radix.iter().enumerate().rev() {
            tuple[k] = id % r;
            id /= r;
        }
        tuple
    };
    let encode = |tuple: &[usize]| tuple.iter().zip(&radix).fold(0, |acc, (&s, &r)| acc * r + s);

    let mut labels = Vec::with_capacity(total);
    let mut transitions = Vec::with_capacity(total);
    for id in 0..total {
        let tuple = decode(id);
        labels.push(
            components
                .iter()
                .zip(&tuple)
                .flat_map(|(c, &s)| c.labels[s].iter().cloned())
                .collect(),
        );
        // Cartesian product of component transitions; weights summed in component order.
        let mut partial: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), 0.0)];
        for (c, &s) in components.iter().zip(&tuple) {
            let mut grown = Vec::with_capacity(partial.len() * c.transitions[s].len());
            for (targets, w) in &partial {
                for &(t, tw) in &c.transitions[s] {
                    let mut next = targets.clone();
                    next.push(t);
                    grown.push((next, w + tw));
                }
            }
            partial = grown;
        }
        let mut out: Vec<(usize, f64)> = partial
            .into_iter()
            .map(|(targets, w)| (encode(&targets), w))
            .collect();
        out.sort_by_key(|&(t, _)| t);
        transitions.push(out);
    }
    let props = components.iter().flat_map(|c| c.props.iter().cloned()).collect();
    let initial = encode(&components.iter().map(|c| c.initial).collect::<Vec<_>>());
    Ok(RobotModel {
        robot_id,
        components,
        props,
        radix,
        initial,
        labels,
        transitions,
    })
}

impl RobotModel {
    pub fn robot_id(&self) -> usize {
        self.robot_id
    }

    pub fn components(&self) -> &[CapabilityTS] {
        &self.components
    }

    pub fn props(&self) -> &BTreeSet<String> {
        &self.props
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn label(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn transitions(&self, s: usize) -> &[(usize, f64)] {
        &self.transitions[s]
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<f64> {
        self.transitions[from]
            .binary_search_by_key(&to, |&(t, _)| t)
            .ok()
            .map(|i| self.transitions[from][i].1)
    }

    /// Component state indices of composite state `s`, motion first.
    pub fn tuple(&self, mut s: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.radix.len()];
        for (k, &r) in self.radix.iter().enumerate().rev() {
            tuple[k] = s % r;
            s /= r;
        }
        tuple
    }

    /// Composite state for a tuple of component state ids, motion first.
    pub fn state_of(&self, ids: &[&str]) -> Option<usize> {
        if ids.len() != self.components.len() {
            return None;
        }
        let mut acc = 0;
        for ((c, id), &r) in self.components.iter().zip(ids).zip(&self.radix) {
            acc = acc * r + c.state_index(id)?;
        }
        Some(acc)
    }

    /// Human-readable tuple, e.g. `(room_1, idle)`.
    pub fn state_name(&self, s: usize) -> String {
        let parts: Vec<&str> = self
            .tuple(s)
            .iter()
            .zip(&self.components)
            .map(|(&i, c)| c.state_id(i))
            .collect();
        format!("({})", parts.join(", "))
    }

    /// Same model starting from composite state `s`.
    pub fn with_initial(&self, s: usize) -> RobotModel {
        assert!(s < self.num_states(), "composite state out of range");
        RobotModel {
            initial: s,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(list: &[(&str, &str, f64)]) -> Vec<(String, String, f64)> {
        list.iter()
            .map(|(a, b, w)| (a.to_string(), b.to_string(), *w))
            .collect()
    }

    fn regions(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn two_rooms() -> CapabilityTS {
        CapabilityTS::motion(
            &regions(&["room_1", "room_2"]),
            edges(&[
                ("room_1", "room_1", 0.0),
                ("room_1", "room_2", 1.2),
                ("room_2", "room_1", 1.2),
                ("room_2", "room_2", 0.0),
            ]),
        )
        .unwrap()
    }

    fn camera() -> CapabilityTS {
        CapabilityTS::new(
            "camera",
            ["use_camera"],
            vec![StateSpec::new("idle", &[]), StateSpec::new("use_camera", &["use_camera"])],
            "idle",
            edges(&[
                ("idle", "idle", 0.0),
                ("idle", "use_camera", 0.5),
                ("use_camera", "idle", 0.0),
                ("use_camera", "use_camera", 0.5),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn composite_weight_is_sum() {
        let robot = compose_robot(&two_rooms(), &[camera()], 1).unwrap();
        let from = robot.state_of(&["room_1", "idle"]).unwrap();
        let to = robot.state_of(&["room_2", "use_camera"]).unwrap();
        assert_eq!(robot.weight(from, to), Some(1.7));
        assert_eq!(
            robot.label(to).iter().cloned().collect::<Vec<_>>(),
            vec!["room_2".to_string(), "use_camera".to_string()]
        );
        assert_eq!(robot.state_name(to), "(room_2, use_camera)");
    }

    #[test]
    fn empty_capability_list_is_motion_model() {
        let motion = two_rooms();
        let robot = compose_robot(&motion, &[], 1).unwrap();
        assert_eq!(robot.num_states(), motion.num_states());
        for s in 0..motion.num_states() {
            assert_eq!(robot.transitions(s), motion.transitions(s));
            assert_eq!(robot.label(s), motion.label(s));
        }
    }

    #[test]
    fn product_counts() {
        let three = CapabilityTS::motion(
            &regions(&["a", "b", "c"]),
            edges(&[("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0), ("a", "a", 0.0)]),
        )
        .unwrap();
        let robot = compose_robot(&three, &[camera()], 1).unwrap();
        assert_eq!(robot.num_states(), 6);
        assert_eq!(
            robot.num_transitions(),
            three.num_transitions() * camera().num_transitions()
        );
    }

    #[test]
    fn shared_proposition_is_rejected() {
        let err = compose_robot(&two_rooms(), &[camera(), camera()], 1).unwrap_err();
        assert!(matches!(err, ModelError::SharedProposition { .. }));
    }

    #[test]
    fn capability_validation() {
        let dead_end = CapabilityTS::new(
            "x",
            ["p"],
            vec![StateSpec::new("a", &[]), StateSpec::new("b", &["p"])],
            "a",
            edges(&[("a", "b", 1.0)]),
        );
        assert!(matches!(dead_end, Err(ModelError::NoSuccessor { .. })));
        let negative = CapabilityTS::new(
            "x",
            ["p"],
            vec![StateSpec::new("a", &[])],
            "a",
            edges(&[("a", "a", -1.0)]),
        );
        assert!(matches!(negative, Err(ModelError::BadWeight { .. })));
        let undeclared = CapabilityTS::new(
            "x",
            ["p"],
            vec![StateSpec::new("a", &["q"])],
            "a",
            edges(&[("a", "a", 0.0)]),
        );
        assert!(matches!(undeclared, Err(ModelError::UndeclaredLabel { .. })));
    }
}
