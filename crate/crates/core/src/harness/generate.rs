use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::scenario::{CapabilitySpec, EdgeSpec, EnvironmentSpec, RobotSpec, ScenarioSpec, StateSpecJson, MOTION};
use super::{HarnessError, Scenario};

/// Environment variable overriding [`BenchConfig::seed`].
pub const SEED_ENV: &str = "TASKFORGE_SEED";

/// Parameters of a benchmark sweep and of random scenario generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub seed: u64,
    /// Robot counts to sweep.
    pub robots: Vec<usize>,
    /// Sub-task counts to sweep.
    pub tasks: Vec<usize>,
    pub trials: usize,
    /// Room grid as `[rows, cols]`.
    pub grid: [usize; 2],
    /// Inclusive range of motion weights; drawn in steps of 0.5.
    pub weights: [f64; 2],
    /// Capability pool, drawn from the built-in `arm`, `scan` and `camera`.
    pub capabilities: Vec<String>,
    /// Largest progress (in plan steps) given to a robot's current task.
    pub max_progress: usize,
    pub max_retries: usize,
    pub skip_optimal: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 1,
            robots: vec![2, 3, 4, 5, 6, 7, 8],
            tasks: vec![5],
            trials: 30,
            grid: [2, 3],
            weights: [1.0, 3.0],
            capabilities: vec!["arm".into(), "scan".into(), "camera".into()],
            max_progress: 4,
            max_retries: 50,
            skip_optimal: false,
        }
    }
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let c: BenchConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Replaces the seed with the value of [`SEED_ENV`] when set.
    pub fn apply_seed_env(&mut self) -> Result<(), HarnessError> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| HarnessError::Config(format!("{SEED_ENV}={v} is not an integer")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.robots.is_empty() || self.robots.contains(&0) {
            return bad("robot counts must be nonempty and at least 1");
        }
        if self.tasks.is_empty() || self.tasks.contains(&0) {
            return bad("task counts must be nonempty and at least 1");
        }
        if self.trials == 0 || self.max_retries == 0 {
            return bad("trials and max_retries must be at least 1");
        }
        if self.grid[0] == 0 || self.grid[1] == 0 || self.grid[0] * self.grid[1] < 2 {
            return bad("grid needs at least two rooms");
        }
        let [lo, hi] = self.weights;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
            return bad("weights must satisfy 0 <= lo <= hi");
        }
        if self.capabilities.is_empty() {
            return bad("capability pool is empty");
        }
        if let Some(c) = self.capabilities.iter().find(|c| builtin_actions(c).is_none()) {
            return Err(HarnessError::Config(format!("unknown capability `{c}`")));
        }
        Ok(())
    }
}

fn builtin_actions(name: &str) -> Option<&'static [&'static str]> {
    match name {
        "arm" => Some(&["pick_up", "drop_off", "pull_lever"]),
        "scan" => Some(&["scan"]),
        "camera" => Some(&["use_camera"]),
        _ => None,
    }
}

/// Idle state plus one state per action; entering an action costs 0.5 and
/// returning to idle is free.
fn builtin_capability(name: &str) -> CapabilitySpec {
    let actions = builtin_actions(name).expect("validated capability");
    let mut states = vec![StateSpecJson {
        id: "idle".into(),
        label: vec![],
    }];
    let mut edges = vec![edge("idle", "idle", 0.0)];
    for a in actions {
        states.push(StateSpecJson {
            id: a.to_string(),
            label: vec![a.to_string()],
        });
        edges.push(edge("idle", a, 0.5));
        edges.push(edge(a, "idle", 0.0));
    }
    CapabilitySpec {
        props: actions.iter().map(|a| a.to_string()).collect(),
        states,
        edges,
        initial: "idle".into(),
    }
}

fn edge(from: &str, to: &str, weight: f64) -> EdgeSpec {
    EdgeSpec {
        from: from.into(),
        to: to.into(),
        weight,
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent RNG seed for one benchmark trial.
pub fn trial_seed(seed: u64, n: usize, m: usize, trial: usize) -> u64 {
    [n as u64, m as u64, trial as u64]
        .into_iter()
        .fold(splitmix(seed), |acc, v| splitmix(acc ^ v))
}

/// Random scenario with `n` robots and `m` new sub-tasks, determined by
/// `(config.seed, n, m, trial)`. Draws are repeated until one validates.
pub fn generate_random(
    config: &BenchConfig,
    n: usize,
    m: usize,
    trial: usize,
) -> Result<Scenario, HarnessError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(config.seed, n, m, trial));
    let mut last = String::new();
    for attempt in 0..config.max_retries {
        let spec = draw(config, n, m, trial, attempt, &mut rng);
        match Scenario::from_spec(spec) {
            Ok(s) => return Ok(s),
            Err(e) => last = format!("draw {attempt}: {e}"),
        }
    }
    Err(HarnessError::RetriesExhausted {
        attempts: config.max_retries,
        last,
    })
}

fn draw(
    config: &BenchConfig,
    n: usize,
    m: usize,
    trial: usize,
    attempt: usize,
    rng: &mut ChaCha8Rng,
) -> ScenarioSpec {
    let [rows, cols] = config.grid;
    let rooms: Vec<String> = (1..=rows * cols).map(|k| format!("room_{k}")).collect();
    let [lo, hi] = config.weights;
    let steps = ((hi - lo) / 0.5).floor() as u32;
    let mut edges: Vec<EdgeSpec> = rooms.iter().map(|r| edge(r, r, 0.0)).collect();
    for r in 0..rows {
        for c in 0..cols {
            let here = &rooms[r * cols + c];
            let mut link = |there: &String| {
                let w = lo + 0.5 * f64::from(rng.random_range(0..=steps));
                edges.push(edge(here, there, w));
                edges.push(edge(there, here, w));
            };
            if c + 1 < cols {
                link(&rooms[r * cols + c + 1]);
            }
            if r + 1 < rows {
                link(&rooms[(r + 1) * cols + c]);
            }
        }
    }

    let pool = &config.capabilities;
    let capabilities: BTreeMap<String, CapabilitySpec> = pool
        .iter()
        .map(|c| (c.clone(), builtin_capability(c)))
        .collect();

    let robots = (1..=n)
        .map(|i| {
            let k = rng.random_range(1..=pool.len().min(3));
            let mut caps: Vec<String> = pool.choose_multiple(rng, k).cloned().collect();
            caps.sort_by_key(|c| pool.iter().position(|p| p == c));
            let actions: Vec<&str> = caps
                .iter()
                .flat_map(|c| builtin_actions(c).unwrap().iter().copied())
                .collect();
            let current_task = current_template(rng, &rooms, &actions);
            RobotSpec {
                id: format!("robot_{i}"),
                capabilities: caps,
                initial: BTreeMap::from([(MOTION.to_string(), rooms.choose(rng).unwrap().clone())]),
                current_task,
                progress_steps: rng.random_range(0..=config.max_progress),
            }
        })
        .collect();

    let all_actions: Vec<Vec<&str>> = pool
        .iter()
        .map(|c| builtin_actions(c).unwrap().to_vec())
        .collect();
    let mut used_pick_drop = false;
    let new_tasks = (0..m)
        .map(|_| new_template(rng, &rooms, pool, &all_actions, &mut used_pick_drop))
        .collect();

    ScenarioSpec {
        description: Some(format!(
            "random: seed {} n {n} m {m} trial {trial} draw {attempt}",
            config.seed
        )),
        environment: EnvironmentSpec {
            regions: rooms,
            edges,
        },
        capabilities,
        robots,
        new_tasks,
    }
}

fn two_rooms<'a>(rng: &mut ChaCha8Rng, rooms: &'a [String]) -> (&'a str, &'a str) {
    let mut picked: Vec<&String> = rooms.choose_multiple(rng, 2).collect();
    picked.shuffle(rng);
    (picked[0], picked[1])
}

/// Sequenced, patrol or unordered current task over the robot's own actions.
fn current_template(rng: &mut ChaCha8Rng, rooms: &[String], actions: &[&str]) -> String {
    let (ra, rb) = two_rooms(rng, rooms);
    let a = *actions.choose(rng).unwrap();
    match rng.random_range(0..3) {
        0 => format!("(!({ra} & {a}) U ({rb} & {a})) & F ({ra} & {a})"),
        1 => format!("G F ({ra} & {a}) & G F ({rb} & {a})"),
        _ => {
            let b = *actions.choose(rng).unwrap();
            format!("F ({ra} & {a}) & F ({rb} & {b})")
        }
    }
}

/// Pick-and-drop, visit-and-act, or recurring joint-action sub-task.
fn new_template(
    rng: &mut ChaCha8Rng,
    rooms: &[String],
    pool: &[String],
    actions: &[Vec<&str>],
    used_pick_drop: &mut bool,
) -> String {
    let (ra, rb) = two_rooms(rng, rooms);
    let has_arm = pool.iter().any(|c| c == "arm");
    let kind = rng.random_range(0..3);
    if kind == 0 && has_arm && !*used_pick_drop {
        *used_pick_drop = true;
        return format!("(!drop_off U ({ra} & pick_up)) & (!drop_off U ({rb} & drop_off))");
    }
    let first = rng.random_range(0..actions.len());
    let a = *actions[first].choose(rng).unwrap();
    if kind == 2 && actions.len() > 1 {
        let mut second = rng.random_range(0..actions.len() - 1);
        if second >= first {
            second += 1;
        }
        let b = *actions[second].choose(rng).unwrap();
        return format!("G F ({ra} & {a} & {b})");
    }
    format!("F ({ra} & {a})")
}
