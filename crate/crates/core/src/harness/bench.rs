use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::{generate_random, run_pipeline, trial_seed, BenchConfig, HarnessError, PipelineOptions};

/// One benchmark trial. Costs are empty when infinite or not computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub token_cost: Option<f64>,
    pub opt_cost: Option<f64>,
    pub token_ms: Option<f64>,
    pub opt_ms: Option<f64>,
    pub token_assigned: Option<usize>,
    pub opt_assigned: Option<usize>,
    pub status: String,
}

impl BenchRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Mean, min and max per `(n, m)` over successful trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub ok: usize,
    pub token_cost_mean: Option<f64>,
    pub token_cost_min: Option<f64>,
    pub token_cost_max: Option<f64>,
    pub opt_cost_mean: Option<f64>,
    pub opt_cost_min: Option<f64>,
    pub opt_cost_max: Option<f64>,
    pub token_ms_mean: Option<f64>,
    pub token_ms_min: Option<f64>,
    pub token_ms_max: Option<f64>,
    pub opt_ms_mean: Option<f64>,
    pub opt_ms_min: Option<f64>,
    pub opt_ms_max: Option<f64>,
}

fn finite(c: f64) -> Option<f64> {
    c.is_finite().then_some(c)
}

fn run_trial(config: &BenchConfig, n: usize, m: usize, trial: usize) -> BenchRow {
    let mut row = BenchRow {
        n,
        m,
        trial,
        seed: trial_seed(config.seed, n, m, trial),
        token_cost: None,
        opt_cost: None,
        token_ms: None,
        opt_ms: None,
        token_assigned: None,
        opt_assigned: None,
        status: "ok".into(),
    };
    let report = generate_random(config, n, m, trial).and_then(|s| {
        run_pipeline(
            &s,
            &PipelineOptions {
                skip_optimal: config.skip_optimal,
            },
        )
    });
    match report {
        Ok(r) => {
            row.token_cost = finite(r.token_cost);
            row.token_ms = Some(r.token_time.as_secs_f64() * 1e3);
            row.token_assigned = Some(r.token_assignment.assigned_count());
            row.opt_cost = r.optimal_cost.and_then(finite);
            row.opt_ms = r.optimal_time.map(|t| t.as_secs_f64() * 1e3);
            row.opt_assigned = r.optimal_assignment.map(|a| a.assigned_count());
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

/// Runs every `(n, m, trial)` of the sweep in order; failures become rows
/// with an error status.
pub fn bench(config: &BenchConfig, mut on_row: impl FnMut(&BenchRow)) -> Result<Vec<BenchRow>, HarnessError> {
    config.validate()?;
    let mut rows = Vec::new();
    for &n in &config.robots {
        for &m in &config.tasks {
            for trial in 0..config.trials {
                let row = run_trial(config, n, m, trial);
                on_row(&row);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

fn stats(values: impl Iterator<Item = Option<f64>>) -> (Option<f64>, Option<f64>, Option<f64>) {
    let v: Vec<f64> = values.flatten().collect();
    if v.is_empty() {
        return (None, None, None);
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (Some(mean), Some(min), Some(max))
}

pub fn aggregate(rows: &[BenchRow]) -> Vec<AggregateRow> {
    let mut keys: Vec<(usize, usize)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.n, r.m)) {
            keys.push((r.n, r.m));
        }
    }
    keys.into_iter()
        .map(|(n, m)| {
            let group: Vec<&BenchRow> = rows.iter().filter(|r| r.n == n && r.m == m).collect();
            let ok: Vec<&&BenchRow> = group.iter().filter(|r| r.is_ok()).collect();
            let (tc, tcmin, tcmax) = stats(ok.iter().map(|r| r.token_cost));
            let (oc, ocmin, ocmax) = stats(ok.iter().map(|r| r.opt_cost));
            let (tm, tmmin, tmmax) = stats(ok.iter().map(|r| r.token_ms));
            let (om, ommin, ommax) = stats(ok.iter().map(|r| r.opt_ms));
            AggregateRow {
                n,
                m,
                trials: group.len(),
                ok: ok.len(),
                token_cost_mean: tc,
                token_cost_min: tcmin,
                token_cost_max: tcmax,
                opt_cost_mean: oc,
                opt_cost_min: ocmin,
                opt_cost_max: ocmax,
                token_ms_mean: tm,
                token_ms_min: tmmin,
                token_ms_max: tmmax,
                opt_ms_mean: om,
                opt_ms_min: ommin,
                opt_ms_max: ommax,
            }
        })
        .collect()
}

/// Writes `rows` as CSV.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
    for r in rows {
        w.serialize(r).map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), |x| format!("{x}"))
}

/// Writes `cost_m<M>.dat` and `time_m<M>.dat` per task count, with `n` in
/// the first column followed by mean, min and max for token then optimal.
pub fn write_gnuplot(dir: &Path, agg: &[AggregateRow]) -> Result<(), HarnessError> {
    let io = |path: &Path, source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut ms: Vec<usize> = agg.iter().map(|a| a.m).collect();
    ms.sort_unstable();
    ms.dedup();
    for m in ms {
        for (kind, pick) in [
            ("cost", (|a: &AggregateRow| [a.token_cost_mean, a.token_cost_min, a.token_cost_max, a.opt_cost_mean, a.opt_cost_min, a.opt_cost_max]) as fn(&AggregateRow) -> [Option<f64>; 6]),
            ("time", |a: &AggregateRow| [a.token_ms_mean, a.token_ms_min, a.token_ms_max, a.opt_ms_mean, a.opt_ms_min, a.opt_ms_max]),
        ] {
            let path = dir.join(format!("{kind}_m{m}.dat"));
            let mut f = fs::File::create(&path).map_err(|e| io(&path, e))?;
            let mut text = String::from("# n token_mean token_min token_max opt_mean opt_min opt_max\n");
            for a in agg.iter().filter(|a| a.m == m) {
                let vals: Vec<String> = pick(a).into_iter().map(cell).collect();
                text.push_str(&format!("{} {}\n", a.n, vals.join(" ")));
            }
            f.write_all(text.as_bytes()).map_err(|e| io(&path, e))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_one_trial() {
        let c = BenchConfig {
            robots: vec![2],
            tasks: vec![2],
            trials: 1,
            ..BenchConfig::default()
        };
        let rows = bench(&c, |_| {}).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].is_ok(), "{}", rows[0].status);
        let agg = aggregate(&rows);
        assert_eq!(agg.len(), 1);
        assert_eq!(agg[0].ok, 1);
    }
}
