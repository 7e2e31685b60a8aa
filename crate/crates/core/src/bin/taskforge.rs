use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use taskforge::allocation::AllocationReport;
use taskforge::buchi::{export_hoa, translate};
use taskforge::harness::{
    advance_progress, aggregate, bench, load_scenario, run_pipeline, write_csv, write_gnuplot,
    BenchConfig, HarnessError, PipelineOptions, Scenario,
};
use taskforge::ltl::{parse_ltl, Formula};
use taskforge::synthesis::{synthesize_behavior, Behavior};

const EXIT_VALIDATION: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "taskforge", version, about = "Plan robot behaviors for LTL tasks and allocate new sub-tasks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scenario file.
    Check { file: PathBuf },
    /// Translate an LTL formula into a Büchi automaton.
    Translate {
        ltl: String,
        /// Write the automaton in HOA format to this file.
        #[arg(long)]
        hoa: Option<PathBuf>,
    },
    /// Plan one robot's behavior for one new sub-task or all of them.
    Plan {
        file: PathBuf,
        #[arg(long)]
        robot: String,
        /// 1-based sub-task index, or `all`.
        #[arg(long)]
        task: String,
    },
    /// Allocate the scenario's new sub-tasks.
    Allocate {
        file: PathBuf,
        #[arg(long)]
        skip_optimal: bool,
        /// Write the full report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compare the token and optimal allocators on random scenarios.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write plot-ready aggregate files into this directory.
        #[arg(long)]
        gnuplot: Option<PathBuf>,
    },
}

enum Failure {
    Harness(HarnessError),
    Infeasible(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Harness(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Check { file } => check(&file),
        Command::Translate { ltl, hoa } => translate_cmd(&ltl, hoa.as_deref()),
        Command::Plan { file, robot, task } => plan(&file, &robot, &task),
        Command::Allocate {
            file,
            skip_optimal,
            json,
        } => allocate(&file, skip_optimal, json.as_deref()),
        Command::Bench {
            config,
            out,
            gnuplot,
        } => bench_cmd(&config, &out, gnuplot.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
        Err(Failure::Harness(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.exit_code() == 1 {
                EXIT_VALIDATION
            } else {
                EXIT_INTERNAL
            })
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn check(file: &Path) -> Result<(), Failure> {
    let s = load_scenario(file)?;
    println!(
        "ok: {} regions, {} robots, {} new sub-tasks",
        s.spec().environment.regions.len(),
        s.num_robots(),
        s.num_tasks()
    );
    for i in 0..s.num_robots() {
        let a = s.robot_model(i);
        println!(
            "  {}: {} states, {} transitions, task {}",
            s.robot_id(i),
            a.num_states(),
            a.num_transitions(),
            s.current_task(i)
        );
    }
    Ok(())
}

fn translate_cmd(text: &str, hoa: Option<&Path>) -> Result<(), Failure> {
    let f = parse_ltl(text).map_err(|source| HarnessError::Ltl {
        location: "formula".into(),
        source,
    })?;
    let b = translate(&f);
    let body = export_hoa(&b);
    match hoa {
        Some(path) => {
            write(path, &body)?;
            println!(
                "{} states, {} edges, {} accepting; written to {}",
                b.num_states(),
                b.num_edges(),
                b.accepting().len(),
                path.display()
            );
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn print_behavior(s: &Scenario, i: usize, b: &Behavior) {
    let a = s.robot_model(i);
    let show = |steps: &[taskforge::synthesis::Step]| {
        steps
            .iter()
            .map(|st| a.state_name(st.robot_state))
            .collect::<Vec<_>>()
            .join(" -> ")
    };
    println!("  prefix: {}", show(&b.prefix));
    println!("  cycle:  {}", show(&b.cycle));
    println!("  cost {} (cycle {})", b.cost, b.cycle_cost);
}

fn plan(file: &Path, robot: &str, task: &str) -> Result<(), Failure> {
    let s = load_scenario(file)?;
    let i = s
        .robot_index(robot)
        .ok_or_else(|| HarnessError::UnknownRobot(robot.into()))?;
    let m = s.num_tasks();
    let phi = if task == "all" {
        Formula::conjunction(s.new_tasks().iter().cloned())
    } else {
        let index: usize = task
            .parse()
            .map_err(|_| HarnessError::Config(format!("--task expects an index or `all`, got `{task}`")))?;
        if index == 0 || index > m {
            return Err(HarnessError::TaskIndex { index, m }.into());
        }
        s.new_tasks()[index - 1].clone()
    };
    let progress = advance_progress(&s, robot, s.progress_steps(i))?;
    let start = s.robot_model(i).with_initial(progress.robot_state);
    let b_curr = translate(s.current_task(i));
    let b = synthesize_behavior(&start, progress.buchi_state, &b_curr, &phi).map_err(HarnessError::from)?;
    println!(
        "{robot} from {} (automaton state {}), task {phi}",
        start.state_name(start.initial()),
        progress.buchi_state
    );
    if b.is_empty() {
        return Err(Failure::Infeasible(format!("{robot} cannot satisfy {phi} with its current task")));
    }
    print_behavior(&s, i, &b);
    Ok(())
}

fn fmt_cost(c: f64) -> String {
    if c.is_finite() {
        format!("{c}")
    } else {
        "inf".into()
    }
}

fn print_report(s: &Scenario, r: &AllocationReport) {
    for (i, rr) in r.robots.iter().enumerate() {
        let sat: String = rr.sat.bits().iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!(
            "{}: start {} z={} sat=[{}] assigned {} cost {}",
            rr.id,
            rr.start_state,
            rr.buchi_state,
            sat,
            rr.assigned,
            fmt_cost(rr.behavior.cost)
        );
        if !rr.behavior.is_empty() {
            print_behavior(s, i, &rr.behavior);
        }
    }
    println!(
        "token:   alpha {} cost {} time {:.3} ms",
        r.token_assignment,
        fmt_cost(r.token_cost),
        r.token_time.as_secs_f64() * 1e3
    );
    if let (Some(a), Some(c), Some(t)) = (&r.optimal_assignment, r.optimal_cost, r.optimal_time) {
        println!(
            "optimal: alpha {} cost {} time {:.3} ms",
            a,
            fmt_cost(c),
            t.as_secs_f64() * 1e3
        );
    }
    if !r.unassigned.is_empty() {
        println!("unassigned sub-tasks: {:?}", r.unassigned);
    }
}

fn allocate(file: &Path, skip_optimal: bool, json: Option<&Path>) -> Result<(), Failure> {
    let s = load_scenario(file)?;
    let r = run_pipeline(&s, &PipelineOptions { skip_optimal })?;
    print_report(&s, &r);
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&r).map_err(|e| HarnessError::Internal(e.to_string()))?;
        write(path, &(text + "\n"))?;
    }
    if !r.is_complete() {
        return Err(Failure::Infeasible(format!(
            "no robot can take sub-tasks {:?}",
            r.unassigned
        )));
    }
    Ok(())
}

fn bench_cmd(config: &Path, out: &Path, gnuplot: Option<&Path>) -> Result<(), Failure> {
    let text = fs::read_to_string(config).map_err(|source| HarnessError::Io {
        path: config.to_path_buf(),
        source,
    })?;
    let mut c = BenchConfig::from_json(&text)?;
    c.apply_seed_env()?;
    let rows = bench(&c, |r| {
        eprintln!(
            "n={} m={} trial={} token={:?} opt={:?} {}",
            r.n, r.m, r.trial, r.token_cost, r.opt_cost, r.status
        )
    })?;
    write_csv(out, &rows)?;
    let agg = aggregate(&rows);
    let summary = out.with_file_name(format!(
        "{}_summary.csv",
        out.file_stem().and_then(|s| s.to_str()).unwrap_or("bench")
    ));
    write_csv(&summary, &agg)?;
    if let Some(dir) = gnuplot {
        write_gnuplot(dir, &agg)?;
    }
    println!(
        "{} trials, {} failed; rows in {}, summary in {}",
        rows.len(),
        rows.iter().filter(|r| !r.is_ok()).count(),
        out.display(),
        summary.display()
    );
    Ok(())
}
