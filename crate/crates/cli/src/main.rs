//! Scenario-driven batch runner for the verification workbench.
//!
//! Exit codes: 0 all scenarios match their expectations; 2 configuration or
//! usage error; 3 a verdict contradicted its scenario's expectation; 4 an
//! unexpected numerical (solver) failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use reilly_cli::config::{parse_config, parse_levels, Scenario, Suite, SUITE_NAMES};
use reilly_cli::runner::{run_scenario, Outcome, ScenarioResult};
use reilly_cli::{registry, report};

#[derive(Parser)]
#[command(name = "reilly", version, about = "Verification workbench for weighted Reilly identities and Heintze-Karcher type inequalities on meshed 2-D geometries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Scenario configuration file; without it the builtin registry runs.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for reports and tables.
    #[arg(long)]
    out: PathBuf,
    /// Only run scenarios of this suite.
    #[arg(long)]
    suite: Option<String>,
    /// Override refinement levels, e.g. 1..4.
    #[arg(long)]
    levels: Option<String>,
    /// Override the seed for randomized manufactured fields.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for scenario-level parallelism (default 1, or the
    /// config file's `jobs`).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios and write reports.
    Run(RunArgs),
    /// List the builtin golden scenarios.
    ListScenarios {
        /// Only list scenarios of this suite.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Convergence sweep: run with an overridden level range.
    Convergence {
        #[command(flatten)]
        run: RunArgs,
    },
}

/// `all` selects every suite (no filter).
fn resolve_suite(name: &str) -> Result<Option<Suite>, String> {
    if name == "all" {
        return Ok(None);
    }
    Suite::parse(name).map(Some).ok_or_else(|| {
        format!(
            "unknown suite '{name}'; valid suites: all, {}",
            SUITE_NAMES.map(|(n, _)| n).join(", ")
        )
    })
}

fn gather_scenarios(args: &RunArgs) -> Result<(Vec<Scenario>, usize), String> {
    let mut config_jobs = None;
    let mut scenarios = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let cfg = parse_config(&text).map_err(|e| e.to_string())?;
            config_jobs = cfg.jobs;
            cfg.scenarios
        }
        None => registry::builtin_scenarios(),
    };
    if let Some(name) = &args.suite {
        if let Some(suite) = resolve_suite(name)? {
            scenarios.retain(|s| s.suite == suite);
            if scenarios.is_empty() {
                return Err(format!("no scenarios in suite '{name}'"));
            }
        }
    }
    if let Some(levels) = &args.levels {
        let levels = parse_levels(0, levels).map_err(|e| e.to_string())?;
        for s in &mut scenarios {
            s.levels = levels.clone();
        }
    }
    if let Some(seed) = args.seed {
        for s in &mut scenarios {
            s.seed = Some(seed);
        }
    }
    scenarios.sort_by(|a, b| a.name.cmp(&b.name));
    Ok((scenarios, args.jobs.or(config_jobs).unwrap_or(1)))
}

fn write_outputs(out_dir: &PathBuf, results: &[ScenarioResult]) -> Result<(), String> {
    std::fs::create_dir_all(out_dir).map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
    for r in results {
        let base = out_dir.join(&r.scenario.name);
        std::fs::write(base.with_extension("report.txt"), report::render_report(r))
            .map_err(|e| format!("write report: {e}"))?;
        std::fs::write(base.with_extension("table.csv"), report::render_table(r))
            .map_err(|e| format!("write table: {e}"))?;
        std::fs::write(base.with_extension("timing.txt"), report::render_timings(r))
            .map_err(|e| format!("write timing: {e}"))?;
    }
    Ok(())
}

fn execute(args: &RunArgs) -> ExitCode {
    let (scenarios, jobs) = match gather_scenarios(args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build();
    let results: Vec<ScenarioResult> = match pool {
        Ok(pool) => pool.install(|| {
            use rayon::prelude::*;
            scenarios.par_iter().map(run_scenario).collect()
        }),
        Err(_) => scenarios.iter().map(run_scenario).collect(),
    };
    // results follow the sorted scenario order already
    if let Err(e) = write_outputs(&args.out, &results) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }

    let mut solver_failures = Vec::new();
    let mut mismatches = Vec::new();
    for r in &results {
        let line = format!(
            "{:32} suite={:17} verdict={:22} expected={:15} outcome={}",
            r.scenario.name,
            r.scenario.suite.name(),
            r.verdict.as_str(),
            r.scenario.expect.name(),
            report::outcome_str(r.outcome)
        );
        println!("{line}");
        match r.outcome {
            Outcome::Pass => {}
            Outcome::VerdictMismatch => mismatches.push(r.scenario.name.clone()),
            Outcome::UnexpectedSolverFailure => solver_failures.push(r.scenario.name.clone()),
        }
    }
    if !solver_failures.is_empty() {
        eprintln!("numerical failure in: {}", solver_failures.join(", "));
        return ExitCode::from(4);
    }
    if !mismatches.is_empty() {
        eprintln!("verdict failure in: {}", mismatches.join(", "));
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}

fn list_scenarios(suite: Option<&str>) -> ExitCode {
    let filter = match suite {
        Some(name) => match resolve_suite(name) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => None,
    };
    for s in registry::builtin_scenarios() {
        if filter.is_some_and(|f| f != s.suite) {
            continue;
        }
        println!(
            "{:32} [{:17}] {}\n{:32}  claim: {}",
            s.name,
            s.suite.name(),
            s.description,
            "",
            s.claim
        );
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => execute(&args),
        Command::Convergence { run } => {
            if run.levels.is_none() {
                eprintln!("error: convergence requires --levels a..b");
                return ExitCode::from(2);
            }
            execute(&run)
        }
        Command::ListScenarios { suite } => list_scenarios(suite.as_deref()),
    }
}
