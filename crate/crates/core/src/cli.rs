//! Command-line interface: `verify`, `sweep`, `plan`, `rus-depth`,
//! `crossover`. Exit codes: 0 success, 1 verification failure, 2 invalid
//! configuration or arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::costmodel::rt_fallback;
use crate::error::{Error, Result};
use crate::gadgets::verify::verify_all;
use crate::planner::{
    expected_tcount_per_repetition, plan_towers, synthesis_baseline, Scheme, TowerPlan,
};
use crate::rusdepth::{exact_expected_max_with, mc_expected_max, DEFAULT_TRUNCATION};
use crate::scenarios::{
    crossover, rows_to_csv, sweep, CrossoverMetric, ScenarioConfig, ScenarioName, SweepRow,
};

#[derive(Debug, Parser)]
#[command(name = "catcost", version, about = "Surface-code cost estimation for continuous rotations")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify every catalyst gadget by exact statevector simulation.
    Verify(VerifyArgs),
    /// Sweep code distances and report per-method costs.
    Sweep(SweepArgs),
    /// Plan independent towers covering N identical rotations.
    Plan(PlanArgs),
    /// Expected measurement depth of massively parallel RUS rotations.
    RusDepth(RusDepthArgs),
    /// Locate the code distance where one method stops being cheaper.
    Crossover(CrossoverArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Random angles/inputs per gadget.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 3)]
    d_min: u32,
    #[arg(long, default_value_t = 25)]
    d_max: u32,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// TOML file overriding any scenario field.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Identical rotations to cover.
    #[arg(long)]
    copies: u32,
    /// Planning scheme: control or excess.
    #[arg(long)]
    scheme: String,
    /// Distinct rotation angles, each getting its own tower family.
    #[arg(long, default_value_t = 1)]
    angles: u32,
    /// Oracle repetitions amortizing the startup cost.
    #[arg(long, default_value_t = 200)]
    reps: u32,
    /// Synthesis accuracy determining R_T.
    #[arg(long, default_value_t = 2e-6)]
    epsilon: f64,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Debug, Args)]
struct RusDepthArgs {
    /// Rotations teleported simultaneously per batch.
    #[arg(long, default_value_t = 5)]
    parallel: u32,
    /// Sequential batches per circuit copy.
    #[arg(long, default_value_t = 7)]
    layers: u32,
    #[arg(long, default_value_t = 60)]
    copies: u32,
    #[arg(long, default_value_t = 10000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Truncation depth of the exact convolution oracle.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: usize,
}

#[derive(Debug, Args)]
struct CrossoverArgs {
    #[arg(long)]
    scenario: String,
    /// Method expected to start cheaper.
    #[arg(long)]
    a: String,
    /// Method compared against.
    #[arg(long)]
    b: String,
    /// Metric: phys or volume.
    #[arg(long)]
    metric: String,
    #[arg(long, default_value_t = 3)]
    d_min: u32,
    #[arg(long, default_value_t = 51)]
    d_max: u32,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Parses arguments and runs; returns the process exit code.
pub fn run() -> u8 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Plan(args) => run_plan(args),
        Command::RusDepth(args) => run_rus_depth(args),
        Command::Crossover(args) => run_crossover(args),
    }
}

fn load_scenario(name: &str, config_path: Option<&PathBuf>) -> Result<ScenarioConfig> {
    let scenario: ScenarioName = name.parse()?;
    let mut config = ScenarioConfig::defaults(scenario)?;
    if let Some(path) = config_path {
        let text = std::fs::read_to_string(path)?;
        config.apply_overrides(&text)?;
    }
    if 100.0 * config.phys_error_rate >= 1.0 {
        eprintln!(
            "warning: physical error rate {} is at or above threshold; logical error \
             rates will not decay with distance",
            config.phys_error_rate
        );
    }
    Ok(config)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let reports = verify_all(args.trials, args.seed)?;
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed { "ok" } else { "FAILED" };
        eprintln!(
            "{status:6} {:40} target {:.3e}  catalyst {:.3e}  T {}",
            report.gadget,
            1.0 - report.worst_target_fidelity,
            1.0 - report.worst_catalyst_fidelity,
            report.t_states,
        );
        all_passed &= report.passed;
    }
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
    emit(args.out.as_ref(), &format!("{json}\n"))?;
    Ok(if all_passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    config: &'a ScenarioConfig,
    rows: &'a [SweepRow],
}

fn run_sweep(args: SweepArgs) -> Result<u8> {
    let config = load_scenario(&args.scenario, args.config.as_ref())?;
    let rows = sweep(&config, args.d_min, args.d_max)?;
    let text = match args.format.as_str() {
        "csv" => rows_to_csv(&rows),
        "json" => {
            let output = SweepOutput { config: &config, rows: &rows };
            let mut json = serde_json::to_string_pretty(&output).expect("rows serialize");
            json.push('\n');
            json
        }
        other => return Err(Error::Config(format!("unknown format {other:?}"))),
    };
    emit(args.out.as_ref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct PlanOutput {
    #[serde(flatten)]
    plan: TowerPlan,
    rt: f64,
    repetitions: u32,
    angles: u32,
    tcount_per_repetition: u64,
    synthesis_baseline: u64,
}

fn run_plan(args: PlanArgs) -> Result<u8> {
    let scheme: Scheme = args.scheme.parse()?;
    let rt = rt_fallback(args.epsilon)?;
    let plan = plan_towers(args.copies, scheme)?;
    let tcount = expected_tcount_per_repetition(&plan, rt, args.reps, args.angles)?;
    let baseline = synthesis_baseline(args.angles, args.copies, rt);
    match args.format.as_str() {
        "json" => {
            let output = PlanOutput {
                plan,
                rt,
                repetitions: args.reps,
                angles: args.angles,
                tcount_per_repetition: tcount,
                synthesis_baseline: baseline,
            };
            println!("{}", serde_json::to_string_pretty(&output).expect("plan serializes"));
        }
        "text" => {
            let multiset: Vec<String> =
                plan.towers.iter().map(|(layers, count)| format!("{layers}:{count}")).collect();
            println!("plan: {{{}}}", multiset.join(", "));
            println!("towers: {}", plan.num_towers());
            println!("excess: {}", plan.excess);
            println!("t_per_repetition: {tcount}");
            println!("synthesis_baseline: {baseline}");
        }
        other => return Err(Error::Config(format!("unknown format {other:?}"))),
    }
    Ok(0)
}

#[derive(Serialize)]
struct RusDepthOutput {
    estimate: f64,
    stderr: f64,
    exact: f64,
    samples: u64,
    seed: u64,
    rng: &'static str,
    parameters: RusDepthParams,
}

#[derive(Serialize)]
struct RusDepthParams {
    parallel: u32,
    layers: u32,
    copies: u32,
    truncation: usize,
}

fn run_rus_depth(args: RusDepthArgs) -> Result<u8> {
    let mc = mc_expected_max(args.parallel, args.layers, args.copies, args.samples, args.seed)?;
    let exact =
        exact_expected_max_with(args.parallel, args.layers, args.copies, args.truncation)?;
    let output = RusDepthOutput {
        estimate: mc.estimate,
        stderr: mc.stderr,
        exact,
        samples: mc.samples,
        seed: mc.seed,
        rng: mc.rng,
        parameters: RusDepthParams {
            parallel: args.parallel,
            layers: args.layers,
            copies: args.copies,
            truncation: args.truncation,
        },
    };
    println!("{}", serde_json::to_string_pretty(&output).expect("depth serializes"));
    Ok(0)
}

fn run_crossover(args: CrossoverArgs) -> Result<u8> {
    let config = load_scenario(&args.scenario, args.config.as_ref())?;
    let metric: CrossoverMetric = args.metric.parse()?;
    let result = crossover(&config, &args.a, &args.b, metric, args.d_min, args.d_max)?;
    println!("{}", serde_json::to_string_pretty(&result).expect("crossover serializes"));
    Ok(0)
}
