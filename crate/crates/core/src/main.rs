//! Command-line front end: single runs and policy-sweep experiments.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use wsn_chase::experiment::{
    run_experiment, write_runs_csv, write_summary_csv, write_trace_csv, ExperimentSpec,
    PolicyChoice, Scenario,
};
use wsn_chase::{
    load_track, simulate, Coord, GridSpec, KinematicModel, MoveMode, PolicyKind, SimConfig,
    Threshold, TrackSource,
};

#[derive(Parser)]
#[command(
    name = "wsn-chase",
    version,
    about = "Simulate a mobile sink chasing a moving target across a sensor grid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single chase and print its metrics.
    Simulate(SimulateArgs),
    /// Sweep policies over a batch of seeded tracks and write CSV results.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Grid size as WxH segments.
    #[arg(long, default_value = "200x200")]
    grid: GridSpec,
    /// Sink start position as x,y.
    #[arg(long, default_value = "5,5")]
    sink_start: Coord,
    /// Target start position as x,y.
    #[arg(long, default_value = "100,100")]
    target_start: Coord,
    /// Sink velocity in segments per step.
    #[arg(long, default_value_t = 2)]
    v_sink: u32,
    /// Target velocity in segments per step.
    #[arg(long, default_value_t = 1)]
    v_target: u32,
    /// Movement mode: `axis` (one direction per step) or `ball` (any
    /// combination within the velocity budget).
    #[arg(long, default_value = "axis")]
    mode: MoveMode,
    /// Abort a run after this many steps without a catch.
    #[arg(long, default_value_t = 10_000)]
    max_steps: u32,
}

impl ScenarioArgs {
    fn scenario(&self) -> Scenario {
        Scenario {
            grid: self.grid,
            sink_start: self.sink_start,
            target_start: self.target_start,
            sink_model: KinematicModel {
                v_max: self.v_sink,
                mode: self.mode,
            },
            target_model: KinematicModel {
                v_max: self.v_target,
                mode: self.mode,
            },
            max_steps: self.max_steps,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Transfer policy: always, beacon, dirchange, or probgain.
    #[arg(long, default_value = "always")]
    policy: PolicyChoice,
    /// Gain threshold for the probgain policy.
    #[arg(long, default_value = "0.2")]
    threshold: Threshold,
    /// Seed for the target's random walk.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the per-step trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Replay the target track from this file (one `x,y` line per step)
    /// instead of generating a walk; the first line sets the target start.
    #[arg(long)]
    track: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Number of target tracks.
    #[arg(long, default_value_t = 10)]
    tracks: u32,
    /// Track i uses seed base_seed + i.
    #[arg(long, default_value_t = 1)]
    base_seed: u64,
    /// Comma-separated policies to compare.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "always,beacon,dirchange,probgain"
    )]
    policies: Vec<PolicyChoice>,
    /// Comma-separated thresholds for the probgain sweep.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
    )]
    thresholds: Vec<Threshold>,
    /// Directory for runs.csv and summary.csv (created if missing).
    #[arg(long)]
    out_dir: PathBuf,
}

fn policy_kind(choice: PolicyChoice, threshold: Threshold) -> PolicyKind {
    match choice {
        PolicyChoice::AlwaysSend => PolicyKind::AlwaysSend,
        PolicyChoice::Beacon => PolicyKind::Beacon,
        PolicyChoice::DirectionChange => PolicyKind::DirectionChange,
        PolicyChoice::ProbabilityGain => PolicyKind::ProbabilityGain { threshold },
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let mut scenario = args.scenario.scenario();

    let track = match &args.track {
        Some(path) => {
            let file = File::open(path)
                .with_context(|| format!("cannot open track file {}", path.display()))?;
            let track = load_track(file, scenario.grid, scenario.target_model.v_max)
                .with_context(|| format!("invalid track file {}", path.display()))?;
            scenario.target_start = track.start();
            Some(track)
        }
        None => None,
    };

    let config = SimConfig {
        grid: scenario.grid,
        sink_start: scenario.sink_start,
        target_start: scenario.target_start,
        sink_model: scenario.sink_model,
        target_model: scenario.target_model,
        policy: policy_kind(args.policy, args.threshold),
        max_steps: scenario.max_steps,
    };
    let source = match &track {
        Some(t) => TrackSource::Track(t),
        None => TrackSource::Seeded(args.seed),
    };

    let report = simulate(&config, source)?;

    if let Some(path) = &args.trace {
        let file = File::create(path)
            .with_context(|| format!("cannot create trace file {}", path.display()))?;
        write_trace_csv(&report.trace, BufWriter::new(file))?;
    }

    let r = &report.record;
    println!(
        "time_to_catch={} total_hops={} transfer_count={} total_activations={}",
        r.time_to_catch, r.total_hops, r.transfer_count, r.total_activations
    );
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<bool> {
    if args.policies.is_empty() {
        bail!("at least one policy is required");
    }
    let spec = ExperimentSpec {
        scenario: args.scenario.scenario(),
        algorithms: args.policies.clone(),
        thresholds: args.thresholds.clone(),
        track_count: args.tracks,
        base_seed: args.base_seed,
    };

    let result = run_experiment(&spec)?;

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let runs_path = args.out_dir.join("runs.csv");
    let summary_path = args.out_dir.join("summary.csv");
    write_runs_csv(&result.runs, BufWriter::new(File::create(&runs_path)?))?;
    write_summary_csv(
        &result.summary,
        BufWriter::new(File::create(&summary_path)?),
    )?;

    let failures = result.failures();
    for failure in &failures {
        if let Err(f) = &failure.outcome {
            eprintln!(
                "warning: track {} policy {} excluded from means: {}",
                failure.track_id, failure.policy, f.reason
            );
        }
    }
    eprintln!(
        "wrote {} runs to {} and {} summary rows to {}",
        result.runs.len(),
        runs_path.display(),
        result.summary.len(),
        summary_path.display()
    );
    Ok(failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(args) => cmd_simulate(args).map(|()| true),
        Command::Experiment(args) => cmd_experiment(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
