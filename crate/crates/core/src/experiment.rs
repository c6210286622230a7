//! Experiment runner: multi-track, multi-policy sweeps with CSV output.
//!
//! Every policy in an experiment replays the exact same set of tracks
//! (track `i` is generated once from `base_seed + i`), so per-track results
//! are directly comparable across policies. Runs execute in parallel;
//! output rows are sorted by (track_id, policy, threshold) before writing,
//! so the CSVs are byte-identical regardless of scheduling.

use std::io::Write;

use rayon::prelude::*;

use crate::grid::{Coord, GridSpec, KinematicModel};
use crate::policy::{PolicyKind, Threshold};
use crate::sim::{simulate, RunRecord, SimConfig, SimError, StepTrace, TrackSource};
use crate::track::{generate_track, Track};

pub const RUNS_CSV_HEADER: &str =
    "track_id,policy,threshold,time_to_catch,total_hops,transfer_count,total_activations,seed";
pub const SUMMARY_CSV_HEADER: &str = "policy,threshold,mean_time_to_catch,mean_total_hops,mean_transfer_count,hop_reduction_vs_baseline_pct,time_increase_vs_baseline_pct";
pub const TRACE_CSV_HEADER: &str =
    "step,target_x,target_y,sink_x,sink_y,dest_x,dest_y,transferred,hops,activated";

/// Policy family selected for an experiment; `ProbabilityGain` expands into
/// one run per configured threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyChoice {
    AlwaysSend,
    Beacon,
    DirectionChange,
    ProbabilityGain,
}

impl std::str::FromStr for PolicyChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "always" => Ok(PolicyChoice::AlwaysSend),
            "beacon" => Ok(PolicyChoice::Beacon),
            "dirchange" => Ok(PolicyChoice::DirectionChange),
            "probgain" => Ok(PolicyChoice::ProbabilityGain),
            other => Err(format!(
                "unknown policy {other:?}; expected always, beacon, dirchange, or probgain"
            )),
        }
    }
}

/// Scenario shared by all runs of an experiment.
#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    pub grid: GridSpec,
    pub sink_start: Coord,
    pub target_start: Coord,
    pub sink_model: KinematicModel,
    pub target_model: KinematicModel,
    pub max_steps: u32,
}

impl Default for Scenario {
    fn default() -> Self {
        let base = SimConfig::default();
        Scenario {
            grid: base.grid,
            sink_start: base.sink_start,
            target_start: base.target_start,
            sink_model: base.sink_model,
            target_model: base.target_model,
            max_steps: base.max_steps,
        }
    }
}

impl Scenario {
    /// The scenario as a runnable configuration for one policy.
    pub fn sim_config(&self, policy: PolicyKind) -> SimConfig {
        SimConfig {
            grid: self.grid,
            sink_start: self.sink_start,
            target_start: self.target_start,
            sink_model: self.sink_model,
            target_model: self.target_model,
            policy,
            max_steps: self.max_steps,
        }
    }
}

/// Full description of one experiment.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    pub algorithms: Vec<PolicyChoice>,
    /// Thresholds swept for the probability-gain policy.
    pub thresholds: Vec<Threshold>,
    pub track_count: u32,
    pub base_seed: u64,
}

impl Default for ExperimentSpec {
    /// Ten tracks over the standard scenario, comparing all four policies
    /// with a threshold sweep from 0.0 to 0.9 in steps of 0.1.
    fn default() -> Self {
        ExperimentSpec {
            scenario: Scenario::default(),
            algorithms: vec![
                PolicyChoice::AlwaysSend,
                PolicyChoice::Beacon,
                PolicyChoice::DirectionChange,
                PolicyChoice::ProbabilityGain,
            ],
            thresholds: default_threshold_sweep(),
            track_count: 10,
            base_seed: 1,
        }
    }
}

/// 0.0, 0.1, ..., 0.9.
pub fn default_threshold_sweep() -> Vec<Threshold> {
    (0..10)
        .map(|k| Threshold::new(k, 10).expect("k/10 is within [0, 1]"))
        .collect()
}

impl ExperimentSpec {
    pub fn track_seed(&self, track_id: u32) -> u64 {
        self.base_seed.wrapping_add(u64::from(track_id))
    }

    /// Concrete policies this experiment runs, in output order.
    pub fn policy_matrix(&self) -> Vec<PolicyKind> {
        let mut out = Vec::new();
        for &choice in &self.algorithms {
            match choice {
                PolicyChoice::AlwaysSend => out.push(PolicyKind::AlwaysSend),
                PolicyChoice::Beacon => out.push(PolicyKind::Beacon),
                PolicyChoice::DirectionChange => out.push(PolicyKind::DirectionChange),
                PolicyChoice::ProbabilityGain => {
                    for &threshold in &self.thresholds {
                        out.push(PolicyKind::ProbabilityGain { threshold });
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.track_count < 1 {
            return Err(ExperimentError::InvalidSpec(
                "track_count must be at least 1".into(),
            ));
        }
        if self.algorithms.is_empty() {
            return Err(ExperimentError::InvalidSpec(
                "at least one policy is required".into(),
            ));
        }
        if self.algorithms.contains(&PolicyChoice::ProbabilityGain) && self.thresholds.is_empty() {
            return Err(ExperimentError::InvalidSpec(
                "probgain requires at least one threshold".into(),
            ));
        }
        Ok(())
    }
}

/// One run of the matrix: either a completed record or the partial metrics
/// of a run that stopped without a catch.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub track_id: u32,
    pub seed: u64,
    pub policy: PolicyKind,
    pub outcome: Result<RunRecord, RunFailure>,
}

/// Metrics accumulated by a run that did not catch the target.
#[derive(Clone, Debug)]
pub struct RunFailure {
    pub reason: String,
    pub total_hops: u64,
    pub transfer_count: u32,
    pub total_activations: u64,
}

/// Per-policy means plus deltas against the always-send baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub policy: PolicyKind,
    pub mean_time_to_catch: f64,
    pub mean_total_hops: f64,
    pub mean_transfer_count: f64,
    /// Percentage hop reduction relative to always-send; `None` when no
    /// baseline rows exist (or the baseline mean is zero).
    pub hop_reduction_vs_baseline_pct: Option<f64>,
    /// Percentage time-to-catch increase relative to always-send.
    pub time_increase_vs_baseline_pct: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("cannot summarize an empty record collection")]
    EmptyRecords,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Results of one experiment: all runs in output order, plus the summary
/// over the completed ones.
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub runs: Vec<ExperimentRun>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentResult {
    pub fn completed_records(&self) -> Vec<RunRecord> {
        self.runs
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok().cloned())
            .collect()
    }

    pub fn failures(&self) -> Vec<&ExperimentRun> {
        self.runs.iter().filter(|r| r.outcome.is_err()).collect()
    }
}

/// Runs the full (track x policy) matrix.
///
/// Tracks are generated up front, one per track id, and shared by every
/// policy. Runs that stop without a catch become failure rows; invalid
/// configurations abort the experiment.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult, ExperimentError> {
    spec.validate()?;
    let policies = spec.policy_matrix();

    let tracks: Vec<Track> = (0..spec.track_count)
        .map(|i| {
            generate_track(
                spec.scenario.target_start,
                spec.scenario.max_steps as usize + 1,
                spec.scenario.target_model.v_max,
                spec.scenario.grid,
                spec.track_seed(i),
            )
        })
        .collect();

    let matrix: Vec<(u32, PolicyKind)> = (0..spec.track_count)
        .flat_map(|track_id| policies.iter().map(move |&p| (track_id, p)))
        .collect();

    let runs: Vec<Result<ExperimentRun, SimError>> = matrix
        .par_iter()
        .map(|&(track_id, policy)| {
            let config = spec.scenario.sim_config(policy);
            let source = TrackSource::Track(&tracks[track_id as usize]);
            let outcome = match simulate(&config, source) {
                Ok(report) => {
                    let mut record = report.record;
                    record.track_id = track_id;
                    Ok(record)
                }
                Err(SimError::NonTermination {
                    total_hops,
                    transfer_count,
                    total_activations,
                    ..
                }) => Err(RunFailure {
                    reason: format!("no catch within {} steps", config.max_steps),
                    total_hops,
                    transfer_count,
                    total_activations,
                }),
                Err(SimError::TrackExhausted {
                    available,
                    total_hops,
                    transfer_count,
                    total_activations,
                }) => Err(RunFailure {
                    reason: format!("track ended after {available} positions"),
                    total_hops,
                    transfer_count,
                    total_activations,
                }),
                Err(e @ SimError::InvalidConfig(_)) => return Err(e),
            };
            Ok(ExperimentRun {
                track_id,
                seed: spec.track_seed(track_id),
                policy,
                outcome,
            })
        })
        .collect();

    let mut runs: Vec<ExperimentRun> = runs.into_iter().collect::<Result<_, _>>()?;
    runs.sort_by_key(|r| (r.track_id, r.policy));

    let completed: Vec<RunRecord> = runs
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().cloned())
        .collect();
    let summary = if completed.is_empty() {
        Vec::new()
    } else {
        summarize(&completed)?
    };

    Ok(ExperimentResult { runs, summary })
}

/// Arithmetic means per policy, with relative deltas against the
/// always-send baseline when it is present.
pub fn summarize(records: &[RunRecord]) -> Result<Vec<SummaryRow>, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::EmptyRecords);
    }
    let mut groups: std::collections::BTreeMap<PolicyKind, Vec<&RunRecord>> =
        std::collections::BTreeMap::new();
    for r in records {
        groups.entry(r.policy).or_default().push(r);
    }

    let mean = |rs: &[&RunRecord]| -> (f64, f64, f64) {
        let n = rs.len() as f64;
        (
            rs.iter().map(|r| f64::from(r.time_to_catch)).sum::<f64>() / n,
            rs.iter().map(|r| r.total_hops as f64).sum::<f64>() / n,
            rs.iter().map(|r| f64::from(r.transfer_count)).sum::<f64>() / n,
        )
    };

    let baseline = groups.get(&PolicyKind::AlwaysSend).map(|rs| mean(rs));

    Ok(groups
        .iter()
        .map(|(&policy, rs)| {
            let (time, hops, transfers) = mean(rs);
            let (hop_red, time_inc) = match baseline {
                Some((base_time, base_hops, _)) => (
                    (base_hops > 0.0).then(|| 100.0 * (1.0 - hops / base_hops)),
                    (base_time > 0.0).then(|| 100.0 * (time / base_time - 1.0)),
                ),
                None => (None, None),
            };
            SummaryRow {
                policy,
                mean_time_to_catch: time,
                mean_total_hops: hops,
                mean_transfer_count: transfers,
                hop_reduction_vs_baseline_pct: hop_red,
                time_increase_vs_baseline_pct: time_inc,
            }
        })
        .collect())
}

fn threshold_field(policy: PolicyKind) -> String {
    policy
        .threshold()
        .map(|t| t.to_string())
        .unwrap_or_default()
}

/// Writes the per-run CSV. Runs that stopped without a catch keep their
/// partial metrics but have an empty `time_to_catch` field.
pub fn write_runs_csv<W: Write>(runs: &[ExperimentRun], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUNS_CSV_HEADER.split(','))?;
    for run in runs {
        let (time, hops, transfers, activations) = match &run.outcome {
            Ok(r) => (
                r.time_to_catch.to_string(),
                r.total_hops,
                r.transfer_count,
                r.total_activations,
            ),
            Err(f) => (
                String::new(),
                f.total_hops,
                f.transfer_count,
                f.total_activations,
            ),
        };
        w.write_record([
            run.track_id.to_string(),
            run.policy.label().to_string(),
            threshold_field(run.policy),
            time,
            hops.to_string(),
            transfers.to_string(),
            activations.to_string(),
            run.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the per-policy summary CSV.
pub fn write_summary_csv<W: Write>(summary: &[SummaryRow], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_CSV_HEADER.split(','))?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in summary {
        w.write_record([
            row.policy.label().to_string(),
            threshold_field(row.policy),
            row.mean_time_to_catch.to_string(),
            row.mean_total_hops.to_string(),
            row.mean_transfer_count.to_string(),
            opt(row.hop_reduction_vs_baseline_pct),
            opt(row.time_increase_vs_baseline_pct),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one per-step trace in the documented schema.
pub fn write_trace_csv<W: Write>(trace: &[StepTrace], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_CSV_HEADER.split(','))?;
    for s in trace {
        w.write_record([
            s.step.to_string(),
            s.target_pos.x.to_string(),
            s.target_pos.y.to_string(),
            s.sink_pos.x.to_string(),
            s.sink_pos.y.to_string(),
            s.dest.x.to_string(),
            s.dest.y.to_string(),
            s.transferred.to_string(),
            s.hops_this_step.to_string(),
            s.activated_nodes.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
