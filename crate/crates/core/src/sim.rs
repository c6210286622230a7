//! The tracking loop: per-step target motion, node activation, detection,
//! transfer decision, sink motion, and metric accumulation.
//!
//! Step ordering is fixed: the target moves, the newly detected position is
//! evaluated against the policy (with the sink still at its pre-move
//! position, since a transfer informs the move that follows), the sink
//! moves, and the catch check compares the two positions. The run starts
//! with one counted transfer of the target's initial position so the sink
//! has a destination before its first move.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{hop_count, sink_step, Coord, GridSpec, KinematicModel, MoveMode};
use crate::policy::{prediction_set, should_transfer, DecisionContext, PolicyKind};
use crate::track::{random_walk_step, Track};

/// Scenario description for one run.
#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub grid: GridSpec,
    pub sink_start: Coord,
    pub target_start: Coord,
    pub sink_model: KinematicModel,
    pub target_model: KinematicModel,
    pub policy: PolicyKind,
    /// Runs that have not caught the target after this many steps stop with
    /// [`SimError::NonTermination`].
    pub max_steps: u32,
}

impl Default for SimConfig {
    /// The standard scenario: 200x200 grid, sink starting at (5, 5) with
    /// velocity 2, target starting at (100, 100) with velocity 1, both
    /// moving along one axis per step.
    fn default() -> Self {
        SimConfig {
            grid: GridSpec::new(200, 200),
            sink_start: Coord::new(5, 5),
            target_start: Coord::new(100, 100),
            sink_model: KinematicModel::axis_only(2),
            target_model: KinematicModel::axis_only(1),
            policy: PolicyKind::AlwaysSend,
            max_steps: 10_000,
        }
    }
}

/// Where the target's trajectory comes from.
#[derive(Clone, Copy, Debug)]
pub enum TrackSource<'a> {
    /// Replay a pre-built track; its first position must match the
    /// configured target start.
    Track(&'a Track),
    /// Generate the walk on the fly from this seed.
    Seeded(u64),
}

/// One row of the per-step audit trail.
///
/// `sink_pos` is the sink's position after its move, so the hop count of a
/// transfer at step `t >= 1` is recomputable as the Chebyshev distance
/// between this row's `target_pos` and the previous row's `sink_pos`. Row 0
/// records the initial transfer before the sink has moved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepTrace {
    pub step: u32,
    pub target_pos: Coord,
    pub sink_pos: Coord,
    pub dest: Coord,
    pub transferred: bool,
    pub hops_this_step: u32,
    pub activated_nodes: u32,
}

/// Outcome metrics of one completed run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub time_to_catch: u32,
    pub total_hops: u64,
    pub transfer_count: u32,
    pub total_activations: u64,
    pub policy: PolicyKind,
    pub track_id: u32,
}

/// A completed run together with its full audit trail.
#[derive(Clone, Debug)]
pub struct SimReport {
    pub record: RunRecord,
    pub trace: Vec<StepTrace>,
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("no catch within {max_steps} steps")]
    NonTermination {
        max_steps: u32,
        total_hops: u64,
        transfer_count: u32,
        total_activations: u64,
    },
    #[error("track ended after {available} positions without a catch")]
    TrackExhausted {
        available: usize,
        total_hops: u64,
        transfer_count: u32,
        total_activations: u64,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// True exactly when the sink occupies the target's segment.
pub fn catch_check(sink: Coord, target: Coord) -> bool {
    sink == target
}

fn validate(config: &SimConfig, source: &TrackSource<'_>) -> Result<(), SimError> {
    let fail = |msg: String| Err(SimError::InvalidConfig(msg));
    if !config.grid.contains(config.sink_start) {
        return fail(format!(
            "sink start {} outside grid {}",
            config.sink_start, config.grid
        ));
    }
    if !config.grid.contains(config.target_start) {
        return fail(format!(
            "target start {} outside grid {}",
            config.target_start, config.grid
        ));
    }
    if config.sink_model.v_max < 1 || config.target_model.v_max < 1 {
        return fail("agent velocities must be at least 1".into());
    }
    match source {
        TrackSource::Track(track) => {
            track
                .validate(config.grid, config.target_model.v_max)
                .map_err(|e| SimError::InvalidConfig(e.to_string()))?;
            if track.start() != config.target_start {
                return fail(format!(
                    "track starts at {} but the configured target start is {}",
                    track.start(),
                    config.target_start
                ));
            }
        }
        TrackSource::Seeded(_) => {
            let v = config.target_model.v_max as i32;
            if config.grid.width < 2 * v && config.grid.height < 2 * v {
                return fail(format!(
                    "grid {} too small for a target walk with v_max {v}",
                    config.grid
                ));
            }
        }
    }
    Ok(())
}

enum Walker<'a> {
    Replay(&'a Track),
    Generate { rng: Box<ChaCha8Rng>, pos: Coord },
}

impl Walker<'_> {
    fn next_position(&mut self, step: u32, config: &SimConfig) -> Option<Coord> {
        match self {
            Walker::Replay(track) => track.positions.get(step as usize).copied(),
            Walker::Generate { rng, pos } => {
                *pos = random_walk_step(*pos, config.target_model.v_max, config.grid, rng);
                Some(*pos)
            }
        }
    }
}

/// Runs the tracking loop until the sink catches the target.
///
/// Returns the run metrics plus the per-step trace. Identical inputs
/// (including the seed) always produce an identical trace.
pub fn simulate(config: &SimConfig, source: TrackSource<'_>) -> Result<SimReport, SimError> {
    validate(config, &source)?;

    let mut walker = match source {
        TrackSource::Track(track) => Walker::Replay(track),
        TrackSource::Seeded(seed) => Walker::Generate {
            rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
            pos: config.target_start,
        },
    };

    let mut target = config.target_start;
    let mut sink = config.sink_start;
    let mut dest = config.target_start;
    let mut total_hops: u64 = 0;
    let mut transfer_count: u32 = 0;
    let mut total_activations: u64 = 0;
    let mut trace = Vec::new();

    // Initial transfer: the sink learns the target's start position before
    // anything moves. Counted like any other transfer.
    let initial_hops = hop_count(target, sink);
    total_hops += u64::from(initial_hops);
    transfer_count += 1;
    trace.push(StepTrace {
        step: 0,
        target_pos: target,
        sink_pos: sink,
        dest,
        transferred: true,
        hops_this_step: initial_hops,
        activated_nodes: 0,
    });

    if catch_check(sink, target) {
        return Ok(SimReport {
            record: RunRecord {
                time_to_catch: 0,
                total_hops,
                transfer_count,
                total_activations,
                policy: config.policy,
                track_id: 0,
            },
            trace,
        });
    }

    for step in 1..=config.max_steps {
        let previous_target = target;
        target = match walker.next_position(step, config) {
            Some(p) => p,
            None => {
                return Err(SimError::TrackExhausted {
                    available: step as usize,
                    total_hops,
                    transfer_count,
                    total_activations,
                })
            }
        };
        debug_assert!(
            previous_target.manhattan(target) <= config.target_model.v_max,
            "target moved faster than its model allows"
        );

        // Nodes that may detect the target this step wake up.
        let activated = prediction_set(previous_target, config.target_model, config.grid);
        debug_assert!(
            activated.contains(&target),
            "target escaped the predicted activation set"
        );
        let activated_nodes = activated.len() as u32;
        total_activations += u64::from(activated_nodes);

        let ctx = DecisionContext {
            target_pos: target,
            dest,
            sink_pos: sink,
            sink_model: config.sink_model,
            target_model: config.target_model,
            grid: config.grid,
        };
        let transferred = should_transfer(config.policy, &ctx);
        let mut hops_this_step = 0;
        if transferred {
            hops_this_step = hop_count(target, sink);
            total_hops += u64::from(hops_this_step);
            transfer_count += 1;
            dest = target;
        }

        let previous_sink = sink;
        sink = sink_step(sink, dest, config.sink_model, config.grid);
        debug_assert!(
            previous_sink.manhattan(sink) <= config.sink_model.v_max,
            "sink moved faster than its model allows"
        );
        debug_assert!(
            config.sink_model.mode != MoveMode::AxisOnly
                || previous_sink.x == sink.x
                || previous_sink.y == sink.y,
            "axis-only sink moved along both axes"
        );

        trace.push(StepTrace {
            step,
            target_pos: target,
            sink_pos: sink,
            dest,
            transferred,
            hops_this_step,
            activated_nodes,
        });

        if catch_check(sink, target) {
            return Ok(SimReport {
                record: RunRecord {
                    time_to_catch: step,
                    total_hops,
                    transfer_count,
                    total_activations,
                    policy: config.policy,
                    track_id: 0,
                },
                trace,
            });
        }
    }

    Err(SimError::NonTermination {
        max_steps: config.max_steps,
        total_hops,
        transfer_count,
        total_activations,
    })
}
