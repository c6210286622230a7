//! Deterministic discrete-time simulator for target chasing over a sensor
//! grid.
//!
//! A moving target random-walks across a grid of sensor segments while a
//! faster mobile sink pursues it, steering toward the last target position
//! reported to it. Reporting costs multi-hop radio traffic, so the node
//! detecting the target applies a data-transfer policy to decide which
//! steps are worth reporting. The crate provides the grid kinematics, the
//! four transfer policies, the tracking loop, and an experiment harness
//! that sweeps policies over reproducible seeded tracks and emits CSV.

pub mod experiment;
pub mod grid;
pub mod policy;
pub mod sim;
pub mod track;

pub use experiment::{
    run_experiment, summarize, ExperimentResult, ExperimentSpec, PolicyChoice, Scenario, SummaryRow,
};
pub use grid::{
    dir_toward, hop_count, min_time, reachable_segments, sink_step, Coord, Direction, GridSpec,
    KinematicModel, MoveMode,
};
pub use policy::{
    catch_area, direction_probabilities, partition_area, prediction_set, should_transfer,
    AreaPartition, DecisionContext, PartitionCounts, PolicyKind, Threshold,
};
pub use sim::{
    catch_check, simulate, RunRecord, SimConfig, SimError, SimReport, StepTrace, TrackSource,
};
pub use track::{generate_track, load_track, random_walk_step, save_track, Track, TrackError};
