//! Data-transfer policies: the conditions under which the node detecting
//! the target reports its position to the sink.
//!
//! Four policies are provided. `AlwaysSend` reports every step. `Beacon`
//! reports only when the sink has reached the last reported position.
//! `DirectionChange` reports when fresh data would change the sink's next
//! movement direction. `ProbabilityGain` reports when fresh data raises the
//! probability of the sink moving toward the eventual catch segment by more
//! than a threshold; the probabilities come from partitioning the set of
//! segments the target can reach no later than the sink.

use std::fmt;
use std::str::FromStr;

use crate::grid::{dir_toward, min_time, sink_step, Coord, GridSpec, KinematicModel};

/// Exact rational threshold in [0, 1] for the probability-gain policy.
///
/// Kept as a reduced fraction so that threshold comparisons against set
/// cardinalities are exact integer arithmetic, with no floating-point
/// artifacts at values like 0.2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Threshold {
    num: u64,
    den: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ThresholdError {
    #[error("threshold denominator must be nonzero")]
    ZeroDenominator,
    #[error("threshold {num}/{den} is outside [0, 1]")]
    OutOfRange { num: u64, den: u64 },
    #[error("expected a decimal in [0, 1] such as `0.2`, got {0:?}")]
    Parse(String),
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Threshold {
    pub const ZERO: Threshold = Threshold { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, ThresholdError> {
        if den == 0 {
            return Err(ThresholdError::ZeroDenominator);
        }
        if num > den {
            return Err(ThresholdError::OutOfRange { num, den });
        }
        let g = gcd(num, den).max(1);
        Ok(Threshold {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = u128::from(self.num) * u128::from(other.den);
        let rhs = u128::from(other.num) * u128::from(self.den);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            return write!(f, "0");
        }
        if self.num == self.den {
            return write!(f, "1");
        }
        // Terminating decimal expansion when the reduced denominator is of
        // the form 2^a * 5^b; otherwise fall back to the fraction.
        let mut digits = String::new();
        let mut rem = self.num;
        for _ in 0..32 {
            rem *= 10;
            digits.push(char::from(b'0' + (rem / self.den) as u8));
            rem %= self.den;
            if rem == 0 {
                return write!(f, "0.{digits}");
            }
        }
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Threshold {
    type Err = ThresholdError;

    /// Parses a decimal literal such as `0`, `1`, `0.2`, or `.25` exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ThresholdError::Parse(s.to_string());
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.len() > 18
            || int_part.len() > 2
        {
            return Err(bad());
        }
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let scale = 10u64.pow(frac_part.len() as u32);
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Threshold::new(num, scale).map_err(|_| bad())
    }
}

/// The four data-transfer conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    /// Report the target position every time step.
    AlwaysSend,
    /// Report only when the sink has reached the last reported position.
    Beacon,
    /// Report when the sink's direction toward the last report differs from
    /// its direction toward the current target position.
    DirectionChange,
    /// Report when the probability gain of steering toward the current
    /// position exceeds the threshold.
    ProbabilityGain { threshold: Threshold },
}

impl PolicyKind {
    /// Short machine-readable name used in CSV output and on the CLI.
    pub fn label(&self) -> &'static str {
        match self {
            PolicyKind::AlwaysSend => "always",
            PolicyKind::Beacon => "beacon",
            PolicyKind::DirectionChange => "dirchange",
            PolicyKind::ProbabilityGain { .. } => "probgain",
        }
    }

    pub fn threshold(&self) -> Option<Threshold> {
        match self {
            PolicyKind::ProbabilityGain { threshold } => Some(*threshold),
            _ => None,
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::ProbabilityGain { threshold } => write!(f, "probgain({threshold})"),
            other => f.write_str(other.label()),
        }
    }
}

/// Everything the detecting node knows when deciding whether to report:
/// the current target position, the last reported position (the sink's
/// destination), the sink's position, and both movement models.
#[derive(Clone, Copy, Debug)]
pub struct DecisionContext {
    pub target_pos: Coord,
    pub dest: Coord,
    pub sink_pos: Coord,
    pub sink_model: KinematicModel,
    pub target_model: KinematicModel,
    pub grid: GridSpec,
}

/// The catch area split by which next-step sink move each segment favours.
///
/// `toward_current` holds the segments strictly closer (in Euclidean
/// distance) to the sink's next position if it steers at the current target
/// position; `toward_dest` those strictly closer to its next position if it
/// keeps steering at the last report. Equidistant segments belong to
/// neither subset.
#[derive(Clone, Debug)]
pub struct AreaPartition {
    pub area: Vec<Coord>,
    pub toward_current: Vec<Coord>,
    pub toward_dest: Vec<Coord>,
    pub next_if_current: Coord,
    pub next_if_dest: Coord,
}

impl AreaPartition {
    pub fn counts(&self) -> PartitionCounts {
        PartitionCounts {
            area: self.area.len(),
            toward_current: self.toward_current.len(),
            toward_dest: self.toward_dest.len(),
        }
    }
}

/// Cardinalities of an [`AreaPartition`]; the unit the probability-gain
/// decision actually consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionCounts {
    pub area: usize,
    pub toward_current: usize,
    pub toward_dest: usize,
}

impl PartitionCounts {
    /// Probability that steering at the current target position moves the
    /// sink toward the eventual catch segment.
    pub fn p_current(&self) -> f64 {
        self.toward_current as f64 / self.area as f64
    }

    /// Probability that keeping the stored destination does.
    pub fn p_dest(&self) -> f64 {
        self.toward_dest as f64 / self.area as f64
    }

    /// Whether `p_current - p_dest > threshold`, evaluated exactly on the
    /// cardinalities: `(|toward_current| - |toward_dest|) * den > num * |area|`.
    pub fn gain_exceeds(&self, threshold: Threshold) -> bool {
        let diff = self.toward_current as i128 - self.toward_dest as i128;
        diff * i128::from(threshold.den) > i128::from(threshold.num) * self.area as i128
    }
}

/// Segments where the target can be caught: the target's minimum travel
/// time does not exceed the sink's. Scans the whole grid; always contains
/// the target's own segment.
pub fn catch_area(ctx: &DecisionContext) -> Vec<Coord> {
    ctx.grid
        .cells()
        .filter(|&c| {
            min_time(ctx.target_pos, c, ctx.target_model)
                <= min_time(ctx.sink_pos, c, ctx.sink_model)
        })
        .collect()
}

/// Splits the catch area around the sink's two candidate next positions.
pub fn partition_area(ctx: &DecisionContext) -> AreaPartition {
    let next_if_current = sink_step(ctx.sink_pos, ctx.target_pos, ctx.sink_model, ctx.grid);
    let next_if_dest = sink_step(ctx.sink_pos, ctx.dest, ctx.sink_model, ctx.grid);
    let area = catch_area(ctx);
    let mut toward_current = Vec::new();
    let mut toward_dest = Vec::new();
    for &c in &area {
        let d_current = c.squared_euclidean(next_if_current);
        let d_dest = c.squared_euclidean(next_if_dest);
        if d_current < d_dest {
            toward_current.push(c);
        } else if d_dest < d_current {
            toward_dest.push(c);
        }
    }
    AreaPartition {
        area,
        toward_current,
        toward_dest,
        next_if_current,
        next_if_dest,
    }
}

/// The pair (p_current, p_dest) as cardinality ratios of the partition.
pub fn direction_probabilities(ctx: &DecisionContext) -> (f64, f64) {
    let counts = partition_area(ctx).counts();
    (counts.p_current(), counts.p_dest())
}

/// Possible target positions one step after it was seen at `prev_target`:
/// the in-grid Manhattan ball of radius `v_max` around the previous
/// position. These are the sensor nodes that must be active to detect the
/// target, whatever the movement mode.
pub fn prediction_set(
    prev_target: Coord,
    target_model: KinematicModel,
    grid: GridSpec,
) -> Vec<Coord> {
    let v = target_model.v_max as i32;
    let mut out = Vec::new();
    for dx in -v..=v {
        for dy in -(v - dx.abs())..=(v - dx.abs()) {
            let c = Coord::new(prev_target.x + dx, prev_target.y + dy);
            if grid.contains(c) {
                out.push(c);
            }
        }
    }
    out
}

/// Evaluates one policy's transfer condition for the current step.
pub fn should_transfer(policy: PolicyKind, ctx: &DecisionContext) -> bool {
    match policy {
        PolicyKind::AlwaysSend => true,
        PolicyKind::Beacon => ctx.sink_pos == ctx.dest,
        PolicyKind::DirectionChange => {
            dir_toward(ctx.sink_pos, ctx.dest, ctx.sink_model, ctx.grid)
                != dir_toward(ctx.sink_pos, ctx.target_pos, ctx.sink_model, ctx.grid)
        }
        PolicyKind::ProbabilityGain { threshold } => {
            partition_area(ctx).counts().gain_exceeds(threshold)
        }
    }
}
