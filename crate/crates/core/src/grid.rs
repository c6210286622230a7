//! Grid geometry, distance metrics, and per-step movement rules.
//!
//! The monitored area is a rectangle of unit segments. Agents occupy one
//! segment at a time and move once per discrete time step under a velocity
//! budget. Axes follow a fixed compass convention: `x` grows East, `y`
//! grows North.

use std::fmt;
use std::str::FromStr;

/// A segment position, 0-based in both axes.
///
/// The derived ordering (x, then y) is also the final tie-break used by
/// [`sink_step`], so movement stays deterministic across platforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }

    /// |Δx| + |Δy|.
    pub fn manhattan(self, other: Coord) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    /// max(|Δx|, |Δy|).
    pub fn chebyshev(self, other: Coord) -> u32 {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }

    /// Squared Euclidean distance, exact in integers.
    pub fn squared_euclidean(self, other: Coord) -> i64 {
        let dx = i64::from(self.x) - i64::from(other.x);
        let dy = i64::from(self.y) - i64::from(other.y);
        dx * dx + dy * dy
    }

    fn offset(self, dx: i32, dy: i32) -> Coord {
        Coord::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl FromStr for Coord {
    type Err = String;

    /// Parses `"x,y"` with non-negative base-10 integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || format!("expected `x,y` with non-negative integers, got {s:?}");
        let (x, y) = s.split_once(',').ok_or_else(err)?;
        let parse = |part: &str| -> Result<i32, String> {
            let v: u32 = part.trim().parse().map_err(|_| err())?;
            i32::try_from(v).map_err(|_| err())
        };
        Ok(Coord::new(parse(x)?, parse(y)?))
    }
}

/// Rectangular extent of the monitored area, in segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub width: i32,
    pub height: i32,
}

impl GridSpec {
    /// Panics if either dimension is smaller than one segment.
    pub fn new(width: i32, height: i32) -> Self {
        assert!(width >= 1 && height >= 1, "grid must be at least 1x1");
        GridSpec { width, height }
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x >= 0 && c.x < self.width && c.y >= 0 && c.y < self.height
    }

    /// Number of segments (and hence sensor nodes) in the area.
    pub fn cell_count(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    /// All segments in row order (y outer, x inner).
    pub fn cells(&self) -> impl Iterator<Item = Coord> + '_ {
        let w = self.width;
        (0..self.height).flat_map(move |y| (0..w).map(move |x| Coord::new(x, y)))
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    /// Parses `"WxH"`, e.g. `200x200`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || format!("expected `WxH` with positive integers, got {s:?}");
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(err)?;
        let w: i32 = w.trim().parse().map_err(|_| err())?;
        let h: i32 = h.trim().parse().map_err(|_| err())?;
        if w < 1 || h < 1 {
            return Err(err());
        }
        Ok(GridSpec {
            width: w,
            height: h,
        })
    }
}

/// Cardinal movement direction; `Stay` covers the co-located case where an
/// agent's destination equals its position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    North,
    East,
    South,
    West,
    Stay,
}

impl Direction {
    pub const CARDINAL: [Direction; 4] = [
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];

    /// Unit offset: North = +y, East = +x.
    pub fn offset(self) -> (i32, i32) {
        match self {
            Direction::North => (0, 1),
            Direction::East => (1, 0),
            Direction::South => (0, -1),
            Direction::West => (-1, 0),
            Direction::Stay => (0, 0),
        }
    }

    /// Fixed tie-break order: North, East, South, West, Stay.
    fn rank(self) -> u8 {
        match self {
            Direction::North => 0,
            Direction::East => 1,
            Direction::South => 2,
            Direction::West => 3,
            Direction::Stay => 4,
        }
    }
}

/// How a per-step velocity budget translates into reachable segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveMode {
    /// One cardinal direction per step, up to `v_max` segments along it.
    AxisOnly,
    /// Any segment within Manhattan distance `v_max`.
    ManhattanBall,
}

impl FromStr for MoveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "axis" => Ok(MoveMode::AxisOnly),
            "ball" => Ok(MoveMode::ManhattanBall),
            other => Err(format!("expected `axis` or `ball`, got {other:?}")),
        }
    }
}

/// Per-step movement capability of one agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KinematicModel {
    /// Maximum velocity in segments per time step. Must be at least 1 for
    /// any agent that is expected to move.
    pub v_max: u32,
    pub mode: MoveMode,
}

impl KinematicModel {
    pub const fn axis_only(v_max: u32) -> Self {
        KinematicModel {
            v_max,
            mode: MoveMode::AxisOnly,
        }
    }

    pub const fn manhattan_ball(v_max: u32) -> Self {
        KinematicModel {
            v_max,
            mode: MoveMode::ManhattanBall,
        }
    }
}

/// Cardinal direction of a single-step displacement.
///
/// Mixed-axis displacements (possible in [`MoveMode::ManhattanBall`]) report
/// the axis with the larger magnitude; on equal magnitudes the direction
/// with the smaller rank in the fixed North, East, South, West order wins.
fn step_direction(dx: i32, dy: i32) -> Direction {
    if dx == 0 && dy == 0 {
        return Direction::Stay;
    }
    let horizontal = if dx > 0 {
        Direction::East
    } else {
        Direction::West
    };
    let vertical = if dy > 0 {
        Direction::North
    } else {
        Direction::South
    };
    match dx.abs().cmp(&dy.abs()) {
        std::cmp::Ordering::Greater => horizontal,
        std::cmp::Ordering::Less => vertical,
        std::cmp::Ordering::Equal => {
            if vertical.rank() < horizontal.rank() {
                vertical
            } else {
                horizontal
            }
        }
    }
}

/// Segments an agent at `pos` can occupy after one time step.
///
/// The result always contains `pos` itself; candidates outside the grid are
/// clipped away rather than rejected, so agents never leave the monitored
/// area.
pub fn reachable_segments(pos: Coord, model: KinematicModel, grid: GridSpec) -> Vec<Coord> {
    debug_assert!(grid.contains(pos), "position {pos} outside grid {grid}");
    let v = model.v_max as i32;
    let mut out = vec![pos];
    match model.mode {
        MoveMode::AxisOnly => {
            for k in 1..=v {
                for dir in Direction::CARDINAL {
                    let (dx, dy) = dir.offset();
                    let c = pos.offset(dx * k, dy * k);
                    if grid.contains(c) {
                        out.push(c);
                    }
                }
            }
        }
        MoveMode::ManhattanBall => {
            for dx in -v..=v {
                for dy in -(v - dx.abs())..=(v - dx.abs()) {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let c = pos.offset(dx, dy);
                    if grid.contains(c) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// One movement step of the pursuing sink toward `dest`.
///
/// Among the reachable segments the sink picks the one minimizing the
/// Euclidean distance to `dest`. Ties are broken deterministically by
/// direction (North, East, South, West, Stay), then by smaller step
/// magnitude, then by coordinate order.
pub fn sink_step(pos: Coord, dest: Coord, model: KinematicModel, grid: GridSpec) -> Coord {
    debug_assert!(
        grid.contains(dest),
        "destination {dest} outside grid {grid}"
    );
    if dest == pos {
        return pos;
    }
    reachable_segments(pos, model, grid)
        .into_iter()
        .min_by_key(|&c| {
            let dx = c.x - pos.x;
            let dy = c.y - pos.y;
            (
                c.squared_euclidean(dest),
                step_direction(dx, dy).rank(),
                c.manhattan(pos),
                c,
            )
        })
        .expect("reachable set always contains the current position")
}

/// Direction the sink would take when moving from `pos` toward `dest`.
///
/// `Stay` only arises when `dest == pos`.
pub fn dir_toward(pos: Coord, dest: Coord, model: KinematicModel, grid: GridSpec) -> Direction {
    let next = sink_step(pos, dest, model, grid);
    step_direction(next.x - pos.x, next.y - pos.y)
}

/// Minimum number of time steps to travel between two segments.
///
/// Closed forms: `AxisOnly` needs `ceil(|Δx|/v) + ceil(|Δy|/v)` steps (each
/// step advances along one axis), `ManhattanBall` needs
/// `ceil((|Δx|+|Δy|)/v)`. Both equal the breadth-first-search distance on
/// the corresponding movement graph.
pub fn min_time(from: Coord, to: Coord, model: KinematicModel) -> u32 {
    if from == to {
        return 0;
    }
    let v = model.v_max;
    assert!(v >= 1, "kinematic model must allow movement (v_max >= 1)");
    let dx = from.x.abs_diff(to.x);
    let dy = from.y.abs_diff(to.y);
    match model.mode {
        MoveMode::AxisOnly => dx.div_ceil(v) + dy.div_ceil(v),
        MoveMode::ManhattanBall => (dx + dy).div_ceil(v),
    }
}

/// Radio hops of one shortest-path data transfer between two segments.
///
/// Every node reaches its eight nearest neighbours, so the hop count is the
/// Chebyshev distance max(|Δx|, |Δy|).
pub fn hop_count(a: Coord, b: Coord) -> u32 {
    a.chebyshev(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: GridSpec = GridSpec {
        width: 200,
        height: 200,
    };

    fn sorted(mut v: Vec<Coord>) -> Vec<Coord> {
        v.sort();
        v
    }

    #[test]
    fn reachable_zero_velocity_is_position_only() {
        let pos = Coord::new(5, 5);
        for mode in [MoveMode::AxisOnly, MoveMode::ManhattanBall] {
            let model = KinematicModel { v_max: 0, mode };
            assert_eq!(reachable_segments(pos, model, GRID), vec![pos]);
        }
    }

    #[test]
    fn reachable_axis_rays() {
        let got = sorted(reachable_segments(
            Coord::new(5, 5),
            KinematicModel::axis_only(2),
            GRID,
        ));
        let want = sorted(
            [
                (5, 5),
                (4, 5),
                (3, 5),
                (6, 5),
                (7, 5),
                (5, 4),
                (5, 3),
                (5, 6),
                (5, 7),
            ]
            .into_iter()
            .map(|(x, y)| Coord::new(x, y))
            .collect(),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn reachable_ball_clipped_at_corner() {
        let got = sorted(reachable_segments(
            Coord::new(0, 0),
            KinematicModel::manhattan_ball(2),
            GRID,
        ));
        let want = sorted(
            [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 1)]
                .into_iter()
                .map(|(x, y)| Coord::new(x, y))
                .collect(),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn sink_step_already_at_destination() {
        let pos = Coord::new(3, 3);
        assert_eq!(sink_step(pos, pos, KinematicModel::axis_only(2), GRID), pos);
    }

    #[test]
    fn sink_step_axis_moves_full_speed_west() {
        assert_eq!(
            sink_step(
                Coord::new(3, 3),
                Coord::new(0, 3),
                KinematicModel::axis_only(2),
                GRID
            ),
            Coord::new(1, 3)
        );
    }

    #[test]
    fn sink_step_ball_prefers_diagonal() {
        assert_eq!(
            sink_step(
                Coord::new(0, 0),
                Coord::new(10, 10),
                KinematicModel::manhattan_ball(2),
                GRID
            ),
            Coord::new(1, 1)
        );
    }

    #[test]
    fn dir_toward_cases() {
        let model = KinematicModel::axis_only(2);
        let pos = Coord::new(3, 3);
        assert_eq!(dir_toward(pos, pos, model, GRID), Direction::Stay);
        assert_eq!(
            dir_toward(pos, Coord::new(0, 3), model, GRID),
            Direction::West
        );
        assert_eq!(
            dir_toward(pos, Coord::new(3, 0), model, GRID),
            Direction::South
        );
    }

    #[test]
    fn min_time_same_cell_is_zero() {
        let p = Coord::new(7, 7);
        for model in [
            KinematicModel::axis_only(3),
            KinematicModel::manhattan_ball(2),
        ] {
            assert_eq!(min_time(p, p, model), 0);
        }
    }

    #[test]
    fn min_time_diagonal_neighbour() {
        let a = Coord::new(0, 0);
        let b = Coord::new(1, 1);
        assert_eq!(min_time(a, b, KinematicModel::axis_only(2)), 2);
        assert_eq!(min_time(a, b, KinematicModel::manhattan_ball(2)), 1);
    }

    #[test]
    fn hop_count_is_chebyshev() {
        assert_eq!(hop_count(Coord::new(5, 5), Coord::new(5, 5)), 0);
        assert_eq!(hop_count(Coord::new(0, 0), Coord::new(3, 1)), 3);
        assert_eq!(hop_count(Coord::new(5, 5), Coord::new(100, 100)), 95);
    }

    #[test]
    fn parse_coord_and_grid() {
        assert_eq!("5,5".parse::<Coord>().unwrap(), Coord::new(5, 5));
        assert_eq!("100, 100".parse::<Coord>().unwrap(), Coord::new(100, 100));
        assert!("5,-1".parse::<Coord>().is_err());
        assert!("5".parse::<Coord>().is_err());
        let g = "200x200".parse::<GridSpec>().unwrap();
        assert_eq!((g.width, g.height), (200, 200));
        assert!("0x5".parse::<GridSpec>().is_err());
    }
}
