//! Target trajectories: seeded random walks, persistence, and replay.
//!
//! All randomness flows through an explicitly seeded ChaCha8 generator so
//! that tracks are reproducible across platforms and runs. When a batch of
//! tracks is generated, track `i` uses seed `base_seed + i`.

use std::io::{self, BufRead, BufReader, Read, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{Coord, Direction, GridSpec};

/// One target trajectory: the position at every time step, index 0 being
/// the initial position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Track {
    pub positions: Vec<Coord>,
    /// Seed of record when the track came from the generator; `None` for
    /// tracks loaded from a file (the file format carries positions only).
    pub seed: Option<u64>,
}

impl Track {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn start(&self) -> Coord {
        self.positions[0]
    }

    /// Checks that every position is in-grid and consecutive positions
    /// differ by at most `v_max` in Manhattan distance. Error messages name
    /// the offending line of the `x,y`-per-line file format.
    pub fn validate(&self, grid: GridSpec, v_max: u32) -> Result<(), TrackError> {
        if self.positions.is_empty() {
            return Err(TrackError::Empty);
        }
        for (i, &p) in self.positions.iter().enumerate() {
            if !grid.contains(p) {
                return Err(TrackError::OutOfGrid {
                    line: i + 1,
                    pos: p,
                    grid,
                });
            }
        }
        for (i, pair) in self.positions.windows(2).enumerate() {
            if pair[0].manhattan(pair[1]) > v_max {
                return Err(TrackError::StepTooLarge {
                    line: i + 2,
                    from: pair[0],
                    to: pair[1],
                    v_max,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TrackError {
    #[error("track must contain at least one position")]
    Empty,
    #[error("line {line}: expected `x,y` with non-negative integers, got {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: position {pos} is outside the {grid} grid")]
    OutOfGrid {
        line: usize,
        pos: Coord,
        grid: GridSpec,
    },
    #[error("line {line}: step from {from} to {to} exceeds maximum velocity {v_max}")]
    StepTooLarge {
        line: usize,
        from: Coord,
        to: Coord,
        v_max: u32,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Tuning knobs for walk generation beyond the standard model.
#[derive(Clone, Copy, Debug, Default)]
pub struct WalkOptions {
    /// Allow the target to stay in place, as a fifth equally likely choice.
    /// Off by default: the target moves every step.
    pub allow_stay: bool,
}

fn feasible_moves(pos: Coord, v_max: u32, grid: GridSpec, allow_stay: bool) -> Vec<Coord> {
    let mut out = Vec::with_capacity(5);
    for dir in Direction::CARDINAL {
        let (dx, dy) = dir.offset();
        let v = v_max as i32;
        let c = Coord::new(pos.x + dx * v, pos.y + dy * v);
        if grid.contains(c) {
            out.push(c);
        }
    }
    if allow_stay {
        out.push(pos);
    }
    out
}

/// One step of the target's random walk: the position is displaced `v_max`
/// segments in a direction drawn uniformly from the cardinal directions
/// whose result stays in-grid.
///
/// Panics if no direction is feasible (cannot happen on grids with at least
/// `2 * v_max` segments along one axis).
pub fn random_walk_step<R: Rng>(pos: Coord, v_max: u32, grid: GridSpec, rng: &mut R) -> Coord {
    let moves = feasible_moves(pos, v_max, grid, false);
    assert!(
        !moves.is_empty(),
        "no feasible move from {pos} on {grid} with v_max {v_max}"
    );
    moves[rng.random_range(0..moves.len())]
}

/// Generates a track of `length` positions starting at `start`, reproducible
/// from `seed`.
pub fn generate_track(start: Coord, length: usize, v_max: u32, grid: GridSpec, seed: u64) -> Track {
    generate_track_with(start, length, v_max, grid, seed, WalkOptions::default())
}

/// As [`generate_track`], with explicit walk options.
pub fn generate_track_with(
    start: Coord,
    length: usize,
    v_max: u32,
    grid: GridSpec,
    seed: u64,
    options: WalkOptions,
) -> Track {
    assert!(length >= 1, "track length must be at least 1");
    assert!(grid.contains(start), "start {start} outside grid {grid}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(length);
    positions.push(start);
    let mut pos = start;
    for _ in 1..length {
        let moves = feasible_moves(pos, v_max, grid, options.allow_stay);
        assert!(
            !moves.is_empty(),
            "no feasible move from {pos} on {grid} with v_max {v_max}"
        );
        pos = moves[rng.random_range(0..moves.len())];
        positions.push(pos);
    }
    Track {
        positions,
        seed: Some(seed),
    }
}

/// Writes a track as one `x,y` line per time step, LF-terminated, no header.
pub fn save_track<W: Write>(track: &Track, mut sink: W) -> io::Result<()> {
    for p in &track.positions {
        writeln!(sink, "{},{}", p.x, p.y)?;
    }
    Ok(())
}

/// Reads a track from the `x,y`-per-line format and validates it against the
/// grid and the target's maximum velocity. The loaded track carries no seed.
pub fn load_track<R: Read>(source: R, grid: GridSpec, v_max: u32) -> Result<Track, TrackError> {
    let reader = BufReader::new(source);
    let mut positions = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let pos: Coord = line.parse().map_err(|_| TrackError::Malformed {
            line: i + 1,
            content: line.clone(),
        })?;
        positions.push(pos);
    }
    let track = Track {
        positions,
        seed: None,
    };
    track.validate(grid, v_max)?;
    Ok(track)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GRID: GridSpec = GridSpec {
        width: 200,
        height: 200,
    };

    #[test]
    fn interior_steps_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pos = Coord::new(100, 100);
        let mut counts = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let next = random_walk_step(pos, 1, GRID, &mut rng);
            assert_eq!(pos.manhattan(next), 1);
            *counts.entry(next).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 4);
        for (_, n) in counts {
            let freq = f64::from(n) / f64::from(draws);
            assert!((freq - 0.25).abs() <= 0.01, "frequency {freq} off uniform");
        }
    }

    #[test]
    fn corner_steps_use_only_in_grid_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pos = Coord::new(0, 0);
        let mut counts = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let next = random_walk_step(pos, 1, GRID, &mut rng);
            *counts.entry(next).or_insert(0u32) += 1;
        }
        let east = counts.get(&Coord::new(1, 0)).copied().unwrap_or(0);
        let north = counts.get(&Coord::new(0, 1)).copied().unwrap_or(0);
        assert_eq!(east + north, draws, "only two feasible directions exist");
        let freq = f64::from(east) / f64::from(draws);
        assert!((freq - 0.5).abs() <= 0.01);
    }

    #[test]
    fn single_position_track() {
        let t = generate_track(Coord::new(100, 100), 1, 1, GRID, 3);
        assert_eq!(t.positions, vec![Coord::new(100, 100)]);
        assert_eq!(t.seed, Some(3));
    }

    #[test]
    fn same_seed_same_track() {
        let a = generate_track(Coord::new(100, 100), 500, 1, GRID, 11);
        let b = generate_track(Coord::new(100, 100), 500, 1, GRID, 11);
        assert_eq!(a, b);
    }

    #[test]
    fn adjacent_seeds_diverge() {
        let a = generate_track(Coord::new(100, 100), 64, 1, GRID, 7);
        let b = generate_track(Coord::new(100, 100), 64, 1, GRID, 8);
        let first_diff = a
            .positions
            .iter()
            .zip(&b.positions)
            .position(|(x, y)| x != y);
        assert_eq!(first_diff, Some(1));
    }

    #[test]
    fn stay_option_can_repeat_positions() {
        let t = generate_track_with(
            Coord::new(50, 50),
            400,
            1,
            GRID,
            5,
            WalkOptions { allow_stay: true },
        );
        let stays = t.positions.windows(2).filter(|w| w[0] == w[1]).count();
        assert!(stays > 0, "expected at least one stay over 400 steps");
        t.validate(GRID, 1).unwrap();
    }

    #[test]
    fn save_then_load_round_trips() {
        let t = Track {
            positions: vec![Coord::new(1, 2), Coord::new(1, 3)],
            seed: None,
        };
        let mut buf = Vec::new();
        save_track(&t, &mut buf).unwrap();
        assert_eq!(buf, b"1,2\n1,3\n");
        let loaded = load_track(&buf[..], GRID, 1).unwrap();
        assert_eq!(loaded, t);
    }

    #[test]
    fn load_rejects_oversized_step() {
        let err = load_track(&b"0,0\n5,5\n"[..], GRID, 1).unwrap_err();
        match &err {
            TrackError::StepTooLarge { line, .. } => assert_eq!(*line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn load_rejects_empty_file() {
        let err = load_track(&b""[..], GRID, 1).unwrap_err();
        assert_eq!(err.to_string(), "track must contain at least one position");
    }

    #[test]
    fn load_rejects_garbage_and_out_of_grid() {
        assert!(matches!(
            load_track(&b"1,2\nbogus\n"[..], GRID, 1).unwrap_err(),
            TrackError::Malformed { line: 2, .. }
        ));
        assert!(matches!(
            load_track(&b"250,0\n"[..], GRID, 1).unwrap_err(),
            TrackError::OutOfGrid { line: 1, .. }
        ));
    }

    proptest! {
        #[test]
        fn generated_tracks_satisfy_invariants(
            seed in any::<u64>(),
            len in 1usize..300,
            sx in 0i32..40,
            sy in 0i32..40,
        ) {
            let grid = GridSpec::new(40, 40);
            let t = generate_track(Coord::new(sx, sy), len, 1, grid, seed);
            prop_assert_eq!(t.len(), len);
            prop_assert!(t.validate(grid, 1).is_ok());
        }

        #[test]
        fn round_trip_preserves_positions(seed in any::<u64>(), len in 1usize..200) {
            let grid = GridSpec::new(60, 60);
            let t = generate_track(Coord::new(30, 30), len, 1, grid, seed);
            let mut buf = Vec::new();
            save_track(&t, &mut buf).unwrap();
            let loaded = load_track(&buf[..], grid, 1).unwrap();
            prop_assert_eq!(loaded.positions, t.positions);
        }
    }
}
