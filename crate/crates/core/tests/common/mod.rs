//! Independent oracles for the acceptance suite.
//!
//! Everything here re-derives expected values from first principles —
//! breadth-first search on explicitly enumerated movement graphs and a
//! from-scratch transcription of the documented movement rules — so the
//! library implementation is checked against a second, structurally
//! different route.

use std::collections::VecDeque;

use rand::Rng;
use wsn_chase::{Coord, DecisionContext, GridSpec, KinematicModel, MoveMode};

/// Offsets an agent may apply in one time step, enumerated directly from
/// the movement-model definition.
pub fn step_offsets(model: KinematicModel) -> Vec<(i32, i32)> {
    let v = model.v_max as i32;
    let mut out = Vec::new();
    match model.mode {
        MoveMode::AxisOnly => {
            for k in 1..=v {
                out.extend([(k, 0), (-k, 0), (0, k), (0, -k)]);
            }
        }
        MoveMode::ManhattanBall => {
            for dx in -v..=v {
                for dy in -v..=v {
                    let len = dx.abs() + dy.abs();
                    if len >= 1 && len <= v {
                        out.push((dx, dy));
                    }
                }
            }
        }
    }
    out
}

/// BFS distances (in time steps) from `origin` on the movement graph.
/// Index is `y * width + x`.
pub fn bfs_min_times(origin: Coord, model: KinematicModel, grid: GridSpec) -> Vec<u32> {
    let w = grid.width as usize;
    let h = grid.height as usize;
    let offsets = step_offsets(model);
    let mut dist = vec![u32::MAX; w * h];
    let idx = |c: Coord| c.y as usize * w + c.x as usize;
    dist[idx(origin)] = 0;
    let mut queue = VecDeque::from([origin]);
    while let Some(cell) = queue.pop_front() {
        let d = dist[idx(cell)];
        for &(dx, dy) in &offsets {
            let next = Coord::new(cell.x + dx, cell.y + dy);
            if grid.contains(next) && dist[idx(next)] == u32::MAX {
                dist[idx(next)] = d + 1;
                queue.push_back(next);
            }
        }
    }
    dist
}

/// BFS distances on the 8-neighbour radio graph.
pub fn bfs_hops(origin: Coord, grid: GridSpec) -> Vec<u32> {
    let w = grid.width as usize;
    let h = grid.height as usize;
    let mut dist = vec![u32::MAX; w * h];
    let idx = |c: Coord| c.y as usize * w + c.x as usize;
    dist[idx(origin)] = 0;
    let mut queue = VecDeque::from([origin]);
    while let Some(cell) = queue.pop_front() {
        let d = dist[idx(cell)];
        for dx in -1..=1 {
            for dy in -1..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let next = Coord::new(cell.x + dx, cell.y + dy);
                if grid.contains(next) && dist[idx(next)] == u32::MAX {
                    dist[idx(next)] = d + 1;
                    queue.push_back(next);
                }
            }
        }
    }
    dist
}

fn direction_rank(dx: i32, dy: i32) -> u8 {
    // North 0, East 1, South 2, West 3, Stay 4; mixed displacements take
    // the dominant axis, equal magnitudes the smaller rank.
    if dx == 0 && dy == 0 {
        return 4;
    }
    let rank_x = if dx > 0 { 1 } else { 3 };
    let rank_y = if dy > 0 { 0 } else { 2 };
    match dx.abs().cmp(&dy.abs()) {
        std::cmp::Ordering::Greater => rank_x,
        std::cmp::Ordering::Less => rank_y,
        std::cmp::Ordering::Equal => rank_x.min(rank_y),
    }
}

/// From-scratch transcription of the sink movement rule: minimize the
/// Euclidean distance to the destination over the one-step reachable set,
/// breaking ties by direction order, step magnitude, then coordinates.
pub fn oracle_sink_step(pos: Coord, dest: Coord, model: KinematicModel, grid: GridSpec) -> Coord {
    if dest == pos {
        return pos;
    }
    let mut candidates = vec![pos];
    for (dx, dy) in step_offsets(model) {
        let c = Coord::new(pos.x + dx, pos.y + dy);
        if grid.contains(c) {
            candidates.push(c);
        }
    }
    candidates.sort_by_key(|&c| {
        let dx = c.x - pos.x;
        let dy = c.y - pos.y;
        let ex = i64::from(c.x - dest.x);
        let ey = i64::from(c.y - dest.y);
        (
            ex * ex + ey * ey,
            direction_rank(dx, dy),
            dx.abs() + dy.abs(),
            (c.x, c.y),
        )
    });
    candidates[0]
}

/// Per-cell double-loop recomputation of the catch-area partition from BFS
/// travel times. Returns (area, toward_current, toward_dest) as sorted
/// coordinate lists.
pub fn oracle_partition(ctx: &DecisionContext) -> (Vec<Coord>, Vec<Coord>, Vec<Coord>) {
    let grid = ctx.grid;
    let t_target = bfs_min_times(ctx.target_pos, ctx.target_model, grid);
    let t_sink = bfs_min_times(ctx.sink_pos, ctx.sink_model, grid);
    let next_current = oracle_sink_step(ctx.sink_pos, ctx.target_pos, ctx.sink_model, grid);
    let next_dest = oracle_sink_step(ctx.sink_pos, ctx.dest, ctx.sink_model, grid);

    let mut area = Vec::new();
    let mut toward_current = Vec::new();
    let mut toward_dest = Vec::new();
    for y in 0..grid.height {
        for x in 0..grid.width {
            let cell = Coord::new(x, y);
            let i = y as usize * grid.width as usize + x as usize;
            if t_target[i] > t_sink[i] {
                continue;
            }
            area.push(cell);
            let dc = cell.squared_euclidean(next_current);
            let dd = cell.squared_euclidean(next_dest);
            if dc < dd {
                toward_current.push(cell);
            } else if dd < dc {
                toward_dest.push(cell);
            }
        }
    }
    (area, toward_current, toward_dest)
}

/// Random decision context on the given grid with velocities in 1..=3 and
/// independently random movement modes.
pub fn random_context<R: Rng>(grid: GridSpec, rng: &mut R) -> DecisionContext {
    let cell = |rng: &mut R| {
        Coord::new(
            rng.random_range(0..grid.width),
            rng.random_range(0..grid.height),
        )
    };
    let model = |rng: &mut R| KinematicModel {
        v_max: rng.random_range(1..=3),
        mode: if rng.random_bool(0.5) {
            MoveMode::AxisOnly
        } else {
            MoveMode::ManhattanBall
        },
    };
    DecisionContext {
        target_pos: cell(rng),
        dest: cell(rng),
        sink_pos: cell(rng),
        sink_model: model(rng),
        target_model: model(rng),
        grid,
    }
}
