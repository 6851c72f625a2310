//! Reference implementations used by the integration tests. They are written
//! against dense vectors and explicit loops, independently of the library code.

#![allow(dead_code)]

use rand::Rng;
use slingshot::engine::{ActionId, Block, BlockKind, Engine, GameState, Pig, Status, Vec2};

/// Inverts a square matrix by Gauss-Jordan elimination with partial pivoting.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        let p = m[col][col];
        assert!(p.abs() > 1e-300, "singular matrix");
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let factor = m[row][col];
                if factor != 0.0 {
                    for k in 0..2 * n {
                        m[row][k] -= factor * m[col][k];
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Closed-form Bayesian linear regression with prior N(0, pv I) and noise
/// variance sigma²: returns (mean, diag of the posterior covariance).
pub fn dense_posterior(x: &[Vec<f64>], y: &[f64], dim: usize, sigma: f64, pv: f64) -> (Vec<f64>, Vec<f64>) {
    let s2 = sigma * sigma;
    let mut precision = vec![vec![0.0; dim]; dim];
    for (i, row) in precision.iter_mut().enumerate() {
        row[i] = 1.0 / pv;
    }
    for xi in x {
        for a in 0..dim {
            if xi[a] == 0.0 {
                continue;
            }
            for b in 0..dim {
                precision[a][b] += xi[a] * xi[b] / s2;
            }
        }
    }
    let cov = invert(&precision);
    let mut xty = vec![0.0; dim];
    for (xi, yi) in x.iter().zip(y) {
        for a in 0..dim {
            xty[a] += xi[a] * yi / s2;
        }
    }
    let mean = cov.iter().map(|row| dot(row, &xty)).collect();
    let var = (0..dim).map(|i| cov[i][i]).collect();
    (mean, var)
}

/// `r + gamma * max_j w·succ_j`, or `r` without successors.
pub fn dense_target(w: &[f64], r: f64, succ: &[Vec<f64>], gamma: f64) -> f64 {
    if succ.is_empty() {
        r
    } else {
        r + gamma * succ.iter().map(|s| dot(w, s)).fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn dense_td_step(w: &[f64], phi: &[f64], r: f64, succ: &[Vec<f64>], eta: f64, gamma: f64) -> Vec<f64> {
    let delta = dense_target(w, r, succ, gamma) - dot(w, phi);
    w.iter().zip(phi).map(|(wi, pi)| wi + eta * delta * pi).collect()
}

/// Random dense vector with the given density of nonzeros.
pub fn random_sparse_dense<R: Rng>(rng: &mut R, dim: usize, density: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            if rng.random::<f64>() < density {
                rng.random_range(-2.0..2.0)
            } else {
                0.0
            }
        })
        .collect()
}

/// Whether `p` belongs to cell `(row, col)` of a grid with the given cell
/// size and origin: half-open intervals, with the outermost cells extended
/// to infinity.
pub fn in_cell(p: Vec2, row: usize, col: usize, cell: f64, origin: Vec2, rows: usize, cols: usize) -> bool {
    let inside = |v: f64, k: usize, n: usize, o: f64| {
        let lo = o + k as f64 * cell;
        let hi = lo + cell;
        (k == 0 || v >= lo) && (k == n - 1 || v < hi)
    };
    inside(p.x, col, cols, origin.x) && inside(p.y, row, rows, origin.y)
}

/// Brute-force per-cell counts, row-major from the bottom-left.
pub fn brute_counts(points: &[Vec2], cell: f64, origin: Vec2, width: f64, height: f64) -> Vec<f64> {
    let rows = (height / cell).ceil() as usize;
    let cols = (width / cell).ceil() as usize;
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            out.push(points.iter().filter(|&&p| in_cell(p, r, c, cell, origin, rows, cols)).count() as f64);
        }
    }
    out
}

/// Random state with up to `max_pigs` pigs and some blocks. Coordinates are
/// sometimes snapped to multiples of 25 so that cell boundaries get hit, and
/// sometimes placed slightly outside the world.
pub fn random_state<R: Rng>(rng: &mut R, max_pigs: usize) -> GameState {
    let coord = |rng: &mut R, hi: f64| -> f64 {
        match rng.random_range(0..10) {
            0 => rng.random_range(-30.0..0.0),
            1 => rng.random_range(hi..hi + 30.0),
            2..=4 => (rng.random_range(0..=(hi as i64 / 25)) * 25) as f64,
            _ => rng.random_range(0.0..hi),
        }
    };
    let n_pigs = rng.random_range(1..=max_pigs);
    let pigs = (0..n_pigs)
        .map(|_| Pig::new(Vec2::new(coord(rng, 1200.0), coord(rng, 600.0)), 15.0))
        .collect();
    let n_blocks = rng.random_range(0..10);
    let blocks = (0..n_blocks)
        .map(|_| {
            let (w, h) = if rng.random::<bool>() { (80.0, 20.0) } else { (20.0, 80.0) };
            let kind = if w > h { BlockKind::Beam } else { BlockKind::Column };
            Block::new(kind, Vec2::new(coord(rng, 1200.0), coord(rng, 600.0)), w, h)
        })
        .collect();
    GameState {
        level: 0,
        birds_left: 3,
        pigs,
        blocks,
        slingshot: Vec2::new(140.0, 120.0),
        attempt_score: 0,
        level_reached: 0,
        status: Status::InProgress,
    }
}

/// Shortest action sequence that clears the state's level, by breadth-first
/// search over shot outcomes.
pub fn solve_level(engine: &Engine, start: &GameState) -> Option<Vec<ActionId>> {
    let mut frontier = vec![(start.clone(), Vec::new())];
    for _ in 0..start.birds_left {
        let mut next = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (state, path) in &frontier {
            for a in engine.actions().actions() {
                let outcome = engine.shoot(state, a).unwrap();
                let mut p = path.clone();
                p.push(a);
                if outcome.next_state.status == Status::Cleared {
                    return Some(p);
                }
                if outcome.next_state.status == Status::InProgress {
                    // destroyed objects are dropped from the state, so the survivors identify it
                    let key = serde_json::to_string(&(&outcome.next_state.pigs, &outcome.next_state.blocks)).unwrap();
                    if seen.insert(key) {
                        next.push((outcome.next_state, p));
                    }
                }
            }
        }
        frontier = next;
    }
    None
}
