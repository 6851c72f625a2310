//! Per-action sparse features φ(s, a).
//!
//! Every extractor computes an action-independent block of features from the
//! state and places it at offset `a * block_dim`; all other action blocks are
//! zero. Layouts within a block:
//!
//! - PV: `max_pigs` slots of `(x, y, x*y)` over rounded pig positions, pigs sorted by `(x, y)`.
//! - PP: one indicator per fine cell holding at least one pig.
//! - NPP: pig counts per cell for each nested grid, coarsest first.
//! - NPPS: the NPP layout followed by the same grids shifted by half a cell diagonally.
//! - NPPO: NPP over pig centres followed by NPP over intact block centres.
//!
//! Grids are row-major with the origin at the bottom-left. Cells are
//! half-open, `[x0, x0 + cell)`, and points outside the grid are clamped into
//! the nearest boundary cell.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{ActionId, GameState, Vec2, WORLD_HEIGHT, WORLD_WIDTH};
use crate::sparse::SparseVector;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeatureError {
    #[error("state has {found} pigs but the extractor holds at most {max}")]
    TooManyPigs { found: usize, max: usize },
    #[error("action {action} out of range for {actions} actions")]
    ActionOutOfRange { action: usize, actions: usize },
    #[error("invalid extractor configuration: {0}")]
    InvalidConfig(String),
}

/// Nested square grids laid over the world.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Cell edge lengths, strictly decreasing.
    pub cell_sizes: Vec<f64>,
    pub world_width: f64,
    pub world_height: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            cell_sizes: vec![200.0, 100.0, 50.0],
            world_width: WORLD_WIDTH,
            world_height: WORLD_HEIGHT,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.cell_sizes.is_empty() {
            return Err(FeatureError::InvalidConfig("at least one cell size is required".into()));
        }
        if self.cell_sizes.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(FeatureError::InvalidConfig("cell sizes must be positive".into()));
        }
        if self.cell_sizes.windows(2).any(|w| w[1] >= w[0]) {
            return Err(FeatureError::InvalidConfig("cell sizes must be strictly decreasing".into()));
        }
        if !(self.world_width > 0.0 && self.world_height > 0.0) {
            return Err(FeatureError::InvalidConfig("world must have positive extent".into()));
        }
        Ok(())
    }

    /// Cells of one unshifted grid level.
    pub fn cells(&self, cell: f64) -> usize {
        let (rows, cols) = grid_shape(cell, self.world_width, self.world_height);
        rows * cols
    }

    /// Cells summed over all grid levels.
    pub fn total_cells(&self) -> usize {
        self.cell_sizes.iter().map(|&s| self.cells(s)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ExtractorKind {
    /// Pig position values.
    Pv {
        #[serde(default = "default_max_pigs")]
        max_pigs: usize,
        #[serde(default = "default_granularity")]
        granularity: f64,
    },
    /// Pig position indicators on a fine grid.
    Pp {
        #[serde(default = "default_pp_cell")]
        cell: f64,
        #[serde(default = "default_world_width")]
        world_width: f64,
        #[serde(default = "default_world_height")]
        world_height: f64,
    },
    /// Nested pig position counters.
    Npp(GridConfig),
    /// Nested counters plus half-cell shifted copies.
    Npps(GridConfig),
    /// Nested counters over pigs and over obstacles.
    Nppo(GridConfig),
}

fn default_max_pigs() -> usize {
    8
}

fn default_granularity() -> f64 {
    10.0
}

fn default_pp_cell() -> f64 {
    20.0
}

fn default_world_width() -> f64 {
    WORLD_WIDTH
}

fn default_world_height() -> f64 {
    WORLD_HEIGHT
}

impl ExtractorKind {
    pub fn pv() -> Self {
        ExtractorKind::Pv {
            max_pigs: default_max_pigs(),
            granularity: default_granularity(),
        }
    }

    pub fn pp() -> Self {
        ExtractorKind::Pp {
            cell: default_pp_cell(),
            world_width: default_world_width(),
            world_height: default_world_height(),
        }
    }

    pub fn npp() -> Self {
        ExtractorKind::Npp(GridConfig::default())
    }

    pub fn npps() -> Self {
        ExtractorKind::Npps(GridConfig::default())
    }

    pub fn nppo() -> Self {
        ExtractorKind::Nppo(GridConfig::default())
    }

    /// Default configuration for a short name (`pv`, `pp`, `npp`, `npps`, `nppo`).
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "pv" => Some(Self::pv()),
            "pp" => Some(Self::pp()),
            "npp" => Some(Self::npp()),
            "npps" => Some(Self::npps()),
            "nppo" => Some(Self::nppo()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExtractorKind::Pv { .. } => "pv",
            ExtractorKind::Pp { .. } => "pp",
            ExtractorKind::Npp(_) => "npp",
            ExtractorKind::Npps(_) => "npps",
            ExtractorKind::Nppo(_) => "nppo",
        }
    }

    /// Short upper-case label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            ExtractorKind::Pv { .. } => "PV",
            ExtractorKind::Pp { .. } => "PP",
            ExtractorKind::Npp(_) => "NPP",
            ExtractorKind::Npps(_) => "NPPS",
            ExtractorKind::Nppo(_) => "NPPO",
        }
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        match self {
            ExtractorKind::Pv { max_pigs, granularity } => {
                if *max_pigs == 0 || !(*granularity > 0.0) {
                    return Err(FeatureError::InvalidConfig(
                        "pv needs max_pigs >= 1 and a positive granularity".into(),
                    ));
                }
                Ok(())
            }
            ExtractorKind::Pp {
                cell,
                world_width,
                world_height,
            } => {
                if !(*cell > 0.0 && *world_width > 0.0 && *world_height > 0.0) {
                    return Err(FeatureError::InvalidConfig("pp needs positive cell and world sizes".into()));
                }
                Ok(())
            }
            ExtractorKind::Npp(g) | ExtractorKind::Npps(g) | ExtractorKind::Nppo(g) => g.validate(),
        }
    }

    /// Features per action block.
    pub fn block_dim(&self) -> usize {
        match self {
            ExtractorKind::Pv { max_pigs, .. } => max_pigs * 3,
            ExtractorKind::Pp {
                cell,
                world_width,
                world_height,
            } => {
                let (rows, cols) = grid_shape(*cell, *world_width, *world_height);
                rows * cols
            }
            ExtractorKind::Npp(g) => g.total_cells(),
            ExtractorKind::Npps(g) | ExtractorKind::Nppo(g) => 2 * g.total_cells(),
        }
    }
}

/// Total feature dimension for `actions` actions.
pub fn dimension(kind: &ExtractorKind, actions: usize) -> usize {
    actions * kind.block_dim()
}

/// `(rows, cols)` of a grid with square cells of edge `cell`.
pub fn grid_shape(cell: f64, width: f64, height: f64) -> (usize, usize) {
    ((height / cell).ceil() as usize, (width / cell).ceil() as usize)
}

fn cell_coord(v: f64, origin: f64, cell: f64, n: usize) -> usize {
    let k = ((v - origin) / cell).floor();
    if k <= 0.0 {
        0
    } else {
        (k as usize).min(n - 1)
    }
}

/// Counts points per cell of the grid translated by `offset`, row-major from the bottom-left.
pub fn grid_counts(points: &[Vec2], cell: f64, offset: Vec2, width: f64, height: f64) -> Vec<u32> {
    let (rows, cols) = grid_shape(cell, width, height);
    let mut counts = vec![0u32; rows * cols];
    for p in points {
        let r = cell_coord(p.y, offset.y, cell, rows);
        let c = cell_coord(p.x, offset.x, cell, cols);
        counts[r * cols + c] += 1;
    }
    counts
}

/// Action-independent part of φ(s, ·): the contents of one action block.
#[derive(Clone, Debug, PartialEq)]
pub struct StateFeatures {
    block_dim: usize,
    /// Sorted by local index, no zeros.
    entries: Vec<(usize, f64)>,
}

impl StateFeatures {
    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Places the block at action `a`'s offset in a vector of `actions` blocks.
    pub fn for_action(&self, a: ActionId, actions: usize) -> SparseVector {
        let base = a.0 * self.block_dim;
        SparseVector::from_sorted(
            actions * self.block_dim,
            self.entries.iter().map(|&(i, v)| (base + i, v)),
        )
        .expect("block entries are sorted and in range")
    }
}

/// A configured extractor for a fixed number of actions.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureExtractor {
    kind: ExtractorKind,
    actions: usize,
}

impl FeatureExtractor {
    pub fn new(kind: ExtractorKind, actions: usize) -> Result<Self, FeatureError> {
        kind.validate()?;
        if actions == 0 {
            return Err(FeatureError::InvalidConfig("at least one action is required".into()));
        }
        Ok(FeatureExtractor { kind, actions })
    }

    pub fn kind(&self) -> &ExtractorKind {
        &self.kind
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    pub fn block_dim(&self) -> usize {
        self.kind.block_dim()
    }

    pub fn dimension(&self) -> usize {
        dimension(&self.kind, self.actions)
    }

    /// Stable digest of the extractor configuration.
    pub fn config_hash(&self) -> String {
        let doc = serde_json::json!({ "extractor": self.kind, "actions": self.actions });
        let digest = Sha256::digest(doc.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn state_features(&self, s: &GameState) -> Result<StateFeatures, FeatureError> {
        let block_dim = self.block_dim();
        let entries = match &self.kind {
            ExtractorKind::Pv { max_pigs, granularity } => pv_block(s, *max_pigs, *granularity)?,
            ExtractorKind::Pp {
                cell,
                world_width,
                world_height,
            } => {
                let pigs: Vec<Vec2> = s.pig_centers().collect();
                grid_counts(&pigs, *cell, Vec2::default(), *world_width, *world_height)
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, n)| n > 0)
                    .map(|(i, _)| (i, 1.0))
                    .collect()
            }
            ExtractorKind::Npp(g) => {
                let pigs: Vec<Vec2> = s.pig_centers().collect();
                let mut out = Vec::new();
                nested_counts(&pigs, g, Vec2Shift::None, 0, &mut out);
                out
            }
            ExtractorKind::Npps(g) => {
                let pigs: Vec<Vec2> = s.pig_centers().collect();
                let mut out = Vec::new();
                nested_counts(&pigs, g, Vec2Shift::None, 0, &mut out);
                nested_counts(&pigs, g, Vec2Shift::HalfCell, g.total_cells(), &mut out);
                out
            }
            ExtractorKind::Nppo(g) => {
                let pigs: Vec<Vec2> = s.pig_centers().collect();
                let blocks: Vec<Vec2> = s.block_centers().collect();
                let mut out = Vec::new();
                nested_counts(&pigs, g, Vec2Shift::None, 0, &mut out);
                nested_counts(&blocks, g, Vec2Shift::None, g.total_cells(), &mut out);
                out
            }
        };
        Ok(StateFeatures { block_dim, entries })
    }

    /// φ(s, a).
    pub fn extract(&self, s: &GameState, a: ActionId) -> Result<SparseVector, FeatureError> {
        if a.0 >= self.actions {
            return Err(FeatureError::ActionOutOfRange {
                action: a.0,
                actions: self.actions,
            });
        }
        Ok(self.state_features(s)?.for_action(a, self.actions))
    }

    /// φ(s, a) for every action, in action order.
    pub fn extract_all(&self, s: &GameState) -> Result<Vec<SparseVector>, FeatureError> {
        let block = self.state_features(s)?;
        Ok((0..self.actions).map(|a| block.for_action(ActionId(a), self.actions)).collect())
    }
}

#[derive(Clone, Copy)]
enum Vec2Shift {
    None,
    HalfCell,
}

fn nested_counts(points: &[Vec2], g: &GridConfig, shift: Vec2Shift, base: usize, out: &mut Vec<(usize, f64)>) {
    let mut offset_index = base;
    for &cell in &g.cell_sizes {
        let offset = match shift {
            Vec2Shift::None => Vec2::default(),
            Vec2Shift::HalfCell => Vec2::new(cell / 2.0, cell / 2.0),
        };
        let counts = grid_counts(points, cell, offset, g.world_width, g.world_height);
        out.extend(
            counts
                .iter()
                .enumerate()
                .filter(|&(_, &n)| n > 0)
                .map(|(i, &n)| (offset_index + i, n as f64)),
        );
        offset_index += counts.len();
    }
}

fn pv_block(s: &GameState, max_pigs: usize, granularity: f64) -> Result<Vec<(usize, f64)>, FeatureError> {
    if s.pigs.len() > max_pigs {
        return Err(FeatureError::TooManyPigs {
            found: s.pigs.len(),
            max: max_pigs,
        });
    }
    let round = |v: f64| (v / granularity).round_ties_even() * granularity;
    let mut pigs: Vec<(f64, f64)> = s.pig_centers().map(|c| (round(c.x), round(c.y))).collect();
    pigs.sort_by(|a, b| a.partial_cmp(b).expect("finite pig positions"));
    let mut out = Vec::with_capacity(pigs.len() * 3);
    for (slot, (x, y)) in pigs.into_iter().enumerate() {
        for (k, v) in [x, y, x * y].into_iter().enumerate() {
            if v != 0.0 {
                out.push((slot * 3 + k, v));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Block, BlockKind, Pig, Status};

    #[test]
    fn bare_kind_uses_default_parameters() {
        for (text, kind) in [
            (r#"{"kind":"pv"}"#, ExtractorKind::pv()),
            (r#"{"kind":"pp"}"#, ExtractorKind::pp()),
            (r#"{"kind":"npp"}"#, ExtractorKind::npp()),
            (r#"{"kind":"npps"}"#, ExtractorKind::npps()),
            (r#"{"kind":"nppo"}"#, ExtractorKind::nppo()),
        ] {
            assert_eq!(serde_json::from_str::<ExtractorKind>(text).unwrap(), kind);
        }
        let custom: ExtractorKind = serde_json::from_str(r#"{"kind":"npp","cell_sizes":[300,150]}"#).unwrap();
        assert_eq!(
            custom,
            ExtractorKind::Npp(GridConfig {
                cell_sizes: vec![300.0, 150.0],
                ..GridConfig::default()
            })
        );
        assert!(serde_json::from_str::<ExtractorKind>(r#"{"kind":"npp","cells":[1]}"#).is_err());
    }

    fn state(pigs: &[(f64, f64)], blocks: &[(f64, f64, f64, f64)]) -> GameState {
        GameState {
            level: 0,
            birds_left: 3,
            pigs: pigs.iter().map(|&(x, y)| Pig::new(Vec2::new(x, y), 10.0)).collect(),
            blocks: blocks
                .iter()
                .map(|&(x, y, w, h)| {
                    let kind = if w >= h { BlockKind::Beam } else { BlockKind::Column };
                    Block::new(kind, Vec2::new(x, y), w, h)
                })
                .collect(),
            slingshot: Vec2::new(140.0, 120.0),
            attempt_score: 0,
            level_reached: 0,
            status: Status::InProgress,
        }
    }

    fn npp(actions: usize) -> FeatureExtractor {
        FeatureExtractor::new(ExtractorKind::npp(), actions).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension(&ExtractorKind::npp(), 32), 32 * (18 + 72 + 288));
        assert_eq!(dimension(&ExtractorKind::npp(), 32), 12096);
        assert_eq!(dimension(&ExtractorKind::pv(), 32), 768);
        assert_eq!(dimension(&ExtractorKind::npps(), 32), 24192);
        assert_eq!(dimension(&ExtractorKind::nppo(), 32), 24192);
        assert_eq!(dimension(&ExtractorKind::pp(), 32), 32 * 1800);
    }

    #[test]
    fn grid_counts_empty_and_corner() {
        let counts = grid_counts(&[], 100.0, Vec2::default(), 1200.0, 600.0);
        assert_eq!(counts.len(), 72);
        assert!(counts.iter().all(|&c| c == 0));

        // (200, 100) is a corner shared by four cells; half-open cells put it in (row 1, col 2)
        let counts = grid_counts(&[Vec2::new(200.0, 100.0)], 100.0, Vec2::default(), 1200.0, 600.0);
        assert_eq!(counts.iter().sum::<u32>(), 1);
        assert_eq!(counts[12 + 2], 1);
    }

    #[test]
    fn grid_counts_clamp_outside_points() {
        let pts = [Vec2::new(-5.0, 700.0), Vec2::new(1300.0, -1.0), Vec2::new(1200.0, 600.0)];
        let counts = grid_counts(&pts, 200.0, Vec2::default(), 1200.0, 600.0);
        // rows 3, cols 6
        assert_eq!(counts[2 * 6], 1);
        assert_eq!(counts[5], 1);
        assert_eq!(counts[2 * 6 + 5], 1);
    }

    #[test]
    fn pv_example() {
        let ex = FeatureExtractor::new(ExtractorKind::pv(), 32).unwrap();
        let s = state(&[(305.0, 207.0)], &[]);
        let phi = ex.extract(&s, ActionId(3)).unwrap();
        let base = 3 * 24;
        assert_eq!(
            phi.iter().collect::<Vec<_>>(),
            vec![(base, 300.0), (base + 1, 210.0), (base + 2, 63000.0)]
        );
        let other = ex.extract(&s, ActionId(5)).unwrap();
        assert_eq!(other.values(), phi.values());
        assert!(other.indices().iter().all(|i| !phi.indices().contains(i)));

        assert!(ex.extract(&state(&[], &[]), ActionId(0)).unwrap().is_empty());
        assert_eq!(ex.extract(&state(&[], &[]), ActionId(0)).unwrap().dim(), 768);
    }

    #[test]
    fn pv_sorts_pigs_and_limits_count() {
        let ex = FeatureExtractor::new(
            ExtractorKind::Pv {
                max_pigs: 2,
                granularity: 10.0,
            },
            4,
        )
        .unwrap();
        let a = ex.extract(&state(&[(900.0, 20.0), (500.0, 40.0)], &[]), ActionId(1)).unwrap();
        let b = ex.extract(&state(&[(500.0, 40.0), (900.0, 20.0)], &[]), ActionId(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(6), 500.0);
        let err = ex
            .extract(&state(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)], &[]), ActionId(0))
            .unwrap_err();
        assert_eq!(err, FeatureError::TooManyPigs { found: 3, max: 2 });
    }

    #[test]
    fn pp_is_indicator() {
        let ex = FeatureExtractor::new(ExtractorKind::pp(), 32).unwrap();
        let phi = ex.extract(&state(&[(505.0, 15.0), (511.0, 18.0)], &[]), ActionId(2)).unwrap();
        assert_eq!(phi.nnz(), 1);
        assert_eq!(phi.values(), &[1.0]);
        assert_eq!(phi.indices()[0], 2 * 1800 + 25);
        assert!(ex.extract(&state(&[], &[]), ActionId(0)).unwrap().is_empty());
    }

    #[test]
    fn npp_single_pig_three_entries() {
        let ex = npp(32);
        let phi = ex.extract(&state(&[(733.0, 287.0)], &[]), ActionId(9)).unwrap();
        assert_eq!(phi.nnz(), 3);
        assert!(phi.values().iter().all(|&v| v == 1.0));
        let base = 9 * 378;
        // coarse: row 1, col 3; mid: row 2, col 7; fine: row 5, col 14
        assert_eq!(
            phi.indices(),
            &[base + 6 + 3, base + 18 + 2 * 12 + 7, base + 90 + 5 * 24 + 14]
        );
    }

    #[test]
    fn npp_pair_in_same_coarse_cell() {
        let ex = npp(1);
        // same 200-cell (col 2, row 0), same 100-cell (col 5, row 0), different 50-cells
        let phi = ex.extract(&state(&[(510.0, 20.0), (570.0, 20.0)], &[]), ActionId(0)).unwrap();
        assert_eq!(phi.get(2), 2.0);
        assert_eq!(phi.get(18 + 5), 2.0);
        assert_eq!(phi.get(90 + 10), 1.0);
        assert_eq!(phi.get(90 + 11), 1.0);
        assert_eq!(phi.nnz(), 4);
        assert!(ex.extract(&state(&[], &[]), ActionId(0)).unwrap().is_empty());
    }

    #[test]
    fn npps_six_entries_even_at_corner() {
        let ex = FeatureExtractor::new(ExtractorKind::npps(), 32).unwrap();
        for pig in [(733.0, 287.0), (0.0, 0.0), (1200.0, 600.0)] {
            let phi = ex.extract(&state(&[pig], &[]), ActionId(4)).unwrap();
            assert_eq!(phi.nnz(), 6, "pig {pig:?}");
        }
    }

    #[test]
    fn nppo_obstacle_half() {
        let ex = FeatureExtractor::new(ExtractorKind::nppo(), 2).unwrap();
        let half = 378;
        let phi = ex.extract(&state(&[(620.0, 30.0)], &[]), ActionId(0)).unwrap();
        assert!(phi.indices().iter().all(|&i| i < half));

        // pig and block centre share the 100-cell at (row 0, col 6)
        let phi = ex
            .extract(&state(&[(620.0, 30.0)], &[(640.0, 0.0, 20.0, 80.0)]), ActionId(1))
            .unwrap();
        let base = 2 * half;
        assert_eq!(phi.get(base + 18 + 6), 1.0);
        assert_eq!(phi.get(base + half + 18 + 6), 1.0);
        assert_eq!(phi.nnz(), 6);
    }

    #[test]
    fn config_hash_is_stable_and_distinguishes() {
        assert_eq!(npp(32).config_hash(), npp(32).config_hash());
        assert_ne!(npp(32).config_hash(), npp(16).config_hash());
        assert_eq!(npp(32).config_hash().len(), 64);
    }

    #[test]
    fn invalid_grid_rejected() {
        let g = GridConfig {
            cell_sizes: vec![50.0, 100.0],
            ..GridConfig::default()
        };
        assert!(FeatureExtractor::new(ExtractorKind::Npp(g), 32).is_err());
        assert!(FeatureExtractor::new(ExtractorKind::npp(), 0).is_err());
        assert!(ExtractorKind::from_name("NPPS").is_some());
        assert!(ExtractorKind::from_name("xyz").is_none());
    }
}
