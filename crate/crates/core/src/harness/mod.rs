//! Experiment protocol: alternating explore/eval attempts, moving averages,
//! summary tables and result export.

mod config;
mod export;
mod protocol;
mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{Algorithm, ExperimentConfig};
pub use export::{
    export, load_exported, read_attempts_csv, read_moving_average_csv, write_attempts_csv, write_moving_average_csv, summary_document, ExportFormat,
    ATTEMPTS_FILE, MOVING_AVERAGE_FILE, RESULTS_FILE, SUMMARY_FILE,
};
pub use protocol::{run_experiment, run_seeds, Runner};
pub use report::{parse_summary_row, summary_row, Report, ReportRow, SUMMARY_ROW_HEADER};

use crate::engine::EngineError;
use crate::features::FeatureError;
use crate::learners::LearnerError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("malformed results file: {0}")]
    Format(String),
    /// A run stopped early; `partial` holds every attempt completed before the failure.
    #[error("run aborted after {} attempts: {source}", partial.records.len())]
    Aborted {
        partial: Box<ResultsBundle>,
        source: Box<HarnessError>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttemptKind {
    Explore,
    Eval,
}

impl AttemptKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AttemptKind::Explore => "explore",
            AttemptKind::Eval => "eval",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "explore" => Some(AttemptKind::Explore),
            "eval" => Some(AttemptKind::Eval),
            _ => None,
        }
    }
}

/// One attempt: shots across consecutive levels until a failure or pack completion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub index: usize,
    pub kind: AttemptKind,
    pub score: i64,
    pub max_level_reached: usize,
    pub shots: usize,
    /// `(level, attempts elapsed when it was cleared)`; the count is always `index + 1`.
    pub levels_cleared: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub max_score: i64,
    pub max_level: usize,
    /// Attempts elapsed until each level was first cleared.
    pub trials_to_finish: BTreeMap<usize, usize>,
}

/// Everything a run produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultsBundle {
    pub config: ExperimentConfig,
    pub records: Vec<AttemptRecord>,
    pub moving_average: Vec<f64>,
    pub summary: Summary,
}

impl ResultsBundle {
    pub fn from_records(config: ExperimentConfig, records: Vec<AttemptRecord>) -> Self {
        let moving_average = forward_moving_average(&eval_scores(&records), config.ma_window);
        let summary = summarize(&records);
        ResultsBundle {
            config,
            records,
            moving_average,
            summary,
        }
    }

    pub fn eval_scores(&self) -> Vec<f64> {
        eval_scores(&self.records)
    }

    /// Whether the stored moving average and summary agree with the records.
    pub fn is_consistent(&self) -> bool {
        self.summary == summarize(&self.records)
            && self.moving_average == forward_moving_average(&self.eval_scores(), self.config.ma_window)
    }
}

pub fn eval_scores(records: &[AttemptRecord]) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.kind == AttemptKind::Eval)
        .map(|r| r.score as f64)
        .collect()
}

/// `out[i]` is the mean of `scores[i..i + window]`; empty when the series is
/// shorter than the window.
pub fn forward_moving_average(scores: &[f64], window: usize) -> Vec<f64> {
    assert!(window >= 1, "window must be at least 1");
    scores
        .windows(window)
        .map(|w| w.iter().sum::<f64>() / window as f64)
        .collect()
}

/// Table-1/Table-2 style summary. An empty record list gives the zero summary.
pub fn summarize(records: &[AttemptRecord]) -> Summary {
    let mut summary = Summary {
        max_score: records.iter().map(|r| r.score).max().unwrap_or(0),
        max_level: records.iter().map(|r| r.max_level_reached).max().unwrap_or(0),
        trials_to_finish: BTreeMap::new(),
    };
    for (level, count) in records.iter().flat_map(|r| r.levels_cleared.iter().copied()) {
        summary
            .trials_to_finish
            .entry(level)
            .and_modify(|c| *c = (*c).min(count))
            .or_insert(count);
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(index: usize, score: i64, level: usize, cleared: &[usize]) -> AttemptRecord {
        AttemptRecord {
            index,
            kind: if index.is_multiple_of(2) { AttemptKind::Explore } else { AttemptKind::Eval },
            score,
            max_level_reached: level,
            shots: 3,
            levels_cleared: cleared.iter().map(|&l| (l, index + 1)).collect(),
        }
    }

    #[test]
    fn moving_average_examples() {
        assert_eq!(forward_moving_average(&[0.0, 10.0, 20.0, 30.0], 2), vec![5.0, 15.0, 25.0]);
        assert_eq!(forward_moving_average(&[4.0; 7], 3), vec![4.0; 5]);
        assert!(forward_moving_average(&[1.0, 2.0], 3).is_empty());
        assert_eq!(forward_moving_average(&[1.0, 2.0], 1), vec![1.0, 2.0]);
    }

    #[test]
    fn single_clear_of_level_zero() {
        let s = summarize(&[rec(0, 12000, 1, &[0])]);
        assert_eq!(s.trials_to_finish, BTreeMap::from([(0, 1)]));
        assert_eq!(s.max_score, 12000);
        assert_eq!(s.max_level, 1);
    }

    #[test]
    fn empty_records_give_zero_summary() {
        assert_eq!(summarize(&[]), Summary::default());
    }

    #[test]
    fn summary_ignores_record_order() {
        let records = vec![
            rec(0, -10000, 0, &[]),
            rec(1, 15000, 1, &[0]),
            rec(2, 40000, 3, &[0, 1, 2]),
            rec(3, 5000, 1, &[0]),
        ];
        let mut reversed = records.clone();
        reversed.reverse();
        let s = summarize(&records);
        assert_eq!(s, summarize(&reversed));
        assert_eq!(s.trials_to_finish, BTreeMap::from([(0, 2), (1, 3), (2, 3)]));
        assert_eq!(s.max_level, 3);
    }

    #[test]
    fn bundle_is_consistent() {
        let records = vec![rec(0, 1, 0, &[]), rec(1, 2, 0, &[]), rec(2, 3, 0, &[]), rec(3, 6, 0, &[])];
        let mut cfg = ExperimentConfig::default();
        cfg.ma_window = 2;
        let mut bundle = ResultsBundle::from_records(cfg, records);
        assert_eq!(bundle.moving_average, vec![4.0]);
        assert!(bundle.is_consistent());
        bundle.summary.max_score = 0;
        assert!(!bundle.is_consistent());
    }
}
