use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::{ExperimentConfig, HarnessError, Summary, SUMMARY_FILE};

/// Header of the one-line summary format shared by human sessions and runs.
pub const SUMMARY_ROW_HEADER: &str = "algorithm,features,max_score,max_level,trials_to_finish";

/// One summary row: `algorithm,features,max_score,max_level,trials` with
/// trials written as `level:count` pairs separated by `;`. No trailing newline.
pub fn summary_row(algorithm: &str, features: &str, summary: &Summary) -> String {
    let trials = summary
        .trials_to_finish
        .iter()
        .map(|(l, c)| format!("{l}:{c}"))
        .collect::<Vec<_>>()
        .join(";");
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record([
        algorithm,
        features,
        &summary.max_score.to_string(),
        &summary.max_level.to_string(),
        &trials,
    ])
    .expect("in-memory write");
    let mut line = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 output");
    line.pop();
    line
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub algorithm: String,
    pub features: String,
    pub summary: Summary,
}

/// Parses one line of the summary-row format (header lines are not accepted).
pub fn parse_summary_row(line: &str) -> Result<ReportRow, HarnessError> {
    let bad = |what: &str| HarnessError::Format(format!("summary row {line:?}: bad {what}"));
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(line.trim_end().as_bytes());
    let row = reader
        .records()
        .next()
        .ok_or_else(|| bad("row"))?
        .map_err(|e| HarnessError::Format(e.to_string()))?;
    if row.len() != 5 {
        return Err(bad("column count"));
    }
    let mut trials_to_finish = BTreeMap::new();
    for pair in row[4].split(';').filter(|p| !p.is_empty()) {
        let (level, count) = pair.split_once(':').ok_or_else(|| bad("trials"))?;
        trials_to_finish.insert(
            level.parse().map_err(|_| bad("trials level"))?,
            count.parse().map_err(|_| bad("trials count"))?,
        );
    }
    Ok(ReportRow {
        algorithm: row[0].to_string(),
        features: row[1].to_string(),
        summary: Summary {
            max_score: row[2].parse().map_err(|_| bad("max_score"))?,
            max_level: row[3].parse().map_err(|_| bad("max_level"))?,
            trials_to_finish,
        },
    })
}

/// Multi-run report grouped by (algorithm, features).
#[derive(Clone, Debug, Default)]
pub struct Report {
    groups: BTreeMap<(String, String), Vec<Summary>>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn add(&mut self, algorithm: &str, features: &str, summary: Summary) {
        self.groups
            .entry((algorithm.to_string(), features.to_string()))
            .or_default()
            .push(summary);
    }

    pub fn add_row(&mut self, row: ReportRow) {
        self.add(&row.algorithm, &row.features, row.summary);
    }

    pub fn add_config(&mut self, config: &ExperimentConfig, summary: Summary) {
        self.add(config.algorithm.label(), config.extractor.label(), summary);
    }

    /// Adds a run directory, a `summary.json`, or a CSV of summary rows.
    pub fn add_path(&mut self, path: &Path) -> Result<(), HarnessError> {
        let file = if path.is_dir() { path.join(SUMMARY_FILE) } else { path.to_path_buf() };
        let text = std::fs::read_to_string(&file).map_err(|e| HarnessError::Io(file.display().to_string(), e))?;
        if file.extension().is_some_and(|e| e == "csv") {
            for line in text.lines().filter(|l| !l.trim().is_empty() && *l != SUMMARY_ROW_HEADER) {
                self.add_row(parse_summary_row(line)?);
            }
        } else {
            #[derive(Deserialize)]
            struct Doc {
                config: ExperimentConfig,
                summary: Summary,
            }
            let doc: Doc = serde_json::from_str(&text)
                .map_err(|e| HarnessError::Format(format!("{}: {e}", file.display())))?;
            self.add_config(&doc.config, doc.summary);
        }
        Ok(())
    }

    /// Every added summary with its group, grouped and in insertion order within a group.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &Summary)> {
        self.groups
            .iter()
            .flat_map(|((a, f), runs)| runs.iter().map(move |s| (a.as_str(), f.as_str(), s)))
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn runs(&self, algorithm: &str, features: &str) -> &[Summary] {
        self.groups
            .get(&(algorithm.to_string(), features.to_string()))
            .map_or(&[], Vec::as_slice)
    }

    fn levels(&self) -> Vec<usize> {
        let mut levels: Vec<usize> = self
            .groups
            .values()
            .flatten()
            .flat_map(|s| s.trials_to_finish.keys().copied())
            .collect();
        levels.sort_unstable();
        levels.dedup();
        levels
    }

    /// Maximum score and level per group, best over runs.
    pub fn table1(&self) -> String {
        let mut out = String::from("algorithm\tfeatures\truns\tscore\tlevel\n");
        for ((algorithm, features), runs) in &self.groups {
            let score = runs.iter().map(|s| s.max_score).max().unwrap_or(0);
            let level = runs.iter().map(|s| s.max_level).max().unwrap_or(0);
            writeln!(out, "{algorithm}\t{features}\t{}\t{score}\t{level}", runs.len()).unwrap();
        }
        out
    }

    /// Mean attempts until first clear, over the runs that cleared the level;
    /// `k/n` gives how many of the `n` runs did.
    pub fn table2(&self) -> String {
        let levels = self.levels();
        let mut out = String::from("algorithm\tfeatures");
        for l in &levels {
            write!(out, "\tlevel {l}").unwrap();
        }
        out.push('\n');
        for ((algorithm, features), runs) in &self.groups {
            write!(out, "{algorithm}\t{features}").unwrap();
            for l in &levels {
                let counts: Vec<usize> = runs.iter().filter_map(|s| s.trials_to_finish.get(l).copied()).collect();
                if counts.is_empty() {
                    out.push_str("\t-");
                } else {
                    let mean = counts.iter().sum::<usize>() as f64 / counts.len() as f64;
                    write!(out, "\t{mean:.1} ({}/{})", counts.len(), runs.len()).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}
