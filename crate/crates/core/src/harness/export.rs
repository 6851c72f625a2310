use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{AttemptKind, AttemptRecord, ExperimentConfig, HarnessError, ResultsBundle, Summary};

pub const ATTEMPTS_FILE: &str = "attempts.csv";
pub const MOVING_AVERAGE_FILE: &str = "moving_average.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const RESULTS_FILE: &str = "results.json";

const ATTEMPT_COLUMNS: [&str; 6] = ["index", "kind", "score", "max_level", "shots", "levels_cleared"];
const MA_COLUMNS: [&str; 2] = ["eval_index", "moving_average"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    /// `attempts.csv`, `moving_average.csv` and `summary.json`.
    Csv,
    /// A single `results.json` holding the whole bundle.
    Structured,
}

#[derive(Serialize)]
struct SummaryDoc<'a> {
    config: &'a ExperimentConfig,
    attempts: usize,
    eval_attempts: usize,
    summary: &'a Summary,
}

fn csv_error(e: csv::Error) -> HarnessError {
    HarnessError::Format(e.to_string())
}

/// Per-attempt CSV. `levels_cleared` lists cleared levels separated by `;`.
pub fn write_attempts_csv(records: &[AttemptRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ATTEMPT_COLUMNS).expect("in-memory write");
    for r in records {
        let cleared = r
            .levels_cleared
            .iter()
            .map(|(level, _)| level.to_string())
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.index.to_string(),
            r.kind.as_str().to_string(),
            r.score.to_string(),
            r.max_level_reached.to_string(),
            r.shots.to_string(),
            cleared,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn read_attempts_csv(text: &str) -> Result<Vec<AttemptRecord>, HarnessError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_error)?;
    if headers.iter().ne(ATTEMPT_COLUMNS) {
        return Err(HarnessError::Format(format!("unexpected attempts header {headers:?}")));
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |what: &str| HarnessError::Format(format!("line {line}: bad {what}"));
        let num = |i: usize, what: &str| row[i].parse::<usize>().map_err(|_| bad(what));
        let index = num(0, "index")?;
        let kind = AttemptKind::parse(&row[1]).ok_or_else(|| bad("kind"))?;
        let score = row[2].parse::<i64>().map_err(|_| bad("score"))?;
        let levels_cleared = if row[5].is_empty() {
            Vec::new()
        } else {
            row[5]
                .split(';')
                .map(|l| l.parse::<usize>().map(|l| (l, index + 1)).map_err(|_| bad("levels_cleared")))
                .collect::<Result<_, _>>()?
        };
        records.push(AttemptRecord {
            index,
            kind,
            score,
            max_level_reached: num(3, "max_level")?,
            shots: num(4, "shots")?,
            levels_cleared,
        });
    }
    Ok(records)
}

pub fn write_moving_average_csv(series: &[f64]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(MA_COLUMNS).expect("in-memory write");
    for (i, v) in series.iter().enumerate() {
        w.write_record([i.to_string(), v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn read_moving_average_csv(text: &str) -> Result<Vec<f64>, HarnessError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_error)?;
    if headers.iter().ne(MA_COLUMNS) {
        return Err(HarnessError::Format(format!("unexpected moving-average header {headers:?}")));
    }
    reader
        .records()
        .map(|row| {
            let row = row.map_err(csv_error)?;
            row[1]
                .parse::<f64>()
                .map_err(|_| HarnessError::Format(format!("bad moving average {:?}", &row[1])))
        })
        .collect()
}

pub fn summary_document(bundle: &ResultsBundle) -> String {
    let doc = SummaryDoc {
        config: &bundle.config,
        attempts: bundle.records.len(),
        eval_attempts: bundle.records.iter().filter(|r| r.kind == AttemptKind::Eval).count(),
        summary: &bundle.summary,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("summary serializes");
    text.push('\n');
    text
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, HarnessError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| HarnessError::Io(path.display().to_string(), e))?;
    Ok(path)
}

/// Writes the bundle into `dir` (created if missing) and returns the paths written.
pub fn export(bundle: &ResultsBundle, dir: &Path, format: ExportFormat) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(dir.display().to_string(), e))?;
    match format {
        ExportFormat::Csv => Ok(vec![
            write(dir, ATTEMPTS_FILE, &write_attempts_csv(&bundle.records))?,
            write(dir, MOVING_AVERAGE_FILE, &write_moving_average_csv(&bundle.moving_average))?,
            write(dir, SUMMARY_FILE, &summary_document(bundle))?,
        ]),
        ExportFormat::Structured => {
            let mut text = serde_json::to_string_pretty(bundle).expect("bundle serializes");
            text.push('\n');
            Ok(vec![write(dir, RESULTS_FILE, &text)?])
        }
    }
}

/// Reads a directory written with [`ExportFormat::Csv`] back into a bundle.
pub fn load_exported(dir: &Path) -> Result<ResultsBundle, HarnessError> {
    let read = |name: &str| {
        let path = dir.join(name);
        std::fs::read_to_string(&path).map_err(|e| HarnessError::Io(path.display().to_string(), e))
    };
    #[derive(serde::Deserialize)]
    struct Doc {
        config: ExperimentConfig,
    }
    let doc: Doc = serde_json::from_str(&read(SUMMARY_FILE)?).map_err(|e| HarnessError::Format(e.to_string()))?;
    let records = read_attempts_csv(&read(ATTEMPTS_FILE)?)?;
    Ok(ResultsBundle::from_records(doc.config, records))
}
