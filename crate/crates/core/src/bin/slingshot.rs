use std::collections::BTreeMap;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use slingshot::engine::{load_level_pack, ActionConfig, ActionId, Engine, LevelPack};
use slingshot::features::{ExtractorKind, FeatureExtractor};
use slingshot::harness::{
    export, summary_row, Algorithm, ExperimentConfig, ExportFormat, HarnessError, Report, Runner, SUMMARY_ROW_HEADER,
};
use slingshot::service::{serve, ServiceConfig, SessionStore, DEFAULT_PORT};

#[derive(Parser)]
#[command(name = "slingshot", version, about = "Slingshot game workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and export its results.
    Run {
        /// Experiment configuration (JSON); flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Run several seeds in parallel, e.g. `0,1,2`; results go to <out>/seed-<n>.
        #[arg(long, value_delimiter = ',', conflicts_with = "seed")]
        seeds: Vec<u64>,
        #[arg(long)]
        attempts: Option<usize>,
        /// `q` or `rlsvi`.
        #[arg(long)]
        algo: Option<String>,
        /// `pv`, `pp`, `npp`, `npps` or `nppo`.
        #[arg(long)]
        features: Option<String>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Level pack file instead of the bundled pack.
        #[arg(long)]
        levels: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Also write the final learner checkpoint here (single seed only).
        #[arg(long, conflicts_with = "seeds")]
        checkpoint: Option<PathBuf>,
    },
    /// Merge run directories, summary.json files or summary-row CSVs into tables.
    Summarize {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Print one summary row per input instead of the tables.
        #[arg(long)]
        rows: bool,
    },
    /// Print φ(s, a) for the start of a level as `index:value` lines.
    DumpFeatures {
        #[arg(long, default_value = "npp")]
        features: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Only this action; all actions when omitted.
        #[arg(long)]
        action: Option<usize>,
        #[arg(long)]
        levels: Option<PathBuf>,
    },
    /// Serve the play API.
    PlayServe {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Extra level packs, served under their file stem.
        #[arg(long)]
        levels: Vec<PathBuf>,
        /// Snap human shots onto the 32-action grid.
        #[arg(long)]
        discretized: bool,
        /// Session snapshot file, restored at start and rewritten periodically.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        snapshot_secs: u64,
    },
}

fn read_pack(path: &PathBuf) -> Result<LevelPack, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    load_level_pack(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Run {
            config,
            seed,
            seeds,
            attempts,
            algo,
            features,
            out,
            levels,
            format,
            checkpoint,
        } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(&path).map_err(|e| e.to_string())?,
                None => ExperimentConfig::default(),
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(n) = attempts {
                cfg.total_attempts = n;
            }
            if let Some(name) = algo {
                cfg.algorithm = Algorithm::from_name(&name).ok_or(format!("unknown algorithm {name:?}"))?;
            }
            if let Some(name) = features {
                cfg.extractor = ExtractorKind::from_name(&name).ok_or(format!("unknown feature extractor {name:?}"))?;
            }
            if levels.is_some() {
                cfg.levels = levels;
            }
            cfg.validate().map_err(|e| e.to_string())?;
            let format = match format {
                Format::Csv => ExportFormat::Csv,
                Format::Json => ExportFormat::Structured,
            };
            if seeds.is_empty() {
                run_single(&cfg, &out, format, checkpoint)
            } else {
                let mut failed = false;
                for (seed, result) in seeds.iter().zip(slingshot::harness::run_seeds(&cfg, &seeds)) {
                    let dir = out.join(format!("seed-{seed}"));
                    failed |= finish(result, &dir, format).is_err();
                }
                if failed {
                    Err("one or more seeds aborted".into())
                } else {
                    Ok(())
                }
            }
        }
        Command::Summarize { inputs, rows } => {
            let mut report = Report::new();
            for input in &inputs {
                report.add_path(input).map_err(|e| e.to_string())?;
            }
            if rows {
                println!("{SUMMARY_ROW_HEADER}");
                for (algorithm, features, summary) in report.entries() {
                    println!("{}", summary_row(algorithm, features, summary));
                }
            } else {
                println!("Maximum score and level\n{}", report.table1());
                println!("Attempts until each level was first cleared\n{}", report.table2());
            }
            Ok(())
        }
        Command::DumpFeatures {
            features,
            level,
            action,
            levels,
        } => {
            let pack = match levels {
                Some(path) => read_pack(&path)?,
                None => LevelPack::bundled(),
            };
            let engine = Engine::new(pack, ActionConfig::default()).map_err(|e| e.to_string())?;
            let state = engine.level_state(level).map_err(|e| e.to_string())?;
            let kind = ExtractorKind::from_name(&features).ok_or(format!("unknown feature extractor {features:?}"))?;
            let extractor = FeatureExtractor::new(kind, engine.action_count()).map_err(|e| e.to_string())?;
            let actions: Vec<ActionId> = match action {
                Some(a) => vec![ActionId(a)],
                None => engine.actions().actions().collect(),
            };
            for a in actions {
                let phi = extractor.extract(&state, a).map_err(|e| e.to_string())?;
                print!("{}", phi.to_text());
            }
            Ok(())
        }
        Command::PlayServe {
            port,
            levels,
            discretized,
            snapshot,
            snapshot_secs,
        } => {
            let mut packs = BTreeMap::new();
            for path in &levels {
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .ok_or(format!("{}: no file name", path.display()))?;
                packs.insert(id, read_pack(path)?);
            }
            let config = ServiceConfig {
                discretized,
                ..ServiceConfig::default()
            };
            let store = Arc::new(SessionStore::new(config, packs).map_err(|e| e.to_string())?);
            let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
            let snapshot = snapshot.map(|p| (p, Duration::from_secs(snapshot_secs.max(1))));
            let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            runtime.block_on(serve(addr, store, snapshot)).map_err(|e| e.to_string())
        }
    }
}

fn finish(result: Result<slingshot::harness::ResultsBundle, HarnessError>, dir: &Path, format: ExportFormat) -> Result<(), String> {
    match result {
        Ok(bundle) => {
            export(&bundle, dir, format).map_err(|e| e.to_string())?;
            let s = &bundle.summary;
            eprintln!(
                "{}: {} attempts, max score {}, max level {}",
                dir.display(),
                bundle.records.len(),
                s.max_score,
                s.max_level
            );
            Ok(())
        }
        Err(HarnessError::Aborted { partial, source }) => {
            export(&partial, dir, format).map_err(|e| e.to_string())?;
            let message = format!("{}: aborted after {} attempts: {source}", dir.display(), partial.records.len());
            eprintln!("{message}");
            Err(message)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn run_single(cfg: &ExperimentConfig, out: &Path, format: ExportFormat, checkpoint: Option<PathBuf>) -> Result<(), String> {
    let mut runner = Runner::from_config(cfg).map_err(|e| e.to_string())?;
    let result = runner.run_remaining(cfg);
    if let Some(path) = checkpoint {
        runner.agent().checkpoint().save(&path).map_err(|e| e.to_string())?;
    }
    finish(result, out, format)
}
