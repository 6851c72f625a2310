use super::{AttemptKind, AttemptRecord, ExperimentConfig, HarnessError, ResultsBundle};
use crate::engine::{Engine, Resolved, Status};
use crate::learners::{Agent, Mode, TransitionRecord};

/// Drives one agent through attempts on one engine.
///
/// [`run_experiment`] is the usual entry point; the runner is public so that
/// callers can inspect the agent between attempts.
pub struct Runner {
    engine: Engine,
    agent: Box<dyn Agent + Send>,
    records: Vec<AttemptRecord>,
}

impl Runner {
    pub fn new(engine: Engine, agent: Box<dyn Agent + Send>) -> Self {
        Runner {
            engine,
            agent,
            records: Vec::new(),
        }
    }

    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self, HarnessError> {
        cfg.validate()?;
        let engine = cfg.build_engine()?;
        let agent = cfg.build_agent()?;
        if agent.extractor().actions() != engine.action_count() {
            return Err(HarnessError::Config("extractor and engine disagree on the action count".into()));
        }
        Ok(Runner::new(engine, agent))
    }

    pub fn agent(&self) -> &dyn Agent {
        self.agent.as_ref()
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn records(&self) -> &[AttemptRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<AttemptRecord> {
        self.records
    }

    /// Kind of the next attempt: even indices explore, odd indices evaluate.
    pub fn next_kind(&self) -> AttemptKind {
        if self.records.len().is_multiple_of(2) {
            AttemptKind::Explore
        } else {
            AttemptKind::Eval
        }
    }

    /// Plays one attempt of the given kind from level 0. Eval attempts never
    /// call [`Agent::observe`].
    pub fn run_attempt(&mut self, kind: AttemptKind) -> Result<&AttemptRecord, HarnessError> {
        let index = self.records.len();
        let mode = match kind {
            AttemptKind::Explore => Mode::Explore,
            AttemptKind::Eval => Mode::Eval,
        };
        let mut state = self.engine.initial_state();
        let mut shots = 0;
        let mut levels_cleared = Vec::new();
        let end = loop {
            let action = self.agent.act(&state, mode)?;
            let outcome = self.engine.shoot(&state, action)?;
            shots += 1;
            let next = if outcome.next_state.status.is_terminal() {
                self.engine.resolve(&outcome.next_state)?
            } else {
                Resolved {
                    state: outcome.next_state.clone(),
                    attempt_end: None,
                }
            };
            if kind == AttemptKind::Explore {
                let successor = next.attempt_end.is_none().then_some(&next.state);
                let record = TransitionRecord::from_states(
                    self.agent.extractor(),
                    &state,
                    action,
                    outcome.reward as f64,
                    successor,
                )?;
                self.agent.observe(record)?;
            }
            if outcome.next_state.status == Status::Cleared {
                levels_cleared.push((outcome.next_state.level, index + 1));
            }
            match next.attempt_end {
                Some(end) => break end,
                None => state = next.state,
            }
        };
        self.records.push(AttemptRecord {
            index,
            kind,
            score: end.score,
            max_level_reached: end.level_reached,
            shots,
            levels_cleared,
        });
        Ok(self.records.last().expect("just pushed"))
    }
}

/// Runs `cfg.total_attempts` attempts, alternating explore and eval.
///
/// An engine or learner failure returns [`HarnessError::Aborted`] carrying
/// the attempts completed so far.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultsBundle, HarnessError> {
    let mut runner = Runner::from_config(cfg)?;
    runner.run_remaining(cfg)
}

impl Runner {
    /// Continues alternating attempts until `cfg.total_attempts` exist and
    /// returns the bundle. The runner keeps its agent for inspection.
    pub fn run_remaining(&mut self, cfg: &ExperimentConfig) -> Result<ResultsBundle, HarnessError> {
        while self.records.len() < cfg.total_attempts {
            let kind = self.next_kind();
            if let Err(e) = self.run_attempt(kind) {
                let partial = ResultsBundle::from_records(cfg.clone(), self.records.clone());
                return Err(HarnessError::Aborted {
                    partial: Box::new(partial),
                    source: Box::new(e),
                });
            }
        }
        Ok(ResultsBundle::from_records(cfg.clone(), self.records.clone()))
    }
}

/// Runs the same configuration under each seed, in parallel. Results come
/// back in seed order.
pub fn run_seeds(cfg: &ExperimentConfig, seeds: &[u64]) -> Vec<Result<ResultsBundle, HarnessError>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(seeds.len().max(1));
    let mut results: Vec<Option<Result<ResultsBundle, HarnessError>>> = (0..seeds.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots = std::sync::Mutex::new(&mut results);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&seed) = seeds.get(i) else { break };
                let run = run_experiment(&ExperimentConfig { seed, ..cfg.clone() });
                slots.lock().expect("no worker panicked")[i] = Some(run);
            });
        }
    });
    results.into_iter().map(|r| r.expect("every seed ran")).collect()
}
