use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, OutputFormat};
use crate::adversary::pack_bits;
use crate::analysis::{empirical_mi, wilson_interval, MiEstimate, MIN_MI_SAMPLES, Z_95};
use crate::error::{Error, Result};
use crate::protocol::{self, Outcome, OutcomeRow, ProtocolKind, Status};
use crate::rng::{derive_seed, TrialRng};

/// Environment variable holding the worker count; unset or 0 means one per core.
pub const WORKERS_ENV: &str = "SQKD_WORKERS";

/// Aggregates of one experiment. Every rate here can be recomputed from the per-trial rows
/// except `eve_info_mi`, which also needs Eve's raw observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub protocol: ProtocolKind,
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub attack: String,
    pub trials: usize,
    pub master_seed: u64,
    pub completed: usize,
    pub aborted: usize,
    pub abort_rate: f64,
    pub abort_ci: (f64, f64),
    /// Abort counts keyed by reason.
    pub abort_reasons: BTreeMap<String, usize>,
    /// Means of the per-trial rates over the trials where the rate is defined.
    pub mean_ctrl_err_z: Option<f64>,
    pub mean_ctrl_err_x: Option<f64>,
    pub mean_test_err: Option<f64>,
    /// Fraction of trials with at least one CTRL or TEST error. With zero thresholds this
    /// is the fraction aborted on an error rate.
    pub detection_prob: f64,
    pub detection_ci: (f64, f64),
    /// Fraction of completed trials in which Eve's INFO guess is exactly right.
    pub eve_info_rate: Option<f64>,
    pub eve_info_ci: Option<(f64, f64)>,
    /// Fraction of SIFT bits Eve guessed right, over completed trials.
    pub eve_sift_accuracy: Option<f64>,
    /// MI in bits between Eve's observable and the INFO string, over completed trials.
    pub eve_info_mi: Option<MiEstimate>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub outcomes: Vec<Outcome>,
    pub rows: Vec<OutcomeRow>,
    pub summary: Summary,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn is_detection(row: &OutcomeRow) -> bool {
    [row.ctrl_err_z, row.ctrl_err_x, row.test_err]
        .iter()
        .any(|r| r.is_some_and(|r| r > 0.0))
}

impl Summary {
    /// Row-derived aggregates. `mi` and `sift_accuracy` are passed in from the full outcomes.
    pub fn from_rows(
        cfg: &ExperimentConfig,
        rows: &[OutcomeRow],
        eve_sift_accuracy: Option<f64>,
        eve_info_mi: Option<MiEstimate>,
    ) -> Self {
        let trials = rows.len();
        let completed = rows.iter().filter(|r| r.status == Status::Completed.label()).count();
        let aborted = trials - completed;
        let mut abort_reasons = BTreeMap::new();
        for r in rows.iter().filter(|r| r.status != Status::Completed.label()) {
            *abort_reasons.entry(r.status.clone()).or_insert(0) += 1;
        }
        let detected = rows.iter().filter(|r| is_detection(r)).count();
        let hits: Vec<u8> = rows.iter().filter_map(|r| r.eve_info_flag).collect();
        let hit_count = hits.iter().map(|&h| h as u64).sum::<u64>();
        Self {
            protocol: cfg.protocol,
            n: cfg.params.n,
            delta: cfg.params.delta,
            epsilon: cfg.params.epsilon,
            attack: cfg.attack.name.clone(),
            trials,
            master_seed: cfg.master_seed(),
            completed,
            aborted,
            abort_rate: aborted as f64 / trials as f64,
            abort_ci: wilson_interval(aborted as u64, trials as u64, Z_95),
            abort_reasons,
            mean_ctrl_err_z: mean(rows.iter().filter_map(|r| r.ctrl_err_z)),
            mean_ctrl_err_x: mean(rows.iter().filter_map(|r| r.ctrl_err_x)),
            mean_test_err: mean(rows.iter().filter_map(|r| r.test_err)),
            detection_prob: detected as f64 / trials as f64,
            detection_ci: wilson_interval(detected as u64, trials as u64, Z_95),
            eve_info_rate: (!hits.is_empty()).then(|| hit_count as f64 / hits.len() as f64),
            eve_info_ci: (!hits.is_empty()).then(|| wilson_interval(hit_count, hits.len() as u64, Z_95)),
            eve_sift_accuracy,
            eve_info_mi,
        }
    }
}

/// Worker count from [`WORKERS_ENV`].
pub fn worker_count() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
}

/// Runs every trial (in parallel) and returns the outcomes in trial order.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<Outcome>> {
    run_trials_with(cfg, worker_count())
}

/// As [`run_trials`] with an explicit worker count (`None`: one per core).
pub fn run_trials_with(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<Outcome>> {
    cfg.validate()?;
    let attack = cfg.attack.build(cfg.params.num_qubits())?;
    let seed = cfg.master_seed();
    let work = || {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = TrialRng::for_trial(seed, i);
                protocol::run(cfg.protocol, &cfg.params, &attack, &mut rng)
            })
            .collect::<Result<Vec<_>>>()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    pool.install(work)
}

/// Seed of trial `index` in an experiment with `master_seed`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    derive_seed(master_seed, index)
}

/// Fraction of Eve's SIFT guesses that match Alice's bits, over completed trials.
pub fn sift_accuracy(outcomes: &[Outcome]) -> Option<f64> {
    let (mut right, mut total) = (0usize, 0usize);
    for o in outcomes.iter().filter(|o| o.status.is_completed()) {
        for &(pos, guess) in &o.eve_record.sift_guesses {
            total += 1;
            right += usize::from(o.transcript.alice_bits[pos] == guess);
        }
    }
    (total > 0).then(|| right as f64 / total as f64)
}

/// `(observable, INFO string)` pairs of the completed trials.
pub fn info_pairs(outcomes: &[Outcome]) -> Vec<(u64, u64)> {
    outcomes
        .iter()
        .filter(|o| o.status.is_completed())
        .map(|o| (o.eve_record.observable, pack_bits(&o.alice_info)))
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(cfg, worker_count())
}

pub fn run_experiment_with(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentResult> {
    let outcomes = run_trials_with(cfg, workers)?;
    let rows: Vec<OutcomeRow> = outcomes.iter().map(|o| o.row(&cfg.params)).collect();
    let pairs = info_pairs(&outcomes);
    let mi = if pairs.len() >= MIN_MI_SAMPLES {
        Some(empirical_mi(&pairs, cfg.master_seed())?)
    } else {
        None
    };
    let summary = Summary::from_rows(cfg, &rows, sift_accuracy(&outcomes), mi);
    if let Some(path) = &cfg.output {
        write_rows(path, cfg.format, &rows)?;
        write_json(&summary_path(path), &summary)?;
    }
    Ok(ExperimentResult {
        outcomes,
        rows,
        summary,
    })
}

/// `runs/hw.csv` → `runs/hw.summary.json`.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    out.with_file_name(format!("{stem}.summary.json"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_rows<R: Serialize>(path: &Path, format: OutputFormat, rows: &[R]) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(create(path)?);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => write_json(path, &rows)?,
    }
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_rows_csv(path: &Path) -> Result<Vec<OutcomeRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}
