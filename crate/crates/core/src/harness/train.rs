use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;

use super::config::RunConfig;
use super::curve::{converged, read_learning_curve, write_learning_curve};
use crate::dynamics::{fmt_f64, Mode};
use crate::error::{Error, Result};
use crate::oracle::{optimal_solution_for_lambdas, DEFAULT_SAMPLES};
use crate::policy::{Checkpoint, CurvePoint, Trainer};

pub(crate) const CHECKPOINT_FILE: &str = "checkpoint.txt";
pub(crate) const CURVE_FILE: &str = "learning_curve.csv";
pub(crate) const EVAL_FILE: &str = "evaluation.csv";
pub(crate) const SUMMARY_FILE: &str = "summary.txt";

/// Outcome of one training run, evaluated with actions fixed at the policy mean.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainSummary {
    pub lambda_f: f64,
    pub seed: u64,
    pub episodes: u64,
    pub delta_d: f64,
    pub sigma: f64,
    /// Classical oracle minimum for the same `λ` endpoints; `None` when either endpoint
    /// has `ε ≠ 0` or the target is unreachable.
    pub oracle_sigma: Option<f64>,
    pub converged: bool,
}

/// Classical minimum entropy production for the run's boundary data; `None` when the
/// target is unreachable.
pub(crate) fn oracle_sigma(cfg: &RunConfig, lambda_f: f64) -> Result<Option<f64>> {
    match optimal_solution_for_lambdas(cfg.lambda_i, lambda_f, cfg.tau, cfg.thermal()?, DEFAULT_SAMPLES) {
        Ok(sol) => Ok(Some(sol.sigma_min)),
        Err(Error::Unreachable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Trains the single target of `cfg` into `out`: `checkpoint.txt`, `learning_curve.csv`,
/// `evaluation.csv` (deterministic rollout), `summary.txt` and the resolved `config.json`.
/// With `resume`, an existing checkpoint in `out` is continued up to `policy.episodes`.
pub fn run_train(cfg: &RunConfig, out: &Path, resume: bool) -> Result<TrainSummary> {
    cfg.validate()?;
    if cfg.lambda_f.len() != 1 {
        return Err(Error::InvalidInput(format!(
            "train takes exactly one lambda_f target, got {}; use sweep for lists",
            cfg.lambda_f.len()
        )));
    }
    train_target(cfg, 0, out, resume)
}

pub(crate) fn train_target(cfg: &RunConfig, index: usize, out: &Path, resume: bool) -> Result<TrainSummary> {
    let lambda_f = cfg.lambda_f[index];
    let env = cfg.environment(lambda_f)?;
    let policy = cfg.policy_for(index);
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("config.json"), cfg.to_json())?;

    let ckpt_path = out.join(CHECKPOINT_FILE);
    let curve_path = out.join(CURVE_FILE);
    let (mut trainer, mut curve) = if resume && ckpt_path.exists() {
        let ckpt = Checkpoint::load(&ckpt_path)?;
        let done = ckpt.episodes as usize;
        let mut curve = match File::open(&curve_path) {
            Ok(f) => read_learning_curve(f, &curve_path.display().to_string())?,
            Err(_) => Vec::new(),
        };
        if curve.len() < done {
            return Err(Error::Format {
                path: curve_path.display().to_string(),
                detail: format!("has {} rows but the checkpoint is at episode {done}", curve.len()),
            });
        }
        curve.truncate(done);
        write_learning_curve(File::create(&curve_path)?, &curve, true)?;
        (Trainer::from_checkpoint(policy.clone(), env, ckpt)?, curve)
    } else {
        write_learning_curve(File::create(&curve_path)?, &[], true)?;
        (Trainer::new(policy.clone(), env)?, Vec::new())
    };

    let chunk = if cfg.checkpoint_every == 0 { u64::MAX } else { cfg.checkpoint_every };
    while trainer.episodes_done() < policy.episodes {
        let n = chunk.min(policy.episodes - trainer.episodes_done());
        let mut sink = BufWriter::new(OpenOptions::new().append(true).open(&curve_path)?);
        let mut pending: Vec<CurvePoint> = Vec::with_capacity(n.min(1 << 20) as usize);
        let result = trainer.train_for(n, |p| pending.push(*p));
        write_learning_curve(&mut sink, &pending, false)?;
        sink.flush()?;
        curve.extend(pending);
        result?;
        trainer.checkpoint().save(&ckpt_path)?;
    }
    trainer.checkpoint().save(&ckpt_path)?;

    let eval = trainer.evaluate()?;
    eval.to_trajectory(&env).save_csv(&out.join(EVAL_FILE))?;
    let summary = TrainSummary {
        lambda_f,
        seed: policy.seed,
        episodes: trainer.episodes_done(),
        delta_d: eval.final_distance,
        sigma: eval.sigma,
        oracle_sigma: if cfg.diagonal_endpoints() { oracle_sigma(cfg, lambda_f)? } else { None },
        converged: converged(&curve),
    };
    write_summary(&out.join(SUMMARY_FILE), &summary, cfg.mode)?;
    Ok(summary)
}

fn write_summary(path: &Path, s: &TrainSummary, mode: Mode) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "mode={mode}")?;
    writeln!(f, "lambda_f={}", fmt_f64(s.lambda_f))?;
    writeln!(f, "seed={}", s.seed)?;
    writeln!(f, "episodes={}", s.episodes)?;
    writeln!(f, "delta_d={}", fmt_f64(s.delta_d))?;
    writeln!(f, "sigma={}", fmt_f64(s.sigma))?;
    if let Some(o) = s.oracle_sigma {
        writeln!(f, "oracle_sigma={}", fmt_f64(o))?;
    }
    writeln!(f, "converged={}", s.converged)?;
    f.flush()?;
    Ok(())
}
