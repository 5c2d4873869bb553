use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{ControlParams, Mode, ThermalContext, DEFAULT_SUBSTEPS};
use crate::error::{Error, Result};
use crate::policy::{Environment, PolicyConfig, PolicyInput};

/// Environment variable that overrides [`RunConfig::out_dir`].
pub const OUT_DIR_ENV: &str = "SHORTCUT_OUT";

/// One experiment, read from JSON. Every field has a default, so `{}` is a valid
/// classical run with `λ: 0 → 0.5`.
///
/// ```json
/// {
///   "mode": "quantum",
///   "lambda_f": [0.5, 1.0],
///   "epsilon_i": 0.0, "epsilon_f": 0.0,
///   "seed": 7,
///   "policy": { "episodes": 100000, "alpha": 2e-6 }
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub beta: f64,
    pub tau: f64,
    #[serde(rename = "N")]
    pub n_steps: usize,
    pub lambda_i: f64,
    pub lambda_f: Vec<f64>,
    pub epsilon_i: f64,
    pub epsilon_f: f64,
    pub substeps: usize,
    pub input: PolicyInput,
    pub policy: PolicyConfig,
    pub out_dir: PathBuf,
    /// Master seed; target `k` trains with [`child_seed`](super::child_seed)`(seed, k)`.
    pub seed: u64,
    /// Write a checkpoint every this many episodes (0: only at the end).
    pub checkpoint_every: u64,
    /// Run sweep targets one after another instead of in parallel.
    pub sequential: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Classical,
            beta: 1.0,
            tau: 1.0,
            n_steps: 10,
            lambda_i: 0.0,
            lambda_f: vec![0.5],
            epsilon_i: 0.0,
            epsilon_f: 0.0,
            substeps: DEFAULT_SUBSTEPS,
            input: PolicyInput::default(),
            policy: PolicyConfig::default(),
            out_dir: PathBuf::from("runs"),
            seed: 0,
            checkpoint_every: 0,
            sequential: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// The default sweep grid `λ_f ∈ {0.2, 0.4, …, 1.8}`.
    pub fn default_grid() -> Vec<f64> {
        (1..=9).map(|k| k as f64 / 5.0).collect()
    }

    pub fn thermal(&self) -> Result<ThermalContext> {
        ThermalContext::new(self.beta)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        self.thermal()?;
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if self.n_steps == 0 || self.substeps == 0 {
            return bad("N and substeps must be at least 1".into());
        }
        if self.lambda_f.is_empty() {
            return bad("lambda_f list is empty".into());
        }
        if std::iter::once(&self.lambda_i).chain(&self.lambda_f).any(|l| !(*l >= 0.0 && l.is_finite())) {
            return bad(format!("lambda values must be finite and >= 0 (lambda_i = {}, lambda_f = {:?})", self.lambda_i, self.lambda_f));
        }
        if !(self.epsilon_i.is_finite() && self.epsilon_f.is_finite()) {
            return bad("epsilon endpoints must be finite".into());
        }
        if self.mode == Mode::Classical && (self.epsilon_i != 0.0 || self.epsilon_f != 0.0) {
            return bad("classical runs need epsilon_i = epsilon_f = 0".into());
        }
        self.policy.validate()
    }

    /// Both endpoint Hamiltonians are diagonal, so the classical oracle applies.
    pub fn diagonal_endpoints(&self) -> bool {
        self.epsilon_i == 0.0 && self.epsilon_f == 0.0
    }

    /// Task for target `lambda_f`.
    pub fn environment(&self, lambda_f: f64) -> Result<Environment> {
        let env = Environment {
            mode: self.mode,
            ctx: self.thermal()?,
            initial: ControlParams::new(self.epsilon_i, self.lambda_i),
            target: ControlParams::new(self.epsilon_f, lambda_f),
            tau: self.tau,
            n_steps: self.n_steps,
            substeps: self.substeps,
            input: self.input,
        };
        env.validate()?;
        Ok(env)
    }

    /// Policy settings for target `index`, with its derived seed.
    pub fn policy_for(&self, index: usize) -> PolicyConfig {
        PolicyConfig { seed: super::child_seed(self.seed, index), ..self.policy.clone() }
    }
}
