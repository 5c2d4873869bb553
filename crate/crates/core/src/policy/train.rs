use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use super::checkpoint::Checkpoint;
use super::env::{rollout, Environment, EpisodeTrace};
use super::mlp::PolicyParameters;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineRule {
    /// `w ← w + α_w (G_j − w)`: tracks the mean return.
    #[default]
    Centered,
    /// `w ← w + α_w G_j`.
    Literal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateSchedule {
    /// One Adam step per episode with the step gradients summed.
    #[default]
    PerEpisode,
    PerStep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    /// Output scale `C` of the mean network.
    pub output_scale: f64,
    /// Diagonal action covariance; a single entry applies to every action component.
    pub action_cov: Vec<f64>,
    pub zeta: f64,
    pub alpha: f64,
    pub alpha_w: f64,
    pub episodes: u64,
    /// Supplied by the caller; run configurations derive it from their master seed.
    #[serde(skip)]
    pub seed: u64,
    pub hidden: Vec<usize>,
    pub baseline_rule: BaselineRule,
    pub update: UpdateSchedule,
    pub adam: AdamConfig,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            output_scale: 10.0,
            action_cov: vec![0.01],
            zeta: 0.9,
            alpha: 1e-5,
            alpha_w: 1e-4,
            episodes: 10_000,
            seed: 0,
            hidden: vec![100, 100, 100],
            baseline_rule: BaselineRule::default(),
            update: UpdateSchedule::default(),
            adam: AdamConfig::default(),
        }
    }
}

impl PolicyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if !(0.0..=1.0).contains(&self.zeta) {
            return bad(format!("zeta must lie in [0, 1], got {}", self.zeta));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite() && self.alpha_w >= 0.0 && self.alpha_w.is_finite()) {
            return bad(format!("learning rates must be finite and >= 0, got {} and {}", self.alpha, self.alpha_w));
        }
        if !(self.output_scale > 0.0 && self.output_scale.is_finite()) {
            return bad(format!("output scale must be positive, got {}", self.output_scale));
        }
        if self.action_cov.is_empty() || self.action_cov.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return bad(format!("action covariance entries must be positive, got {:?}", self.action_cov));
        }
        if self.hidden.contains(&0) {
            return bad("hidden layers must be non-empty".into());
        }
        let a = &self.adam;
        if !((0.0..1.0).contains(&a.beta1) && (0.0..1.0).contains(&a.beta2) && a.epsilon > 0.0) {
            return bad(format!("invalid Adam settings {a:?}"));
        }
        Ok(())
    }

    /// Covariance vector for an action of dimension `dim`.
    pub fn covariance(&self, dim: usize) -> Result<Vec<f64>> {
        match self.action_cov.len() {
            1 => Ok(vec![self.action_cov[0]; dim]),
            n if n == dim => Ok(self.action_cov.clone()),
            n => Err(Error::InvalidInput(format!("action_cov has {n} entries for a {dim}-dimensional action"))),
        }
    }

    pub fn layer_sizes(&self, env: &Environment) -> Vec<usize> {
        let mut sizes = vec![env.input_dim()];
        sizes.extend(&self.hidden);
        sizes.push(env.action_dim());
        sizes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineState {
    pub w: f64,
}

/// One learning-curve row, taken from the stochastic training episode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub episode: u64,
    pub total_reward: f64,
    pub delta_d: f64,
    pub sigma: f64,
}

/// REINFORCE with a scalar baseline and Adam.
#[derive(Clone, Debug)]
pub struct Trainer {
    config: PolicyConfig,
    env: Environment,
    cov: Vec<f64>,
    theta: PolicyParameters,
    adam: AdamState,
    baseline: BaselineState,
    rng: ChaCha8Rng,
    episodes_done: u64,
    grad: Vec<f64>,
}

impl Trainer {
    /// Seeds the generator with `config.seed`, then draws the network weights and the
    /// initial baseline from it in that order.
    pub fn new(config: PolicyConfig, env: Environment) -> Result<Self> {
        config.validate()?;
        env.validate()?;
        let cov = config.covariance(env.action_dim())?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let theta = PolicyParameters::new(&config.layer_sizes(&env), config.output_scale, &mut rng);
        let w: f64 = rng.sample(StandardNormal);
        let n = theta.len();
        Ok(Self {
            config,
            env,
            cov,
            theta,
            adam: AdamState::new(n),
            baseline: BaselineState { w },
            rng,
            episodes_done: 0,
            grad: vec![0.0; n],
        })
    }

    pub fn from_checkpoint(config: PolicyConfig, env: Environment, ckpt: Checkpoint) -> Result<Self> {
        config.validate()?;
        env.validate()?;
        let cov = config.covariance(env.action_dim())?;
        if ckpt.theta.sizes() != config.layer_sizes(&env).as_slice() || ckpt.theta.scale() != config.output_scale {
            return Err(Error::InvalidInput(format!(
                "checkpoint architecture {:?} (C = {}) does not match the configuration",
                ckpt.theta.sizes(),
                ckpt.theta.scale()
            )));
        }
        let n = ckpt.theta.len();
        Ok(Self {
            config,
            env,
            cov,
            theta: ckpt.theta,
            adam: ckpt.adam,
            baseline: ckpt.baseline,
            rng: ckpt.rng,
            episodes_done: ckpt.episodes,
            grad: vec![0.0; n],
        })
    }

    pub fn parameters(&self) -> &PolicyParameters {
        &self.theta
    }

    pub fn baseline(&self) -> BaselineState {
        self.baseline
    }

    pub fn episodes_done(&self) -> u64 {
        self.episodes_done
    }

    pub fn environment(&self) -> &Environment {
        &self.env
    }

    pub fn config(&self) -> &PolicyConfig {
        &self.config
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            theta: self.theta.clone(),
            adam: self.adam.clone(),
            baseline: self.baseline,
            episodes: self.episodes_done,
            rng: self.rng.clone(),
        }
    }

    /// Rollout with actions fixed at the mean; does not advance the generator.
    pub fn evaluate(&self) -> Result<EpisodeTrace> {
        let mut rng = self.rng.clone();
        rollout(&self.theta, &self.env, &self.cov, self.config.zeta, &mut rng, true)
    }

    /// Samples one episode and applies the update; returns its learning-curve row.
    pub fn run_episode(&mut self) -> Result<CurvePoint> {
        let trace = rollout(&self.theta, &self.env, &self.cov, self.config.zeta, &mut self.rng, false)?;
        self.apply_update(&trace)?;
        Ok(CurvePoint {
            episode: self.episodes_done,
            total_reward: trace.total_reward(),
            delta_d: trace.final_distance,
            sigma: trace.sigma,
        })
    }

    /// Policy and baseline update from an episode, counting it as one training episode.
    pub fn apply_update(&mut self, trace: &EpisodeTrace) -> Result<()> {
        let episode = self.episodes_done as usize;
        let n = trace.returns.len();
        if trace.returns.iter().any(|g| !g.is_finite()) {
            return Err(Error::Diverged { episode, detail: format!("non-finite return in {:?}", trace.returns) });
        }
        let mut advantages = Vec::with_capacity(n);
        for &g in &trace.returns {
            advantages.push(g - self.baseline.w);
            self.baseline.w += match self.config.baseline_rule {
                BaselineRule::Centered => self.config.alpha_w * (g - self.baseline.w),
                BaselineRule::Literal => self.config.alpha_w * g,
            };
        }
        match self.config.update {
            UpdateSchedule::PerEpisode => {
                self.grad.iter_mut().for_each(|g| *g = 0.0);
                trace.accumulate_scores(&self.theta, &self.cov, &advantages, &mut self.grad);
                self.adam.ascend(self.theta.as_mut_slice(), &self.grad, self.config.alpha, &self.config.adam);
            }
            UpdateSchedule::PerStep => {
                for j in 0..n {
                    self.grad.iter_mut().for_each(|g| *g = 0.0);
                    let mut weights = vec![0.0; n];
                    weights[j] = advantages[j];
                    trace.accumulate_scores(&self.theta, &self.cov, &weights, &mut self.grad);
                    self.adam.ascend(self.theta.as_mut_slice(), &self.grad, self.config.alpha, &self.config.adam);
                }
            }
        }
        self.episodes_done += 1;
        if !self.theta.all_finite() {
            let bad = self.theta.as_slice().iter().position(|v| !v.is_finite()).unwrap();
            return Err(Error::Diverged { episode, detail: format!("parameter {bad} is non-finite") });
        }
        if !self.baseline.w.is_finite() {
            return Err(Error::Diverged { episode, detail: format!("baseline is {}", self.baseline.w) });
        }
        Ok(())
    }

    /// Runs `episodes` more episodes, calling `observe` after each.
    pub fn train_for<F: FnMut(&CurvePoint)>(&mut self, episodes: u64, mut observe: F) -> Result<Vec<CurvePoint>> {
        let mut curve = Vec::with_capacity(episodes as usize);
        for _ in 0..episodes {
            let point = self.run_episode()?;
            observe(&point);
            curve.push(point);
        }
        Ok(curve)
    }
}

/// Trained network plus its learning curve.
#[derive(Clone, Debug)]
pub struct TrainingOutcome {
    pub theta: PolicyParameters,
    pub curve: Vec<CurvePoint>,
    pub evaluation: EpisodeTrace,
}

/// Trains a fresh policy for `config.episodes` episodes and evaluates it deterministically.
pub fn train(config: &PolicyConfig, env: &Environment) -> Result<TrainingOutcome> {
    let mut trainer = Trainer::new(config.clone(), *env)?;
    let curve = trainer.train_for(config.episodes, |_| {})?;
    let evaluation = trainer.evaluate()?;
    Ok(TrainingOutcome { theta: trainer.theta, curve, evaluation })
}
