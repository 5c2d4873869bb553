use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gaussian::{accumulate_score, action_dim, sample_action};
use super::mlp::{Activations, PolicyParameters};
use crate::dynamics::{ControlParams, Mode, SystemState, ThermalContext, Trajectory, DEFAULT_SUBSTEPS};
use crate::error::{Error, Result};

/// What the policy network sees at step `j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyInput {
    /// State components followed by the normalised step index `j / N`.
    #[default]
    StateAndTime,
    StateOnly,
}

/// Boundary data and discretisation for one driving task.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Environment {
    pub mode: Mode,
    pub ctx: ThermalContext,
    pub initial: ControlParams,
    pub target: ControlParams,
    pub tau: f64,
    pub n_steps: usize,
    pub substeps: usize,
    pub input: PolicyInput,
}

impl Environment {
    /// Task with `τ = 1`, `N = 10` and `β = 1`.
    pub fn new(mode: Mode, initial: ControlParams, target: ControlParams) -> Self {
        Self {
            mode,
            ctx: ThermalContext::default(),
            initial,
            target,
            tau: 1.0,
            n_steps: 10,
            substeps: DEFAULT_SUBSTEPS,
            input: PolicyInput::default(),
        }
    }

    pub fn classical(lambda_i: f64, lambda_f: f64) -> Self {
        Self::new(Mode::Classical, ControlParams::classical(lambda_i), ControlParams::classical(lambda_f))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidInput(format!("tau must be positive, got {}", self.tau)));
        }
        if self.n_steps == 0 || self.substeps == 0 {
            return Err(Error::InvalidInput("N and substeps must be at least 1".into()));
        }
        for c in [self.initial, self.target] {
            if !c.is_finite() || c.lam < 0.0 {
                return Err(Error::InvalidInput(format!("endpoint controls need finite values and lam >= 0, got {c:?}")));
            }
            SystemState::check_control(self.mode, c)?;
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        let state = match self.mode {
            Mode::Classical => 1,
            Mode::Quantum => 3,
        };
        state + usize::from(self.input == PolicyInput::StateAndTime)
    }

    pub fn action_dim(&self) -> usize {
        action_dim(self.mode)
    }

    pub fn initial_state(&self) -> SystemState {
        SystemState::equilibrium(self.mode, self.initial, self.ctx)
    }

    pub fn target_state(&self) -> SystemState {
        SystemState::equilibrium(self.mode, self.target, self.ctx)
    }

    /// Policy input before step `j` (0-based).
    pub fn observe(&self, state: &SystemState, j: usize) -> Vec<f64> {
        let mut s = state.components();
        if self.input == PolicyInput::StateAndTime {
            s.push(j as f64 / self.n_steps as f64);
        }
        s
    }
}

/// `r_j = (1 − ζ)(−ΔΣ_j) + ζ·(−Δd)` on the final step, without the distance term before.
pub fn step_reward(delta_sigma: f64, is_final: bool, delta_d: f64, zeta: f64) -> f64 {
    let terminal = if is_final { -delta_d } else { 0.0 };
    (1.0 - zeta) * -delta_sigma + zeta * terminal
}

/// Suffix sums `G_j = Σ_{k ≥ j} r_k`.
pub fn compute_returns(rewards: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for (g, r) in out.iter_mut().zip(rewards).rev() {
        acc += r;
        *g = acc;
    }
    out
}

/// One episode.
#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeTrace {
    /// Policy inputs `s_j`.
    pub inputs: Vec<Vec<f64>>,
    /// Gaussian samples before clamping.
    pub raw_actions: Vec<Vec<f64>>,
    /// Controls applied on each interval.
    pub controls: Vec<ControlParams>,
    pub rewards: Vec<f64>,
    pub returns: Vec<f64>,
    pub entropy_increments: Vec<f64>,
    /// `N + 1` states including the initial one.
    pub states: Vec<SystemState>,
    pub final_distance: f64,
    pub sigma: f64,
}

impl EpisodeTrace {
    pub fn total_reward(&self) -> f64 {
        self.returns.first().copied().unwrap_or(0.0)
    }

    pub fn final_state(&self) -> SystemState {
        *self.states.last().unwrap()
    }

    pub fn to_trajectory(&self, env: &Environment) -> Trajectory {
        let n = self.controls.len();
        Trajectory {
            mode: env.mode,
            times: (0..=n).map(|j| env.tau * j as f64 / n as f64).collect(),
            states: self.states.clone(),
            controls: self.controls.clone(),
            entropy_increments: self.entropy_increments.clone(),
            sigma_total: self.sigma,
        }
    }

    /// Adds `Σ_j weight_j · ∇ ln π(a_j | s_j)` to `grad`.
    pub fn accumulate_scores(&self, theta: &PolicyParameters, cov: &[f64], weights: &[f64], grad: &mut [f64]) {
        let mut acts = Activations::default();
        for ((s, a), &w) in self.inputs.iter().zip(&self.raw_actions).zip(weights) {
            accumulate_score(theta, s, a, cov, w, &mut acts, grad);
        }
    }
}

/// Runs one episode from the Gibbs state of the initial control.
pub fn rollout<R: Rng + ?Sized>(
    theta: &PolicyParameters,
    env: &Environment,
    cov: &[f64],
    zeta: f64,
    rng: &mut R,
    deterministic: bool,
) -> Result<EpisodeTrace> {
    if theta.input_dim() != env.input_dim() || theta.output_dim() != env.action_dim() {
        return Err(Error::InvalidInput(format!(
            "network shape {:?} does not fit a {} task with {} inputs",
            theta.sizes(),
            env.mode,
            env.input_dim()
        )));
    }
    let n = env.n_steps;
    let dt = env.tau / n as f64;
    let mut state = env.initial_state();
    let mut trace = EpisodeTrace {
        inputs: Vec::with_capacity(n),
        raw_actions: Vec::with_capacity(n),
        controls: Vec::with_capacity(n),
        rewards: Vec::with_capacity(n),
        returns: Vec::new(),
        entropy_increments: Vec::with_capacity(n),
        states: Vec::with_capacity(n + 1),
        final_distance: 0.0,
        sigma: 0.0,
    };
    trace.states.push(state);
    let mut acts = Activations::default();
    for j in 0..n {
        let s = env.observe(&state, j);
        let mu = theta.forward_with(&s, &mut acts);
        let a = sample_action(&mu, cov, rng, env.mode, deterministic);
        let (next, ds) = state.advance(a.control, env.ctx, dt, env.substeps)?;
        state = next;
        trace.inputs.push(s);
        trace.raw_actions.push(a.raw);
        trace.controls.push(a.control);
        trace.entropy_increments.push(ds);
        trace.states.push(state);
    }
    trace.final_distance = state.distance(&env.target_state())?;
    trace.sigma = trace.entropy_increments.iter().sum();
    trace.rewards = trace
        .entropy_increments
        .iter()
        .enumerate()
        .map(|(j, &ds)| step_reward(ds, j + 1 == n, trace.final_distance, zeta))
        .collect();
    trace.returns = compute_returns(&trace.rewards);
    Ok(trace)
}
