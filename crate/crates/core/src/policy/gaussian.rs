use rand::Rng;
use rand_distr::StandardNormal;

use super::mlp::{Activations, PolicyParameters};
use crate::dynamics::{ControlParams, Mode};

/// Mean action `μ_θ(s)`.
pub fn policy_mean(theta: &PolicyParameters, s: &[f64]) -> Vec<f64> {
    theta.forward(s)
}

/// A drawn action: the raw Gaussian sample (used for the score) and the control actually
/// applied to the system (`λ` clamped at zero).
#[derive(Clone, Debug, PartialEq)]
pub struct SampledAction {
    pub raw: Vec<f64>,
    pub control: ControlParams,
}

/// Maps an action vector to a control: `[λ]` in classical mode, `[ε, λ]` in quantum mode.
pub fn action_to_control(mode: Mode, a: &[f64]) -> ControlParams {
    let c = match mode {
        Mode::Classical => ControlParams::classical(a[0]),
        Mode::Quantum => ControlParams::new(a[0], a[1]),
    };
    c.with_nonnegative_lam()
}

pub fn action_dim(mode: Mode) -> usize {
    match mode {
        Mode::Classical => 1,
        Mode::Quantum => 2,
    }
}

/// Draws `a ~ N(μ, diag(cov))`, or returns `μ` when `deterministic`.
pub fn sample_action<R: Rng + ?Sized>(
    mu: &[f64],
    cov: &[f64],
    rng: &mut R,
    mode: Mode,
    deterministic: bool,
) -> SampledAction {
    assert_eq!(mu.len(), cov.len());
    assert_eq!(mu.len(), action_dim(mode));
    let raw: Vec<f64> = if deterministic {
        mu.to_vec()
    } else {
        mu.iter()
            .zip(cov)
            .map(|(m, c)| {
                let xi: f64 = rng.sample(StandardNormal);
                m + c.sqrt() * xi
            })
            .collect()
    };
    let control = action_to_control(mode, &raw);
    SampledAction { raw, control }
}

/// `ln π(a | s, θ)` for the diagonal Gaussian.
pub fn log_policy(theta: &PolicyParameters, s: &[f64], a: &[f64], cov: &[f64]) -> f64 {
    let mu = theta.forward(s);
    mu.iter()
        .zip(a)
        .zip(cov)
        .map(|((m, a), c)| -(a - m) * (a - m) / (2.0 * c) - 0.5 * (2.0 * std::f64::consts::PI * c).ln())
        .sum()
}

/// `∇_θ ln π(a | s, θ)`: the score `Σ⁻¹(a − μ)` backpropagated through the network.
pub fn log_policy_gradient(theta: &PolicyParameters, s: &[f64], a: &[f64], cov: &[f64]) -> Vec<f64> {
    let mut grad = vec![0.0; theta.len()];
    let mut acts = Activations::default();
    accumulate_score(theta, s, a, cov, 1.0, &mut acts, &mut grad);
    grad
}

/// Adds `weight · ∇_θ ln π(a | s, θ)` to `grad`.
pub(crate) fn accumulate_score(
    theta: &PolicyParameters,
    s: &[f64],
    a: &[f64],
    cov: &[f64],
    weight: f64,
    acts: &mut Activations,
    grad: &mut [f64],
) {
    let mu = theta.forward_with(s, acts);
    let upstream: Vec<f64> = mu.iter().zip(a).zip(cov).map(|((m, a), c)| (a - m) / c).collect();
    theta.backward_into(acts, &upstream, weight, grad);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_sample_is_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = sample_action(&[0.3, -0.7], &[0.01, 0.01], &mut rng, Mode::Quantum, true);
        assert_eq!(s.raw, vec![0.3, -0.7]);
        assert_eq!(s.control, ControlParams::new(0.3, 0.0));
    }

    #[test]
    fn sample_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        let (mu, cov) = ([1.0, 2.0], [0.01, 0.01]);
        let mut sum = [0.0; 2];
        let mut sq = [0.0; 2];
        for _ in 0..n {
            let a = sample_action(&mu, &cov, &mut rng, Mode::Quantum, false).raw;
            for k in 0..2 {
                sum[k] += a[k];
                sq[k] += a[k] * a[k];
            }
        }
        for k in 0..2 {
            let mean = sum[k] / n as f64;
            let var = sq[k] / n as f64 - mean * mean;
            assert!((mean - mu[k]).abs() < 3.0 * 0.1 / (n as f64).sqrt(), "mean {mean}");
            assert!((var / 0.01 - 1.0).abs() < 0.05, "var {var}");
        }
    }

    #[test]
    fn clamped_lambda_is_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let s = sample_action(&[0.0], &[0.01], &mut rng, Mode::Classical, false);
            assert!(s.control.lam >= 0.0);
            assert_eq!(s.control.epsilon, 0.0);
        }
    }

    #[test]
    fn score_vanishes_at_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let theta = PolicyParameters::new(&[2, 10, 1], 10.0, &mut rng);
        let s = [0.6, 0.2];
        let mu = policy_mean(&theta, &s);
        assert!(log_policy_gradient(&theta, &s, &mu, &[0.01]).iter().all(|&g| g == 0.0));
    }

    #[test]
    fn score_is_linear_in_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let theta = PolicyParameters::new(&[2, 10, 1], 10.0, &mut rng);
        let s = [0.6, 0.2];
        let mu = policy_mean(&theta, &s)[0];
        let g1 = log_policy_gradient(&theta, &s, &[mu + 0.05], &[0.01]);
        let g2 = log_policy_gradient(&theta, &s, &[mu + 0.10], &[0.01]);
        let n = theta.len();
        for i in n - 11..n {
            assert!((g2[i] - 2.0 * g1[i]).abs() <= 1e-9 * g2[i].abs().max(1e-12));
        }
    }
}
