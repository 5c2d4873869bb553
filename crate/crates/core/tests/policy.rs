mod common;

use entropy_shortcut::dynamics::{ControlParams, Mode, SystemState, ThermalContext};
use entropy_shortcut::policy::{
    train, BaselineRule, Environment, EpisodeTrace, PolicyConfig, PolicyParameters, Trainer,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn score_matches_finite_differences(seed in any::<u64>(), quantum in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (din, dout) = if quantum { (4, 2) } else { (2, 1) };
        let theta = PolicyParameters::new(&[din, 6, 5, dout], 10.0, &mut rng);
        let s: Vec<f64> = (0..din).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mu = theta.forward(&s);
        let a: Vec<f64> = mu.iter().map(|m| m + rng.random_range(-0.3..0.3)).collect();
        let cov = vec![0.01; dout];
        let err = common::score_fd_error(&theta, &s, &a, &cov, 1e-6, 1e-6);
        prop_assert!(err < 1e-5, "relative error {err}");
    }
}

fn constant_return_trace(theta: &PolicyParameters, g: f64) -> EpisodeTrace {
    let s = vec![0.3, 0.0];
    let a = vec![theta.forward(&s)[0] + 0.05];
    EpisodeTrace {
        inputs: vec![s],
        raw_actions: vec![a],
        controls: vec![ControlParams::classical(0.5)],
        rewards: vec![g],
        returns: vec![g],
        entropy_increments: vec![0.0],
        states: vec![SystemState::equilibrium(Mode::Classical, ControlParams::classical(0.0), ThermalContext::default()); 2],
        final_distance: 0.0,
        sigma: 0.0,
    }
}

/// Mean parameter step over consecutive windows of `window` updates.
fn step_sizes(rule: BaselineRule, g: f64, updates: usize, window: usize) -> (Vec<f64>, f64) {
    let env = Environment { n_steps: 1, ..Environment::classical(0.0, 0.5) };
    let cfg = PolicyConfig { hidden: vec![8], alpha: 1e-3, alpha_w: 1e-2, baseline_rule: rule, seed: 5, ..PolicyConfig::default() };
    let mut t = Trainer::new(cfg, env).unwrap();
    let mut means = Vec::new();
    let mut acc = 0.0;
    for i in 1..=updates {
        let before = t.parameters().clone();
        let trace = constant_return_trace(&before, g);
        t.apply_update(&trace).unwrap();
        acc += before.as_slice().iter().zip(t.parameters().as_slice()).map(|(x, y)| (x - y).abs()).sum::<f64>();
        if i % window == 0 {
            means.push(acc / window as f64);
            acc = 0.0;
        }
    }
    (means, t.baseline().w)
}

#[test]
fn centered_baseline_silences_constant_rewards() {
    let g = 2.5;
    let (means, w) = step_sizes(BaselineRule::Centered, g, 3000, 300);
    assert!((w - g).abs() < 1e-6, "baseline {w}");
    assert!(means.windows(2).all(|m| m[1] <= m[0] * 1.001), "{means:?}");
    assert!(means.last().unwrap() < &(means[0] * 0.1), "{means:?}");
}

#[test]
fn short_training_improves_reward() {
    let env = Environment::classical(0.0, 0.5);
    let cfg = PolicyConfig { hidden: vec![32, 32], alpha: 1e-4, episodes: 3000, seed: 4, ..PolicyConfig::default() };
    let out = train(&cfg, &env).unwrap();
    let mean = |pts: &[entropy_shortcut::policy::CurvePoint]| pts.iter().map(|p| p.total_reward).sum::<f64>() / pts.len() as f64;
    let (head, tail) = (mean(&out.curve[..300]), mean(&out.curve[2700..]));
    assert!(tail > head, "reward {head} -> {tail}");
    assert!(out.evaluation.final_distance < 0.1, "Δd = {}", out.evaluation.final_distance);
}

#[test]
fn quantum_training_is_seed_deterministic() {
    let env = Environment::new(Mode::Quantum, ControlParams::new(0.0, 0.0), ControlParams::new(0.0, 1.0));
    let cfg = PolicyConfig { hidden: vec![8, 8], alpha: 1e-3, episodes: 20, seed: 9, ..PolicyConfig::default() };
    let a = train(&cfg, &env).unwrap();
    let b = train(&cfg, &env).unwrap();
    assert_eq!(a.theta, b.theta);
    assert_eq!(a.curve, b.curve);
    let c = train(&PolicyConfig { seed: 10, ..cfg }, &env).unwrap();
    assert_ne!(a.curve, c.curve);
}
