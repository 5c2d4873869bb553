//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use entropy_shortcut::dynamics::{
    classical_closed_form, equilibrium_population, ControlParams, Mode, SystemState, ThermalContext,
};
use entropy_shortcut::policy::{log_policy, log_policy_gradient, PolicyParameters};
use rand::Rng;

fn mixing(p: f64) -> f64 {
    p * p.ln() + (1.0 - p) * (1.0 - p).ln()
}

/// Entropy produced by a constant-`λ` interval of the classical master equation, from
/// the exact solution: heat `βλΔp` plus the change of system entropy.
pub fn classical_interval(p0: f64, lam: f64, ctx: ThermalContext, dt: f64) -> (f64, f64) {
    let p1 = classical_closed_form(p0, lam, ctx, dt);
    (p1, ctx.beta * lam * (p1 - p0) - (mixing(p1) - mixing(p0)))
}

/// Final population and total entropy production of a piecewise-constant classical protocol.
pub fn classical_protocol(p0: f64, lams: &[f64], tau: f64, ctx: ThermalContext) -> (f64, f64) {
    let dt = tau / lams.len() as f64;
    lams.iter().fold((p0, 0.0), |(p, s), &l| {
        let (p1, ds) = classical_interval(p, l, ctx, dt);
        (p1, s + ds)
    })
}

pub fn gibbs_population(lam: f64) -> f64 {
    equilibrium_population(lam, ThermalContext::default())
}

/// Random control in the box `ε ∈ [−2, 2]`, `λ ∈ [0, 3]` (`ε = 0` in classical mode).
pub fn random_control<R: Rng>(rng: &mut R, mode: Mode) -> ControlParams {
    let lam = rng.random_range(0.0..3.0);
    match mode {
        Mode::Classical => ControlParams::classical(lam),
        Mode::Quantum => ControlParams::new(rng.random_range(-2.0..2.0), lam),
    }
}

pub fn random_start<R: Rng>(rng: &mut R, mode: Mode) -> SystemState {
    SystemState::equilibrium(mode, random_control(rng, mode), ThermalContext::default())
}

/// Largest component-wise relative error between the analytic score and central
/// differences of `ln π`. Components where both are below `floor` are skipped.
pub fn score_fd_error(theta: &PolicyParameters, s: &[f64], a: &[f64], cov: &[f64], h: f64, floor: f64) -> f64 {
    let g = log_policy_gradient(theta, s, a, cov);
    let mut probe = theta.clone();
    let mut worst: f64 = 0.0;
    for (i, &gi) in g.iter().enumerate() {
        let orig = probe.as_slice()[i];
        probe.as_mut_slice()[i] = orig + h;
        let up = log_policy(&probe, s, a, cov);
        probe.as_mut_slice()[i] = orig - h;
        let down = log_policy(&probe, s, a, cov);
        probe.as_mut_slice()[i] = orig;
        let fd = (up - down) / (2.0 * h);
        let scale = gi.abs().max(fd.abs());
        if scale > floor {
            worst = worst.max((gi - fd).abs() / scale);
        }
    }
    worst
}
