//! Exact minimum-entropy-production protocols for the classical two-level system.
//!
//! Along an extremal path of `Σ = ∫ Σ̇(p, ṗ) dt` the quantity
//! `K = ṗ² / ((p + ṗ)(1 − p − ṗ))` is conserved. For upward driving (`p_f > p_i ≥ ½`) the
//! relevant root is
//!
//! ```text
//! ṗ(p, K) = [(1 − 2p) K + √Δ] / (2(K + 1)),   Δ = K² + 4K p(1 − p)
//! ```
//!
//! and `K` is fixed by the travel-time condition `F(p_f, K) − F(p_i, K) = τ` with
//!
//! ```text
//! F(p, K) = −ln(1 − p) + ½ ln[(2(1 − p) + K + √Δ) / (2p + K + √Δ)] + arctan[(2p − 1)√K / √Δ] / √K
//! ```
//!
//! `F(p_f, K) − F(p_i, K)` decreases monotonically in `K`, and as `K → ∞` it tends to
//! `ln(1 − p_i) − ln(1 − p_f)`, which gives the reachability frontier
//! `p_f < 1 − (1 − p_i) e^{−τ}`. The protocol is recovered from the master equation,
//! `ω(t) = p + ṗ` and `λ*(t) = −ln(1/ω − 1)/β`; it jumps at both ends of the window.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{entropy_rate_classical, equilibrium_population, ClassicalState, ThermalContext};
use crate::error::{Error, Result};

/// Required accuracy of the travel-time condition.
pub const TRAVEL_TIME_TOL: f64 = 1e-10;
/// Default number of time samples along the optimal path.
pub const DEFAULT_SAMPLES: usize = 1000;

const K_LOWER: f64 = 1e-12;
const K_CAP: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityBound {
    pub p_f_max: f64,
    pub lambda_f_max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution {
    pub k: f64,
    pub p_i: f64,
    pub p_f: f64,
    pub tau: f64,
    /// `(t, p₋)` on `samples` equally spaced instants including both ends.
    pub p_path: Vec<(f64, f64)>,
    /// `(t, λ*)` on the open interior of the window.
    pub lambda_path: Vec<(f64, f64)>,
    /// Boundary control values `λ(t_i)` and `λ(t_f) = λ_f`.
    pub lambda_initial: f64,
    pub lambda_final: f64,
    /// Trapezoidal increments of `Σ` between consecutive samples.
    pub d_sigma: Vec<f64>,
    pub sigma_min: f64,
    pub reachable: bool,
    pub bound: ReachabilityBound,
}

impl OracleSolution {
    /// Limits `λ*(0⁺)` and `λ*(τ⁻)` of the optimal protocol.
    pub fn lambda_star_limits(&self, ctx: ThermalContext) -> (f64, f64) {
        if self.k == 0.0 {
            return (self.lambda_initial, self.lambda_final);
        }
        let ends = [self.p_i, self.p_path.last().map(|x| x.1).unwrap_or(self.p_f)];
        let l = ends.map(|p| lambda_from_equilibrium(p + pdot_from_k(p, self.k), ctx));
        (l[0], l[1])
    }

    /// Jumps `λ*(0⁺) − λ(t_i)` and `λ_f − λ*(τ⁻)`.
    pub fn jumps(&self, ctx: ThermalContext) -> (f64, f64) {
        let (a, b) = self.lambda_star_limits(ctx);
        (a - self.lambda_initial, self.lambda_final - b)
    }

    /// CSV with columns `t,p,lambda_star,d_sigma`. The first and last rows carry the
    /// boundary control values; interior rows carry `λ*(t)`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let fmt = crate::dynamics::fmt_f64;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "p", "lambda_star", "d_sigma"])?;
        let last = self.p_path.len() - 1;
        for (i, &(t, p)) in self.p_path.iter().enumerate() {
            let lam = if i == 0 {
                self.lambda_initial
            } else if i == last {
                self.lambda_final
            } else {
                self.lambda_path[i - 1].1
            };
            let ds = if i == 0 { 0.0 } else { self.d_sigma[i - 1] };
            w.write_record([fmt(t), fmt(p), fmt(lam), fmt(ds)])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `key=value` sidecar with the scalar results.
    pub fn write_metadata<W: Write>(&self, mut out: W, ctx: ThermalContext) -> Result<()> {
        let (l0, l1) = self.lambda_star_limits(ctx);
        let (j0, j1) = self.jumps(ctx);
        let lines = [
            ("K", self.k),
            ("sigma_min", self.sigma_min),
            ("p_f_max", self.bound.p_f_max),
            ("lambda_f_max", self.bound.lambda_f_max),
            ("p_i", self.p_i),
            ("p_f", self.p_f),
            ("tau", self.tau),
            ("beta", ctx.beta),
            ("lambda_i", self.lambda_initial),
            ("lambda_f", self.lambda_final),
            ("lambda_star_start", l0),
            ("lambda_star_end", l1),
            ("jump_start", j0),
            ("jump_end", j1),
        ];
        for (k, v) in lines {
            writeln!(out, "{k}={}", crate::dynamics::fmt_f64(v))?;
        }
        writeln!(out, "reachable={}", self.reachable)?;
        Ok(())
    }

    pub fn save(&self, csv_path: &Path, meta_path: &Path, ctx: ThermalContext) -> Result<()> {
        self.write_csv(std::fs::File::create(csv_path)?)?;
        self.write_metadata(std::fs::File::create(meta_path)?, ctx)
    }
}

fn discriminant(p: f64, k: f64) -> f64 {
    k * k + 4.0 * k * p * (1.0 - p)
}

/// `λ` whose equilibrium population is `ω`.
pub fn lambda_from_equilibrium(omega: f64, ctx: ThermalContext) -> f64 {
    // `+ 0.0` turns the −0 at ω = ½ into +0
    -(1.0 / omega - 1.0).ln() / ctx.beta + 0.0
}

/// Upward branch of the first integral.
pub fn pdot_from_k(p: f64, k: f64) -> f64 {
    let (b, root) = ((1.0 - 2.0 * p) * k, discriminant(p, k).sqrt());
    if b >= 0.0 {
        (b + root) / (2.0 * (k + 1.0))
    } else {
        2.0 * k * p * (1.0 - p) / (root - b)
    }
}

/// `ṗ² / ((p + ṗ)(1 − p − ṗ))`.
pub fn conserved_quantity(p: f64, pdot: f64) -> f64 {
    let w = p + pdot;
    pdot * pdot / (w * (1.0 - w))
}

/// The integrand `2(K + 1) / ((1 − 2p)K + √Δ) = 1/ṗ(p, K)`.
pub fn travel_time_density(p: f64, k: f64) -> f64 {
    1.0 / pdot_from_k(p, k)
}

fn check_k_positive(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("F(p, K) needs K > 0, got {k}; use the quasistatic branch at K = 0")))
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must lie in (0, 1), got {p}")))
    }
}

/// Antiderivative of [`travel_time_density`] in `p`.
pub fn quadrature_f(p: f64, k: f64) -> Result<f64> {
    check_k_positive(k)?;
    check_probability("p", p)?;
    let sd = discriminant(p, k).sqrt();
    let sk = k.sqrt();
    Ok(-(1.0 - p).ln()
        + 0.5 * ((2.0 * (1.0 - p) + k + sd) / (2.0 * p + k + sd)).ln()
        + ((2.0 * p - 1.0) * sk / sd).atan() / sk)
}

/// `F(p_f, K) − F(p_i, K)`, arranged to avoid cancellation of the `1/√K` terms at small K.
pub fn travel_time(p_i: f64, p_f: f64, k: f64) -> Result<f64> {
    check_k_positive(k)?;
    check_probability("p_i", p_i)?;
    check_probability("p_f", p_f)?;
    let (si, sf) = (discriminant(p_i, k).sqrt(), discriminant(p_f, k).sqrt());
    let sk = k.sqrt();
    let (ai, af) = ((2.0 * p_i - 1.0) * sk / si, (2.0 * p_f - 1.0) * sk / sf);
    // arctan a − arctan b = arctan((a − b)/(1 + ab)) when ab > −1
    let datan = if ai * af > -1.0 { ((af - ai) / (1.0 + ai * af)).atan() } else { af.atan() - ai.atan() };
    let ratio = |p: f64, s: f64| (2.0 * (1.0 - p) + k + s) / (2.0 * p + k + s);
    Ok(((1.0 - p_i) / (1.0 - p_f)).ln() + 0.5 * (ratio(p_f, sf) / ratio(p_i, si)).ln() + datan / sk)
}

/// Largest target population reachable from `p_i` within `tau`, and the matching `λ_f`.
pub fn reachability(p_i: f64, tau: f64, ctx: ThermalContext) -> Result<ReachabilityBound> {
    if !(0.5..1.0).contains(&p_i) {
        return Err(Error::InvalidInput(format!("p_i must lie in [0.5, 1), got {p_i}")));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidInput(format!("tau must be positive, got {tau}")));
    }
    let p_f_max = 1.0 - (1.0 - p_i) * (-tau).exp();
    Ok(ReachabilityBound { p_f_max, lambda_f_max: lambda_from_equilibrium(p_f_max, ctx) })
}

/// Constant of motion of the optimal path joining `p_i` to `p_f` in time `tau`.
///
/// Bisection on `log K`, starting from `[1e-12, 1]` and doubling the upper end up to `1e12`.
pub fn solve_k(p_i: f64, p_f: f64, tau: f64) -> Result<f64> {
    let bound = reachability(p_i, tau, ThermalContext::default())?;
    if p_f.is_nan() || p_f <= p_i {
        return Err(Error::InvalidInput(format!("need p_f > p_i, got p_i = {p_i}, p_f = {p_f}")));
    }
    if p_f >= bound.p_f_max {
        return Err(Error::Unreachable { p_f, bound });
    }
    let residual = |k: f64| travel_time(p_i, p_f, k).map(|t| t - tau);

    let mut lo = K_LOWER;
    while residual(lo)? < 0.0 {
        lo *= 1e-4;
        if lo < 1e-300 {
            return Err(Error::Numerical(format!("no lower bracket for K (p_i = {p_i}, p_f = {p_f})")));
        }
    }
    let mut hi = 1.0;
    while residual(hi)? > 0.0 {
        hi *= 2.0;
        if hi > K_CAP {
            return Err(Error::Unreachable { p_f, bound });
        }
    }
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        let r = residual(mid)?;
        if r.abs() < TRAVEL_TIME_TOL && hi / lo < 1.0 + 1e-6 {
            return Ok(mid);
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 4.0 * f64::EPSILON {
            break;
        }
    }
    let k = (lo * hi).sqrt();
    let r = residual(k)?;
    if r.abs() < TRAVEL_TIME_TOL {
        Ok(k)
    } else {
        Err(Error::Numerical(format!("travel-time residual {r:e} above tolerance at K = {k}")))
    }
}

/// Target population reached from `p_i` in time `tau` along the path with constant `k`;
/// the inverse of [`solve_k`] at fixed `p_i`, `tau`.
pub fn target_from_k(p_i: f64, k: f64, tau: f64) -> Result<f64> {
    let bound = reachability(p_i, tau, ThermalContext::default())?;
    let (mut lo, mut hi) = (p_i, bound.p_f_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if travel_time(p_i, mid, k)? < tau {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed-form `dp_f/dK` at fixed `p_i`, `τ`.
pub fn dpf_dk(p_i: f64, p_f: f64, k: f64) -> Result<f64> {
    check_k_positive(k)?;
    check_probability("p_i", p_i)?;
    check_probability("p_f", p_f)?;
    let (si, sf) = (discriminant(p_i, k).sqrt(), discriminant(p_f, k).sqrt());
    let sk = k.sqrt();
    let angle = ((2.0 * p_f - 1.0) * sk / sf).atan() - ((2.0 * p_i - 1.0) * sk / si).atan();
    Ok(((1.0 - 2.0 * p_f) * k + sf) / (4.0 * k * sk * (k + 1.0)) * angle)
}

/// Minimum-entropy-production path and protocol from `p_i` to `p_f` in time `tau`.
pub fn optimal_solution(p_i: f64, p_f: f64, tau: f64, ctx: ThermalContext, samples: usize) -> Result<OracleSolution> {
    if samples < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 samples, got {samples}")));
    }
    let bound = reachability(p_i, tau, ctx)?;
    check_probability("p_f", p_f)?;
    if p_f < p_i {
        return Err(Error::InvalidInput(format!("only upward driving is supported (p_i = {p_i}, p_f = {p_f})")));
    }
    let lambda_initial = lambda_from_equilibrium(p_i, ctx);
    let lambda_final = lambda_from_equilibrium(p_f, ctx);
    let times: Vec<f64> = (0..samples).map(|i| tau * i as f64 / (samples - 1) as f64).collect();

    if p_f == p_i {
        return Ok(OracleSolution {
            k: 0.0,
            p_i,
            p_f,
            tau,
            p_path: times.iter().map(|&t| (t, p_i)).collect(),
            lambda_path: times[1..samples - 1].iter().map(|&t| (t, lambda_initial)).collect(),
            lambda_initial,
            lambda_final,
            d_sigma: vec![0.0; samples - 1],
            sigma_min: 0.0,
            reachable: true,
            bound,
        });
    }

    if p_f >= bound.p_f_max {
        return Err(Error::Unreachable { p_f, bound });
    }
    let k = solve_k(p_i, p_f, tau).map_err(|e| match e {
        Error::Unreachable { p_f, .. } => Error::Unreachable { p_f, bound },
        e => e,
    })?;
    let h = tau / (samples - 1) as f64;
    let mut f = |y: &[f64; 1]| [pdot_from_k(y[0], k)];
    let mut ps = Vec::with_capacity(samples);
    let mut p = [p_i];
    ps.push(p_i);
    for _ in 1..samples {
        p = crate::dynamics::rk4_step(&p, h, &mut f);
        ps.push(p[0]);
    }

    let mut rates = Vec::with_capacity(samples);
    let mut lambdas = Vec::with_capacity(samples);
    for &p in &ps {
        let omega = p + pdot_from_k(p, k);
        let lam = lambda_from_equilibrium(omega, ctx);
        lambdas.push(lam);
        rates.push(entropy_rate_classical(ClassicalState { p_minus: p }, lam, ctx)?);
    }
    let d_sigma: Vec<f64> = rates.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).collect();
    Ok(OracleSolution {
        k,
        p_i,
        p_f,
        tau,
        p_path: times.iter().copied().zip(ps).collect(),
        lambda_path: times[1..samples - 1].iter().copied().zip(lambdas[1..samples - 1].iter().copied()).collect(),
        lambda_initial,
        lambda_final,
        sigma_min: d_sigma.iter().sum(),
        d_sigma,
        reachable: true,
        bound,
    })
}

/// Convenience wrapper taking the boundary controls instead of populations.
pub fn optimal_solution_for_lambdas(
    lambda_i: f64,
    lambda_f: f64,
    tau: f64,
    ctx: ThermalContext,
    samples: usize,
) -> Result<OracleSolution> {
    optimal_solution(equilibrium_population(lambda_i, ctx), equilibrium_population(lambda_f, ctx), tau, ctx, samples)
}

/// Residual `2p̈(1 − ω)ω − ṗ(ṗ + p̈)(1 − 2ω)`, `ω = p + ṗ`, of the Euler–Lagrange equation.
pub fn euler_lagrange_residual(p: f64, pdot: f64, pddot: f64) -> f64 {
    let w = p + pdot;
    2.0 * pddot * (1.0 - w) * w - pdot * (pdot + pddot) * (1.0 - 2.0 * w)
}

/// Checks of a solution against the variational conditions, using central differences
/// on the sampled path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionDiagnostics {
    pub endpoint_error: f64,
    /// Largest relative deviation of the conserved quantity from `K`.
    pub k_drift: f64,
    /// Max-norm Euler–Lagrange residual on the interior grid.
    pub el_residual: f64,
}

/// Checks a sampled solution with fourth-order central differences on the grid points
/// at least two samples away from either end.
pub fn diagnose(sol: &OracleSolution) -> SolutionDiagnostics {
    let n = sol.p_path.len();
    let endpoint_error = (sol.p_path[n - 1].1 - sol.p_f).abs();
    if sol.k == 0.0 || n < 5 {
        return SolutionDiagnostics { endpoint_error, k_drift: 0.0, el_residual: 0.0 };
    }
    let h = sol.tau / (n - 1) as f64;
    let (mut k_drift, mut el_residual) = (0.0f64, 0.0f64);
    for i in 2..n - 2 {
        let q = |d: isize| sol.p_path[(i as isize + d) as usize].1;
        let p = q(0);
        let pdot = (-q(2) + 8.0 * q(1) - 8.0 * q(-1) + q(-2)) / (12.0 * h);
        let pddot = (-q(2) + 16.0 * q(1) - 30.0 * p + 16.0 * q(-1) - q(-2)) / (12.0 * h * h);
        k_drift = k_drift.max((conserved_quantity(p, pdot) - sol.k).abs() / sol.k);
        el_residual = el_residual.max(euler_lagrange_residual(p, pdot, pddot).abs());
    }
    SolutionDiagnostics { endpoint_error, k_drift, el_residual }
}
