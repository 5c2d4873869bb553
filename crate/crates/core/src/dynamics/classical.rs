//! Classical limit (ε ≡ 0): a two-state master equation for the ground population.

use super::rk4::rk4_step;
use super::{logistic, ClassicalState, ThermalContext};
use crate::error::{Error, Result};

/// Instantaneous equilibrium population of `|e₋⟩`, `ω = 1/(e^{−βλ} + 1)`.
pub fn equilibrium_population(lam: f64, ctx: ThermalContext) -> f64 {
    logistic(ctx.beta * lam)
}

/// `ṗ₋ = −p₋ + ω(λ)`.
pub fn classical_rhs(p: ClassicalState, lam: f64, ctx: ThermalContext) -> f64 {
    -p.p_minus + equilibrium_population(lam, ctx)
}

/// Exact solution of the master equation at constant `λ`.
pub fn classical_closed_form(p0: f64, lam: f64, ctx: ThermalContext, t: f64) -> f64 {
    let w = equilibrium_population(lam, ctx);
    w - (w - p0) * (-t).exp()
}

fn check_open_interval(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("entropy production rate needs 0 < p < 1, got p = {p}")))
    }
}

#[inline]
fn rate_from_flux(p: f64, pdot: f64) -> f64 {
    let w = p + pdot;
    pdot * ((1.0 - p) * w / (p * (1.0 - w))).ln()
}

/// `Σ̇ = ṗ₋ ln[(1−p₋)(p₋+ṗ₋) / (p₋(1−p₋−ṗ₋))]`.
pub fn entropy_rate_classical(p: ClassicalState, lam: f64, ctx: ThermalContext) -> Result<f64> {
    check_open_interval(p.p_minus)?;
    Ok(rate_from_flux(p.p_minus, classical_rhs(p, lam, ctx)))
}

/// Schnakenberg form `½ Σ_{i≠j} (W_ji p_i − W_ij p_j) ln(W_ji p_i / W_ij p_j)` with the
/// two-state rate matrix `W₋₊ = ω`, `W₊₋ = 1 − ω`.
pub fn entropy_rate_classical_w(p: ClassicalState, lam: f64, ctx: ThermalContext) -> Result<f64> {
    check_open_interval(p.p_minus)?;
    let w = equilibrium_population(lam, ctx);
    // index 0 = |e₋⟩, 1 = |e₊⟩; rates[i][j] is the rate j → i
    let rates = [[0.0, w], [1.0 - w, 0.0]];
    let pops = [p.p_minus, p.p_plus()];
    let mut total = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            if i == j {
                continue;
            }
            let forward = rates[j][i] * pops[i];
            let backward = rates[i][j] * pops[j];
            total += 0.5 * (forward - backward) * (forward / backward).ln();
        }
    }
    Ok(total)
}

/// Advances `p₋` by `dt` at constant `λ` with `substeps` RK4 steps, integrating the
/// entropy production on the same grid. Returns the new state and `ΔΣ`.
pub fn step_classical(
    p: ClassicalState,
    lam: f64,
    ctx: ThermalContext,
    dt: f64,
    substeps: usize,
) -> Result<(ClassicalState, f64)> {
    if dt.is_nan() || dt < 0.0 || substeps == 0 {
        return Err(Error::InvalidInput(format!("need dt >= 0 and substeps >= 1 (dt = {dt}, substeps = {substeps})")));
    }
    check_open_interval(p.p_minus)?;
    if dt == 0.0 {
        return Ok((p, 0.0));
    }
    let w = equilibrium_population(lam, ctx);
    let h = dt / substeps as f64;
    let mut rhs = |y: &[f64; 2]| {
        let pdot = w - y[0];
        [pdot, rate_from_flux(y[0], pdot)]
    };
    let mut y = [p.p_minus, 0.0];
    for _ in 0..substeps {
        y = rk4_step(&y, h, &mut rhs);
    }
    if !(y[0] > 0.0 && y[0] < 1.0 && y[1].is_finite()) {
        return Err(Error::Numerical(format!("classical step left the open simplex: p = {}, dΣ = {}", y[0], y[1])));
    }
    Ok((ClassicalState { p_minus: y[0] }, y[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(p: f64) -> ClassicalState {
        ClassicalState::new(p).unwrap()
    }

    const OMEGA_1: f64 = 0.7310585786300049; // 1/(1+e^{-1})

    #[test]
    fn rhs_examples() {
        let ctx = ThermalContext::default();
        assert_eq!(classical_rhs(st(0.5), 0.0, ctx), 0.0);
        assert!((classical_rhs(st(0.5), 1.0, ctx) - (OMEGA_1 - 0.5)).abs() < 1e-15);
        assert!((classical_rhs(st(0.5), 1.0, ctx) - 0.23106).abs() < 1e-5);
        assert_eq!(classical_rhs(st(1.0), 1e6, ctx), 0.0);
    }

    #[test]
    fn entropy_rate_examples() {
        let ctx = ThermalContext::default();
        let lam = 0.7;
        let eq = equilibrium_population(lam, ctx);
        assert!(entropy_rate_classical(st(eq), lam, ctx).unwrap().abs() < 1e-15);
        let r = entropy_rate_classical(st(0.5), 1.0, ctx).unwrap();
        assert!((r - (OMEGA_1 - 0.5)).abs() < 1e-14);
        assert!(matches!(entropy_rate_classical(st(0.0), 1.0, ctx), Err(Error::Domain(_))));
        assert!(matches!(entropy_rate_classical(st(1.0), 1.0, ctx), Err(Error::Domain(_))));
        assert!(matches!(entropy_rate_classical_w(st(1.0), 1.0, ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn both_entropy_forms_agree() {
        let ctx = ThermalContext::new(1.3).unwrap();
        for i in 1..40 {
            for &lam in &[0.0, 0.3, 1.0, 2.5, 6.0] {
                let p = st(i as f64 / 40.0);
                let a = entropy_rate_classical(p, lam, ctx).unwrap();
                let b = entropy_rate_classical_w(p, lam, ctx).unwrap();
                assert!((a - b).abs() < 1e-12, "p={} lam={lam}: {a} vs {b}", p.p_minus);
                assert!(a >= 0.0);
            }
        }
    }

    #[test]
    fn step_matches_closed_form() {
        let ctx = ThermalContext::default();
        let (p, _) = step_classical(st(0.5), 1.0, ctx, 1.0, 100).unwrap();
        let exact = classical_closed_form(0.5, 1.0, ctx, 1.0);
        assert!((p.p_minus - exact).abs() < 1e-10);
        assert!((exact - 0.64605).abs() < 1e-5);
    }

    #[test]
    fn entropy_increment_matches_closed_form() {
        // ∫Σ̇ dt = βλΔp − Δ[p ln p + (1−p) ln(1−p)] at constant λ
        let ctx = ThermalContext::default();
        let g = |p: f64| p * p.ln() + (1.0 - p) * (1.0 - p).ln();
        let (p1, ds) = step_classical(st(0.55), 1.3, ctx, 0.4, 200).unwrap();
        let exact = 1.3 * (p1.p_minus - 0.55) - (g(p1.p_minus) - g(0.55));
        assert!((ds - exact).abs() < 1e-11, "{ds} vs {exact}");
    }

    #[test]
    fn zero_duration_is_identity() {
        let (p, ds) = step_classical(st(0.3), 2.0, ThermalContext::default(), 0.0, 10).unwrap();
        assert_eq!(p.p_minus, 0.3);
        assert_eq!(ds, 0.0);
    }
}
