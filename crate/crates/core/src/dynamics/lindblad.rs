//! GKLS generator of the driven qubit and its integration.

use super::matrix::Mat2;
use super::rk4::rk4_step;
use super::{
    build_hamiltonian, gibbs_state, jump_operators, BlochState, ControlParams, JumpOperators,
    ThermalContext, NORM_REPAIR_TOL,
};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalue floor inside `ln ρ`.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyRate {
    pub value: f64,
    /// Some eigenvalue of `ρ` was raised to [`LOG_FLOOR`].
    pub clamped: bool,
}

/// The generator `𝕃` at a fixed control, together with its action on Bloch vectors.
///
/// `𝕃` is affine on Bloch space, `ṙ = M r + b`; `M` and `b` are read off by applying the
/// matrix-form generator to the Pauli basis.
#[derive(Clone, Debug)]
pub struct Generator {
    pub control: ControlParams,
    pub ctx: ThermalContext,
    hamiltonian: Mat2,
    jumps: JumpOperators,
    drift: [[f64; 3]; 3],
    offset: [f64; 3],
    /// `a_eq · r̂_eq` where `ln ρ_eq = a₀ I + a_eq r̂_eq·σ`.
    equilibrium_log: [f64; 3],
}

impl Generator {
    pub fn new(control: ControlParams, ctx: ThermalContext) -> Self {
        let mut g = Generator {
            control,
            ctx,
            hamiltonian: build_hamiltonian(control),
            jumps: jump_operators(control, ctx),
            drift: [[0.0; 3]; 3],
            offset: [0.0; 3],
            equilibrium_log: [0.0; 3],
        };
        let bloch_of = |m: Mat2| BlochState::from_matrix(&m).to_array();
        g.offset = bloch_of(g.apply(&Mat2::IDENTITY.scale(0.5)));
        let paulis = [Mat2::SIGMA_X, Mat2::SIGMA_Y, Mat2::SIGMA_Z];
        for (j, s) in paulis.iter().enumerate() {
            let col = bloch_of(g.apply(&s.scale(0.5)));
            for (row, c) in g.drift.iter_mut().zip(col) {
                row[j] = c;
            }
        }
        g.equilibrium_log = bloch_log(gibbs_state(control, ctx).to_array()).0;
        g
    }

    /// `𝕃X = −i[H, X] + Σ_σ (V^σ X V^σ† − ½{V^σ† V^σ, X})`.
    pub fn apply(&self, x: &Mat2) -> Mat2 {
        let minus_i = Complex64::new(0.0, -1.0);
        let mut out = self.hamiltonian.commutator(x).scale_c(minus_i);
        for v in [self.jumps.lowering, self.jumps.raising] {
            let vd = v.dagger();
            // ½([V X, V†] + [V, X V†])
            out = out + ((v * *x).commutator(&vd) + v.commutator(&(*x * vd))).scale(0.5);
        }
        out
    }

    #[inline]
    pub fn bloch_rhs(&self, r: &[f64; 3]) -> [f64; 3] {
        let m = &self.drift;
        let b = &self.offset;
        [
            m[0][0] * r[0] + m[0][1] * r[1] + m[0][2] * r[2] + b[0],
            m[1][0] * r[0] + m[1][1] * r[1] + m[1][2] * r[2] + b[1],
            m[2][0] * r[0] + m[2][1] * r[1] + m[2][2] * r[2] + b[2],
        ]
    }

    /// `−Tr[ṙ·σ/2 · ln ρ] + Tr[ṙ·σ/2 · ln ρ_eq]` evaluated in Bloch coordinates.
    #[inline]
    pub fn entropy_rate_bloch(&self, r: &[f64; 3], rdot: &[f64; 3]) -> (f64, bool) {
        let (log_r, clamped) = bloch_log(*r);
        let e = &self.equilibrium_log;
        let value = (e[0] - log_r[0]) * rdot[0] + (e[1] - log_r[1]) * rdot[1] + (e[2] - log_r[2]) * rdot[2];
        (value, clamped)
    }

    /// Integrates the state and the entropy production over `dt` with `substeps` RK4 steps.
    ///
    /// Returns the final state, `ΔΣ`, and how many substeps hit the logarithm floor.
    pub fn advance(&self, rho: BlochState, dt: f64, substeps: usize) -> Result<(BlochState, f64, usize)> {
        if dt.is_nan() || dt < 0.0 || substeps == 0 {
            return Err(Error::InvalidInput(format!("need dt >= 0 and substeps >= 1 (dt = {dt}, substeps = {substeps})")));
        }
        if dt == 0.0 {
            return Ok((rho, 0.0, 0));
        }
        let h = dt / substeps as f64;
        let mut clamped_steps = 0;
        let mut y = [rho.x, rho.y, rho.z, 0.0];
        for _ in 0..substeps {
            let mut clamped = false;
            let mut rhs = |y: &[f64; 4]| {
                let r = [y[0], y[1], y[2]];
                let rdot = self.bloch_rhs(&r);
                let (s, c) = self.entropy_rate_bloch(&r, &rdot);
                clamped |= c;
                [rdot[0], rdot[1], rdot[2], s]
            };
            y = rk4_step(&y, h, &mut rhs);
            clamped_steps += clamped as usize;
            let norm = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
            if norm.is_nan() || norm > 1.0 + NORM_REPAIR_TOL || !y[3].is_finite() {
                return Err(Error::Numerical(format!("Bloch norm {norm} exceeds 1 + {NORM_REPAIR_TOL} under control {:?}", self.control)));
            }
            if norm > 1.0 {
                for v in &mut y[..3] {
                    *v /= norm;
                }
            }
        }
        Ok((BlochState::new(y[0], y[1], y[2]), y[3], clamped_steps))
    }
}

/// `a·r̂` for `ln ρ = a₀ I + a r̂·σ`, with the smaller eigenvalue floored at [`LOG_FLOOR`].
#[inline]
fn bloch_log(r: [f64; 3]) -> ([f64; 3], bool) {
    let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let lo = 0.5 * (1.0 - n);
    let (factor, clamped) = if lo < LOG_FLOOR {
        (0.5 * ((0.5 * (1.0 + n)).ln() - LOG_FLOOR.ln()) / n, true)
    } else if n < 1e-8 {
        (1.0, false)
    } else {
        (n.atanh() / n, false)
    };
    ([factor * r[0], factor * r[1], factor * r[2]], clamped)
}

fn check_state(rho: &BlochState) -> Result<()> {
    if rho.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("not a density matrix: {rho:?}")))
    }
}

/// `𝕃ρ` as a matrix.
pub fn lindblad_rhs_matrix(rho: &Mat2, c: ControlParams, ctx: ThermalContext) -> Mat2 {
    Generator::new(c, ctx).apply(rho)
}

/// `𝕃ρ` in Bloch coordinates, `ṙ_k = Tr[σ_k 𝕃ρ]`.
pub fn lindblad_rhs(rho: BlochState, c: ControlParams, ctx: ThermalContext) -> BlochState {
    BlochState::from_matrix(&lindblad_rhs_matrix(&rho.to_matrix(), c, ctx))
}

/// `Σ̇ = −Tr[(𝕃ρ) ln ρ] + Tr[(𝕃ρ) ln ρ_eq]`, through the eigendecompositions of `ρ` and `ρ_eq`.
pub fn entropy_rate_quantum(rho: BlochState, c: ControlParams, ctx: ThermalContext) -> Result<EntropyRate> {
    check_state(&rho)?;
    let m = rho.to_matrix();
    let lr = lindblad_rhs_matrix(&m, c, ctx);
    let (ln_rho, clamped) = m.hermitian_log(LOG_FLOOR);
    let (ln_eq, _) = gibbs_state(c, ctx).to_matrix().hermitian_log(LOG_FLOOR);
    let value = -(lr * ln_rho).trace().re + (lr * ln_eq).trace().re;
    Ok(EntropyRate { value, clamped })
}

/// Advances `ρ` by `dt` under the constant control `c`.
pub fn step_quantum(
    rho: BlochState,
    c: ControlParams,
    ctx: ThermalContext,
    dt: f64,
    substeps: usize,
) -> Result<BlochState> {
    check_state(&rho)?;
    if !c.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite control {c:?}")));
    }
    Generator::new(c, ctx).advance(rho, dt, substeps).map(|(r, _, _)| r)
}
