//! Driven two-level system in contact with a heat bath.
//!
//! The Hamiltonian is `H(ε, λ) = (ε σx + λ σz) / 2` with half-gap `Ω = √(λ² + ε²) / 2`
//! (units with ħ = k_B = 1). Quantum states are carried as Bloch vectors
//! `ρ = (I + x σx + y σy + z σz) / 2`; the classical limit (ε ≡ 0) is carried as the
//! population `p₋` of the instantaneous ground state.
//!
//! When `Ω = 0` the energy eigenbasis is fixed to the σz basis, so `|e₋⟩ = |1⟩` (the
//! σz = −1 eigenvector). The basis is then continuous along the λ-axis and, at the
//! origin, both thermal rates equal ½.

mod classical;
mod lindblad;
mod rk4;
pub mod matrix;
mod trajectory;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use matrix::Mat2;

pub use classical::{
    classical_closed_form, classical_rhs, entropy_rate_classical, entropy_rate_classical_w,
    equilibrium_population, step_classical,
};
pub use lindblad::{
    entropy_rate_quantum, lindblad_rhs, lindblad_rhs_matrix, step_quantum, EntropyRate, Generator,
    LOG_FLOOR,
};
pub use trajectory::{evolve_protocol, read_protocol_csv, SystemState, Trajectory};
pub(crate) use rk4::rk4_step;
pub(crate) use trajectory::fmt_f64;

/// Bloch norms in `(1, 1 + NORM_REPAIR_TOL]` are rescaled to 1; larger norms are failures.
pub const NORM_REPAIR_TOL: f64 = 1e-6;

/// Default RK4 substeps per constant-control interval.
pub const DEFAULT_SUBSTEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    Quantum,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Classical => f.write_str("classical"),
            Mode::Quantum => f.write_str("quantum"),
        }
    }
}

/// Bath temperature, as an inverse temperature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalContext {
    pub beta: f64,
}

impl ThermalContext {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidInput(format!("beta must be positive and finite, got {beta}")));
        }
        Ok(Self { beta })
    }
}

impl Default for ThermalContext {
    fn default() -> Self {
        Self { beta: 1.0 }
    }
}

/// The controllable Hamiltonian coefficients `Λ = (ε, λ)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    pub epsilon: f64,
    pub lam: f64,
}

impl ControlParams {
    pub const fn new(epsilon: f64, lam: f64) -> Self {
        Self { epsilon, lam }
    }

    pub const fn classical(lam: f64) -> Self {
        Self { epsilon: 0.0, lam }
    }

    pub fn is_finite(&self) -> bool {
        self.epsilon.is_finite() && self.lam.is_finite()
    }

    /// Half the energy gap.
    pub fn rabi_frequency(&self) -> f64 {
        0.5 * self.epsilon.hypot(self.lam)
    }

    /// Same control with `λ` clamped at zero.
    pub fn with_nonnegative_lam(self) -> Self {
        Self { epsilon: self.epsilon, lam: self.lam.max(0.0) }
    }
}

/// Bloch-vector representation of a 2×2 density matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    pub const MAXIMALLY_MIXED: BlochState = BlochState { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self { x: v[0], y: v[1], z: v[2] }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_valid(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.norm() <= 1.0 + 1e-9
    }

    /// Diagonal state with ground-state (σz = −1) population `p₋`.
    pub fn from_classical(p: ClassicalState) -> Self {
        Self { x: 0.0, y: 0.0, z: 1.0 - 2.0 * p.p_minus }
    }

    /// Population of the σz = −1 level.
    pub fn sigma_z_ground_population(&self) -> f64 {
        0.5 * (1.0 - self.z)
    }

    pub fn to_matrix(self) -> Mat2 {
        Mat2::from_pauli(0.5, [0.5 * self.x, 0.5 * self.y, 0.5 * self.z])
    }

    /// Bloch vector of a (Hermitian, unit-trace) matrix.
    pub fn from_matrix(m: &Mat2) -> Self {
        let (_, c) = m.pauli_coefficients();
        Self::from_array([2.0 * c[0], 2.0 * c[1], 2.0 * c[2]])
    }
}

/// Classical two-level state: the population of the ground level `|e₋⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub p_minus: f64,
}

impl ClassicalState {
    pub fn new(p_minus: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_minus) {
            return Err(Error::InvalidInput(format!("population must lie in [0, 1], got {p_minus}")));
        }
        Ok(Self { p_minus })
    }

    pub fn p_plus(&self) -> f64 {
        1.0 - self.p_minus
    }
}

/// `(ε σx + λ σz) / 2`.
pub fn build_hamiltonian(c: ControlParams) -> Mat2 {
    Mat2::from_pauli(0.0, [0.5 * c.epsilon, 0.0, 0.5 * c.lam])
}

/// Instantaneous energy eigenbasis `(|e₋⟩, |e₊⟩)` of `H(c)`; real vectors.
pub fn energy_eigenbasis(c: ControlParams) -> ([f64; 2], [f64; 2]) {
    // H = Ω (sin θ σx + cos θ σz)
    let theta = if c.rabi_frequency() == 0.0 { 0.0 } else { c.epsilon.atan2(c.lam) };
    let (s, co) = (0.5 * theta).sin_cos();
    ([-s, co], [co, s])
}

/// Unit vector along which `H(c)` points in Bloch space, `(sin θ, 0, cos θ)`.
pub(crate) fn field_direction(c: ControlParams) -> [f64; 3] {
    let r = c.epsilon.hypot(c.lam);
    if r == 0.0 {
        [0.0, 0.0, 1.0]
    } else {
        [c.epsilon / r, 0.0, c.lam / r]
    }
}

/// Thermal state `e^{−βH}/Tr e^{−βH}`.
pub fn gibbs_state(c: ControlParams, ctx: ThermalContext) -> BlochState {
    // e^{−βΩ n·σ} ∝ I − tanh(βΩ) n·σ
    let t = (ctx.beta * c.rabi_frequency()).tanh();
    let n = field_direction(c);
    BlochState::from_array([-t * n[0], -t * n[1], -t * n[2]])
}

/// Thermal population of the ground level, `1/(1 + e^{−2βΩ})`.
pub fn gibbs_ground_population(c: ControlParams, ctx: ThermalContext) -> f64 {
    logistic(2.0 * ctx.beta * c.rabi_frequency())
}

/// `1 / (1 + e^{−u})`, evaluated without overflow.
pub(crate) fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// Thermal jump operators in the instantaneous eigenbasis.
#[derive(Clone, Copy, Debug)]
pub struct JumpOperators {
    /// `V⁺ = √γ↓ |e₋⟩⟨e₊|`
    pub lowering: Mat2,
    /// `V⁻ = √γ↑ |e₊⟩⟨e₋|`
    pub raising: Mat2,
    pub down_rate: f64,
    pub up_rate: f64,
}

pub fn jump_operators(c: ControlParams, ctx: ThermalContext) -> JumpOperators {
    let u = 2.0 * ctx.beta * c.rabi_frequency();
    let down_rate = logistic(u);
    let up_rate = logistic(-u);
    let (ground, excited) = energy_eigenbasis(c);
    JumpOperators {
        lowering: Mat2::outer(ground, excited).scale(down_rate.sqrt()),
        raising: Mat2::outer(excited, ground).scale(up_rate.sqrt()),
        down_rate,
        up_rate,
    }
}

/// `Tr|ρ₁ − ρ₂|`, without the conventional factor ½; equals the Bloch-vector distance.
pub fn trace_distance(a: BlochState, b: BlochState) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// `Σ_σ |p₁,σ − p₂,σ|`.
pub fn l1_distance(a: ClassicalState, b: ClassicalState) -> f64 {
    (a.p_minus - b.p_minus).abs() + (a.p_plus() - b.p_plus()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eig(c: ControlParams) -> [f64; 2] {
        build_hamiltonian(c).hermitian_eigenvalues()
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(build_hamiltonian(ControlParams::new(0.0, 0.0)), Mat2::ZERO);
        let e = eig(ControlParams::new(3.0, 4.0));
        assert!((e[0] + 2.5).abs() < 1e-14 && (e[1] - 2.5).abs() < 1e-14);
        let h = build_hamiltonian(ControlParams::new(0.0, 1.0));
        assert_eq!(h, Mat2::from_real([[0.5, 0.0], [0.0, -0.5]]));
    }

    #[test]
    fn eigenbasis_diagonalises() {
        for &(e, l) in &[(0.0, 0.0), (0.0, 1.0), (0.5, 0.0), (0.3, 1.7), (-0.4, 0.2)] {
            let c = ControlParams::new(e, l);
            let (g, x) = energy_eigenbasis(c);
            let h = build_hamiltonian(c);
            let om = c.rabi_frequency();
            let hg = h * Mat2::outer(g, g);
            let hx = h * Mat2::outer(x, x);
            assert!((hg - Mat2::outer(g, g).scale(-om)).frobenius_norm() < 1e-14);
            assert!((hx - Mat2::outer(x, x).scale(om)).frobenius_norm() < 1e-14);
        }
        // degenerate convention: ground = σz = −1 eigenvector
        assert_eq!(energy_eigenbasis(ControlParams::new(0.0, 0.0)).0, [0.0, 1.0]);
        assert_eq!(energy_eigenbasis(ControlParams::new(0.0, -0.0)).0, [0.0, 1.0]);
    }

    #[test]
    fn gibbs_examples() {
        let ctx = ThermalContext::default();
        assert_eq!(gibbs_state(ControlParams::new(0.0, 0.0), ctx), BlochState::MAXIMALLY_MIXED);
        let g = gibbs_state(ControlParams::new(0.0, 1.0), ctx);
        assert!((g.z + 0.5f64.tanh()).abs() < 1e-15);
        assert!((g.z + 0.46211715726000974).abs() < 1e-12);
        assert!((g.sigma_z_ground_population() - 0.7310585786300049).abs() < 1e-12);
        let g = gibbs_state(ControlParams::new(0.5, 0.0), ctx);
        assert!((g.x + 0.24491866240370913).abs() < 1e-12 && g.y == 0.0 && g.z == 0.0);
    }

    #[test]
    fn jump_rate_examples() {
        let ctx = ThermalContext::default();
        let j = jump_operators(ControlParams::new(0.0, 1.0), ctx);
        assert!((j.down_rate - 0.7310585786300049).abs() < 1e-12);
        assert!((j.up_rate - 0.2689414213699951).abs() < 1e-12);
        assert!((j.up_rate / j.down_rate - (-1.0f64).exp()).abs() < 1e-14);
        let cold = jump_operators(ControlParams::new(0.0, 1.0), ThermalContext::new(1e6).unwrap());
        assert_eq!(cold.down_rate, 1.0);
        assert_eq!(cold.up_rate, 0.0);
        for &(e, l) in &[(0.0, 0.0), (1.0, 2.0), (-3.0, 0.1)] {
            let j = jump_operators(ControlParams::new(e, l), ctx);
            assert!((j.down_rate + j.up_rate - 1.0).abs() < 1e-15);
        }
        let origin = jump_operators(ControlParams::new(0.0, 0.0), ctx);
        assert_eq!(origin.down_rate, 0.5);
        assert_eq!(origin.up_rate, 0.5);
    }

    #[test]
    fn distance_examples() {
        let a = BlochState::new(0.1, 0.2, 0.3);
        assert_eq!(trace_distance(a, a), 0.0);
        let up = BlochState::new(0.0, 0.0, 1.0);
        let down = BlochState::new(0.0, 0.0, -1.0);
        assert_eq!(trace_distance(up, down), 2.0);
        let d = l1_distance(ClassicalState::new(0.5).unwrap(), ClassicalState::new(0.7).unwrap());
        assert!((d - 0.4).abs() < 1e-15);
    }

    #[test]
    fn trace_distance_matches_eigenvalues() {
        let a = BlochState::new(0.1, -0.2, 0.4);
        let b = BlochState::new(-0.3, 0.05, 0.2);
        let ev = (a.to_matrix() - b.to_matrix()).hermitian_eigenvalues();
        let direct = ev[0].abs() + ev[1].abs();
        assert!((direct - trace_distance(a, b)).abs() < 1e-14);
    }

    #[test]
    fn invalid_inputs() {
        assert!(ThermalContext::new(0.0).is_err());
        assert!(ThermalContext::new(f64::NAN).is_err());
        assert!(ClassicalState::new(1.2).is_err());
    }
}
