mod common;

use entropy_shortcut::dynamics::{
    entropy_rate_classical, entropy_rate_classical_w, entropy_rate_quantum, evolve_protocol, gibbs_state,
    lindblad_rhs_matrix, step_classical, step_quantum, BlochState, ClassicalState, ControlParams, Generator,
    SystemState, ThermalContext, Trajectory,
};
use proptest::prelude::*;

fn ctx() -> ThermalContext {
    ThermalContext::default()
}

fn control() -> impl Strategy<Value = ControlParams> {
    (-2.0..2.0f64, 0.0..3.0f64).prop_map(|(e, l)| ControlParams::new(e, l))
}

/// Bloch vector strictly inside the unit ball.
fn bloch() -> impl Strategy<Value = BlochState> {
    (0.0..0.999f64, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(r, th, ph)| {
        BlochState::new(r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn classical_protocols_obey_second_law(
        p0 in 0.02..0.98f64,
        lams in prop::collection::vec(0.0..3.0f64, 1..12),
    ) {
        let start = SystemState::Classical(ClassicalState::new(p0).unwrap());
        let controls: Vec<_> = lams.iter().map(|&l| ControlParams::classical(l)).collect();
        let traj = evolve_protocol(start, &controls, 1.0, ctx(), 1000).unwrap();
        prop_assert!(traj.entropy_increments.iter().all(|&d| d >= -1e-8));
        let (p_ref, s_ref) = common::classical_protocol(p0, &lams, 1.0, ctx());
        prop_assert!((traj.final_state().components()[0] - p_ref).abs() < 1e-10);
        prop_assert!((traj.sigma_total - s_ref).abs() < 1e-8 * (1.0 + s_ref), "{} vs {}", traj.sigma_total, s_ref);
    }

    #[test]
    fn quantum_protocols_obey_second_law(
        start in control(),
        controls in prop::collection::vec(control(), 1..12),
    ) {
        let traj = evolve_protocol(SystemState::Quantum(gibbs_state(start, ctx())), &controls, 1.0, ctx(), 100).unwrap();
        prop_assert!(traj.entropy_increments.iter().all(|&d| d >= -1e-8));
        for s in &traj.states {
            let SystemState::Quantum(r) = s else { unreachable!() };
            prop_assert!(r.norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn gibbs_state_is_stationary(c in control(), beta in 0.1..5.0f64) {
        let ctx = ThermalContext::new(beta).unwrap();
        let rho = gibbs_state(c, ctx).to_matrix();
        prop_assert!(lindblad_rhs_matrix(&rho, c, ctx).frobenius_norm() < 1e-10);
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity(c in control(), r in bloch()) {
        let d = lindblad_rhs_matrix(&r.to_matrix(), c, ctx());
        prop_assert!(d.trace().norm() < 1e-14);
        prop_assert!(d.is_hermitian(1e-14));
    }

    #[test]
    fn quantum_rate_routes_agree(c in control(), r in bloch()) {
        let g = Generator::new(c, ctx());
        let arr = r.to_array();
        let (fast, _) = g.entropy_rate_bloch(&arr, &g.bloch_rhs(&arr));
        let slow = entropy_rate_quantum(r, c, ctx()).unwrap().value;
        prop_assert!((fast - slow).abs() <= 1e-9 * (1.0 + slow.abs()), "{fast} vs {slow}");
        prop_assert!(fast >= -1e-12);
    }

    #[test]
    fn diagonal_states_follow_the_classical_law(p0 in 0.02..0.98f64, lam in 0.0..3.0f64, dt in 0.01..2.0f64) {
        let r0 = BlochState::new(0.0, 0.0, 1.0 - 2.0 * p0);
        let c = ControlParams::classical(lam);
        let (r1, ds_q, _) = Generator::new(c, ctx()).advance(r0, dt, 2000).unwrap();
        prop_assert_eq!(step_quantum(r0, c, ctx(), dt, 2000).unwrap(), r1);
        let (p1, ds_c) = step_classical(ClassicalState::new(p0).unwrap(), lam, ctx(), dt, 2000).unwrap();
        let (p_ref, ds_ref) = common::classical_interval(p0, lam, ctx(), dt);
        prop_assert!(r1.x == 0.0 && r1.y == 0.0);
        prop_assert!((r1.sigma_z_ground_population() - p_ref).abs() < 1e-10);
        prop_assert!((p1.p_minus - p_ref).abs() < 1e-10);
        let tol = 1e-9 * (1.0 + ds_ref);
        prop_assert!((ds_q - ds_ref).abs() < tol && (ds_c - ds_ref).abs() < tol, "{ds_q} {ds_c} {ds_ref}");
    }

    #[test]
    fn trajectory_csv_roundtrips(
        start in control(),
        controls in prop::collection::vec(control(), 1..8),
    ) {
        let traj = evolve_protocol(SystemState::Quantum(gibbs_state(start, ctx())), &controls, 1.0, ctx(), 20).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let back = Trajectory::read_csv(buf.as_slice(), "mem").unwrap();
        prop_assert_eq!(&back, &traj);
        let resummed: f64 = back.entropy_increments.iter().sum();
        prop_assert!((resummed - traj.sigma_total).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn classical_rate_forms_agree(p in 0.001..0.999f64, lam in -5.0..5.0f64) {
        let s = ClassicalState::new(p).unwrap();
        let a = entropy_rate_classical(s, lam, ctx()).unwrap();
        let b = entropy_rate_classical_w(s, lam, ctx()).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()), "{a} vs {b}");
        prop_assert!(a >= 0.0);
    }
}

#[test]
fn classical_mode_rejects_quantum_controls() {
    let start = SystemState::Classical(ClassicalState::new(0.5).unwrap());
    assert!(evolve_protocol(start, &[ControlParams::new(0.3, 1.0)], 1.0, ctx(), 10).is_err());
    assert!(evolve_protocol(start, &[ControlParams::classical(-1.0)], 1.0, ctx(), 10).is_err());
}
