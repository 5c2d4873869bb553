mod common;

use entropy_shortcut::dynamics::ThermalContext;
use entropy_shortcut::oracle::{
    diagnose, optimal_solution, reachability, solve_k, target_from_k, travel_time,
};
use proptest::prelude::*;

fn ctx() -> ThermalContext {
    ThermalContext::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn k_grows_with_the_target(p_i in 0.5..0.9f64, a in 0.05..0.95f64, b in 0.05..0.95f64) {
        let p_max = reachability(p_i, 1.0, ctx()).unwrap().p_f_max;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-3);
        let (f1, f2) = (p_i + lo * (p_max - p_i), p_i + hi * (p_max - p_i));
        let (k1, k2) = (solve_k(p_i, f1, 1.0).unwrap(), solve_k(p_i, f2, 1.0).unwrap());
        prop_assert!(k1 < k2, "K({f1}) = {k1} !< K({f2}) = {k2}");
        prop_assert!((travel_time(p_i, f2, k2).unwrap() - 1.0).abs() < 1e-9);
        prop_assert!((target_from_k(p_i, k2, 1.0).unwrap() - f2).abs() < 1e-9);
    }

    #[test]
    fn no_piecewise_protocol_beats_the_oracle(lams in prop::collection::vec(0.0..3.0f64, 1..10)) {
        let (p_final, sigma) = common::classical_protocol(0.5, &lams, 1.0, ctx());
        prop_assume!(p_final > 0.501);
        let sol = optimal_solution(0.5, p_final, 1.0, ctx(), 2000).unwrap();
        prop_assert!(sigma >= sol.sigma_min - 1e-7, "Σ = {sigma} < Σ_min = {}", sol.sigma_min);
    }

    #[test]
    fn oracle_paths_are_self_consistent(frac in 0.05..0.95f64) {
        let p_max = reachability(0.5, 1.0, ctx()).unwrap().p_f_max;
        let sol = optimal_solution(0.5, 0.5 + frac * (p_max - 0.5), 1.0, ctx(), 400).unwrap();
        let d = diagnose(&sol);
        prop_assert!(d.endpoint_error < 1e-9 && d.k_drift < 1e-6 && d.el_residual < 1e-5, "{d:?}");
        let summed: f64 = sol.d_sigma.iter().sum();
        prop_assert!((summed - sol.sigma_min).abs() < 1e-9);
    }
}

#[test]
fn unreachable_targets_are_reported() {
    let b = reachability(0.5, 1.0, ctx()).unwrap();
    let err = optimal_solution(0.5, b.p_f_max + 1e-3, 1.0, ctx(), 100).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}
