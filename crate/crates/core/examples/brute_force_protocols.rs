//! Exhaustive search over three-interval classical protocols, compared with the oracle.
//!
//! `cargo run --release --example brute_force_protocols`

use entropy_shortcut::dynamics::{classical_closed_form, equilibrium_population, ThermalContext};
use entropy_shortcut::oracle::optimal_solution;

fn mixing(p: f64) -> f64 {
    p * p.ln() + (1.0 - p) * (1.0 - p).ln()
}

fn main() -> entropy_shortcut::Result<()> {
    let ctx = ThermalContext::default();
    let lambda_f = 0.5;
    let p_f = equilibrium_population(lambda_f, ctx);
    let grid: Vec<f64> = (0..=60).map(|k| 0.05 * k as f64).collect();
    let dt = 1.0 / 3.0;

    let mut best: Option<(f64, f64, [f64; 3])> = None;
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                let (mut p, mut sigma) = (0.5, 0.0);
                for lam in [a, b, c] {
                    let next = classical_closed_form(p, lam, ctx, dt);
                    sigma += ctx.beta * lam * (next - p) - (mixing(next) - mixing(p));
                    p = next;
                }
                let dd = 2.0 * (p - p_f).abs();
                if dd < 0.01 && best.is_none_or(|(s, _, _)| sigma < s) {
                    best = Some((sigma, p, [a, b, c]));
                }
            }
        }
    }
    let (sigma, p, lams) = best.expect("grid reaches the target band");
    let oracle = optimal_solution(0.5, p, 1.0, ctx, 2000)?;
    println!("best grid protocol {lams:?}: p_final = {p:.5}, sigma = {sigma:.6}");
    println!("oracle for the same endpoint: sigma_min = {:.6}", oracle.sigma_min);
    println!("oracle for the exact target:  sigma_min = {:.6}", optimal_solution(0.5, p_f, 1.0, ctx, 2000)?.sigma_min);
    Ok(())
}
