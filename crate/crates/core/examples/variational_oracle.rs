//! Minimum-entropy-production protocol of the classical two-level system.
//!
//! `cargo run --example variational_oracle -- [lambda_f] [tau]`

use entropy_shortcut::dynamics::ThermalContext;
use entropy_shortcut::oracle::{diagnose, optimal_solution_for_lambdas};

fn main() -> entropy_shortcut::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let lambda_f = args.next().unwrap_or(0.5);
    let tau = args.next().unwrap_or(1.0);
    let ctx = ThermalContext::default();

    let sol = optimal_solution_for_lambdas(0.0, lambda_f, tau, ctx, 1000)?;
    let (j0, j1) = sol.jumps(ctx);
    let d = diagnose(&sol);
    println!("lambda 0 -> {lambda_f} in tau = {tau}");
    println!("K = {:.10}  sigma_min = {:.8}", sol.k, sol.sigma_min);
    println!("jumps: start {j0:+.6}, end {j1:+.6}");
    println!("checks: endpoint {:.1e}, K drift {:.1e}, Euler-Lagrange {:.1e}", d.endpoint_error, d.k_drift, d.el_residual);
    println!("{:>6} {:>10} {:>10}", "t", "p", "lambda*");
    for (i, (&(t, p), &(_, lam))) in sol.p_path[1..].iter().zip(&sol.lambda_path).enumerate() {
        if i % 100 == 0 {
            println!("{t:>6.3} {p:>10.6} {lam:>10.6}");
        }
    }
    Ok(())
}
