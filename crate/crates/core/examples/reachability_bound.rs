//! Largest population and final control reachable from equilibrium within `τ`.
//!
//! `cargo run --example reachability_bound`

use entropy_shortcut::dynamics::{equilibrium_population, ThermalContext};
use entropy_shortcut::oracle::reachability;

fn main() -> entropy_shortcut::Result<()> {
    let ctx = ThermalContext::default();
    println!("{:>8} {:>8} {:>12} {:>14}", "lam_i", "tau", "p_f_max", "lambda_f_max");
    for lam_i in [0.0, 0.5] {
        let p_i = equilibrium_population(lam_i, ctx);
        for tau in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let b = reachability(p_i, tau, ctx)?;
            println!("{lam_i:>8.2} {tau:>8.2} {:>12.6} {:>14.6}", b.p_f_max, b.lambda_f_max);
        }
    }
    Ok(())
}
