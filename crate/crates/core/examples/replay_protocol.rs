//! Replays a linear ramp and the sampled optimal protocol, and compares their cost.
//!
//! `cargo run --example replay_protocol`

use entropy_shortcut::dynamics::{evolve_protocol, ControlParams, Mode, SystemState, ThermalContext};
use entropy_shortcut::oracle::optimal_solution_for_lambdas;

fn main() -> entropy_shortcut::Result<()> {
    let ctx = ThermalContext::default();
    let (lambda_f, n) = (0.5, 10);
    let start = SystemState::equilibrium(Mode::Classical, ControlParams::classical(0.0), ctx);
    let target = SystemState::equilibrium(Mode::Classical, ControlParams::classical(lambda_f), ctx);

    let ramp: Vec<_> = (1..=n).map(|j| ControlParams::classical(lambda_f * j as f64 / n as f64)).collect();
    let sol = optimal_solution_for_lambdas(0.0, lambda_f, 1.0, ctx, 1001)?;
    let sampled: Vec<_> = (0..n)
        .map(|j| {
            let t = (j as f64 + 0.5) / n as f64;
            let k = sol.lambda_path.partition_point(|&(s, _)| s < t).min(sol.lambda_path.len() - 1);
            ControlParams::classical(sol.lambda_path[k].1)
        })
        .collect();

    for (name, controls) in [("linear ramp", &ramp), ("sampled optimum", &sampled)] {
        let traj = evolve_protocol(start, controls, 1.0, ctx, 100)?;
        let dd = traj.final_state().distance(&target)?;
        println!("{name:>16}: sigma = {:.6}, distance to target = {dd:.2e}", traj.sigma_total);
    }
    println!("{:>16}: sigma = {:.6}", "oracle", sol.sigma_min);

    let mut csv = Vec::new();
    evolve_protocol(start, &sampled, 1.0, ctx, 100)?.write_csv(&mut csv)?;
    print!("\n{}", String::from_utf8_lossy(&csv));
    Ok(())
}
