//! Quantum sweep over final couplings with per-target seeds, written to a directory.
//!
//! `cargo run --release --example quantum_sweep -- [out_dir] [episodes]`

use std::path::PathBuf;

use entropy_shortcut::dynamics::Mode;
use entropy_shortcut::harness::{run_sweep, RunConfig};
use entropy_shortcut::policy::PolicyConfig;

fn main() -> entropy_shortcut::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "runs/quantum_sweep".into()));
    let episodes = args.next().map(|a| a.parse().expect("integer episodes")).unwrap_or(5_000);
    let cfg = RunConfig {
        mode: Mode::Quantum,
        lambda_f: vec![0.5, 1.0, 1.5],
        seed: 11,
        policy: PolicyConfig { episodes, alpha: 2e-6, ..PolicyConfig::default() },
        ..RunConfig::default()
    };
    println!("{}", cfg.to_json());
    for row in run_sweep(&cfg, &out, false)? {
        let oracle = row.oracle_sigma.map(|s| format!("{s:.5}")).unwrap_or_else(|| "unreachable".into());
        match row.error {
            Some(e) => println!("lambda_f {:.2}: failed: {e}", row.lambda_f),
            None => println!(
                "lambda_f {:.2} (seed {:#018x}): distance {:.4}, sigma {:.5}, classical sigma_min {oracle}, converged {}",
                row.lambda_f, row.seed, row.delta_d, row.sigma_min, row.converged
            ),
        }
    }
    println!("wrote {}", out.join("sweep.csv").display());
    Ok(())
}
