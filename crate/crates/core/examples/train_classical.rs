//! Trains a policy for the classical task and compares it with the oracle.
//!
//! `cargo run --release --example train_classical -- [episodes] [seed]`

use entropy_shortcut::dynamics::ThermalContext;
use entropy_shortcut::oracle::optimal_solution_for_lambdas;
use entropy_shortcut::policy::{Environment, PolicyConfig, Trainer};

fn main() -> entropy_shortcut::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let episodes = args.next().unwrap_or(20_000);
    let seed = args.next().unwrap_or(1);
    let env = Environment::classical(0.0, 0.5);
    let oracle = optimal_solution_for_lambdas(0.0, 0.5, 1.0, ThermalContext::default(), 1000)?;

    let mut trainer = Trainer::new(PolicyConfig { seed, episodes, ..PolicyConfig::default() }, env)?;
    let chunk = (episodes / 10).max(1);
    while trainer.episodes_done() < episodes {
        let curve = trainer.train_for(chunk.min(episodes - trainer.episodes_done()), |_| {})?;
        let mean = curve.iter().map(|p| p.total_reward).sum::<f64>() / curve.len() as f64;
        let eval = trainer.evaluate()?;
        println!(
            "episode {:>7}: mean reward {mean:+.5}, greedy distance {:.4}, sigma {:.5}",
            trainer.episodes_done(),
            eval.final_distance,
            eval.sigma
        );
    }
    let eval = trainer.evaluate()?;
    let lams: Vec<String> = eval.controls.iter().map(|c| format!("{:.3}", c.lam)).collect();
    println!("protocol: [{}]", lams.join(", "));
    println!("oracle sigma_min = {:.5}", oracle.sigma_min);
    Ok(())
}
