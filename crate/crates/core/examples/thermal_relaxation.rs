//! Relaxation of a coherent qubit state towards the Gibbs state of a fixed Hamiltonian.
//!
//! `cargo run --example thermal_relaxation`

use entropy_shortcut::dynamics::{gibbs_state, trace_distance, BlochState, ControlParams, Generator, ThermalContext};

fn main() -> entropy_shortcut::Result<()> {
    let ctx = ThermalContext::default();
    let c = ControlParams::new(0.8, 1.2);
    let target = gibbs_state(c, ctx);
    let gen = Generator::new(c, ctx);
    let mut rho = BlochState::new(0.9, 0.0, 0.3);
    let mut sigma = 0.0;
    println!("gibbs: x={:.6} y={:.6} z={:.6}", target.x, target.y, target.z);
    println!("{:>5} {:>10} {:>10} {:>10} {:>12} {:>10}", "t", "x", "y", "z", "distance", "sigma");
    for step in 0..=12 {
        if step > 0 {
            let (next, ds, _) = gen.advance(rho, 0.5, 100)?;
            rho = next;
            sigma += ds;
        }
        let t = 0.5 * step as f64;
        println!("{t:>5.1} {:>10.6} {:>10.6} {:>10.6} {:>12.3e} {sigma:>10.6}", rho.x, rho.y, rho.z, trace_distance(rho, target));
    }
    Ok(())
}
