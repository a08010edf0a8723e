//! Adaptive weights: swarms push their weight vectors apart and the
//! consensus points spread along the front.
//!
//!     cargo run --release --example adaptive_weights

use mscbo::dynamics::{run, RunConfig, Variant, WeightInit};
use mscbo::interaction::PotentialParams;
use mscbo::problems::schaffer1;

fn main() -> mscbo::Result<()> {
    // all swarms start bunched in the middle of the weight simplex
    let start: Vec<Vec<f64>> = (0..8).map(|k| vec![0.46 + 0.01 * k as f64, 0.54 - 0.01 * k as f64]).collect();
    let cfg = RunConfig {
        variant: Variant::Adaptive,
        swarms: start.len(),
        particles: 30,
        t_end: 10.0,
        weight_init: WeightInit::Explicit(start),
        potential: PotentialParams {
            repulsion: 0.05,
            repulsion_range: 0.05,
            ..PotentialParams::default()
        },
        ..RunConfig::default()
    };
    let out = run(&schaffer1(), &cfg)?;

    let first = &out.trace[0].lambda;
    let last = &out.trace.last().unwrap().lambda;
    println!("{:>5} {:>10} {:>10} {:>12}", "swarm", "lambda_1", "final", "consensus x");
    for k in 0..cfg.swarms {
        println!("{:>5} {:>10.4} {:>10.4} {:>12.5}", k, first[k][0], last[k][0], out.state.mean(k)[0]);
    }
    let sums = out.state.mu_sum();
    println!("\nsum of log-weights per objective stays at {:?}", sums.iter().map(|s| format!("{s:.6}")).collect::<Vec<_>>());
    Ok(())
}
