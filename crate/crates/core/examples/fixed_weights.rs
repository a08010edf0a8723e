//! Fixed weights: every swarm minimizes its own weighted sum and contracts.
//!
//!     cargo run --release --example fixed_weights

use mscbo::dynamics::{run, RunConfig, Variant};
use mscbo::problems::schaffer1;

fn main() -> mscbo::Result<()> {
    let cfg = RunConfig {
        variant: Variant::Fixed,
        swarms: 6,
        particles: 20,
        seed: 1,
        ..RunConfig::default()
    };
    let out = run(&schaffer1(), &cfg)?;

    println!("{:>5} {}", "step", "spread per swarm");
    for rec in out.trace.iter().step_by(10) {
        let v: Vec<String> = rec.diagnostics.deviation.iter().map(|v| format!("{v:.2e}")).collect();
        println!("{:>5} {}", rec.step, v.join(" "));
    }

    // the minimizer of lambda (x-2)^2 + (1 - lambda) x^2 / 2 is 4 lambda / (1 + lambda)
    println!("\n{:>8} {:>10} {:>10}", "lambda_1", "consensus", "target");
    for k in 0..cfg.swarms {
        let l = out.state.lambda(k)[0];
        println!("{:>8.4} {:>10.5} {:>10.5}", l, out.state.mean(k)[0], 4.0 * l / (1.0 + l));
    }
    Ok(())
}
