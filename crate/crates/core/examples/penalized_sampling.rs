//! The full variant: a crowding penalty in the weighted mean and
//! sampling noise that keeps each swarm spread around its consensus point.
//!
//!     cargo run --release --example penalized_sampling

use mscbo::dynamics::{run, RunConfig, RunOutput, Variant};
use mscbo::problems::schaffer1;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn summary(label: &str, out: &RunOutput) {
    let v = median(out.trace.last().unwrap().diagnostics.deviation.clone());
    println!(
        "{label:<10} median spread {v:.3e}, non-dominated points {} of {}",
        out.approximation.nondominated_count(),
        out.approximation.len()
    );
}

fn main() -> mscbo::Result<()> {
    let base = RunConfig { seed: 4, ..RunConfig::default() };
    for t_end in [5.0, 20.0] {
        println!("t_end = {t_end}");
        for variant in [Variant::Adaptive, Variant::Full] {
            let cfg = RunConfig { variant, t_end, ..base.clone() };
            summary(variant.as_str(), &run(&schaffer1(), &cfg)?);
        }
    }

    // the penalty strength trades crowding against tracking the weighted sum
    println!();
    for beta in [0.0, 10.0, 50.0] {
        let cfg = RunConfig { beta, ..base.clone() };
        let out = run(&schaffer1(), &cfg)?;
        let xs: Vec<f64> = (0..cfg.swarms).map(|k| out.state.mean(k)[0]).collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!("beta {beta:>4}: consensus points cover x in [{lo:.3}, {hi:.3}]");
    }
    Ok(())
}
