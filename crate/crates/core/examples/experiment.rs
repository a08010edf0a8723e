//! A multi-seed experiment from a preset, written to a temporary directory.
//!
//!     cargo run --release --example experiment -- [preset] [seeds]

use mscbo::cli::{preset, run_experiment};

fn main() -> mscbo::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "paper-schaffer1".into());
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);

    let mut spec = preset(&name)?;
    spec.seeds = (0..seeds).collect();
    spec.out_dir = std::env::temp_dir().join(format!("mscbo-{name}"));
    let result = run_experiment(&spec)?;

    let s = &result.summary;
    println!("{name}: {} seeds of {} / {}", s.seeds.len(), s.problem, s.variant.as_str());
    println!("{:>6} {:>10} {:>10} {:>12} {:>5}", "seed", "gd", "igd", "hv", "ni");
    for (i, seed) in s.seeds.iter().enumerate() {
        println!("{:>6} {:>10.5} {:>10.5} {:>12.5} {:>5}", seed, s.gd[i], s.igd[i], s.hv[i], s.ni[i]);
    }
    println!("{:>6} {:>10.5} {:>10.5} {:>12.5} {:>5.1}", "mean", s.mean.gd, s.mean.igd, s.mean.hv, s.mean.ni);
    println!("\noutputs in {}", spec.out_dir.display());
    Ok(())
}
