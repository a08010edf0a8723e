//! Reference fronts of the benchmark problems and their hypervolumes.
//!
//! Analytic fronts come from the known efficient intervals; the others from
//! a dominance-filtered grid over the decision box.
//!
//!     cargo run --release --example reference_fronts

use mscbo::indicators::hypervolume;
use mscbo::problems::{self, Problem};

fn main() -> mscbo::Result<()> {
    println!("{:<10} {:>7} {:>12} {:>8} {:>14}", "problem", "points", "source", "grid", "hv at ref");
    for name in problems::registered_names() {
        let problem = Problem::by_name(name)?;
        let resolution = problem.default_reference_resolution();
        let front = problem.reference_front(resolution)?;
        let hv = hypervolume(&front.points, problem.hv_ref())?;
        println!(
            "{:<10} {:>7} {:>12} {:>8} {:>14.6}",
            name,
            front.len(),
            format!("{:?}", front.source),
            resolution,
            hv
        );
    }

    // the continuous Schaffer1 front dominates 8 - 4/3 of the reference box
    let s1 = problems::schaffer1().reference_front(20_000)?;
    let hv = hypervolume(&s1.points, &[4.0, 2.0])?;
    println!("\nschaffer1 at 20000 points: {hv:.6} (continuous front: {:.6})", 8.0 - 4.0 / 3.0);

    let dent = problems::dent().reference_front(400)?;
    println!("dent grid front at (4, 4): {:.6}", hypervolume(&dent.points, &[4.0, 4.0])?);
    Ok(())
}
