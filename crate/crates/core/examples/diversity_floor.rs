//! The attractive-repulsive outcome kernel and the distance at which its
//! force changes sign.
//!
//!     cargo run --release --example diversity_floor

use mscbo::dynamics::{run, Neighborhood, RunConfig, Variant};
use mscbo::interaction::{d_min_root, force_prefactor_u, Kernel, PotentialParams};
use mscbo::problems::biobjective_quadratic;

fn main() -> mscbo::Result<()> {
    let potential = PotentialParams {
        obj_attraction: 1.0,
        obj_attraction_range: 2.0,
        obj_repulsion: 1.0,
        obj_repulsion_range: 1.0,
        ..PotentialParams::default()
    };
    let root = d_min_root(&potential).expect("kernel changes sign");
    println!("force prefactor u(d):");
    for d in [0.25, 0.5, 1.0, root, 1.5, 2.0, 3.0] {
        println!("  d = {d:.4}  u = {:+.5}", force_prefactor_u(d, &potential));
    }
    println!("root {root:.6}, sqrt(2 ln 2) = {:.6}", (2.0 * 2f64.ln()).sqrt());

    let cfg = RunConfig {
        swarms: 5,
        variant: Variant::Adaptive,
        neighborhood: Neighborhood::Neighbors,
        kernel: Kernel::Smoothed,
        alpha: 1000.0,
        t_end: 20.0,
        potential,
        ..RunConfig::default()
    };
    let out = run(&biobjective_quadratic(), &cfg)?;
    println!("\nconsensus outcomes on the quadratic problem:");
    for k in 0..cfg.swarms {
        let f = out.state.mean_f(k);
        println!("  swarm {k}: lambda_1 {:.4}  f = ({:.4}, {:.4})", out.state.lambda(k)[0], f[0], f[1]);
    }
    // the whole front is shorter than the root, so five swarms can never
    // all sit outside each other's repulsive range
    let problem = biobjective_quadratic();
    let (a, b) = (problem.evaluate(&[0.0])?, problem.evaluate(&[1.0])?);
    println!("front end-to-end distance {:.4}", ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
    Ok(())
}
