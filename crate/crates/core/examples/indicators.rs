//! Dominance filtering and quality indicators on a small hand-made front.
//!
//!     cargo run --release --example indicators

use mscbo::indicators::{gd, hv_monte_carlo, hypervolume, igd, nondominated_filter, DEFAULT_EPS_DOM};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mscbo::Result<()> {
    let points = vec![
        vec![0.0, 4.0],
        vec![1.0, 1.0],
        vec![1.5, 1.5],
        vec![2.0, 0.5],
        vec![4.0, 0.0],
        vec![3.0, 3.0],
    ];
    let keep = nondominated_filter(&points, DEFAULT_EPS_DOM)?;
    let front: Vec<Vec<f64>> = points.iter().zip(&keep).filter(|(_, &k)| k).map(|(z, _)| z.clone()).collect();
    for (z, k) in points.iter().zip(&keep) {
        println!("{z:?} {}", if *k { "kept" } else { "dominated" });
    }

    // the line f_1 + f_2 = 2 sampled finely
    let reference: Vec<Vec<f64>> = (0..=200).map(|i| vec![i as f64 * 0.01, 2.0 - i as f64 * 0.01]).collect();
    println!("\ngd  {:.4}", gd(&front, &reference)?);
    println!("igd {:.4}", igd(&front, &reference)?);

    let r = [5.0, 5.0];
    let exact = hypervolume(&front, &r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (est, se) = hv_monte_carlo(&front, &r, &[0.0, 0.0], 100_000, &mut rng)?;
    println!("hv  {exact:.4} (sampled {est:.4} +- {se:.4})");

    let cube = vec![vec![0.5, 0.5, 0.5], vec![0.0, 0.8, 0.8], vec![0.8, 0.0, 0.8]];
    println!("hv in three objectives {:.4}", hypervolume(&cube, &[1.0, 1.0, 1.0])?);
    Ok(())
}
