//! Independent checks against closed forms and brute force.

use mscbo::indicators::{dominates, hv_monte_carlo, hypervolume, nondominated_filter, DEFAULT_EPS_DOM};
use mscbo::interaction::{d_min_root, force_prefactor_u, PotentialParams};
use mscbo::problems::{self, quadratic_minimizer};
use mscbo::scalarize::{weighted_sum, WeightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn grid_argmin_of_the_quadratic_matches_the_closed_form() {
    let p = problems::biobjective_quadratic();
    let n = 30_000;
    for lambda in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let w = WeightVector::new(vec![lambda, 1.0 - lambda]).unwrap();
        let (mut best_x, mut best) = (0.0, f64::INFINITY);
        for i in 0..=n {
            let x = -1.0 + i as f64 * 1e-4;
            let v = weighted_sum(&w, &p.evaluate(&[x]).unwrap()).unwrap();
            if v < best {
                best = v;
                best_x = x;
            }
        }
        assert!((best_x - quadratic_minimizer(lambda)).abs() <= 1e-4, "{lambda}: {best_x}");
    }
}

#[test]
fn diversity_floor_root_has_closed_form() {
    let params = PotentialParams {
        obj_attraction: 1.0,
        obj_attraction_range: 2.0,
        obj_repulsion: 1.0,
        obj_repulsion_range: 1.0,
        ..PotentialParams::default()
    };
    let root = d_min_root(&params).unwrap();
    assert!((root - (2.0 * 2f64.ln()).sqrt()).abs() < 1e-8);
    assert!(force_prefactor_u(root * 0.9, &params) < 0.0);
    assert!(force_prefactor_u(root * 1.1, &params) > 0.0);
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, p: usize, coarse: bool) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..p)
                .map(|_| {
                    let u: f64 = rng.random();
                    if coarse {
                        (u * 6.0).floor() / 6.0
                    } else {
                        u
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn filter_matches_quadratic_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..40 {
        let p = 2 + case % 2;
        let n = rng.random_range(1..300);
        let pts = random_points(&mut rng, n, p, case % 3 == 0);
        let mask = nondominated_filter(&pts, DEFAULT_EPS_DOM).unwrap();
        for i in 0..n {
            let brute = !(0..n).any(|j| j != i && dominates(&pts[j], &pts[i], DEFAULT_EPS_DOM).unwrap());
            assert_eq!(mask[i], brute, "case {case}, point {i}");
        }
    }
}

#[test]
fn exact_hypervolume_agrees_with_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for p in [2, 3] {
        for _ in 0..5 {
            let pts = random_points(&mut rng, 40, p, false);
            let r = vec![1.0; p];
            let exact = hypervolume(&pts, &r).unwrap();
            let (est, se) = hv_monte_carlo(&pts, &r, &vec![0.0; p], 200_000, &mut rng).unwrap();
            assert!((exact - est).abs() <= 4.0 * se, "p={p}: {exact} vs {est} +- {se}");
        }
    }
}

#[test]
fn analytic_fronts_approach_the_continuous_hypervolume() {
    let front = problems::schaffer1().reference_front(20_000).unwrap();
    let hv = hypervolume(&front.points, &[4.0, 2.0]).unwrap();
    assert!((hv - (8.0 - 4.0 / 3.0)).abs() < 1e-3, "{hv}");

    // left branch area 16 - 37/3 plus right branch area 16 - 1/3
    let front = problems::schaffer2().reference_front(20_000).unwrap();
    let hv = hypervolume(&front.points, &[1.0, 16.0]).unwrap();
    let exact = (16.0 - 37.0 / 3.0) + (16.0 - 1.0 / 3.0);
    assert!((hv - exact).abs() < 1e-2, "{hv} vs {exact}");
}
