//! Dominance filtering and quality indicators for front approximations.
//!
//! All objectives are minimized. Dominance carries a numerical offset:
//! `z1` dominates `z2` when it is no worse anywhere and better by more than
//! `eps_dom` somewhere, which keeps near-ties from being reported as
//! dominated.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::problems::{lex_cmp, ReferenceFront};
use crate::scalarize::distance;

pub const DEFAULT_EPS_DOM: f64 = 1e-5;

/// Above this size the archive filter runs on independent chunks first.
const PARALLEL_FILTER_THRESHOLD: usize = 8192;

pub fn dominates(z1: &[f64], z2: &[f64], eps_dom: f64) -> Result<bool> {
    check_len("dominates", z1.len(), z2.len())?;
    Ok(dominates_unchecked(z1, z2, eps_dom))
}

#[inline]
fn dominates_unchecked(z1: &[f64], z2: &[f64], eps_dom: f64) -> bool {
    let mut strictly = false;
    for (&a, &b) in z1.iter().zip(z2) {
        if a > b {
            return false;
        }
        if a < b - eps_dom {
            strictly = true;
        }
    }
    strictly
}

/// Marks the points that no other point dominates.
pub fn nondominated_filter(points: &[Vec<f64>], eps_dom: f64) -> Result<Vec<bool>> {
    let first = points.first().ok_or(Error::EmptyInput("nondominated_filter"))?;
    let p = first.len();
    for z in points {
        check_len("nondominated_filter", p, z.len())?;
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]));

    let mut mask = vec![false; points.len()];
    if p == 2 {
        sweep_2d(points, &order, eps_dom, &mut mask);
    } else if points.len() > PARALLEL_FILTER_THRESHOLD {
        let survivors: Vec<usize> = order
            .par_chunks(PARALLEL_FILTER_THRESHOLD / 4)
            .flat_map_iter(|chunk| archive_filter(points, chunk, eps_dom))
            .collect();
        let mut survivors = survivors;
        survivors.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]));
        for i in archive_filter(points, &survivors, eps_dom) {
            mask[i] = true;
        }
    } else {
        for i in archive_filter(points, &order, eps_dom) {
            mask[i] = true;
        }
    }
    Ok(mask)
}

/// Sequential filter over lexicographically sorted indices. A dominator
/// always precedes the point it dominates in that order, and dominance is
/// transitive, so comparing against the current archive suffices.
fn archive_filter(points: &[Vec<f64>], sorted: &[usize], eps_dom: f64) -> Vec<usize> {
    let mut archive: Vec<usize> = Vec::new();
    for &c in sorted {
        let z = &points[c];
        if !archive.iter().any(|&a| dominates_unchecked(&points[a], z, eps_dom)) {
            archive.push(c);
        }
    }
    archive
}

/// O(n log n) filter for two objectives. A point is dominated iff some
/// point with a first objective below it by more than `eps_dom` is no worse
/// in the second, or some earlier point is better by more than `eps_dom`
/// in the second.
fn sweep_2d(points: &[Vec<f64>], order: &[usize], eps_dom: f64, mask: &mut [bool]) {
    let mut lagged = 0;
    let mut lagged_min = f64::INFINITY;
    let mut prefix_min = f64::INFINITY;
    for &c in order {
        let (c1, c2) = (points[c][0], points[c][1]);
        while lagged < order.len() && points[order[lagged]][0] < c1 - eps_dom {
            lagged_min = lagged_min.min(points[order[lagged]][1]);
            lagged += 1;
        }
        mask[c] = !(lagged_min <= c2 || prefix_min < c2 - eps_dom);
        prefix_min = prefix_min.min(c2);
    }
}

fn mean_nearest(from: &[Vec<f64>], to: &[Vec<f64>]) -> Result<f64> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::EmptyInput("distance indicator"));
    }
    let p = from[0].len();
    for z in from.iter().chain(to) {
        check_len("distance indicator", p, z.len())?;
    }
    let nearest: Vec<f64> = from
        .par_iter()
        .map(|a| to.iter().map(|b| distance(a, b)).fold(f64::INFINITY, f64::min))
        .collect();
    Ok(nearest.iter().sum::<f64>() / nearest.len() as f64)
}

/// Generational distance: mean distance from each approximation point to
/// its nearest reference point.
pub fn gd(approx: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<f64> {
    mean_nearest(approx, reference)
}

/// Inverted generational distance: mean distance from each reference point
/// to its nearest approximation point.
pub fn igd(approx: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<f64> {
    mean_nearest(reference, approx)
}

/// Exact dominated hypervolume for two or three objectives.
///
/// Points not strictly below `ref_point` in every coordinate bound a box of
/// zero measure and are ignored.
pub fn hypervolume(points: &[Vec<f64>], ref_point: &[f64]) -> Result<f64> {
    let p = ref_point.len();
    if !(p == 2 || p == 3) {
        return Err(Error::UnsupportedObjectives(p));
    }
    for z in points {
        check_len("hypervolume", p, z.len())?;
    }
    let inside: Vec<&[f64]> = points
        .iter()
        .map(Vec::as_slice)
        .filter(|z| z.iter().zip(ref_point).all(|(a, r)| a < r))
        .collect();
    Ok(if p == 2 {
        let mut pts: Vec<(f64, f64)> = inside.iter().map(|z| (z[0], z[1])).collect();
        hv_2d(&mut pts, ref_point[0], ref_point[1])
    } else {
        hv_3d(inside, ref_point)
    })
}

fn hv_2d(pts: &mut [(f64, f64)], r1: f64, r2: f64) -> f64 {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut level = r2;
    let mut area = 0.0;
    for &(a, b) in pts.iter() {
        if b < level {
            area += (r1 - a) * (level - b);
            level = b;
        }
    }
    area
}

/// Slices along the third objective: between consecutive levels the
/// dominated cross-section is the 2-d hypervolume of the points below.
fn hv_3d(mut pts: Vec<&[f64]>, r: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut slice: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for (i, z) in pts.iter().enumerate() {
        slice.push((z[0], z[1]));
        let top = pts.get(i + 1).map_or(r[2], |next| next[2]);
        let height = top - z[2];
        if height > 0.0 {
            let mut work = slice.clone();
            volume += hv_2d(&mut work, r[0], r[1]) * height;
        }
    }
    volume
}

/// Monte-Carlo estimate of the hypervolume inside `[lower, ref_point]`,
/// returned with its binomial standard error.
pub fn hv_monte_carlo<R: Rng + ?Sized>(
    points: &[Vec<f64>],
    ref_point: &[f64],
    lower: &[f64],
    n_samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    check_len("hv_monte_carlo", ref_point.len(), lower.len())?;
    if n_samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    if lower.iter().zip(ref_point).any(|(l, r)| !(l <= r)) {
        return Err(Error::Domain("sampling box has lower corner above reference point".into()));
    }
    for z in points {
        check_len("hv_monte_carlo", ref_point.len(), z.len())?;
    }
    let volume: f64 = lower.iter().zip(ref_point).map(|(l, r)| r - l).product();
    let mut sample = vec![0.0; lower.len()];
    let mut hits = 0usize;
    for _ in 0..n_samples {
        for ((s, l), r) in sample.iter_mut().zip(lower).zip(ref_point) {
            *s = l + (r - l) * rng.random::<f64>();
        }
        if points.iter().any(|z| z.iter().zip(&sample).all(|(a, s)| a <= s)) {
            hits += 1;
        }
    }
    let frac = hits as f64 / n_samples as f64;
    let se = volume * (frac * (1.0 - frac) / n_samples as f64).sqrt();
    Ok((volume * frac, se))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Particle,
    Mean,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Particle => "particle",
            Origin::Mean => "mean",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxEntry {
    pub x: Vec<f64>,
    pub fx: Vec<f64>,
    pub origin: Origin,
    pub swarm: usize,
    /// Particle index within the swarm (0 for means).
    pub index: usize,
}

/// Decision/outcome pairs with their dominance status.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoApproximation {
    pub entries: Vec<ApproxEntry>,
    pub nondominated_mask: Vec<bool>,
}

impl ParetoApproximation {
    pub fn new(entries: Vec<ApproxEntry>, eps_dom: f64) -> Result<Self> {
        let fx: Vec<Vec<f64>> = entries.iter().map(|e| e.fx.clone()).collect();
        let nondominated_mask = nondominated_filter(&fx, eps_dom)?;
        Ok(Self {
            entries,
            nondominated_mask,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Outcome vectors of the non-dominated entries.
    pub fn nondominated_points(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .zip(&self.nondominated_mask)
            .filter(|(_, &keep)| keep)
            .map(|(e, _)| e.fx.clone())
            .collect()
    }

    pub fn nondominated_count(&self) -> usize {
        self.nondominated_mask.iter().filter(|&&k| k).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub gd: f64,
    pub igd: f64,
    pub hv: f64,
    pub ni: usize,
}

/// GD, IGD and hypervolume of the non-dominated part of `approx`.
pub fn report(
    approx: &ParetoApproximation,
    reference: &ReferenceFront,
    ref_point: &[f64],
) -> Result<IndicatorReport> {
    let front = approx.nondominated_points();
    Ok(IndicatorReport {
        gd: gd(&front, &reference.points)?,
        igd: igd(&front, &reference.points)?,
        hv: hypervolume(&front, ref_point)?,
        ni: front.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop, prop_assert, prop_assert_eq, proptest, Strategy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pts(v: &[&[f64]]) -> Vec<Vec<f64>> {
        v.iter().map(|z| z.to_vec()).collect()
    }

    fn brute_force(points: &[Vec<f64>], eps: f64) -> Vec<bool> {
        points
            .iter()
            .map(|c| !points.iter().any(|a| dominates_unchecked(a, c, eps)))
            .collect()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 3.0], 1e-5).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[2.0, 1.0], 1e-5).unwrap());
        assert!(!dominates(&[2.0, 1.0], &[1.0, 2.0], 1e-5).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0 + 5e-6], 1e-5).unwrap());
        assert!(dominates(&[1.0, 2.0], &[1.0, 2.0 + 5e-6], 0.0).unwrap());
        assert!(dominates(&[1.0], &[1.0, 2.0], 0.0).is_err());
    }

    #[test]
    fn filter_examples() {
        assert_eq!(nondominated_filter(&pts(&[&[3.0, 3.0]]), 1e-5).unwrap(), vec![true]);
        let three = pts(&[&[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]]);
        assert_eq!(nondominated_filter(&three, 1e-5).unwrap(), vec![true, true, false]);
        assert!(nondominated_filter(&[], 1e-5).is_err());
        let dup = pts(&[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]]);
        assert_eq!(nondominated_filter(&dup, 1e-5).unwrap(), vec![true, true, false]);
    }

    fn random_set(rng: &mut ChaCha8Rng, n: usize, p: usize, coarse: bool) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| {
                (0..p)
                    .map(|_| {
                        let v: f64 = rng.random();
                        // coarse sets exercise exact ties and offsets near eps
                        if coarse { (v * 20.0).floor() * 1e-5 } else { v }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn filter_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..60 {
            let p = 2 + trial % 2;
            let n = 1 + rng.random_range(0..300);
            let set = random_set(&mut rng, n, p, trial % 3 == 0);
            for eps in [0.0, 1e-5] {
                assert_eq!(nondominated_filter(&set, eps).unwrap(), brute_force(&set, eps));
            }
        }
    }

    #[test]
    fn chunked_filter_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // points near the plane sum = 1 so that many survive
        let set: Vec<Vec<f64>> = (0..PARALLEL_FILTER_THRESHOLD + 500)
            .map(|_| {
                let a: f64 = rng.random();
                let b: f64 = rng.random::<f64>() * (1.0 - a);
                vec![a, b, 1.0 - a - b + 0.05 * rng.random::<f64>()]
            })
            .collect();
        assert_eq!(nondominated_filter(&set, 1e-5).unwrap(), brute_force(&set, 1e-5));
    }

    #[test]
    fn distance_indicators() {
        let reference = pts(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(gd(&reference, &reference).unwrap(), 0.0);
        assert_eq!(gd(&pts(&[&[1.0, 1.0]]), &reference).unwrap(), 1.0);
        let v = igd(&pts(&[&[0.0, 1.0]]), &reference).unwrap();
        assert!((v - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-15);
        assert!((v - 0.7071).abs() < 1e-4);
        assert_eq!(igd(&reference, &reference).unwrap(), 0.0);
        assert!(gd(&[], &reference).is_err());
        assert!(igd(&reference, &[]).is_err());
    }

    #[test]
    fn hypervolume_examples() {
        assert_eq!(hypervolume(&pts(&[&[0.0, 0.0]]), &[4.0, 2.0]).unwrap(), 8.0);
        assert_eq!(hypervolume(&pts(&[&[1.0, 0.0], &[0.0, 1.0]]), &[2.0, 2.0]).unwrap(), 3.0);
        assert_eq!(hypervolume(&pts(&[&[5.0, 1.0]]), &[4.0, 2.0]).unwrap(), 0.0);
        assert_eq!(hypervolume(&[], &[4.0, 2.0]).unwrap(), 0.0);
        let cube = hypervolume(&pts(&[&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]]), &[3.0, 3.0, 3.0]).unwrap();
        assert_eq!(cube, 8.0);
        assert!(matches!(
            hypervolume(&pts(&[&[0.0; 4]]), &[1.0; 4]),
            Err(Error::UnsupportedObjectives(4))
        ));
    }

    #[test]
    fn three_d_inclusion_exclusion() {
        // two overlapping boxes: 2*2*1 + 1*1*2 - 1*1*1
        let v = hypervolume(&pts(&[&[0.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]), &[2.0, 2.0, 2.0]).unwrap();
        assert!((v - 5.0).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (est, se) = hv_monte_carlo(&pts(&[&[0.0, 0.0]]), &[4.0, 2.0], &[0.0, 0.0], 1000, &mut rng).unwrap();
        assert_eq!((est, se), (8.0, 0.0));
        let (est, _) = hv_monte_carlo(&pts(&[&[5.0, 5.0]]), &[4.0, 2.0], &[0.0, 0.0], 1000, &mut rng).unwrap();
        assert_eq!(est, 0.0);
        assert!(hv_monte_carlo(&[], &[1.0, 1.0], &[2.0, 0.0], 10, &mut rng).is_err());
    }

    #[test]
    fn report_on_exact_reference() {
        let reference = crate::problems::schaffer1().reference_front(50).unwrap();
        let entries = reference
            .points
            .iter()
            .zip(&reference.decisions)
            .enumerate()
            .map(|(i, (z, x))| ApproxEntry {
                x: x.clone(),
                fx: z.clone(),
                origin: Origin::Particle,
                swarm: 0,
                index: i,
            })
            .collect();
        let approx = ParetoApproximation::new(entries, DEFAULT_EPS_DOM).unwrap();
        let r = report(&approx, &reference, &[4.0, 2.0]).unwrap();
        assert_eq!((r.gd, r.igd, r.ni), (0.0, 0.0, reference.len()));
        assert!(r.hv > 6.0 && r.hv < 8.0 - 4.0 / 3.0);
    }

    fn front_strategy(p: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(0.0f64..1.0, p), 1..40)
    }

    proptest! {
        #[test]
        fn hv_is_monotone(front in front_strategy(2), extra in prop::collection::vec(0.0f64..1.2, 2)) {
            let r = [1.0, 1.0];
            let base = hypervolume(&front, &r).unwrap();
            let mut more = front.clone();
            more.push(extra.clone());
            let grown = hypervolume(&more, &r).unwrap();
            prop_assert!(grown >= base - 1e-12);
            if front.iter().any(|z| z.iter().zip(&extra).all(|(a, b)| a <= b)) {
                prop_assert!((grown - base).abs() < 1e-12);
            }
        }

        #[test]
        fn hv_3d_reduces_to_2d(front in front_strategy(2), h in 0.0f64..0.9) {
            let flat: Vec<Vec<f64>> = front.iter().map(|z| vec![z[0], z[1], h]).collect();
            let v2 = hypervolume(&front, &[1.0, 1.0]).unwrap();
            let v3 = hypervolume(&flat, &[1.0, 1.0, 1.0]).unwrap();
            prop_assert!((v3 - v2 * (1.0 - h)).abs() < 1e-10);
            let unit: Vec<Vec<f64>> = front.iter().map(|z| vec![z[0], z[1], 0.0]).collect();
            prop_assert!((hypervolume(&unit, &[1.0, 1.0, 1.0]).unwrap() - v2).abs() < 1e-10);
        }

        #[test]
        fn filter_is_idempotent(front in front_strategy(3)) {
            let mask = nondominated_filter(&front, 1e-5).unwrap();
            prop_assert!(mask.iter().any(|&k| k));
            let kept: Vec<Vec<f64>> = front.iter().zip(&mask).filter(|(_, &k)| k).map(|(z, _)| z.clone()).collect();
            prop_assert!(nondominated_filter(&kept, 1e-5).unwrap().iter().all(|&k| k));
        }

        #[test]
        fn dominance_is_irreflexive_and_antisymmetric(
            a in prop::collection::vec(-1.0f64..1.0, 3),
            b in prop::collection::vec(-1.0f64..1.0, 3),
            eps in 0.0f64..0.1,
        ) {
            prop_assert!(!dominates(&a, &a, eps).unwrap());
            prop_assert!(!(dominates(&a, &b, eps).unwrap() && dominates(&b, &a, eps).unwrap()));
        }

        #[test]
        fn distance_indicators_ignore_order(
            front in front_strategy(2),
            reference in front_strategy(2),
        ) {
            let mut rev = front.clone();
            rev.reverse();
            prop_assert!((gd(&front, &reference).unwrap() - gd(&rev, &reference).unwrap()).abs() < 1e-12);
            prop_assert!((igd(&front, &reference).unwrap() - igd(&rev, &reference).unwrap()).abs() < 1e-12);
            prop_assert_eq!(igd(&front, &reference).unwrap(), gd(&reference, &front).unwrap());
        }
    }
}
