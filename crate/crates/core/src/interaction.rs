//! Morse-type interaction kernels that drive the weight adaptation.
//!
//! The force between two swarms combines a term in the log-weight distance
//! `d = |mu^k - mu^l|` with a term in the distance `d_f` between the
//! outcomes of their consensus points. Both are directed along
//! `mu^k - mu^l`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalarize::MuVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    /// Repulsion strength in weight space.
    pub repulsion: f64,
    pub repulsion_range: f64,
    /// Attraction strength in weight space.
    pub attraction: f64,
    pub attraction_range: f64,
    /// Repulsion strength in objective space.
    pub obj_repulsion: f64,
    pub obj_repulsion_range: f64,
    /// Attraction strength in objective space.
    pub obj_attraction: f64,
    pub obj_attraction_range: f64,
}

impl Default for PotentialParams {
    /// Purely repulsive kernels with the standard benchmark strengths.
    fn default() -> Self {
        Self {
            repulsion: 0.001,
            repulsion_range: 0.01,
            attraction: 0.0,
            attraction_range: 1.0,
            obj_repulsion: 0.0001,
            obj_repulsion_range: 1.0,
            obj_attraction: 0.0,
            obj_attraction_range: 1.0,
        }
    }
}

impl PotentialParams {
    /// All strengths zero: no interaction at all.
    pub fn zero() -> Self {
        Self {
            repulsion: 0.0,
            attraction: 0.0,
            obj_repulsion: 0.0,
            obj_attraction: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let strengths = [
            ("repulsion", self.repulsion),
            ("attraction", self.attraction),
            ("obj_repulsion", self.obj_repulsion),
            ("obj_attraction", self.obj_attraction),
        ];
        for (name, v) in strengths {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be non-negative")));
            }
        }
        let ranges = [
            ("repulsion_range", self.repulsion_range),
            ("attraction_range", self.attraction_range),
            ("obj_repulsion_range", self.obj_repulsion_range),
            ("obj_attraction_range", self.obj_attraction_range),
        ];
        for (name, v) in ranges {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Upper bound on the magnitude of the exponential-kernel force.
    pub fn force_bound(&self) -> f64 {
        self.attraction / self.attraction_range
            + self.repulsion / self.repulsion_range
            + self.obj_attraction / self.obj_attraction_range
            + self.obj_repulsion / self.obj_repulsion_range
    }
}

/// Which radial profile the weight force uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// `e^{-d/r}` profiles; the force is bounded and direction-normalized.
    #[default]
    Exponential,
    /// `e^{-d^2/r}` profiles; the force is the gradient of a smooth potential.
    Smoothed,
}

fn non_negative(d: f64) -> Result<()> {
    if d >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("distance must be non-negative, got {d}")))
    }
}

/// `R e^{-d/r} - A e^{-d/a}`.
pub fn morse_potential(d: f64, rep: f64, att: f64, rep_range: f64, att_range: f64) -> Result<f64> {
    non_negative(d)?;
    Ok(rep * (-d / rep_range).exp() - att * (-d / att_range).exp())
}

/// `R e^{-d^2/r} - A e^{-d^2/a}`.
pub fn smoothed_potential(d: f64, rep: f64, att: f64, rep_range: f64, att_range: f64) -> Result<f64> {
    non_negative(d)?;
    let d2 = d * d;
    Ok(rep * (-d2 / rep_range).exp() - att * (-d2 / att_range).exp())
}

/// Scalar prefactor `u(d)` of the smoothed objective-space force.
pub fn force_prefactor_u(d: f64, params: &PotentialParams) -> f64 {
    let d2 = d * d;
    2.0 * params.obj_attraction / params.obj_attraction_range
        * (-d2 / params.obj_attraction_range).exp()
        - 2.0 * params.obj_repulsion / params.obj_repulsion_range
            * (-d2 / params.obj_repulsion_range).exp()
}

/// The stationary spacing: the root where `u` turns from repulsive
/// (negative) to attractive (positive), or `None` if it never does on
/// `(0, 10 max(sqrt a_f, sqrt r_f)]`.
pub fn d_min_root(params: &PotentialParams) -> Option<f64> {
    const SCAN: usize = 10_000;
    let d_max = 10.0 * params.obj_attraction_range.sqrt().max(params.obj_repulsion_range.sqrt());
    let u = |d: f64| force_prefactor_u(d, params);

    let mut prev = f64::MIN_POSITIVE;
    let mut u_prev = u(prev);
    for i in 1..=SCAN {
        let d = d_max * i as f64 / SCAN as f64;
        let u_d = u(d);
        if u_prev < 0.0 && u_d > 0.0 {
            let (mut lo, mut hi) = (prev, d);
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if u(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = d;
        u_prev = u_d;
    }
    None
}

/// Force exerted on swarm `k` by swarm `l` with the exponential kernel.
///
/// `d_kl` is the log-weight distance and `df_kl` the outcome distance of
/// the two consensus points. Coincident log-weights give the zero vector.
pub fn pairwise_force(
    mu_k: &MuVector,
    mu_l: &MuVector,
    d_kl: f64,
    df_kl: f64,
    params: &PotentialParams,
) -> Vec<f64> {
    let mut out = vec![0.0; mu_k.len()];
    add_force(Kernel::Exponential, mu_k.as_slice(), mu_l.as_slice(), df_kl, params, d_kl, 1.0, &mut out);
    out
}

/// Force on swarm `k` from swarm `l` with the smoothed kernel, i.e. the
/// gradient form `c(d, d_f) (mu^k - mu^l)`.
pub fn pairwise_force_smoothed(
    mu_k: &MuVector,
    mu_l: &MuVector,
    df_kl: f64,
    params: &PotentialParams,
) -> Vec<f64> {
    let mut out = vec![0.0; mu_k.len()];
    let d = crate::scalarize::distance(mu_k.as_slice(), mu_l.as_slice());
    add_force(Kernel::Smoothed, mu_k.as_slice(), mu_l.as_slice(), df_kl, params, d, 1.0, &mut out);
    out
}

/// Scalar coefficient multiplying the direction vector.
pub(crate) fn force_coefficient(kernel: Kernel, d: f64, df: f64, p: &PotentialParams) -> f64 {
    match kernel {
        Kernel::Exponential => {
            p.attraction / p.attraction_range * (-d / p.attraction_range).exp()
                - p.repulsion / p.repulsion_range * (-d / p.repulsion_range).exp()
                + p.obj_attraction / p.obj_attraction_range * (-df / p.obj_attraction_range).exp()
                - p.obj_repulsion / p.obj_repulsion_range * (-df / p.obj_repulsion_range).exp()
        }
        Kernel::Smoothed => {
            let d2 = d * d;
            2.0 * p.attraction / p.attraction_range * (-d2 / p.attraction_range).exp()
                - 2.0 * p.repulsion / p.repulsion_range * (-d2 / p.repulsion_range).exp()
                + force_prefactor_u(df, p)
        }
    }
}

/// Adds `scale * K(k, l)` to `out`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn add_force(
    kernel: Kernel,
    mu_k: &[f64],
    mu_l: &[f64],
    df: f64,
    params: &PotentialParams,
    d: f64,
    scale: f64,
    out: &mut [f64],
) {
    if d == 0.0 {
        return;
    }
    // df = inf (beyond the cutoff) switches the objective-space terms off
    let coef = force_coefficient(kernel, d, df, params);
    let norm = match kernel {
        Kernel::Exponential => d,
        Kernel::Smoothed => 1.0,
    };
    let c = scale * coef / norm;
    for ((o, a), b) in out.iter_mut().zip(mu_k).zip(mu_l) {
        *o += c * (a - b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mu(v: &[f64]) -> MuVector {
        MuVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn morse_examples() {
        assert_eq!(morse_potential(0.0, 0.7, 0.2, 0.5, 2.0).unwrap(), 0.7 - 0.2);
        let v = morse_potential(0.01, 0.001, 0.0, 0.01, 1.0).unwrap();
        assert!((v - 0.001 * (-1.0f64).exp()).abs() < 1e-18);
        assert!((v - 3.679e-4).abs() < 1e-7);
        for d in [0.0, 0.3, 5.0] {
            assert_eq!(morse_potential(d, 0.4, 0.4, 0.7, 0.7).unwrap(), 0.0);
        }
        assert!(morse_potential(-1.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn smoothed_examples() {
        assert!((smoothed_potential(0.0, 0.7, 0.2, 0.5, 2.0).unwrap() - 0.5).abs() < 1e-15);
        let r: f64 = 0.3;
        let v = smoothed_potential(r.sqrt(), 2.0, 0.0, r, 1.0).unwrap();
        assert!((v * std::f64::consts::E - 2.0).abs() < 1e-12);
        assert_eq!(
            smoothed_potential(0.0, 1.3, 0.4, 0.2, 0.9).unwrap(),
            morse_potential(0.0, 1.3, 0.4, 0.2, 0.9).unwrap()
        );
        assert!(smoothed_potential(-0.1, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    fn attracting() -> PotentialParams {
        PotentialParams {
            obj_attraction: 1.0,
            obj_repulsion: 1.0,
            obj_attraction_range: 2.0,
            obj_repulsion_range: 1.0,
            ..PotentialParams::default()
        }
    }

    #[test]
    fn prefactor_examples() {
        let repulsive = PotentialParams::default();
        for d in [0.0, 0.5, 1.0, 3.0] {
            assert!(force_prefactor_u(d, &repulsive) < 0.0);
        }
        let expected = (2.0 * 2f64.ln()).sqrt();
        assert!(force_prefactor_u(expected, &attracting()).abs() < 1e-14);
        assert!(force_prefactor_u(1e3, &attracting()).abs() < 1e-300);
    }

    #[test]
    fn d_min_examples() {
        let d = d_min_root(&attracting()).unwrap();
        assert!((d - 1.177410).abs() < 1e-6, "{d}");
        assert!((d - (2.0 * 2f64.ln()).sqrt()).abs() < 1e-9);
        assert!(force_prefactor_u(d, &attracting()).abs() <= 1e-8);
        let (below, above) = (force_prefactor_u(d - 1e-4, &attracting()), force_prefactor_u(d + 1e-4, &attracting()));
        assert!(below < 0.0 && above > 0.0);
        assert_eq!(d_min_root(&PotentialParams::default()), None);
    }

    #[test]
    fn single_repulsion_term() {
        let params = PotentialParams {
            repulsion: 1.0,
            repulsion_range: 1.0,
            ..PotentialParams::zero()
        };
        let f = pairwise_force(&mu(&[1.0, 0.0]), &mu(&[0.0, 0.0]), 1.0, 0.37, &params);
        assert!((f[0] + (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(f[1], 0.0);
    }

    #[test]
    fn zero_strengths_and_coincident_weights_give_no_force() {
        let f = pairwise_force(&mu(&[0.3, -1.0]), &mu(&[1.0, 2.0]), 3.2, 0.1, &PotentialParams::zero());
        assert!(f.iter().all(|&v| v == 0.0));
        let same = mu(&[0.2, 0.4]);
        let f = pairwise_force(&same, &same, 0.0, 0.0, &PotentialParams::default());
        assert!(f.iter().all(|&v| v == 0.0));
    }

    proptest! {
        #[test]
        fn force_is_antisymmetric_and_bounded(
            a in prop::collection::vec(-3.0f64..3.0, 3),
            b in prop::collection::vec(-3.0f64..3.0, 3),
            df in 0.0f64..5.0,
            rep in 0.0f64..2.0, att in 0.0f64..2.0,
            rr in 0.01f64..3.0, ar in 0.01f64..3.0,
        ) {
            let params = PotentialParams {
                repulsion: rep, attraction: att, repulsion_range: rr, attraction_range: ar,
                obj_repulsion: att, obj_attraction: rep, obj_repulsion_range: ar, obj_attraction_range: rr,
            };
            let (ma, mb) = (mu(&a), mu(&b));
            let d = crate::scalarize::distance(&a, &b);
            let fab = pairwise_force(&ma, &mb, d, df, &params);
            let fba = pairwise_force(&mb, &ma, d, df, &params);
            for (x, y) in fab.iter().zip(&fba) {
                prop_assert!((x + y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
            let norm = fab.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!(norm <= params.force_bound() * (1.0 + 1e-12));

            let sab = pairwise_force_smoothed(&ma, &mb, df, &params);
            let sba = pairwise_force_smoothed(&mb, &ma, df, &params);
            for (x, y) in sab.iter().zip(&sba) {
                prop_assert!((x + y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }
    }
}
