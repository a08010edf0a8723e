//! Weight vectors and weighted-sum scalarizations.
//!
//! Weights live either on the probability simplex ([`WeightVector`]) or as
//! unconstrained log-weights ([`MuVector`]); the two are related by an
//! elementwise logarithm and a softmax.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

const SIMPLEX_TOL: f64 = 1e-12;

/// Non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::EmptyInput("weight vector"));
        }
        if lambda.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
            return Err(Error::Domain(format!("weights must be non-negative: {lambda:?}")));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL * lambda.len() as f64 {
            return Err(Error::Domain(format!("weights must sum to 1, got {sum}")));
        }
        Ok(Self(lambda))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&l| l > 0.0)
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Unconstrained log-weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MuVector(Vec<f64>);

impl MuVector {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::EmptyInput("log-weight vector"));
        }
        if mu.iter().any(|m| !m.is_finite()) {
            return Err(Error::Domain(format!("log-weights must be finite: {mu:?}")));
        }
        Ok(Self(mu))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub fn weighted_sum(lambda: &WeightVector, fx: &[f64]) -> Result<f64> {
    check_len("weighted_sum", lambda.len(), fx.len())?;
    Ok(dot(lambda.as_slice(), fx))
}

/// `sum_i exp(mu_i) f_i / sum_i exp(mu_i)`, evaluated after shifting `mu`
/// by its maximum.
pub fn scalarized_cost_mu(mu: &MuVector, fx: &[f64]) -> Result<f64> {
    check_len("scalarized_cost_mu", mu.len(), fx.len())?;
    Ok(mu_cost(mu.as_slice(), fx))
}

pub fn lambda_from_mu(mu: &MuVector) -> WeightVector {
    let mut out = vec![0.0; mu.len()];
    softmax_into(mu.as_slice(), &mut out);
    WeightVector(out)
}

pub fn mu_from_lambda(lambda: &WeightVector) -> Result<MuVector> {
    if !lambda.is_interior() {
        return Err(Error::Domain(format!(
            "log-weights need strictly positive weights, got {:?}",
            lambda.as_slice()
        )));
    }
    Ok(MuVector(lambda.as_slice().iter().map(|l| l.ln()).collect()))
}

/// Cluster penalty `sum_l R_c exp(-|fx - f(v^l)| / r_c)` over the other
/// swarms' mean outcomes.
pub fn penalty_uniform<'a, I>(fx: &[f64], means_f: I, strength: f64, range: f64) -> Result<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    if !(range > 0.0) {
        return Err(Error::Domain(format!("penalty range must be positive, got {range}")));
    }
    if !(strength >= 0.0) {
        return Err(Error::Domain(format!("penalty strength must be non-negative, got {strength}")));
    }
    let mut total = 0.0;
    for m in means_f {
        check_len("penalty_uniform", fx.len(), m.len())?;
        total += strength * (-distance(fx, m) / range).exp();
    }
    Ok(total)
}

/// Uniform sample from the standard simplex by sorted-uniform spacings.
pub fn sample_simplex<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<WeightVector> {
    if p == 0 {
        return Err(Error::Domain("simplex dimension must be at least 1".into()));
    }
    let mut cuts: Vec<f64> = (0..p - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    Ok(spacings(&cuts))
}

/// Consecutive gaps of `0 <= cuts[0] <= ... <= 1` including both endpoints.
pub fn spacings(sorted_cuts: &[f64]) -> WeightVector {
    let mut out = Vec::with_capacity(sorted_cuts.len() + 1);
    let mut prev = 0.0;
    for &c in sorted_cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(1.0 - prev);
    WeightVector(out)
}

/// Biobjective weights whose first components are equally spaced on
/// `[eps, 1 - eps]`.
pub fn equidistant_weights(k: usize, eps: f64) -> Result<Vec<WeightVector>> {
    if k < 2 {
        return Err(Error::Domain(format!("need at least 2 swarms for equidistant weights, got {k}")));
    }
    if !(0.0..0.5).contains(&eps) {
        return Err(Error::Domain(format!("eps must lie in [0, 0.5), got {eps}")));
    }
    let step = (1.0 - 2.0 * eps) / (k - 1) as f64;
    Ok((0..k)
        .map(|i| {
            let first = if i == k - 1 { 1.0 - eps } else { eps + step * i as f64 };
            WeightVector(vec![first, 1.0 - first])
        })
        .collect())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn softmax_into(mu: &[f64], out: &mut [f64]) {
    let max = mu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &m) in out.iter_mut().zip(mu) {
        *o = (m - max).exp();
        sum += *o;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}

pub(crate) fn mu_cost(mu: &[f64], fx: &[f64]) -> f64 {
    let max = mu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for (&m, &f) in mu.iter().zip(fx) {
        let w = (m - max).exp();
        num += w * f;
        den += w;
    }
    num / den
}
