//! Benchmark multi-objective problems on box-shaped feasible sets.
//!
//! Every problem carries its box, its hypervolume reference point and an
//! evaluator. The four benchmark problems are available by lowercase name
//! through [`Problem::by_name`]; anything else can be built with
//! [`Problem::new`].

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::indicators::{nondominated_filter, DEFAULT_EPS_DOM};

/// Writes `f(x)` into the output slice. `x` has the problem's decision
/// dimension and the output slice the objective count.
pub type ObjectiveFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub struct Problem {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    n_obj: usize,
    hv_ref: Vec<f64>,
    objectives: ObjectiveFn,
    efficient_intervals: Option<Vec<(f64, f64)>>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("n_obj", &self.n_obj)
            .field("hv_ref", &self.hv_ref)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new<F>(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        hv_ref: Vec<f64>,
        objectives: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        if lower.is_empty() {
            return Err(Error::EmptyInput("problem bounds"));
        }
        check_len("problem upper bound", lower.len(), upper.len())?;
        if let Some(j) = (0..lower.len()).find(|&j| !(lower[j] <= upper[j])) {
            return Err(Error::Domain(format!(
                "lower bound {} exceeds upper bound {} in coordinate {j}",
                lower[j], upper[j]
            )));
        }
        if hv_ref.len() < 2 {
            return Err(Error::Domain(
                "a multi-objective problem needs at least two objectives".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            n_obj: hv_ref.len(),
            lower,
            upper,
            hv_ref,
            objectives: Arc::new(objectives),
            efficient_intervals: None,
        })
    }

    /// Declares the efficient set of a one-dimensional problem as a union of
    /// closed intervals, enabling the analytic reference front.
    pub fn with_efficient_intervals(mut self, intervals: Vec<(f64, f64)>) -> Result<Self> {
        if self.dim() != 1 {
            return Err(Error::Domain(
                "efficient intervals are only defined for one-dimensional problems".into(),
            ));
        }
        if intervals.is_empty() || intervals.iter().any(|&(a, b)| !(a <= b)) {
            return Err(Error::Domain("efficient intervals must be non-empty and ordered".into()));
        }
        self.efficient_intervals = Some(intervals);
        Ok(self)
    }

    /// Looks up a registered benchmark by its lowercase name.
    pub fn by_name(name: &str) -> Result<Self> {
        REGISTRY
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, build)| build())
            .ok_or_else(|| Error::UnknownProblem {
                name: name.to_string(),
                known: registered_names().iter().map(|s| s.to_string()).collect(),
            })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Decision-space dimension.
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Number of objectives.
    pub fn n_obj(&self) -> usize {
        self.n_obj
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Hypervolume reference point (upper corner of the outcome box).
    pub fn hv_ref(&self) -> &[f64] {
        &self.hv_ref
    }

    pub fn efficient_intervals(&self) -> Option<&[(f64, f64)]> {
        self.efficient_intervals.as_deref()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("evaluate", self.dim(), x.len())?;
        let mut out = vec![0.0; self.n_obj];
        (self.objectives)(x, &mut out);
        Ok(out)
    }

    /// Unchecked evaluation into a caller-owned buffer.
    pub(crate) fn evaluate_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.n_obj);
        (self.objectives)(x, out);
    }

    /// Euclidean projection onto the box, i.e. a component-wise clamp.
    pub fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("project", self.dim(), y.len())?;
        let mut out = y.to_vec();
        self.project_in_place(&mut out);
        Ok(out)
    }

    pub(crate) fn project_in_place(&self, y: &mut [f64]) {
        for ((v, &lo), &hi) in y.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(lo, hi);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Draws `n` i.i.d. uniform points from the box.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
        if n == 0 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        Ok((0..n)
            .map(|_| {
                self.lower
                    .iter()
                    .zip(&self.upper)
                    .map(|(&lo, &hi)| lo + (hi - lo) * rng.random::<f64>())
                    .collect()
            })
            .collect())
    }

    /// Grid resolution used for the reference front when none is given.
    pub fn default_reference_resolution(&self) -> usize {
        if self.dim() == 1 {
            2000
        } else {
            400
        }
    }

    /// Approximates the Pareto front, analytically when the efficient set is
    /// known and by a filtered uniform grid over the box otherwise.
    pub fn reference_front(&self, resolution: usize) -> Result<ReferenceFront> {
        if resolution < 2 {
            return Err(Error::Domain(format!(
                "reference resolution must be at least 2, got {resolution}"
            )));
        }
        let (decisions, source) = match &self.efficient_intervals {
            Some(intervals) => (sample_intervals(intervals, resolution), FrontSource::Analytic),
            None => (self.grid(resolution), FrontSource::GridOracle),
        };
        let objectives: Vec<Vec<f64>> = decisions
            .iter()
            .map(|x| {
                let mut out = vec![0.0; self.n_obj];
                self.evaluate_into(x, &mut out);
                out
            })
            .collect();
        let mask = nondominated_filter(&objectives, DEFAULT_EPS_DOM)?;

        let mut kept: Vec<(Vec<f64>, Vec<f64>)> = decisions
            .into_iter()
            .zip(objectives)
            .zip(mask)
            .filter_map(|(pair, keep)| keep.then_some(pair))
            .collect();
        kept.sort_by(|a, b| lex_cmp(&a.1, &b.1).then_with(|| lex_cmp(&a.0, &b.0)));
        kept.dedup_by(|a, b| a.1 == b.1);
        let (decisions, points) = kept.into_iter().unzip();
        Ok(ReferenceFront {
            points,
            decisions,
            source,
        })
    }

    fn grid(&self, resolution: usize) -> Vec<Vec<f64>> {
        let d = self.dim();
        let axes: Vec<Vec<f64>> = (0..d)
            .map(|j| linspace(self.lower[j], self.upper[j], resolution))
            .collect();
        let total = resolution.pow(d as u32);
        (0..total)
            .map(|mut idx| {
                let mut x = vec![0.0; d];
                for (j, axis) in axes.iter().enumerate() {
                    x[j] = axis[idx % resolution];
                    idx /= resolution;
                }
                x
            })
            .collect()
    }
}

/// Where the points of a [`ReferenceFront`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrontSource {
    Analytic,
    GridOracle,
}

/// A mutually non-dominated set of outcome vectors, sorted
/// lexicographically, together with the decisions that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFront {
    pub points: Vec<Vec<f64>>,
    pub decisions: Vec<Vec<f64>>,
    pub source: FrontSource,
}

impl ReferenceFront {
    /// Wraps an externally supplied point set (no decisions attached).
    pub fn from_points(mut points: Vec<Vec<f64>>) -> Self {
        points.sort_by(|a, b| lex_cmp(a, b));
        Self {
            points,
            decisions: Vec::new(),
            source: FrontSource::GridOracle,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// Equally spaced points along the concatenated intervals.
/// `n` equally spaced points along the concatenated intervals, plus every
/// interval endpoint so that boundary dominance is resolved exactly.
fn sample_intervals(intervals: &[(f64, f64)], n: usize) -> Vec<Vec<f64>> {
    let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    let endpoints = intervals.iter().flat_map(|&(a, b)| [vec![a], vec![b]]);
    linspace(0.0, total, n)
        .into_iter()
        .map(|mut s| {
            for (i, &(a, b)) in intervals.iter().enumerate() {
                let len = b - a;
                if s <= len || i == intervals.len() - 1 {
                    return vec![(a + s).min(b)];
                }
                s -= len;
            }
            unreachable!("intervals are non-empty")
        })
        .chain(endpoints)
        .collect()
}

type Builder = fn() -> Problem;

const REGISTRY: &[(&str, Builder)] = &[
    ("schaffer1", schaffer1),
    ("dent", dent),
    ("schaffer2", schaffer2),
    ("three", three),
];

pub fn registered_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

/// `f(x) = ((x-2)^2, x^2/2)` on `[0, 2]`; convex front.
pub fn schaffer1() -> Problem {
    Problem::new("schaffer1", vec![0.0], vec![2.0], vec![4.0, 2.0], |x, f| {
        f[0] = (x[0] - 2.0).powi(2);
        f[1] = 0.5 * x[0] * x[0];
    })
    .and_then(|p| p.with_efficient_intervals(vec![(0.0, 2.0)]))
    .expect("schaffer1 definition is valid")
}

/// Two-dimensional problem on `[-2, 2]^2` whose front has a non-convex dent.
pub fn dent() -> Problem {
    Problem::new(
        "dent",
        vec![-2.0, -2.0],
        vec![2.0, 2.0],
        vec![5.0, 5.0],
        |x, f| {
            let (s, d) = (x[0] + x[1], x[0] - x[1]);
            let base = 0.5 * ((1.0 + s * s).sqrt() + (1.0 + d * d).sqrt());
            let bump = 0.85 * (-d * d).exp();
            f[0] = base + 0.5 * d + bump;
            f[1] = base - 0.5 * d + bump;
        },
    )
    .expect("dent definition is valid")
}

/// Piecewise-linear first objective on `[-5, 10]`; disconnected front.
pub fn schaffer2() -> Problem {
    Problem::new("schaffer2", vec![-5.0], vec![10.0], vec![1.0, 16.0], |x, f| {
        let x = x[0];
        f[0] = if x <= 1.0 {
            -x
        } else if x <= 3.0 {
            x - 2.0
        } else if x <= 4.0 {
            4.0 - x
        } else {
            x - 4.0
        };
        f[1] = (x - 5.0).powi(2);
    })
    .and_then(|p| p.with_efficient_intervals(vec![(1.0, 2.0), (4.0, 5.0)]))
    .expect("schaffer2 definition is valid")
}

/// Three convex quadratics in two variables on `[-0.5, 3.5]^2`.
pub fn three() -> Problem {
    Problem::new(
        "three",
        vec![-0.5, -0.5],
        vec![3.5, 3.5],
        vec![25.0, 80.0, 50.0],
        |x, f| {
            let (a, b) = (x[0], x[1]);
            f[0] = 2.0 * (a - 1.0).powi(2) + 2.0 * (a - 1.0) * (b - 1.0) + 4.0 * (b - 1.0).powi(2);
            f[1] = (a - 2.0).powi(2) + 4.0 * (a - 2.0) * (b - 3.0) + 8.0 * (b - 3.0).powi(2);
            f[2] = 4.0 * a * a + 2.0 * a * b + b * b;
        },
    )
    .expect("three definition is valid")
}

/// `f(x) = (x^2 + 1, (x-1)^2/2 + 1)`, a strictly convex biobjective problem
/// whose weighted-sum minimizers are known in closed form, restricted to
/// `[-1, 2]`. Not part of the named registry.
pub fn biobjective_quadratic() -> Problem {
    Problem::new(
        "quadratic",
        vec![-1.0],
        vec![2.0],
        vec![5.0, 5.0],
        |x, f| {
            f[0] = x[0] * x[0] + 1.0;
            f[1] = 0.5 * (x[0] - 1.0).powi(2) + 1.0;
        },
    )
    .and_then(|p| p.with_efficient_intervals(vec![(0.0, 1.0)]))
    .expect("quadratic definition is valid")
}

/// Minimizer of `lambda f_1 + (1 - lambda) f_2` for [`biobjective_quadratic`].
pub fn quadratic_minimizer(lambda: f64) -> f64 {
    (1.0 - lambda) / (1.0 + lambda)
}
