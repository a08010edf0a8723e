//! Multi-swarm consensus dynamics.
//!
//! Each swarm `k` minimizes its own weighted-sum scalarization. Particles
//! drift toward the swarm's softmin-weighted consensus point `v^k` and
//! diffuse proportionally to their distance from it; the result is
//! projected back onto the box after every Euler–Maruyama step.
//!
//! Three variants build on each other:
//!
//! * [`Variant::Fixed`]: weights stay put, anisotropic noise
//!   `sigma sqrt(tau) (X - v) W`.
//! * [`Variant::Adaptive`]: log-weights `mu^k` are pushed apart by the
//!   pairwise interaction force after every step.
//! * [`Variant::Full`]: additionally penalizes particles whose outcomes sit
//!   close to other swarms' consensus outcomes, and swaps the noise for the
//!   non-collapsing `sigma sqrt(tau |X - v|) W`.
//!
//! All cross-swarm reads inside one step (log-weights, consensus outcomes)
//! see the values from the start of the step, so swarms can be processed
//! in any order or in parallel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::indicators::{ApproxEntry, Origin, ParetoApproximation, DEFAULT_EPS_DOM};
use crate::interaction::{add_force, Kernel, PotentialParams};
use crate::noise;
use crate::problems::Problem;
use crate::scalarize::{
    distance, equidistant_weights, mu_cost, mu_from_lambda, sample_simplex, softmax_into,
    WeightVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Fixed,
    Adaptive,
    Full,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Fixed => "fixed",
            Variant::Adaptive => "adaptive",
            Variant::Full => "full",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Variant::Fixed),
            "adaptive" => Ok(Variant::Adaptive),
            "full" => Ok(Variant::Full),
            other => Err(Error::InvalidConfig(format!(
                "variant must be one of fixed, adaptive, full; got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightInit {
    /// Biobjective weights with first components equally spaced on
    /// `[eps, 1 - eps]`.
    Equidistant,
    /// Independent uniform draws from the simplex.
    SimplexUniform,
    /// One weight vector per swarm.
    Explicit(Vec<Vec<f64>>),
}

/// Which swarm pairs exchange weight forces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Neighborhood {
    #[default]
    AllPairs,
    /// Only swarms adjacent after sorting by the first weight component.
    Neighbors,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub swarms: usize,
    pub particles: usize,
    pub tau: f64,
    pub t_end: f64,
    /// Coefficient of the drift toward the consensus point.
    pub drift: f64,
    pub sigma: f64,
    pub alpha: f64,
    /// Weight of the cluster penalty in the consensus exponent.
    pub beta: f64,
    pub potential: PotentialParams,
    pub kernel: Kernel,
    pub neighborhood: Neighborhood,
    /// Objective-space interaction is switched off beyond this distance.
    pub cutoff: f64,
    /// Extra factor on the `tau / K` weight step.
    pub weight_scale: f64,
    pub penalty_strength: f64,
    pub penalty_range: f64,
    pub variant: Variant,
    pub seed: u64,
    pub weight_init: WeightInit,
    pub weight_eps: f64,
    pub eps_dom: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            swarms: 30,
            particles: 20,
            tau: 0.1,
            t_end: 5.0,
            drift: 1.0,
            sigma: 0.1,
            alpha: 100.0,
            beta: 10.0,
            potential: PotentialParams::default(),
            kernel: Kernel::Exponential,
            neighborhood: Neighborhood::AllPairs,
            cutoff: f64::INFINITY,
            weight_scale: 1.0,
            penalty_strength: 1.0,
            penalty_range: 0.1,
            variant: Variant::Full,
            seed: 0,
            weight_init: WeightInit::Equidistant,
            weight_eps: 0.001,
            eps_dom: DEFAULT_EPS_DOM,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.swarms == 0 {
            return fail("swarms must be at least 1");
        }
        if self.particles == 0 {
            return fail("particles must be at least 1");
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return fail("tau must be positive");
        }
        if !(self.t_end >= self.tau) || !self.t_end.is_finite() {
            return fail("t_end must be finite and at least tau");
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return fail("sigma must be non-negative");
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return fail("alpha must be positive");
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return fail("beta must be non-negative");
        }
        if !self.drift.is_finite() {
            return fail("drift must be finite");
        }
        if !(self.cutoff > 0.0) {
            return fail("cutoff must be positive");
        }
        if !self.weight_scale.is_finite() {
            return fail("weight_scale must be finite");
        }
        if !(self.penalty_strength >= 0.0) || !self.penalty_strength.is_finite() {
            return fail("penalty_strength must be non-negative");
        }
        if !(self.penalty_range > 0.0) || !self.penalty_range.is_finite() {
            return fail("penalty_range must be positive");
        }
        if !(self.weight_eps >= 0.0 && self.weight_eps < 0.5) {
            return fail("weight_eps must lie in [0, 0.5)");
        }
        if !(self.eps_dom >= 0.0) {
            return fail("eps_dom must be non-negative");
        }
        if let WeightInit::Explicit(ws) = &self.weight_init {
            if ws.len() != self.swarms {
                return Err(Error::InvalidConfig(format!(
                    "explicit weights list {} vectors for {} swarms",
                    ws.len(),
                    self.swarms
                )));
            }
        }
        self.potential.validate()
    }

    /// Number of Euler–Maruyama steps, `ceil(t_end / tau)` with a tolerance
    /// for floating-point noise in the ratio.
    pub fn n_steps(&self) -> usize {
        let ratio = self.t_end / self.tau;
        let nearest = ratio.round();
        if (ratio - nearest).abs() < 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            ratio.ceil() as usize
        }
    }

    fn initial_weights(&self, n_obj: usize) -> Result<Vec<WeightVector>> {
        let weights = match &self.weight_init {
            WeightInit::Equidistant => {
                if n_obj != 2 {
                    return Err(Error::InvalidConfig(format!(
                        "equidistant weights need 2 objectives, problem has {n_obj}"
                    )));
                }
                equidistant_weights(self.swarms, self.weight_eps)
                    .map_err(|e| Error::InvalidConfig(e.to_string()))?
            }
            WeightInit::SimplexUniform => {
                let mut rng = noise::init_rng(self.seed ^ 0x5EED_0F_5EED);
                (0..self.swarms)
                    .map(|_| loop {
                        let w = sample_simplex(n_obj, &mut rng)?;
                        if w.is_interior() {
                            break Ok(w);
                        }
                    })
                    .collect::<Result<_>>()?
            }
            WeightInit::Explicit(ws) => ws
                .iter()
                .map(|w| {
                    check_len("explicit weight vector", n_obj, w.len())?;
                    WeightVector::new(w.clone())
                })
                .collect::<Result<_>>()?,
        };
        Ok(weights)
    }
}

/// Positions, log-weights and cached consensus points of all swarms.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    swarms: usize,
    particles: usize,
    dim: usize,
    n_obj: usize,
    /// `swarms x particles x dim`, row-major.
    positions: Vec<f64>,
    /// Objective values of `positions`, `swarms x particles x n_obj`.
    values: Vec<f64>,
    /// `swarms x n_obj` log-weights.
    mu: Vec<f64>,
    /// `swarms x dim` consensus points.
    means: Vec<f64>,
    /// `swarms x n_obj` outcomes of the consensus points.
    means_f: Vec<f64>,
    t: f64,
    step: usize,
}

impl SwarmState {
    /// Uniform positions on the box and weights per `cfg.weight_init`.
    pub fn initialize(problem: &Problem, cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let weights = cfg.initial_weights(problem.n_obj())?;
        let mut rng = noise::init_rng(cfg.seed);
        let positions: Vec<Vec<Vec<f64>>> = (0..cfg.swarms)
            .map(|_| problem.sample_uniform(cfg.particles, &mut rng))
            .collect::<Result<_>>()?;
        Self::from_parts(problem, cfg, &positions, &weights)
    }

    /// Builds a state from explicit per-swarm particle lists and weights.
    /// Positions are projected onto the box.
    pub fn from_parts(
        problem: &Problem,
        cfg: &RunConfig,
        positions: &[Vec<Vec<f64>>],
        weights: &[WeightVector],
    ) -> Result<Self> {
        let (dim, n_obj) = (problem.dim(), problem.n_obj());
        check_len("swarm count", positions.len(), weights.len())?;
        if positions.is_empty() {
            return Err(Error::EmptyInput("swarms"));
        }
        let particles = positions[0].len();
        if particles == 0 {
            return Err(Error::EmptyInput("particles"));
        }
        let mut flat = Vec::with_capacity(positions.len() * particles * dim);
        for swarm in positions {
            check_len("particles per swarm", particles, swarm.len())?;
            for x in swarm {
                flat.extend(problem.project(x)?);
            }
        }
        let mut mu = Vec::with_capacity(weights.len() * n_obj);
        for w in weights {
            check_len("weight vector", n_obj, w.len())?;
            mu.extend(mu_from_lambda(w)?.into_inner());
        }
        let swarms = positions.len();
        let mut state = Self {
            swarms,
            particles,
            dim,
            n_obj,
            values: vec![0.0; flat.len() / dim * n_obj],
            positions: flat,
            mu,
            means: vec![0.0; swarms * dim],
            means_f: vec![0.0; swarms * n_obj],
            t: 0.0,
            step: 0,
        };
        state.evaluate_particles(problem);
        // no consensus outcomes exist yet, so the first caches are unpenalized
        state.refresh_means(problem, cfg, None);
        Ok(state)
    }

    pub fn swarms(&self) -> usize {
        self.swarms
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_obj(&self) -> usize {
        self.n_obj
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn step_count(&self) -> usize {
        self.step
    }

    /// All particles of swarm `k`, flattened `particles x dim`.
    pub fn swarm_positions(&self, k: usize) -> &[f64] {
        let n = self.particles * self.dim;
        &self.positions[k * n..(k + 1) * n]
    }

    pub fn position(&self, k: usize, j: usize) -> &[f64] {
        let start = (k * self.particles + j) * self.dim;
        &self.positions[start..start + self.dim]
    }

    /// Objective values of particle `j` in swarm `k`.
    pub fn value(&self, k: usize, j: usize) -> &[f64] {
        let start = (k * self.particles + j) * self.n_obj;
        &self.values[start..start + self.n_obj]
    }

    pub fn mu(&self, k: usize) -> &[f64] {
        &self.mu[k * self.n_obj..(k + 1) * self.n_obj]
    }

    pub fn lambda(&self, k: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n_obj];
        softmax_into(self.mu(k), &mut out);
        out
    }

    pub fn mean(&self, k: usize) -> &[f64] {
        &self.means[k * self.dim..(k + 1) * self.dim]
    }

    pub fn mean_f(&self, k: usize) -> &[f64] {
        &self.means_f[k * self.n_obj..(k + 1) * self.n_obj]
    }

    /// Sum of all log-weight vectors.
    pub fn mu_sum(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_obj];
        for k in 0..self.swarms {
            for (o, m) in out.iter_mut().zip(self.mu(k)) {
                *o += m;
            }
        }
        out
    }

    fn check_problem(&self, problem: &Problem) -> Result<()> {
        check_len("state decision dimension", problem.dim(), self.dim)?;
        check_len("state objective count", problem.n_obj(), self.n_obj)
    }

    fn evaluate_particles(&mut self, problem: &Problem) {
        let (d, p) = (self.dim, self.n_obj);
        self.values
            .par_chunks_mut(p)
            .zip(self.positions.par_chunks(d))
            .for_each(|(out, x)| problem.evaluate_into(x, out));
    }

    /// Recomputes every consensus point from the current positions and
    /// log-weights. `targets` are the consensus outcomes to penalize
    /// against, or `None` for the plain weighted mean.
    fn refresh_means(&mut self, problem: &Problem, cfg: &RunConfig, targets: Option<&[f64]>) {
        let ctx = self.context(cfg, targets);
        let means: Vec<Vec<f64>> = (0..self.swarms)
            .into_par_iter()
            .map(|k| ctx.consensus(k, self.swarm_positions(k), self.swarm_values(k), self.mu(k)))
            .collect();
        for (k, m) in means.into_iter().enumerate() {
            self.means[k * self.dim..(k + 1) * self.dim].copy_from_slice(&m);
            problem.evaluate_into(&m, &mut self.means_f[k * self.n_obj..(k + 1) * self.n_obj]);
        }
    }

    fn swarm_values(&self, k: usize) -> &[f64] {
        let n = self.particles * self.n_obj;
        &self.values[k * n..(k + 1) * n]
    }

    fn context<'a>(&self, cfg: &'a RunConfig, targets: Option<&'a [f64]>) -> ConsensusContext<'a> {
        ConsensusContext {
            cfg,
            dim: self.dim,
            n_obj: self.n_obj,
            swarms: self.swarms,
            targets,
        }
    }
}

/// Everything needed to compute one swarm's consensus point.
struct ConsensusContext<'a> {
    cfg: &'a RunConfig,
    dim: usize,
    n_obj: usize,
    swarms: usize,
    targets: Option<&'a [f64]>,
}

impl ConsensusContext<'_> {
    fn penalty(&self, k: usize, fx: &[f64], targets: &[f64]) -> f64 {
        let p = self.n_obj;
        (0..self.swarms)
            .filter(|&l| l != k)
            .map(|l| {
                let d = distance(fx, &targets[l * p..(l + 1) * p]);
                self.cfg.penalty_strength * (-d / self.cfg.penalty_range).exp()
            })
            .sum()
    }

    fn consensus(&self, k: usize, xs: &[f64], values: &[f64], mu: &[f64]) -> Vec<f64> {
        let (d, p) = (self.dim, self.n_obj);
        let exponents: Vec<f64> = values
            .chunks(p)
            .map(|fx| {
                let mut e = -self.cfg.alpha * mu_cost(mu, fx);
                if let Some(targets) = self.targets {
                    if self.cfg.beta > 0.0 {
                        e -= self.cfg.beta * self.penalty(k, fx, targets);
                    }
                }
                e
            })
            .collect();
        let mut out = vec![0.0; d];
        softmin_mean(xs, d, &exponents, &mut out);
        out
    }
}

/// `sum_j x_j e^{s_j} / sum_j e^{s_j}`, shifted so the largest weight is 1.
fn softmin_mean(xs: &[f64], dim: usize, exponents: &[f64], out: &mut [f64]) {
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.iter_mut().for_each(|o| *o = 0.0);
    let mut total = 0.0;
    for (x, &s) in xs.chunks(dim).zip(exponents) {
        let w = (s - max).exp();
        total += w;
        for (o, v) in out.iter_mut().zip(x) {
            *o += w * v;
        }
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}

fn check_positions(positions: &[f64], dim: usize, n: usize) -> Result<()> {
    if dim == 0 || n == 0 {
        return Err(Error::EmptyInput("weighted mean"));
    }
    check_len("weighted mean positions", n * dim, positions.len())
}

/// Consensus point `sum_j x_j e^{-alpha c_j} / sum_j e^{-alpha c_j}` of
/// `positions` (flattened `n x dim`).
pub fn weighted_mean(positions: &[f64], dim: usize, costs: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_positions(positions, dim, costs.len())?;
    let exponents: Vec<f64> = costs.iter().map(|c| -alpha * c).collect();
    let mut out = vec![0.0; dim];
    softmin_mean(positions, dim, &exponents, &mut out);
    Ok(out)
}

/// Consensus point with each weight further scaled by `e^{-beta p_j}`.
pub fn weighted_mean_penalized(
    positions: &[f64],
    dim: usize,
    costs: &[f64],
    penalties: &[f64],
    alpha: f64,
    beta: f64,
) -> Result<Vec<f64>> {
    check_positions(positions, dim, costs.len())?;
    check_len("penalties", costs.len(), penalties.len())?;
    let exponents: Vec<f64> = costs
        .iter()
        .zip(penalties)
        .map(|(c, p)| -alpha * c - beta * p)
        .collect();
    let mut out = vec![0.0; dim];
    softmin_mean(positions, dim, &exponents, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NoiseModel {
    /// `sigma sqrt(tau) (X - v)_i W_i`
    Anisotropic,
    /// `sigma sqrt(tau |X - v|_i) W_i`
    Sampling,
}

#[derive(Debug, Clone, Copy)]
struct StepMode {
    adapt_weights: bool,
    penalize: bool,
    noise: NoiseModel,
}

impl From<Variant> for StepMode {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Fixed => StepMode {
                adapt_weights: false,
                penalize: false,
                noise: NoiseModel::Anisotropic,
            },
            Variant::Adaptive => StepMode {
                adapt_weights: true,
                penalize: false,
                noise: NoiseModel::Anisotropic,
            },
            Variant::Full => StepMode {
                adapt_weights: true,
                penalize: true,
                noise: NoiseModel::Sampling,
            },
        }
    }
}

fn require_variant(cfg: &RunConfig, expected: Variant) -> Result<()> {
    if cfg.variant == expected {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "{} step called with variant {}",
            expected.as_str(),
            cfg.variant.as_str()
        )))
    }
}

/// One step with fixed weights.
pub fn step_fixed(state: &mut SwarmState, problem: &Problem, cfg: &RunConfig) -> Result<()> {
    require_variant(cfg, Variant::Fixed)?;
    advance(state, problem, cfg, Variant::Fixed.into())
}

/// One step with adaptive weights.
pub fn step_adaptive(state: &mut SwarmState, problem: &Problem, cfg: &RunConfig) -> Result<()> {
    require_variant(cfg, Variant::Adaptive)?;
    advance(state, problem, cfg, Variant::Adaptive.into())
}

/// One step with adaptive weights, cluster penalty and sampling noise.
pub fn step_full(state: &mut SwarmState, problem: &Problem, cfg: &RunConfig) -> Result<()> {
    require_variant(cfg, Variant::Full)?;
    advance(state, problem, cfg, Variant::Full.into())
}

/// One step of whichever variant `cfg` selects.
pub fn step(state: &mut SwarmState, problem: &Problem, cfg: &RunConfig) -> Result<()> {
    advance(state, problem, cfg, cfg.variant.into())
}

fn advance(state: &mut SwarmState, problem: &Problem, cfg: &RunConfig, mode: StepMode) -> Result<()> {
    state.check_problem(problem)?;
    check_len("swarm count", cfg.swarms, state.swarms)?;
    check_len("particles per swarm", cfg.particles, state.particles)?;

    let mu_snapshot = state.mu.clone();
    let targets_snapshot = state.means_f.clone();
    let targets = mode.penalize.then_some(targets_snapshot.as_slice());
    let (d, p, n) = (state.dim, state.n_obj, state.particles);
    let step_index = state.step;

    let ctx = state.context(cfg, targets);
    let drift = cfg.tau * cfg.drift;
    let sqrt_tau = cfg.tau.sqrt();
    let values = &state.values;
    state
        .positions
        .par_chunks_mut(n * d)
        .enumerate()
        .for_each(|(k, xs)| {
            let swarm_values = &values[k * n * p..(k + 1) * n * p];
            let v = ctx.consensus(k, xs, swarm_values, &mu_snapshot[k * p..(k + 1) * p]);
            let mut w = vec![0.0; d];
            for (j, x) in xs.chunks_mut(d).enumerate() {
                noise::fill_normals(cfg.seed, step_index, k, j, &mut w);
                for i in 0..d {
                    let dev = x[i] - v[i];
                    let diffusion = match mode.noise {
                        NoiseModel::Anisotropic => cfg.sigma * sqrt_tau * dev,
                        NoiseModel::Sampling => cfg.sigma * (cfg.tau * dev.abs()).sqrt(),
                    };
                    x[i] += -drift * dev + diffusion * w[i];
                }
                problem.project_in_place(x);
            }
        });

    if mode.adapt_weights {
        update_weights(state, cfg, &mu_snapshot, &targets_snapshot);
    }

    state.evaluate_particles(problem);
    state.refresh_means(problem, cfg, targets);
    state.step += 1;
    state.t = state.step as f64 * cfg.tau;
    Ok(())
}

/// Explicit update `mu^k -= (tau / K) scale sum_l K(k, l)` from snapshots.
fn update_weights(state: &mut SwarmState, cfg: &RunConfig, mu: &[f64], means_f: &[f64]) {
    let (swarms, p) = (state.swarms, state.n_obj);
    if swarms < 2 {
        return;
    }
    let row = |k: usize| &mu[k * p..(k + 1) * p];
    let partners: Vec<Vec<usize>> = match cfg.neighborhood {
        Neighborhood::AllPairs => (0..swarms)
            .map(|k| (0..swarms).filter(|&l| l != k).collect())
            .collect(),
        Neighborhood::Neighbors => {
            let first = |k: usize| {
                let mut lam = vec![0.0; p];
                softmax_into(row(k), &mut lam);
                lam[0]
            };
            let mut order: Vec<usize> = (0..swarms).collect();
            order.sort_by(|&a, &b| first(a).total_cmp(&first(b)).then(a.cmp(&b)));
            let mut partners = vec![Vec::new(); swarms];
            for pair in order.windows(2) {
                partners[pair[0]].push(pair[1]);
                partners[pair[1]].push(pair[0]);
            }
            partners
        }
    };

    let scale = -cfg.tau / swarms as f64 * cfg.weight_scale;
    for k in 0..swarms {
        let mut force = vec![0.0; p];
        for &l in &partners[k] {
            let d = distance(row(k), row(l));
            let mut df = distance(&means_f[k * p..(k + 1) * p], &means_f[l * p..(l + 1) * p]);
            if df >= cfg.cutoff {
                df = f64::INFINITY;
            }
            add_force(cfg.kernel, row(k), row(l), df, &cfg.potential, d, 1.0, &mut force);
        }
        for (m, f) in state.mu[k * p..(k + 1) * p].iter_mut().zip(&force) {
            *m += scale * f;
        }
    }
}

/// Empirical swarm statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Mean position per swarm.
    pub expectation: Vec<Vec<f64>>,
    /// Mean Euclidean deviation from the mean position.
    pub deviation: Vec<f64>,
    /// Mean of `e^{-alpha f_mu(x)}` over the swarm.
    pub laplace_mass: Vec<f64>,
    /// Distances between consensus outcomes.
    pub pairwise_df: Vec<Vec<f64>>,
}

pub fn diagnostics(state: &SwarmState, alpha: f64) -> Diagnostics {
    let (d, p, n) = (state.dim, state.n_obj, state.particles);
    let mut expectation = Vec::with_capacity(state.swarms);
    let mut deviation = Vec::with_capacity(state.swarms);
    let mut laplace_mass = Vec::with_capacity(state.swarms);
    for k in 0..state.swarms {
        let xs = state.swarm_positions(k);
        let mut e = vec![0.0; d];
        for x in xs.chunks(d) {
            for (a, v) in e.iter_mut().zip(x) {
                *a += v;
            }
        }
        e.iter_mut().for_each(|a| *a /= n as f64);
        let v = xs.chunks(d).map(|x| distance(x, &e)).sum::<f64>() / n as f64;
        let mu = state.mu(k);
        let m = state
            .swarm_values(k)
            .chunks(p)
            .map(|fx| (-alpha * mu_cost(mu, fx)).exp())
            .sum::<f64>()
            / n as f64;
        expectation.push(e);
        deviation.push(v);
        laplace_mass.push(m);
    }
    let pairwise_df = (0..state.swarms)
        .map(|k| {
            (0..state.swarms)
                .map(|l| distance(state.mean_f(k), state.mean_f(l)))
                .collect()
        })
        .collect();
    Diagnostics {
        expectation,
        deviation,
        laplace_mass,
        pairwise_df,
    }
}

/// Snapshot taken after each step (and once before the first).
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    /// Weight vector per swarm.
    pub lambda: Vec<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl StepRecord {
    fn capture(state: &SwarmState, alpha: f64) -> Self {
        Self {
            step: state.step,
            t: state.t,
            lambda: (0..state.swarms).map(|k| state.lambda(k)).collect(),
            diagnostics: diagnostics(state, alpha),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub state: SwarmState,
    pub trace: Vec<StepRecord>,
    pub approximation: ParetoApproximation,
}

/// Runs the selected variant from uniform initial positions for
/// [`RunConfig::n_steps`] steps.
pub fn run(problem: &Problem, cfg: &RunConfig) -> Result<RunOutput> {
    let state = SwarmState::initialize(problem, cfg)?;
    run_from(state, problem, cfg)
}

/// Like [`run`], starting from a prepared state.
pub fn run_from(mut state: SwarmState, problem: &Problem, cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let steps = cfg.n_steps();
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(StepRecord::capture(&state, cfg.alpha));
    for _ in 0..steps {
        step(&mut state, problem, cfg)?;
        trace.push(StepRecord::capture(&state, cfg.alpha));
    }
    let approximation = approximation(&state, cfg.eps_dom)?;
    Ok(RunOutput {
        state,
        trace,
        approximation,
    })
}

/// All particles followed by all consensus points, with dominance flags.
pub fn approximation(state: &SwarmState, eps_dom: f64) -> Result<ParetoApproximation> {
    let mut entries = Vec::with_capacity(state.swarms * (state.particles + 1));
    for k in 0..state.swarms {
        for j in 0..state.particles {
            entries.push(ApproxEntry {
                x: state.position(k, j).to_vec(),
                fx: state.value(k, j).to_vec(),
                origin: Origin::Particle,
                swarm: k,
                index: j,
            });
        }
    }
    for k in 0..state.swarms {
        entries.push(ApproxEntry {
            x: state.mean(k).to_vec(),
            fx: state.mean_f(k).to_vec(),
            origin: Origin::Mean,
            swarm: k,
            index: 0,
        });
    }
    ParetoApproximation::new(entries, eps_dom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{schaffer1, three};

    fn cfg(variant: Variant) -> RunConfig {
        RunConfig {
            variant,
            swarms: 4,
            particles: 6,
            t_end: 1.0,
            ..RunConfig::default()
        }
    }

    fn weights(ls: &[f64]) -> Vec<WeightVector> {
        ls.iter().map(|&l| WeightVector::new(vec![l, 1.0 - l]).unwrap()).collect()
    }

    #[test]
    fn weighted_mean_examples() {
        assert_eq!(weighted_mean(&[0.3, 0.7], 2, &[5.0], 100.0).unwrap(), vec![0.3, 0.7]);
        let m = weighted_mean(&[0.0, 1.0, 2.0], 1, &[3.0, 1.0, 9.0], 0.0).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-15);
        let m = weighted_mean(&[0.0, 1.0], 1, &[1.0, 2.0], 1e3).unwrap();
        assert!(m[0].abs() < 1e-3);
        // large costs do not underflow to 0/0
        let m = weighted_mean(&[0.0, 1.0], 1, &[1e6, 1e6 + 1.0], 100.0).unwrap();
        assert!(m[0].is_finite());
        assert!(weighted_mean(&[0.0, 1.0], 1, &[1.0], 1.0).is_err());
    }

    #[test]
    fn penalized_mean_examples() {
        let xs = [0.0, 0.5, 1.0, 3.0];
        let costs = [0.4, 0.1, 0.3, 0.2];
        let plain = weighted_mean(&xs, 1, &costs, 7.0).unwrap();
        let pen = weighted_mean_penalized(&xs, 1, &costs, &[1.0, 2.0, 3.0, 4.0], 7.0, 0.0).unwrap();
        assert_eq!(plain, pen);

        let m = weighted_mean_penalized(&[0.0, 1.0], 1, &[1.0, 1.0], &[0.0, 50.0], 1.0, 10.0).unwrap();
        assert!(m[0] < 1e-12);

        let pens = [0.2, 0.9, 0.1, 0.5];
        let shifted: Vec<f64> = pens.iter().map(|p| p + 3.7).collect();
        let a = weighted_mean_penalized(&xs, 1, &costs, &pens, 7.0, 2.0).unwrap();
        let b = weighted_mean_penalized(&xs, 1, &costs, &shifted, 7.0, 2.0).unwrap();
        assert!((a[0] - b[0]).abs() < 1e-10);
    }

    #[test]
    fn step_count_rounding() {
        let c = RunConfig::default();
        assert_eq!(c.n_steps(), 50);
        let c = RunConfig { t_end: 0.1, ..RunConfig::default() };
        assert_eq!(c.n_steps(), 1);
        let c = RunConfig { t_end: 37.0 * 0.1, ..RunConfig::default() };
        assert_eq!(c.n_steps(), 37);
        let c = RunConfig { t_end: 0.25, ..RunConfig::default() };
        assert_eq!(c.n_steps(), 3);
    }

    #[test]
    fn coincident_swarm_is_a_fixed_point() {
        let p = schaffer1();
        let c = RunConfig {
            sigma: 0.0,
            ..cfg(Variant::Fixed)
        };
        let pos = vec![vec![vec![0.7]; 6]; 4];
        let mut s = SwarmState::from_parts(&p, &c, &pos, &weights(&[0.2, 0.4, 0.6, 0.8])).unwrap();
        step_fixed(&mut s, &p, &c).unwrap();
        for k in 0..4 {
            assert!(s.swarm_positions(k).iter().all(|&x| (x - 0.7).abs() < 1e-15));
        }
    }

    #[test]
    fn single_particle_is_stationary() {
        let p = schaffer1();
        let c = RunConfig {
            sigma: 0.0,
            swarms: 1,
            particles: 1,
            ..cfg(Variant::Fixed)
        };
        let mut s = SwarmState::from_parts(&p, &c, &[vec![vec![1.3]]], &weights(&[0.3])).unwrap();
        for _ in 0..5 {
            step_fixed(&mut s, &p, &c).unwrap();
        }
        assert_eq!(s.position(0, 0), &[1.3]);
    }

    #[test]
    fn full_relaxation_jumps_to_consensus() {
        let p = schaffer1();
        let c = RunConfig {
            sigma: 0.0,
            swarms: 2,
            drift: 10.0,
            ..cfg(Variant::Fixed)
        };
        let pos = vec![
            vec![vec![0.1], vec![0.5], vec![0.9], vec![1.2], vec![1.6], vec![1.9]],
            vec![vec![0.0], vec![0.4], vec![0.8], vec![1.0], vec![1.5], vec![2.0]],
        ];
        let mut s = SwarmState::from_parts(&p, &c, &pos, &weights(&[0.3, 0.8])).unwrap();
        let before: Vec<f64> = (0..2).map(|k| s.mean(k)[0]).collect();
        step_fixed(&mut s, &p, &c).unwrap();
        for (k, v) in before.iter().enumerate() {
            assert!(s.swarm_positions(k).iter().all(|x| (x - v).abs() < 1e-14));
        }
    }

    #[test]
    fn steps_reject_wrong_variant() {
        let p = schaffer1();
        let c = cfg(Variant::Full);
        let mut s = SwarmState::initialize(&p, &c).unwrap();
        assert!(step_fixed(&mut s, &p, &c).is_err());
        assert!(step_adaptive(&mut s, &p, &c).is_err());
        assert!(step_full(&mut s, &p, &c).is_ok());
        assert!(step_full(&mut s, &three(), &c).is_err());
    }

    #[test]
    fn zero_potential_keeps_weights_and_matches_fixed() {
        let p = schaffer1();
        let adaptive = RunConfig {
            potential: PotentialParams::zero(),
            ..cfg(Variant::Adaptive)
        };
        let fixed = RunConfig {
            variant: Variant::Fixed,
            ..adaptive.clone()
        };
        let mut a = SwarmState::initialize(&p, &adaptive).unwrap();
        let mut b = a.clone();
        for _ in 0..5 {
            step_adaptive(&mut a, &p, &adaptive).unwrap();
            step_fixed(&mut b, &p, &fixed).unwrap();
        }
        assert_eq!(a, b);
    }

    #[test]
    fn single_swarm_has_constant_weights() {
        let p = schaffer1();
        let c = RunConfig {
            swarms: 1,
            weight_init: WeightInit::Explicit(vec![vec![0.4, 0.6]]),
            ..cfg(Variant::Full)
        };
        let mut s = SwarmState::initialize(&p, &c).unwrap();
        let mu0 = s.mu(0).to_vec();
        // with a single swarm the penalty is empty and the mean is plain
        let plain = {
            let costs: Vec<f64> = (0..c.particles).map(|j| mu_cost(&mu0, s.value(0, j))).collect();
            weighted_mean(s.swarm_positions(0), 1, &costs, c.alpha).unwrap()
        };
        assert_eq!(s.mean(0), plain.as_slice());
        for _ in 0..4 {
            step_full(&mut s, &p, &c).unwrap();
        }
        assert_eq!(s.mu(0), mu0.as_slice());
    }

    #[test]
    fn weight_sum_is_conserved() {
        let p = schaffer1();
        for neighborhood in [Neighborhood::AllPairs, Neighborhood::Neighbors] {
            let c = RunConfig {
                swarms: 2,
                potential: PotentialParams {
                    repulsion: 0.5,
                    repulsion_range: 1.0,
                    obj_attraction: 0.3,
                    ..PotentialParams::default()
                },
                neighborhood,
                ..cfg(Variant::Adaptive)
            };
            let mut s = SwarmState::initialize(&p, &c).unwrap();
            let before = s.mu_sum();
            let mu0 = s.mu(0).to_vec();
            for _ in 0..10 {
                step_adaptive(&mut s, &p, &c).unwrap();
            }
            assert_ne!(s.mu(0), mu0.as_slice());
            for (a, b) in s.mu_sum().iter().zip(&before) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn particle_on_consensus_point_does_not_move() {
        let p = schaffer1();
        let c = RunConfig {
            swarms: 1,
            particles: 1,
            beta: 0.0,
            weight_init: WeightInit::Explicit(vec![vec![0.5, 0.5]]),
            ..cfg(Variant::Full)
        };
        let mut s = SwarmState::initialize(&p, &c).unwrap();
        let x0 = s.position(0, 0).to_vec();
        step_full(&mut s, &p, &c).unwrap();
        assert_eq!(s.position(0, 0), x0.as_slice());
    }

    #[test]
    fn caches_match_formula_after_steps() {
        let p = schaffer1();
        let c = cfg(Variant::Adaptive);
        let mut s = SwarmState::initialize(&p, &c).unwrap();
        for _ in 0..3 {
            step_adaptive(&mut s, &p, &c).unwrap();
        }
        for k in 0..c.swarms {
            let costs: Vec<f64> = (0..c.particles).map(|j| mu_cost(s.mu(k), s.value(k, j))).collect();
            let v = weighted_mean(s.swarm_positions(k), 1, &costs, c.alpha).unwrap();
            assert!((v[0] - s.mean(k)[0]).abs() < 1e-10);
            assert_eq!(s.mean_f(k), p.evaluate(s.mean(k)).unwrap().as_slice());
            for j in 0..c.particles {
                assert_eq!(s.value(k, j), p.evaluate(s.position(k, j)).unwrap().as_slice());
            }
        }
    }

    #[test]
    fn diagnostics_examples() {
        let p = schaffer1();
        let c = RunConfig {
            swarms: 2,
            ..cfg(Variant::Fixed)
        };
        let pos = vec![vec![vec![0.0]; 6], vec![vec![2.0]; 6]];
        let s = SwarmState::from_parts(&p, &c, &pos, &weights(&[0.3, 0.7])).unwrap();
        let diag = diagnostics(&s, c.alpha);
        assert_eq!(diag.deviation, vec![0.0, 0.0]);
        assert_eq!(s.mean_f(0), &[4.0, 0.0]);
        assert_eq!(s.mean_f(1), &[0.0, 2.0]);
        assert!((diag.pairwise_df[0][1] - 20f64.sqrt()).abs() < 1e-12);
        assert!((diag.pairwise_df[0][1] - 4.4721).abs() < 1e-4);
        assert_eq!(diag.pairwise_df[0][1], diag.pairwise_df[1][0]);
        assert_eq!(diag.pairwise_df[0][0], 0.0);
        assert!(diag.laplace_mass.iter().all(|&m| m > 0.0 && m <= 1.0));
    }

    #[test]
    fn run_executes_ceil_steps_and_is_deterministic() {
        let p = schaffer1();
        let c = RunConfig {
            t_end: 0.1,
            ..cfg(Variant::Full)
        };
        let out = run(&p, &c).unwrap();
        assert_eq!(out.trace.len(), 2);
        assert_eq!(out.state.step_count(), 1);

        let c = cfg(Variant::Full);
        let a = run(&p, &c).unwrap();
        let b = run(&p, &c).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.state, b.state);
        assert_eq!(a.approximation, b.approximation);
        let other = run(&p, &RunConfig { seed: 1, ..c }).unwrap();
        assert_ne!(a.state, other.state);
    }

    #[test]
    fn determinism_does_not_depend_on_thread_count() {
        let p = three();
        let c = RunConfig {
            weight_init: WeightInit::SimplexUniform,
            swarms: 8,
            ..cfg(Variant::Full)
        };
        let reference = run(&p, &c).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = single.install(|| run(&p, &c).unwrap());
        assert_eq!(reference.state, serial.state);
        assert_eq!(reference.trace, serial.trace);
    }

    #[test]
    fn particles_stay_in_the_box() {
        for (p, init) in [(schaffer1(), WeightInit::Equidistant), (three(), WeightInit::SimplexUniform)] {
            for variant in [Variant::Fixed, Variant::Adaptive, Variant::Full] {
                let c = RunConfig {
                    sigma: 3.0,
                    weight_init: init.clone(),
                    ..cfg(variant)
                };
                let mut s = SwarmState::initialize(&p, &c).unwrap();
                for _ in 0..10 {
                    step(&mut s, &p, &c).unwrap();
                    for k in 0..c.swarms {
                        for j in 0..c.particles {
                            assert!(p.contains(s.position(k, j)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let p = schaffer1();
        for bad in [
            RunConfig { tau: -1.0, ..RunConfig::default() },
            RunConfig { t_end: 0.05, ..RunConfig::default() },
            RunConfig { swarms: 0, ..RunConfig::default() },
            RunConfig { alpha: 0.0, ..RunConfig::default() },
            RunConfig { beta: -1.0, ..RunConfig::default() },
            RunConfig { penalty_range: 0.0, ..RunConfig::default() },
            RunConfig { weight_init: WeightInit::Explicit(vec![vec![0.5, 0.5]]), ..RunConfig::default() },
        ] {
            assert!(matches!(SwarmState::initialize(&p, &bad), Err(Error::InvalidConfig(_))), "{bad:?}");
        }
        let three_eq = RunConfig { weight_init: WeightInit::Equidistant, ..RunConfig::default() };
        assert!(SwarmState::initialize(&three(), &three_eq).is_err());
    }
}
