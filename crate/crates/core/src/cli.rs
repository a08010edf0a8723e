//! Experiment orchestration: configuration documents, presets, multi-seed
//! batches and output files.
//!
//! A configuration document is TOML with flat top-level keys plus an
//! optional `[potential]` table:
//!
//! ```toml
//! preset = "paper-schaffer1"   # optional base configuration
//! problem = "schaffer1"
//! variant = "full"
//! swarms = 30
//! seeds = [0, 1, 2]
//! emit = ["front", "summary"]
//!
//! [potential]
//! repulsion = 0.001
//! ```
//!
//! Unset keys fall back to the preset, then to the library defaults.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, Neighborhood, RunConfig, RunOutput, Variant, WeightInit};
use crate::error::{Error, Result};
use crate::indicators::{self, IndicatorReport};
use crate::interaction::Kernel;
use crate::problems::{FrontSource, Problem, ReferenceFront};

/// Which files [`run_experiment`] writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emit {
    pub front_csv: bool,
    pub weights_csv: bool,
    pub diagnostics_csv: bool,
    pub summary_json: bool,
}

impl Emit {
    pub const ALL: Emit = Emit {
        front_csv: true,
        weights_csv: true,
        diagnostics_csv: true,
        summary_json: true,
    };
    pub const NONE: Emit = Emit {
        front_csv: false,
        weights_csv: false,
        diagnostics_csv: false,
        summary_json: false,
    };

    /// Parses names such as `front`, `weights`, `diagnostics`, `summary`
    /// (or `all` / `none`).
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut emit = Emit::NONE;
        for name in names {
            match name.as_ref().trim() {
                "front" => emit.front_csv = true,
                "weights" => emit.weights_csv = true,
                "diagnostics" => emit.diagnostics_csv = true,
                "summary" => emit.summary_json = true,
                "all" => emit = Emit::ALL,
                "none" | "" => {}
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "emit entries must be front, weights, diagnostics, summary, all or none; got `{other}`"
                    )))
                }
            }
        }
        Ok(emit)
    }

    pub fn names(&self) -> Vec<String> {
        [
            (self.front_csv, "front"),
            (self.weights_csv, "weights"),
            (self.diagnostics_csv, "diagnostics"),
            (self.summary_json, "summary"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, n)| n.to_string())
        .collect()
    }
}

/// Everything needed to reproduce a batch of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: String,
    /// `config.seed` is ignored; each run uses one entry of `seeds`.
    pub config: RunConfig,
    pub seeds: Vec<u64>,
    /// Reference-front resolution; `None` uses the problem's default.
    pub reference_resolution: Option<usize>,
    pub out_dir: PathBuf,
    pub emit: Emit,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            problem: "schaffer1".to_string(),
            config: RunConfig::default(),
            seeds: vec![0],
            reference_resolution: None,
            out_dir: PathBuf::from("out"),
            emit: Emit::ALL,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let problem = Problem::by_name(&self.problem)?;
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("at least one seed is required".into()));
        }
        if let Some(r) = self.reference_resolution {
            if r < 2 {
                return Err(Error::InvalidConfig("reference_resolution must be at least 2".into()));
            }
        }
        self.config.validate()?;
        match (&self.config.weight_init, problem.n_obj()) {
            (WeightInit::Equidistant, p) if p != 2 => Err(Error::InvalidConfig(format!(
                "equidistant weights need 2 objectives, `{}` has {p}",
                self.problem
            ))),
            _ => Ok(()),
        }
    }

    /// The run configuration for one seed.
    pub fn config_for(&self, seed: u64) -> RunConfig {
        RunConfig {
            seed,
            ..self.config.clone()
        }
    }
}

pub const PRESETS: [&str; 5] = [
    "paper-schaffer1",
    "paper-dent",
    "paper-schaffer2",
    "paper-three",
    "paper-weights-demo",
];

/// The benchmark configurations: full variant with penalty strength 10,
/// 30 swarms of 20 (50 of 20 for three objectives); the weights demo runs
/// the adaptive variant with 20 swarms of 50 and no penalty.
pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let base = ExperimentSpec::default();
    let full = |problem: &str, swarms: usize, weight_init: WeightInit| ExperimentSpec {
        problem: problem.to_string(),
        config: RunConfig {
            swarms,
            particles: 20,
            variant: Variant::Full,
            beta: 10.0,
            weight_init,
            ..RunConfig::default()
        },
        ..base.clone()
    };
    let spec = match name {
        "paper-schaffer1" => full("schaffer1", 30, WeightInit::Equidistant),
        "paper-dent" => full("dent", 30, WeightInit::Equidistant),
        "paper-schaffer2" => full("schaffer2", 30, WeightInit::Equidistant),
        "paper-three" => full("three", 50, WeightInit::SimplexUniform),
        "paper-weights-demo" => ExperimentSpec {
            config: RunConfig {
                swarms: 20,
                particles: 50,
                variant: Variant::Adaptive,
                beta: 0.0,
                ..RunConfig::default()
            },
            ..base
        },
        _ => {
            return Err(Error::UnknownPreset {
                name: name.to_string(),
                known: PRESETS.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(spec)
}

/// Raw configuration document; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swarms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub particles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penalty_strength: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penalty_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Kernel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighborhood: Option<Neighborhood>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_scale: Option<f64>,
    /// `equidistant` or `simplex-uniform`; use `weights` for explicit lists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_init: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_dom: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repulsion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repulsion_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attraction_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obj_repulsion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obj_repulsion_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obj_attraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obj_attraction_range: Option<f64>,
}

const TOP_KEYS: [&str; 26] = [
    "preset",
    "problem",
    "variant",
    "swarms",
    "particles",
    "tau",
    "t_end",
    "drift",
    "sigma",
    "alpha",
    "beta",
    "penalty_strength",
    "penalty_range",
    "kernel",
    "neighborhood",
    "cutoff",
    "weight_scale",
    "weight_init",
    "weights",
    "weight_eps",
    "eps_dom",
    "seeds",
    "reference_resolution",
    "out",
    "emit",
    "potential",
];

const POTENTIAL_KEYS: [&str; 8] = [
    "repulsion",
    "repulsion_range",
    "attraction",
    "attraction_range",
    "obj_repulsion",
    "obj_repulsion_range",
    "obj_attraction",
    "obj_attraction_range",
];

impl ConfigDoc {
    /// Parses TOML, reporting the first unrecognized key by name.
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse()?;
        for (key, value) in &table {
            if !TOP_KEYS.contains(&key.as_str()) {
                return Err(Error::UnknownKey(key.clone()));
            }
            if key == "potential" {
                if let Some(inner) = value.as_table() {
                    if let Some(k) = inner.keys().find(|k| !POTENTIAL_KEYS.contains(&k.as_str())) {
                        return Err(Error::UnknownKey(format!("potential.{k}")));
                    }
                }
            }
        }
        Ok(table.try_into()?)
    }

    /// Applies every set key on top of `spec`.
    pub fn overlay(&self, spec: &mut ExperimentSpec) -> Result<()> {
        let c = &mut spec.config;
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { $target = v; })*
            };
        }
        set! {
            problem => spec.problem,
            variant => c.variant,
            swarms => c.swarms,
            particles => c.particles,
            tau => c.tau,
            t_end => c.t_end,
            drift => c.drift,
            sigma => c.sigma,
            alpha => c.alpha,
            beta => c.beta,
            penalty_strength => c.penalty_strength,
            penalty_range => c.penalty_range,
            kernel => c.kernel,
            neighborhood => c.neighborhood,
            cutoff => c.cutoff,
            weight_scale => c.weight_scale,
            weight_eps => c.weight_eps,
            eps_dom => c.eps_dom,
            seeds => spec.seeds,
            out => spec.out_dir,
        }
        if let Some(r) = self.reference_resolution {
            spec.reference_resolution = Some(r);
        }
        match (&self.weight_init, &self.weights) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "set either weight_init or weights, not both".into(),
                ))
            }
            (Some(name), None) => c.weight_init = weight_init_from_name(name)?,
            (None, Some(ws)) => c.weight_init = WeightInit::Explicit(ws.clone()),
            (None, None) => {}
        }
        if let Some(names) = &self.emit {
            spec.emit = Emit::from_names(names)?;
        }
        if let Some(p) = &self.potential {
            let q = &mut c.potential;
            macro_rules! pot {
                ($($field:ident),*) => { $(if let Some(v) = p.$field { q.$field = v; })* };
            }
            pot!(
                repulsion,
                repulsion_range,
                attraction,
                attraction_range,
                obj_repulsion,
                obj_repulsion_range,
                obj_attraction,
                obj_attraction_range
            );
        }
        Ok(())
    }

    /// A document that sets every key of `spec` explicitly.
    pub fn from_spec(spec: &ExperimentSpec) -> Self {
        let c = &spec.config;
        let p = c.potential;
        let (weight_init, weights) = match &c.weight_init {
            WeightInit::Equidistant => (Some("equidistant".to_string()), None),
            WeightInit::SimplexUniform => (Some("simplex-uniform".to_string()), None),
            WeightInit::Explicit(ws) => (None, Some(ws.clone())),
        };
        ConfigDoc {
            preset: None,
            problem: Some(spec.problem.clone()),
            variant: Some(c.variant),
            swarms: Some(c.swarms),
            particles: Some(c.particles),
            tau: Some(c.tau),
            t_end: Some(c.t_end),
            drift: Some(c.drift),
            sigma: Some(c.sigma),
            alpha: Some(c.alpha),
            beta: Some(c.beta),
            penalty_strength: Some(c.penalty_strength),
            penalty_range: Some(c.penalty_range),
            kernel: Some(c.kernel),
            neighborhood: Some(c.neighborhood),
            cutoff: Some(c.cutoff),
            weight_scale: Some(c.weight_scale),
            weight_init,
            weights,
            weight_eps: Some(c.weight_eps),
            eps_dom: Some(c.eps_dom),
            seeds: Some(spec.seeds.clone()),
            reference_resolution: spec.reference_resolution,
            out: Some(spec.out_dir.clone()),
            emit: Some(spec.emit.names()),
            potential: Some(PotentialDoc {
                repulsion: Some(p.repulsion),
                repulsion_range: Some(p.repulsion_range),
                attraction: Some(p.attraction),
                attraction_range: Some(p.attraction_range),
                obj_repulsion: Some(p.obj_repulsion),
                obj_repulsion_range: Some(p.obj_repulsion_range),
                obj_attraction: Some(p.obj_attraction),
                obj_attraction_range: Some(p.obj_attraction_range),
            }),
        }
    }

    /// Base spec (preset or defaults) with this document applied.
    pub fn resolve(&self) -> Result<ExperimentSpec> {
        let mut spec = match &self.preset {
            Some(name) => preset(name)?,
            None => ExperimentSpec::default(),
        };
        self.overlay(&mut spec)?;
        Ok(spec)
    }
}

fn weight_init_from_name(name: &str) -> Result<WeightInit> {
    match name {
        "equidistant" => Ok(WeightInit::Equidistant),
        "simplex-uniform" => Ok(WeightInit::SimplexUniform),
        other => Err(Error::InvalidConfig(format!(
            "weight_init must be equidistant or simplex-uniform; got `{other}`"
        ))),
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let spec = ConfigDoc::parse(text)?.resolve()?;
    spec.validate()?;
    Ok(spec)
}

/// Serializes `spec` so that [`parse_config`] returns an equal spec.
pub fn serialize(spec: &ExperimentSpec) -> Result<String> {
    Ok(toml::to_string(&ConfigDoc::from_spec(spec))?)
}

/// Result of one seed.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub output: RunOutput,
    pub report: IndicatorReport,
}

/// Runs every seed (in parallel) and scores each final approximation.
pub fn run_seeds(spec: &ExperimentSpec) -> Result<(Problem, ReferenceFront, Vec<SeedRun>)> {
    spec.validate()?;
    let problem = Problem::by_name(&spec.problem)?;
    let resolution = spec
        .reference_resolution
        .unwrap_or_else(|| problem.default_reference_resolution());
    let reference = problem.reference_front(resolution)?;
    let runs = spec
        .seeds
        .par_iter()
        .map(|&seed| {
            let output = dynamics::run(&problem, &spec.config_for(seed))?;
            let report = indicators::report(&output.approximation, &reference, problem.hv_ref())?;
            Ok(SeedRun {
                seed,
                output,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((problem, reference, runs))
}

/// Per-indicator statistics across seeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorStats {
    pub gd: f64,
    pub igd: f64,
    pub hv: f64,
    pub ni: f64,
}

/// Aggregate written to `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub problem: String,
    pub variant: Variant,
    pub seeds: Vec<u64>,
    pub gd: Vec<f64>,
    pub igd: Vec<f64>,
    pub hv: Vec<f64>,
    pub ni: Vec<usize>,
    pub mean: IndicatorStats,
    /// Sample standard deviation; `None` for a single seed.
    pub stddev: Option<IndicatorStats>,
    pub ref_point: Vec<f64>,
    pub reference_front: FrontSource,
    pub reference_size: usize,
    /// Indicators are computed on the non-dominated subset only.
    pub dominated_filtered: bool,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

impl Summary {
    pub fn new(spec: &ExperimentSpec, problem: &Problem, reference: &ReferenceFront, runs: &[SeedRun]) -> Self {
        let gd: Vec<f64> = runs.iter().map(|r| r.report.gd).collect();
        let igd: Vec<f64> = runs.iter().map(|r| r.report.igd).collect();
        let hv: Vec<f64> = runs.iter().map(|r| r.report.hv).collect();
        let ni: Vec<usize> = runs.iter().map(|r| r.report.ni).collect();
        let ni_f: Vec<f64> = ni.iter().map(|&n| n as f64).collect();
        let stat = |f: fn(&[f64]) -> f64| IndicatorStats {
            gd: f(&gd),
            igd: f(&igd),
            hv: f(&hv),
            ni: f(&ni_f),
        };
        Summary {
            problem: spec.problem.clone(),
            variant: spec.config.variant,
            seeds: runs.iter().map(|r| r.seed).collect(),
            mean: stat(mean),
            stddev: (runs.len() > 1).then(|| stat(sample_std)),
            gd,
            igd,
            hv,
            ni,
            ref_point: problem.hv_ref().to_vec(),
            reference_front: reference.source,
            reference_size: reference.len(),
            dominated_filtered: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub summary: Summary,
    pub runs: Vec<SeedRun>,
    /// Every file written, aggregate last.
    pub files: Vec<PathBuf>,
}

/// Runs all seeds, writes the requested per-seed files and the aggregate
/// `summary.json` into `spec.out_dir`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    let (problem, reference, runs) = run_seeds(spec)?;
    let dir = &spec.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for run in &runs {
        let path = |kind: &str, ext: &str| dir.join(format!("{kind}-seed{}.{ext}", run.seed));
        if spec.emit.front_csv {
            let p = path("front", "csv");
            write_front_csv(&p, &run.output)?;
            files.push(p);
        }
        if spec.emit.weights_csv {
            let p = path("weights", "csv");
            write_weights_csv(&p, &run.output)?;
            files.push(p);
        }
        if spec.emit.diagnostics_csv {
            let p = path("diagnostics", "csv");
            write_diagnostics_csv(&p, &run.output)?;
            files.push(p);
        }
        if spec.emit.summary_json {
            let p = path("summary", "json");
            let per_seed = Summary::new(spec, &problem, &reference, std::slice::from_ref(run));
            write_json(&p, &per_seed)?;
            files.push(p);
        }
    }
    let summary = Summary::new(spec, &problem, &reference, &runs);
    let p = dir.join("summary.json");
    write_json(&p, &summary)?;
    files.push(p);
    Ok(ExperimentResult {
        summary,
        runs,
        files,
    })
}

/// 17 significant digits; parses back to the identical `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn numbered(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}_{i}"))
}

/// Columns `swarm, origin, j, x_1..x_d, f_1..f_p, nondominated`.
pub fn write_front_csv(path: &Path, output: &RunOutput) -> Result<()> {
    let (d, p) = (output.state.dim(), output.state.n_obj());
    let mut w = csv_writer(path)?;
    let mut header: Vec<String> = vec!["swarm".into(), "origin".into(), "j".into()];
    header.extend(numbered("x", d));
    header.extend(numbered("f", p));
    header.push("nondominated".into());
    w.write_record(&header)?;
    let approx = &output.approximation;
    for (e, &keep) in approx.entries.iter().zip(&approx.nondominated_mask) {
        let mut row = vec![e.swarm.to_string(), e.origin.as_str().to_string(), e.index.to_string()];
        row.extend(e.x.iter().chain(&e.fx).map(|&v| fmt_float(v)));
        row.push(u8::from(keep).to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Columns `step, swarm, lambda_1..lambda_p`.
pub fn write_weights_csv(path: &Path, output: &RunOutput) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header: Vec<String> = vec!["step".into(), "swarm".into()];
    header.extend(numbered("lambda", output.state.n_obj()));
    w.write_record(&header)?;
    for rec in &output.trace {
        for (k, lambda) in rec.lambda.iter().enumerate() {
            let mut row = vec![rec.step.to_string(), k.to_string()];
            row.extend(lambda.iter().map(|&v| fmt_float(v)));
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Columns `step, swarm, V, M, E_1..E_d`.
pub fn write_diagnostics_csv(path: &Path, output: &RunOutput) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header: Vec<String> = vec!["step".into(), "swarm".into(), "V".into(), "M".into()];
    header.extend(numbered("E", output.state.dim()));
    w.write_record(&header)?;
    for rec in &output.trace {
        let diag = &rec.diagnostics;
        for k in 0..diag.deviation.len() {
            let mut row = vec![
                rec.step.to_string(),
                k.to_string(),
                fmt_float(diag.deviation[k]),
                fmt_float(diag.laplace_mass[k]),
            ];
            row.extend(diag.expectation[k].iter().map(|&v| fmt_float(v)));
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Command-line overrides; `None` leaves the underlying value alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub problem: Option<String>,
    pub variant: Option<Variant>,
    pub swarms: Option<usize>,
    pub particles: Option<usize>,
    /// Sets `t_end = iters * tau`.
    pub iters: Option<usize>,
    /// First seed.
    pub seed: Option<u64>,
    /// Number of consecutive seeds starting at the first one.
    pub seed_count: Option<usize>,
    pub out: Option<PathBuf>,
    pub emit: Option<Emit>,
}

/// Builds a spec with precedence flags > config document > preset >
/// defaults. A `preset` given here replaces one named in the document.
pub fn resolve_spec(
    preset_name: Option<&str>,
    config_text: Option<&str>,
    flags: &Overrides,
) -> Result<ExperimentSpec> {
    let mut doc = match config_text {
        Some(text) => ConfigDoc::parse(text)?,
        None => ConfigDoc::default(),
    };
    if let Some(name) = preset_name {
        doc.preset = Some(name.to_string());
    }
    let mut spec = doc.resolve()?;
    apply_overrides(&mut spec, flags);
    spec.validate()?;
    Ok(spec)
}

fn apply_overrides(spec: &mut ExperimentSpec, flags: &Overrides) {
    let c = &mut spec.config;
    if let Some(p) = &flags.problem {
        spec.problem = p.clone();
    }
    if let Some(v) = flags.variant {
        c.variant = v;
    }
    if let Some(k) = flags.swarms {
        c.swarms = k;
    }
    if let Some(n) = flags.particles {
        c.particles = n;
    }
    if let Some(it) = flags.iters {
        c.t_end = it as f64 * c.tau;
    }
    if flags.seed.is_some() || flags.seed_count.is_some() {
        let first = flags.seed.unwrap_or_else(|| spec.seeds.first().copied().unwrap_or(0));
        let count = flags.seed_count.unwrap_or(1) as u64;
        spec.seeds = (0..count).map(|i| first.wrapping_add(i)).collect();
    }
    if let Some(out) = &flags.out {
        spec.out_dir = out.clone();
    }
    if let Some(e) = flags.emit {
        spec.emit = e;
    }
}
