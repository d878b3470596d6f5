//! Batch experiments over random instances: presets, runner, CSV, series
//! files and SVG charts.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::approx::{approx_scdas, cds_dgb, ApproxError};
use crate::baselines::{
    brute_force_opt, dast, gcma, BaselineError, OracleConfig, ORACLE_FEASIBLE_NODES,
    ORACLE_MAX_NODES,
};
use crate::graph::{Digraph, GraphError, Verdict};
use crate::instance::{generate_instance, GenConfig, GenError, DEFAULT_MAX_ATTEMPTS};
use crate::ldhd::{ldhd, LdhdError};
use crate::mis::MisMode;
use crate::solution::{Algorithm, Solution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Ldhd(#[from] LdhdError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
}

/// Runs one algorithm. `seed` selects the randomized MIS for `approx` and
/// `cds-dgb`; without it they use the sequential MIS.
pub fn solve(
    g: &Digraph,
    alg: Algorithm,
    seed: Option<u64>,
    oracle: &OracleConfig,
) -> Result<Solution, SolveError> {
    let mode = seed.map_or(MisMode::Greedy, MisMode::Luby);
    Ok(match alg {
        Algorithm::Opt => brute_force_opt(g, oracle)?,
        Algorithm::Ldhd => ldhd(g)?.solution,
        Algorithm::Dast => dast(g)?,
        Algorithm::Gcma => gcma(g)?,
        Algorithm::Approx => approx_scdas(g, mode)?.solution,
        Algorithm::CdsDgb => cds_dgb(g, mode)?.solution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Vary the node count.
    DensityNodes,
    /// Vary the side of the square area.
    DensityArea,
    /// Vary the smallest range.
    Ratio,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::DensityNodes => "density_nodes",
            ExperimentKind::DensityArea => "density_area",
            ExperimentKind::Ratio => "ratio",
        }
    }

    /// Axis label of the varied parameter.
    pub fn param_label(self) -> &'static str {
        match self {
            ExperimentKind::DensityNodes => "nodes",
            ExperimentKind::DensityArea => "area side",
            ExperimentKind::Ratio => "minimum range",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        match s {
            "density_nodes" => Ok(ExperimentKind::DensityNodes),
            "density_area" => Ok(ExperimentKind::DensityArea),
            "ratio" => Ok(ExperimentKind::Ratio),
            other => Err(SpecError::Invalid(format!(
                "unknown experiment kind `{other}`"
            ))),
        }
    }
}

/// Generator parameters at one grid point; `param` is the varied value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub param: f64,
    pub n: usize,
    pub area_side: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl GridPoint {
    pub fn config(&self, seed: u64, max_attempts: usize) -> GenConfig {
        GenConfig {
            max_attempts,
            ..GenConfig::new(self.n, self.area_side, self.r_min, self.r_max, seed)
        }
    }
}

/// Area side that keeps `n` nodes as dense as 50 nodes on a 1000 square.
pub fn scaled_side(n: usize) -> f64 {
    (1000.0 * (n as f64 / 50.0).sqrt()).round()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: ExperimentKind,
    pub grid: Vec<GridPoint>,
    pub reps: usize,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    /// Largest instance the oracle may be run on.
    pub oracle_cap: usize,
    pub max_attempts: usize,
    /// Parameter choices that are assumptions rather than published values.
    pub assumptions: Vec<String>,
}

pub const PRESET_NAMES: [&str; 5] = [
    "density_nodes",
    "density_area",
    "ratio_a",
    "ratio_b",
    "desk_scale",
];

/// Algorithms allowed in experiments, in output order.
pub const EXPERIMENT_ALGORITHMS: [Algorithm; 5] = [
    Algorithm::Approx,
    Algorithm::Dast,
    Algorithm::Gcma,
    Algorithm::Ldhd,
    Algorithm::Opt,
];

const DEFAULT_REPS: usize = 100;
const DENSITY_R_MIN: f64 = 200.0;
const DENSITY_R_MAX: f64 = 600.0;

fn heuristics() -> Vec<Algorithm> {
    vec![
        Algorithm::Approx,
        Algorithm::Dast,
        Algorithm::Gcma,
        Algorithm::Ldhd,
    ]
}

fn steps(start: u32, stop: u32, step: u32) -> impl Iterator<Item = f64> {
    (start..=stop).step_by(step as usize).map(f64::from)
}

fn range_assumption() -> String {
    format!("ranges uniform in [{DENSITY_R_MIN}, {DENSITY_R_MAX}] (values not published)")
}

/// Built-in experiment configurations.
pub fn preset(name: &str) -> Result<ExperimentSpec, SpecError> {
    let base = |name: &str, kind, grid: Vec<GridPoint>, algorithms, assumptions| ExperimentSpec {
        name: name.to_string(),
        kind,
        grid,
        reps: DEFAULT_REPS,
        base_seed: 0,
        algorithms,
        oracle_cap: ORACLE_FEASIBLE_NODES,
        max_attempts: DEFAULT_MAX_ATTEMPTS,
        assumptions,
    };
    let point = |param, n, area_side, r_min, r_max| GridPoint {
        param,
        n,
        area_side,
        r_min,
        r_max,
    };
    Ok(match name {
        "density_nodes" => base(
            name,
            ExperimentKind::DensityNodes,
            steps(10, 130, 10)
                .map(|n| point(n, n as usize, 1000.0, DENSITY_R_MIN, DENSITY_R_MAX))
                .collect(),
            heuristics(),
            vec![range_assumption()],
        ),
        "density_area" => base(
            name,
            ExperimentKind::DensityArea,
            steps(600, 1400, 200)
                .map(|side| point(side, 50, side, DENSITY_R_MIN, DENSITY_R_MAX))
                .collect(),
            heuristics(),
            vec![range_assumption()],
        ),
        "ratio_a" => base(
            name,
            ExperimentKind::Ratio,
            steps(200, 1000, 200)
                .map(|r| point(r, 50, 1000.0, r, 1000.0))
                .collect(),
            heuristics(),
            vec![],
        ),
        "ratio_b" => base(
            name,
            ExperimentKind::Ratio,
            steps(200, 1200, 200)
                .map(|r| point(r, 100, 1200.0, r, 1200.0))
                .collect(),
            heuristics(),
            vec![],
        ),
        "desk_scale" => base(
            name,
            ExperimentKind::DensityNodes,
            steps(8, 12, 1)
                .map(|n| {
                    let n_nodes = n as usize;
                    point(
                        n,
                        n_nodes,
                        scaled_side(n_nodes),
                        DENSITY_R_MIN,
                        DENSITY_R_MAX,
                    )
                })
                .collect(),
            EXPERIMENT_ALGORITHMS.to_vec(),
            vec![
                range_assumption(),
                "area side 1000*sqrt(n/50), rounded (density of 50 nodes on 1000x1000)".into(),
            ],
        ),
        other => return Err(SpecError::UnknownPreset(other.to_string())),
    })
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        let bad = |msg: String| Err(SpecError::Invalid(msg));
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.grid.is_empty() {
            return bad("grid is empty".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected".into());
        }
        if let Some(a) = self
            .algorithms
            .iter()
            .find(|a| !EXPERIMENT_ALGORITHMS.contains(a))
        {
            return bad(format!("algorithm {a} is not available in experiments"));
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be at least 1".into());
        }
        if self.oracle_cap > ORACLE_MAX_NODES {
            return bad(format!("oracle cap above {ORACLE_MAX_NODES}"));
        }
        if self.algorithms.contains(&Algorithm::Opt) {
            if let Some(p) = self.grid.iter().find(|p| p.n > self.oracle_cap) {
                return bad(format!(
                    "opt requested for n = {} above the oracle cap {}",
                    p.n, self.oracle_cap
                ));
            }
        }
        for p in &self.grid {
            p.config(0, self.max_attempts)
                .validate()
                .or_else(|e| bad(format!("grid point {}: {e}", p.param)))?;
        }
        Ok(())
    }

    /// Sets the oracle cap, dropping `opt` if some grid point exceeds it.
    pub fn with_oracle_cap(mut self, cap: usize) -> Self {
        self.oracle_cap = cap;
        if self.grid.iter().any(|p| p.n > cap) {
            self.algorithms.retain(|&a| a != Algorithm::Opt);
        }
        self
    }

    /// Parses `key=value` lines (`#` starts a comment).
    ///
    /// Keys: `name`, `kind`, `values` (comma list or `start:stop:step`),
    /// `n`, `area_side` (number or `scaled`), `r_min`, `r_max`, `reps`,
    /// `seed`, `algorithms`, `oracle_cap`, `max_attempts`. The varied
    /// quantity (`n`, `area_side` or `r_min`, by kind) comes from `values`.
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(SpecError::Parse {
                line: i + 1,
                msg: "expected key=value".into(),
            })?;
            let k = k.trim().to_string();
            const KEYS: [&str; 12] = [
                "name",
                "kind",
                "values",
                "n",
                "area_side",
                "r_min",
                "r_max",
                "reps",
                "seed",
                "algorithms",
                "oracle_cap",
                "max_attempts",
            ];
            if !KEYS.contains(&k.as_str()) {
                return Err(SpecError::Parse {
                    line: i + 1,
                    msg: format!("unknown key `{k}`"),
                });
            }
            if kv
                .insert(k.clone(), (i + 1, v.trim().to_string()))
                .is_some()
            {
                return Err(SpecError::Parse {
                    line: i + 1,
                    msg: format!("duplicate key `{k}`"),
                });
            }
        }
        fn field<T: FromStr>(
            kv: &BTreeMap<String, (usize, String)>,
            key: &str,
        ) -> Result<Option<T>, SpecError> {
            match kv.get(key) {
                None => Ok(None),
                Some((line, v)) => v.parse().map(Some).map_err(|_| SpecError::Parse {
                    line: *line,
                    msg: format!("bad value for `{key}`: `{v}`"),
                }),
            }
        }
        let kind: ExperimentKind = kv
            .get("kind")
            .ok_or_else(|| SpecError::Invalid("missing `kind`".into()))?
            .1
            .parse()?;
        let (values_line, values_text) = kv
            .get("values")
            .ok_or_else(|| SpecError::Invalid("missing `values`".into()))?;
        let values = parse_values(values_text).map_err(|msg| SpecError::Parse {
            line: *values_line,
            msg,
        })?;
        let n: usize = field(&kv, "n")?.unwrap_or(50);
        let scaled = kv.get("area_side").is_some_and(|(_, v)| v == "scaled");
        let side: f64 = if scaled {
            1000.0
        } else {
            field(&kv, "area_side")?.unwrap_or(1000.0)
        };
        let r_min: f64 = field(&kv, "r_min")?.unwrap_or(DENSITY_R_MIN);
        let r_max: f64 = field(&kv, "r_max")?.unwrap_or(DENSITY_R_MAX);
        let mut assumptions = Vec::new();
        if !kv.contains_key("r_min") || !kv.contains_key("r_max") {
            assumptions.push(range_assumption());
        }
        let grid = values
            .iter()
            .map(|&v| {
                let mut p = GridPoint {
                    param: v,
                    n,
                    area_side: side,
                    r_min,
                    r_max,
                };
                match kind {
                    ExperimentKind::DensityNodes => p.n = v as usize,
                    ExperimentKind::DensityArea => p.area_side = v,
                    ExperimentKind::Ratio => p.r_min = v,
                }
                if scaled {
                    p.area_side = scaled_side(p.n);
                }
                p
            })
            .collect();
        let algorithms = match kv.get("algorithms") {
            None => heuristics(),
            Some((line, v)) => v
                .split(',')
                .map(|a| {
                    a.trim().parse::<Algorithm>().map_err(|_| SpecError::Parse {
                        line: *line,
                        msg: format!("unknown algorithm `{}`", a.trim()),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let spec = ExperimentSpec {
            name: kv
                .get("name")
                .map_or_else(|| kind.name().to_string(), |(_, v)| v.clone()),
            kind,
            grid,
            reps: field(&kv, "reps")?.unwrap_or(DEFAULT_REPS),
            base_seed: field(&kv, "seed")?.unwrap_or(0),
            algorithms,
            oracle_cap: field(&kv, "oracle_cap")?.unwrap_or(ORACLE_FEASIBLE_NODES),
            max_attempts: field(&kv, "max_attempts")?.unwrap_or(DEFAULT_MAX_ATTEMPTS),
            assumptions,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Human-readable description, one `key value` pair per line.
    pub fn metadata(&self) -> String {
        let mut out = String::new();
        let algs: Vec<&str> = self.algorithms.iter().map(|a| a.name()).collect();
        let _ = writeln!(out, "name {}", self.name);
        let _ = writeln!(out, "kind {}", self.kind.name());
        let _ = writeln!(out, "reps {}", self.reps);
        let _ = writeln!(out, "seed0 {}", self.base_seed);
        let _ = writeln!(out, "algorithms {}", algs.join(","));
        let _ = writeln!(out, "oracle_cap {}", self.oracle_cap);
        let _ = writeln!(out, "max_attempts {}", self.max_attempts);
        for p in &self.grid {
            let _ = writeln!(
                out,
                "point param={} n={} side={} r_min={} r_max={}",
                p.param, p.n, p.area_side, p.r_min, p.r_max
            );
        }
        for a in &self.assumptions {
            let _ = writeln!(out, "assumption {a}");
        }
        out
    }
}

fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number `{}`", s.trim()))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err("range must be start:stop:step".into());
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err("range needs step > 0 and stop >= start".into());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| start + step * i as f64).collect())
    } else {
        text.split(',').map(num).collect()
    }
}

/// Mean solution size of one algorithm at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub param: f64,
    pub algorithm: Algorithm,
    pub mean: f64,
    /// Sample standard deviation (0 for a single repetition).
    pub std: f64,
    pub reps: usize,
    /// Instances rejected by the generator over all repetitions.
    pub discards: usize,
    pub seed0: u64,
}

/// Sizes of every algorithm on one generated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceRecord {
    pub param: f64,
    pub seed: u64,
    pub n: usize,
    pub k: f64,
    pub sizes: Vec<(Algorithm, usize)>,
}

impl InstanceRecord {
    pub fn size(&self, alg: Algorithm) -> Option<usize> {
        self.sizes.iter().find(|(a, _)| *a == alg).map(|&(_, s)| s)
    }
}

/// A grid point skipped because the generator gave up.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub param: f64,
    pub seed: u64,
    pub error: GenError,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
    pub instances: Vec<InstanceRecord>,
    pub failures: Vec<PointFailure>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{algorithm} failed on seed {seed} (param {param}): {error}")]
    Solve {
        algorithm: Algorithm,
        param: f64,
        seed: u64,
        error: SolveError,
    },
    #[error("{algorithm} output on seed {seed} (param {param}) is {verdict}")]
    InvalidSolution {
        algorithm: Algorithm,
        param: f64,
        seed: u64,
        verdict: Verdict,
    },
    #[error("validating {algorithm} on seed {seed}: {error}")]
    Graph {
        algorithm: Algorithm,
        seed: u64,
        error: GraphError,
    },
}

fn run_one(
    spec: &ExperimentSpec,
    point: &GridPoint,
    seed: u64,
) -> Result<Result<(InstanceRecord, usize), GenError>, ExperimentError> {
    let generated = match generate_instance(&point.config(seed, spec.max_attempts)) {
        Ok(g) => g,
        Err(e) => return Ok(Err(e)),
    };
    let g = generated.graph.digraph();
    let mut algs = spec.algorithms.clone();
    algs.sort_by_key(|a| a.name());
    let mut sizes = Vec::with_capacity(algs.len());
    for alg in algs {
        let sol = solve(g, alg, None, &OracleConfig::default()).map_err(|error| {
            ExperimentError::Solve {
                algorithm: alg,
                param: point.param,
                seed,
                error,
            }
        })?;
        let verdict = sol.validate(g).map_err(|error| ExperimentError::Graph {
            algorithm: alg,
            seed,
            error,
        })?;
        if !verdict.is_valid() {
            return Err(ExperimentError::InvalidSolution {
                algorithm: alg,
                param: point.param,
                seed,
                verdict,
            });
        }
        sizes.push((alg, sol.len()));
    }
    let record = InstanceRecord {
        param: point.param,
        seed,
        n: g.n(),
        k: generated.graph.transmission_ratio(),
        sizes,
    };
    Ok(Ok((record, generated.discards())))
}

fn mean_std(values: &[usize]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<usize>() as f64 / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values
        .iter()
        .map(|&v| (v as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs every repetition of every grid point (in parallel) and averages the
/// sizes. Repetition `i` uses seed `base_seed + i` at every grid point.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult, ExperimentError> {
    spec.validate()?;
    let jobs: Vec<(usize, u64)> = (0..spec.grid.len())
        .flat_map(|p| (0..spec.reps as u64).map(move |i| (p, i)))
        .collect();
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(p, i)| run_one(spec, &spec.grid[p], spec.base_seed.wrapping_add(i)))
        .collect();

    let mut result = ExperimentResult::default();
    let mut per_point: Vec<Vec<(InstanceRecord, usize)>> = vec![Vec::new(); spec.grid.len()];
    let mut failed = vec![false; spec.grid.len()];
    for (&(p, i), outcome) in jobs.iter().zip(outcomes) {
        match outcome? {
            Ok(done) => per_point[p].push(done),
            Err(error) => {
                if !failed[p] {
                    failed[p] = true;
                    result.failures.push(PointFailure {
                        param: spec.grid[p].param,
                        seed: spec.base_seed.wrapping_add(i),
                        error,
                    });
                }
            }
        }
    }
    for (p, done) in per_point.into_iter().enumerate() {
        if failed[p] {
            continue;
        }
        let discards = done.iter().map(|(_, d)| d).sum();
        let mut algs = spec.algorithms.clone();
        algs.sort_by_key(|a| a.name());
        for alg in algs {
            let sizes: Vec<usize> = done.iter().filter_map(|(r, _)| r.size(alg)).collect();
            let (mean, std) = mean_std(&sizes);
            result.rows.push(ResultRow {
                experiment: spec.name.clone(),
                param: spec.grid[p].param,
                algorithm: alg,
                mean,
                std,
                reps: sizes.len(),
                discards,
                seed0: spec.base_seed,
            });
        }
        result.instances.extend(done.into_iter().map(|(r, _)| r));
    }
    Ok(result)
}

pub const CSV_HEADER: &str = "experiment,param,algorithm,mean,std,reps,discards,seed0";

/// CSV table, rows in the given order.
pub fn emit_csv(rows: &[ResultRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.4},{:.4},{},{},{}",
            r.experiment, r.param, r.algorithm, r.mean, r.std, r.reps, r.discards, r.seed0
        );
    }
    out
}

/// Output file name and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// One `param mean std` series file per (experiment, algorithm) and one SVG
/// chart per experiment.
pub fn emit_plotdata(rows: &[ResultRow]) -> Vec<OutputFile> {
    let mut by_exp: BTreeMap<&str, BTreeMap<&str, Vec<&ResultRow>>> = BTreeMap::new();
    for r in rows {
        by_exp
            .entry(&r.experiment)
            .or_default()
            .entry(r.algorithm.name())
            .or_default()
            .push(r);
    }
    let mut files = Vec::new();
    for (exp, series) in &mut by_exp {
        for (alg, points) in series.iter_mut() {
            points.sort_by(|a, b| a.param.total_cmp(&b.param));
            let mut contents = String::new();
            for p in points.iter() {
                let _ = writeln!(contents, "{} {:.4} {:.4}", p.param, p.mean, p.std);
            }
            files.push(OutputFile {
                name: format!("{exp}_{alg}.dat"),
                contents,
            });
        }
        files.push(OutputFile {
            name: format!("{exp}.svg"),
            contents: svg_chart(exp, series),
        });
    }
    files
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn svg_chart(title: &str, series: &BTreeMap<&str, Vec<&ResultRow>>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 130.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;
    let all = || series.values().flatten();
    let x_min = all().map(|r| r.param).fold(f64::INFINITY, f64::min);
    let x_max = all().map(|r| r.param).fold(f64::NEG_INFINITY, f64::max);
    let y_max = all().map(|r| r.mean).fold(0.0, f64::max).max(1.0) * 1.1;
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let px = |x: f64| LEFT + (x - x_min) / x_span * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - y / y_max * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{title}</text>"#,
        W / 2.0
    );
    let (x0, y0, x1, y1) = (LEFT, H - BOTTOM, W - RIGHT, TOP);
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.2} {y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black"/>"#
    );
    let mut ticks: Vec<f64> = all().map(|r| r.param).collect();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    for t in ticks {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            y0 + 4.0,
            y0 + 18.0
        );
    }
    for i in 0..=5 {
        let v = y_max * f64::from(i) / 5.0;
        let y = py(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            y + 4.0
        );
    }
    for (i, (alg, points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = points
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.param), py(r.mean)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            coords.join(" ")
        );
        for r in points {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(r.param),
                py(r.mean)
            );
        }
        let ly = TOP + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{alg}</text>"#,
            x1 + 15.0,
            x1 + 35.0,
            x1 + 40.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

impl fmt::Display for ExperimentResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_csv(&self.rows))?;
        for fail in &self.failures {
            writeln!(
                f,
                "# param {} skipped at seed {}: {}",
                fail.param, fail.seed, fail.error
            )?;
        }
        Ok(())
    }
}
