//! Seeded random instances and the built-in fixtures.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`). Each
//! attempt draws the positions first (x then y, ascending id) and then the
//! ranges (ascending id); a uniform value in `[0, 1)` is `(next_u64 >> 11) * 2^-53`.
//! A rejected attempt is thrown away entirely and the next attempt continues
//! from the same stream.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Digraph, DiskGraph, DiskNode, GraphError, Instance};

pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("no strongly connected instance after {attempts} attempts")]
    Exhausted { attempts: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub area_side: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub seed: u64,
    pub max_attempts: usize,
}

impl GenConfig {
    pub fn new(n: usize, area_side: f64, r_min: f64, r_max: f64, seed: u64) -> Self {
        Self {
            n,
            area_side,
            r_min,
            r_max,
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: &str| Err(GenError::InvalidConfig(msg.to_string()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if !(self.area_side.is_finite() && self.area_side > 0.0) {
            return bad("area side must be positive");
        }
        if !(self.r_min.is_finite() && self.r_max.is_finite()) {
            return bad("ranges must be finite");
        }
        if !(0.0 < self.r_min && self.r_min <= self.r_max) {
            return bad("need 0 < r_min <= r_max");
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be at least 1");
        }
        Ok(())
    }

    /// `r_max / r_min` as configured.
    pub fn k(&self) -> f64 {
        self.r_max / self.r_min
    }
}

/// An accepted instance and how many attempts it took.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub graph: DiskGraph,
    pub attempts: usize,
}

impl Generated {
    /// Attempts thrown away before this one was accepted.
    pub fn discards(&self) -> usize {
        self.attempts - 1
    }
}

/// Uniform `[0, 1)` with 53 bits of precision.
pub(crate) fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Rejection-samples a strongly connected disk graph.
pub fn generate_instance(cfg: &GenConfig) -> Result<Generated, GenError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for attempt in 1..=cfg.max_attempts {
        let mut pos = Vec::with_capacity(cfg.n);
        for _ in 0..cfg.n {
            let x = unit_f64(&mut rng) * cfg.area_side;
            let y = unit_f64(&mut rng) * cfg.area_side;
            pos.push((x, y));
        }
        let nodes: Vec<DiskNode> = pos
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| {
                let r = cfg.r_min + unit_f64(&mut rng) * (cfg.r_max - cfg.r_min);
                DiskNode::new(id, x, y, r)
            })
            .collect();
        if has_coincident_positions(&pos) {
            continue;
        }
        let graph = DiskGraph::build(nodes)?;
        if graph.digraph().is_strongly_connected() {
            return Ok(Generated {
                graph,
                attempts: attempt,
            });
        }
    }
    Err(GenError::Exhausted {
        attempts: cfg.max_attempts,
    })
}

fn has_coincident_positions(pos: &[(f64, f64)]) -> bool {
    let mut sorted = pos.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    sorted.windows(2).any(|w| w[0] == w[1])
}

pub const FIXTURE_NAMES: [&str; 5] = ["i1_mixed", "dicycle3", "bipath3", "star5", "k3"];

/// Hand-built test instances.
///
/// * `i1_mixed`: `0:(0,0,1) 1:(1,0,1) 2:(1,1,1.5)`, arcs 0↔1, 1↔2, 2→0
/// * `dicycle3`: the directed cycle 0→1→2→0 (no disk realisation exists)
/// * `bipath3`: 0↔1↔2 on a line
/// * `star5`: hub 0 joined both ways to leaves 1..4
/// * `k3`: complete bidirectional triangle
pub fn fixture(name: &str) -> Option<Instance> {
    let disk = |nodes: &[(f64, f64, f64)]| {
        let nodes = nodes
            .iter()
            .enumerate()
            .map(|(id, &(x, y, r))| DiskNode::new(id, x, y, r))
            .collect();
        Instance::Disk(DiskGraph::build(nodes).expect("fixture geometry is valid"))
    };
    let inst = match name {
        "i1_mixed" => disk(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 1.5)]),
        "dicycle3" => Instance::Abstract(
            Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).expect("fixture arcs are valid"),
        ),
        "bipath3" => disk(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (2.0, 0.0, 1.0)]),
        "star5" => disk(&[
            (0.0, 0.0, 1.0),
            (1.0, 0.0, 1.0),
            (0.0, 1.0, 1.0),
            (-1.0, 0.0, 1.0),
            (0.0, -1.0, 1.0),
        ]),
        "k3" => disk(&[(0.0, 0.0, 1.5), (1.0, 0.0, 1.5), (0.5, 0.9, 1.5)]),
        _ => return None,
    };
    Some(inst)
}

/// All fixtures in [`FIXTURE_NAMES`] order.
pub fn all_fixtures() -> Vec<(&'static str, Instance)> {
    FIXTURE_NAMES
        .iter()
        .map(|&name| (name, fixture(name).expect("listed fixture exists")))
        .collect()
}
