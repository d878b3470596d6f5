use std::fmt;
use std::str::FromStr;

use crate::graph::{Digraph, GraphError, NodeId, Verdict};

/// Algorithms that produce a backbone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Opt,
    Ldhd,
    Dast,
    Gcma,
    Approx,
    CdsDgb,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Opt,
        Algorithm::Ldhd,
        Algorithm::Dast,
        Algorithm::Gcma,
        Algorithm::Approx,
        Algorithm::CdsDgb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Opt => "opt",
            Algorithm::Ldhd => "ldhd",
            Algorithm::Dast => "dast",
            Algorithm::Gcma => "gcma",
            Algorithm::Approx => "approx",
            Algorithm::CdsDgb => "cds-dgb",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// A connector arc `from -> to` realised in the network by the path
/// `from, inner.., to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WitnessPath {
    pub from: NodeId,
    pub to: NodeId,
    pub inner: Vec<NodeId>,
}

impl WitnessPath {
    pub fn new(from: NodeId, to: NodeId, inner: Vec<NodeId>) -> Self {
        Self { from, to, inner }
    }

    pub fn hops(&self) -> usize {
        self.inner.len() + 1
    }

    /// Whether every hop of the path is an arc of `g`.
    pub fn is_path_in(&self, g: &Digraph) -> bool {
        let mut seq = Vec::with_capacity(self.inner.len() + 2);
        seq.push(self.from);
        seq.extend_from_slice(&self.inner);
        seq.push(self.to);
        seq.iter().all(|&v| v < g.n()) && seq.windows(2).all(|w| g.has_arc(w[0], w[1]))
    }
}

/// A candidate backbone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub algorithm: Algorithm,
    pub seed: Option<u64>,
    members: Vec<NodeId>,
    pub witnesses: Vec<WitnessPath>,
}

impl Solution {
    pub fn new(algorithm: Algorithm, members: impl IntoIterator<Item = NodeId>) -> Self {
        let mut members: Vec<NodeId> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self {
            algorithm,
            seed: None,
            members,
            witnesses: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_witnesses(mut self, witnesses: Vec<WitnessPath>) -> Self {
        self.witnesses = witnesses;
        self
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn validate(&self, g: &Digraph) -> Result<Verdict, GraphError> {
        g.validate_scdas(&self.members)
    }

    /// Text block: `algorithm`, optional `seed`, `members` and the witness list.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algorithm {}", self.algorithm)?;
        if let Some(seed) = self.seed {
            writeln!(f, "seed {seed}")?;
        }
        write!(f, "members")?;
        for m in &self.members {
            write!(f, " {m}")?;
        }
        writeln!(f)?;
        writeln!(f, "witnesses {}", self.witnesses.len())?;
        for w in &self.witnesses {
            write!(f, "{} {} :", w.from, w.to)?;
            for v in &w.inner {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
