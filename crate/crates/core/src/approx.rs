//! Constant-factor approximation for disk graphs.
//!
//! 1. Drop unidirectional arcs and take a maximal independent set `I` of what
//!    remains; `I` dominates and absorbs every other node.
//! 2. Build the connector graph `G'` on `I`: an arc `u -> v` for every directed
//!    path of at most three hops whose inner nodes all lie outside `I`.
//! 3. Keep one arc per ordered pair and output `I` plus the inner nodes of the
//!    kept arcs.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Digraph, GraphError, NodeId};
use crate::mis::{compute_mis, MisMode, MisResult};
use crate::solution::{Algorithm, Solution, WitnessPath};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("input graph is not strongly connected")]
    NotStronglyConnected,
    #[error("node set is not a maximal independent set of the bidirectional subgraph")]
    NotMaximalIndependent,
    #[error("arc {0} -> {1} has no reverse arc")]
    Unidirectional(NodeId, NodeId),
    #[error("transmission ratio must be at least 1, got {0}")]
    RatioBelowOne(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Auxiliary digraph on the independent set. Arcs carry their witness paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorGraph {
    vertices: Vec<NodeId>,
    arcs: Vec<WitnessPath>,
}

impl ConnectorGraph {
    /// `vertices` must be sorted; arcs are kept in the given order.
    pub(crate) fn from_parts(vertices: Vec<NodeId>, arcs: Vec<WitnessPath>) -> Self {
        Self { vertices, arcs }
    }

    pub fn vertices(&self) -> &[NodeId] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[WitnessPath] {
        &self.arcs
    }

    /// The arc structure as a [`Digraph`] on positions in [`Self::vertices`].
    /// Parallel arcs collapse to one.
    pub fn to_digraph(&self) -> Digraph {
        let pos = |v: NodeId| {
            self.vertices
                .binary_search(&v)
                .expect("arc endpoint is a connector vertex")
        };
        let pairs: BTreeSet<(usize, usize)> =
            self.arcs.iter().map(|a| (pos(a.from), pos(a.to))).collect();
        Digraph::from_arcs(self.vertices.len(), pairs).expect("connector arcs are simple")
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.to_digraph().is_strongly_connected()
    }

    /// Largest number of distinct out-targets of a vertex.
    pub fn max_out_degree(&self) -> usize {
        let g = self.to_digraph();
        (0..g.n())
            .map(|v| g.out_neighbors(v).len())
            .max()
            .unwrap_or(0)
    }

    /// Largest in-degree plus out-degree of a vertex.
    pub fn max_total_degree(&self) -> usize {
        let g = self.to_digraph();
        (0..g.n()).map(|v| g.total_degree(v)).max().unwrap_or(0)
    }

    /// Union of the inner nodes of all arcs.
    pub fn inner_nodes(&self) -> BTreeSet<NodeId> {
        self.arcs
            .iter()
            .flat_map(|a| a.inner.iter().copied())
            .collect()
    }
}

fn check_mis(g: &Digraph, mis: &[NodeId]) -> Result<(), ApproxError> {
    match g.bidirectional_subgraph().is_independent_maximal(mis)? {
        (true, true) => Ok(()),
        _ => Err(ApproxError::NotMaximalIndependent),
    }
}

/// Enumerates every path of one to three hops between distinct members of
/// `mis` whose inner nodes avoid `mis`. Sources are scanned in ascending id and
/// out-neighbors in ascending id.
pub fn build_connector_graph(g: &Digraph, mis: &[NodeId]) -> Result<ConnectorGraph, ApproxError> {
    check_mis(g, mis)?;
    let in_mis = g.mask(mis)?;
    let mut vertices = mis.to_vec();
    vertices.sort_unstable();
    vertices.dedup();

    let mut arcs = Vec::new();
    for &u in &vertices {
        for &a in g.out_neighbors(u) {
            if in_mis[a] {
                arcs.push(WitnessPath::new(u, a, vec![]));
                continue;
            }
            for &b in g.out_neighbors(a) {
                if b == u {
                    continue;
                }
                if in_mis[b] {
                    arcs.push(WitnessPath::new(u, b, vec![a]));
                    continue;
                }
                for &c in g.out_neighbors(b) {
                    if c != u && in_mis[c] {
                        arcs.push(WitnessPath::new(u, c, vec![a, b]));
                    }
                }
            }
        }
    }
    Ok(ConnectorGraph { vertices, arcs })
}

/// Keeps one arc per ordered pair: the shortest witness, ties broken by the
/// lexicographically smallest inner sequence. Output arcs are sorted by pair.
pub fn dedupe(cg: &ConnectorGraph) -> ConnectorGraph {
    let mut arcs = cg.arcs.clone();
    arcs.sort_by(|a, b| {
        (a.from, a.to, a.inner.len(), &a.inner).cmp(&(b.from, b.to, b.inner.len(), &b.inner))
    });
    arcs.dedup_by(|later, kept| (later.from, later.to) == (kept.from, kept.to));
    ConnectorGraph {
        vertices: cg.vertices.clone(),
        arcs,
    }
}

/// Full run of the approximation with its intermediate structures.
#[derive(Debug, Clone)]
pub struct ApproxOutcome {
    pub solution: Solution,
    pub mis: MisResult,
    /// Deduplicated connector graph.
    pub connector: ConnectorGraph,
}

pub fn approx_scdas(g: &Digraph, mode: MisMode) -> Result<ApproxOutcome, ApproxError> {
    if !g.is_strongly_connected() {
        return Err(ApproxError::NotStronglyConnected);
    }
    let mis = compute_mis(&g.bidirectional_subgraph(), mode);
    let connector = dedupe(&build_connector_graph(g, &mis.members)?);
    let members = mis.members.iter().copied().chain(connector.inner_nodes());
    let mut solution =
        Solution::new(Algorithm::Approx, members).with_witnesses(connector.arcs.clone());
    if let MisMode::Luby(seed) = mode {
        solution = solution.with_seed(seed);
    }
    Ok(ApproxOutcome {
        solution,
        mis,
        connector,
    })
}

/// `⌊49k² − 1⌋`, the bound on a connector vertex's degree for ratio `k`.
pub fn connector_degree_cap(k: f64) -> Result<u64, ApproxError> {
    if k.is_nan() || k < 1.0 {
        return Err(ApproxError::RatioBelowOne(k));
    }
    Ok((49.0 * k * k - 1.0).floor() as u64)
}

/// Upper bound on any independent set in terms of the optimum:
/// `2.4(k+½)²·opt + 3.7(k+½)²`.
pub fn independent_set_bound(k: f64, opt: usize) -> f64 {
    let h = (k + 0.5) * (k + 0.5);
    2.4 * h * opt as f64 + 3.7 * h
}

/// `|I| · (1 + 2Δ(G'))`.
pub fn connector_size_bound(mis_size: usize, max_total_degree: usize) -> usize {
    mis_size * (1 + 2 * max_total_degree)
}

/// End-to-end bound on the approximation's output size.
pub fn approximation_bound(k: f64, opt: usize) -> Result<f64, ApproxError> {
    let cap = connector_degree_cap(k)?;
    Ok(independent_set_bound(k, opt) * (1 + 2 * cap) as f64)
}

/// Connected dominating set for graphs whose arcs are all bidirectional.
///
/// Every independent node first links to the smallest-id independent node it
/// reaches within three hops, using that pair's kept witness. If those links
/// leave the independent set split into several groups, the shortest remaining
/// connector arcs between different groups are added until one group is left.
pub fn cds_dgb(g: &Digraph, mode: MisMode) -> Result<ApproxOutcome, ApproxError> {
    if let Some((u, v)) = g.arcs().find(|&(u, v)| !g.has_arc(v, u)) {
        return Err(ApproxError::Unidirectional(u, v));
    }
    if !g.is_strongly_connected() {
        return Err(ApproxError::NotStronglyConnected);
    }
    let mis = compute_mis(&g.bidirectional_subgraph(), mode);
    let mut out = link_independent_set(g, mis)?;
    if let MisMode::Luby(seed) = mode {
        out.solution = out.solution.with_seed(seed);
    }
    Ok(out)
}

fn link_independent_set(g: &Digraph, mis: MisResult) -> Result<ApproxOutcome, ApproxError> {
    let all = dedupe(&build_connector_graph(g, &mis.members)?);

    let pos = |v: NodeId| all.vertices.binary_search(&v).expect("connector vertex");
    let mut groups = UnionFind::new(all.vertices.len());
    let mut chosen: Vec<WitnessPath> = Vec::new();

    // arcs are sorted by (from, to), so the first arc of each source is the
    // one to its smallest-id target
    let mut last_source = None;
    for arc in &all.arcs {
        if last_source == Some(arc.from) {
            continue;
        }
        last_source = Some(arc.from);
        groups.union(pos(arc.from), pos(arc.to));
        chosen.push(arc.clone());
    }

    let mut repair: Vec<&WitnessPath> = all.arcs.iter().collect();
    repair.sort_by(|a, b| {
        (a.inner.len(), a.from, a.to, &a.inner).cmp(&(b.inner.len(), b.from, b.to, &b.inner))
    });
    for arc in repair {
        if groups.union(pos(arc.from), pos(arc.to)) {
            chosen.push(arc.clone());
        }
    }
    chosen.sort();
    chosen.dedup();

    let connector = ConnectorGraph {
        vertices: all.vertices.clone(),
        arcs: chosen,
    };
    let members = mis.members.iter().copied().chain(connector.inner_nodes());
    let solution = Solution::new(Algorithm::CdsDgb, members).with_witnesses(connector.arcs.clone());
    Ok(ApproxOutcome {
        solution,
        mis,
        connector,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when `a` and `b` were in different groups.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
