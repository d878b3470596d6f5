//! Disk graphs, plain digraphs and the backbone validators.
//!
//! Every algorithm in this crate works on [`Digraph`]; [`DiskGraph`] only adds
//! the geometry the arcs were derived from (needed for the transmission ratio
//! `k` and for writing instance files).

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Dense node index, `0..n`.
pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("duplicate node id {0}")]
    DuplicateId(NodeId),
    #[error("node ids are not dense: expected {expected}, found {found}")]
    NonDenseIds { expected: NodeId, found: NodeId },
    #[error("node {id} has nonpositive range {r}")]
    NonPositiveRange { id: NodeId, r: f64 },
    #[error("node {id} has a non-finite coordinate or range")]
    NonFinite { id: NodeId },
    #[error("node {node} is out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(NodeId, NodeId),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
}

/// A wireless node: position in meters and transmission range in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskNode {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

impl DiskNode {
    pub fn new(id: NodeId, x: f64, y: f64, r: f64) -> Self {
        Self { id, x, y, r }
    }

    /// Squared Euclidean distance to `other`.
    pub fn dist2(&self, other: &DiskNode) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Whether this node's transmission reaches `other` (`d ≤ r`, compared squared).
    pub fn reaches(&self, other: &DiskNode) -> bool {
        self.dist2(other) <= self.r * self.r
    }
}

/// Directed graph on `0..n` with sorted, duplicate-free adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    out: Vec<Vec<NodeId>>,
    inc: Vec<Vec<NodeId>>,
}

impl Digraph {
    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Self {
        Self {
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
        }
    }

    pub fn from_arcs(
        n: usize,
        arcs: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for (u, v) in arcs {
            for node in [u, v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.out[u].push(v);
            g.inc[v].push(u);
        }
        for u in 0..n {
            g.out[u].sort_unstable();
            g.inc[u].sort_unstable();
            if let Some(w) = g.out[u].windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateArc(u, w[0]));
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.out[u]
    }

    pub fn in_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.inc[u]
    }

    pub fn has_arc(&self, u: NodeId, v: NodeId) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// All arcs in ascending `(u, v)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Sorted union of in- and out-neighbors.
    pub fn neighbors(&self, u: NodeId) -> Vec<NodeId> {
        let mut all: Vec<NodeId> = self.out[u].iter().chain(&self.inc[u]).copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// `|in| + |out|`.
    pub fn total_degree(&self, u: NodeId) -> usize {
        self.out[u].len() + self.inc[u].len()
    }

    /// The same graph with every arc reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            out: self.inc.clone(),
            inc: self.out.clone(),
        }
    }

    /// Whether every arc has its reverse arc.
    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    fn check_members(&self, set: &[NodeId]) -> Result<(), GraphError> {
        match set.iter().find(|&&v| v >= self.n()) {
            Some(&node) => Err(GraphError::NodeOutOfRange { node, n: self.n() }),
            None => Ok(()),
        }
    }

    /// Membership mask for `set`, which must lie inside `0..n`.
    pub fn mask(&self, set: &[NodeId]) -> Result<Vec<bool>, GraphError> {
        self.check_members(set)?;
        let mut mask = vec![false; self.n()];
        for &v in set {
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Subgraph induced by `set`, relabelled to `0..set.len()` in ascending id order.
    /// Also returns the old id of each new node.
    pub fn induced(&self, set: &[NodeId]) -> Result<(Digraph, Vec<NodeId>), GraphError> {
        let mask = self.mask(set)?;
        let members: Vec<NodeId> = (0..self.n()).filter(|&v| mask[v]).collect();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in members.iter().enumerate() {
            index[v] = i;
        }
        let arcs = members.iter().flat_map(|&u| {
            self.out[u]
                .iter()
                .filter(|&&v| mask[v])
                .map(|&v| (index[u], index[v]))
                .collect::<Vec<_>>()
        });
        let g = Digraph::from_arcs(members.len(), arcs)?;
        Ok((g, members))
    }

    /// Nodes reachable from `start` using only nodes where `alive` holds.
    fn reach_mask(&self, start: NodeId, alive: &[bool], reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            let next = if reverse { &self.inc[u] } else { &self.out[u] };
            for &v in next {
                if alive[v] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Strong connectivity of the subgraph induced by the nodes where `alive` holds.
    /// An empty selection counts as strongly connected.
    pub fn is_strongly_connected_within(&self, alive: &[bool]) -> bool {
        let Some(start) = alive.iter().position(|&a| a) else {
            return true;
        };
        let count = alive.iter().filter(|&&a| a).count();
        let fwd = self.reach_mask(start, alive, false);
        if fwd.iter().filter(|&&s| s).count() != count {
            return false;
        }
        let bwd = self.reach_mask(start, alive, true);
        bwd.iter().filter(|&&s| s).count() == count
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.is_strongly_connected_within(&vec![true; self.n()])
    }

    /// Strongly connected components (iterative Tarjan). Each class is sorted
    /// and the classes are ordered by their smallest member.
    pub fn strongly_connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.n();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut comps = Vec::new();
        // (node, position in its out-list)
        let mut call: Vec<(NodeId, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            call.push((root, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (u, ref mut pos)) = call.last_mut() {
                if let Some(&v) = self.out[u].get(*pos) {
                    *pos += 1;
                    if index[v] == UNSEEN {
                        index[v] = next_index;
                        low[v] = next_index;
                        next_index += 1;
                        stack.push(v);
                        on_stack[v] = true;
                        call.push((v, 0));
                    } else if on_stack[v] {
                        low[u] = low[u].min(index[v]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == u {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
        comps.sort_unstable_by_key(|c| c[0]);
        comps
    }

    /// Hop distances from `src` (`usize::MAX` when unreachable).
    pub fn bfs_distances(&self, src: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.out[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Directed hop diameter. Rejects graphs that are not strongly connected.
    pub fn diameter(&self) -> Result<usize, GraphError> {
        let mut diam = 0;
        for s in 0..self.n() {
            for d in self.bfs_distances(s) {
                if d == usize::MAX {
                    return Err(GraphError::NotStronglyConnected);
                }
                diam = diam.max(d);
            }
        }
        Ok(diam)
    }

    /// Undirected graph keeping only the pairs joined in both directions.
    pub fn bidirectional_subgraph(&self) -> UndirectedGraph {
        let adj = (0..self.n())
            .map(|u| {
                self.out[u]
                    .iter()
                    .copied()
                    .filter(|&v| self.has_arc(v, u))
                    .collect()
            })
            .collect();
        UndirectedGraph { adj }
    }

    /// Every node outside `set` has an in-neighbor in `set` (dominated) and an
    /// out-neighbor in `set` (absorbed).
    pub fn is_dominating_absorbent(&self, set: &[NodeId]) -> Result<bool, GraphError> {
        let mask = self.mask(set)?;
        Ok(self.first_uncovered(&mask).is_none())
    }

    fn first_uncovered(&self, mask: &[bool]) -> Option<Verdict> {
        let dominated = |v: NodeId| mask[v] || self.inc[v].iter().any(|&u| mask[u]);
        let absorbed = |v: NodeId| mask[v] || self.out[v].iter().any(|&u| mask[u]);
        if !(0..self.n()).all(dominated) {
            return Some(Verdict::NotDominating);
        }
        if !(0..self.n()).all(absorbed) {
            return Some(Verdict::NotAbsorbent);
        }
        None
    }

    /// Full backbone check. Criteria are tested in the fixed order
    /// dominating, absorbent, strongly connected.
    pub fn validate_scdas(&self, set: &[NodeId]) -> Result<Verdict, GraphError> {
        let mask = self.mask(set)?;
        if self.n() > 0 && !mask.iter().any(|&m| m) {
            return Ok(Verdict::EmptyOnNonempty);
        }
        if let Some(v) = self.first_uncovered(&mask) {
            return Ok(v);
        }
        if !self.is_strongly_connected_within(&mask) {
            return Ok(Verdict::NotStronglyConnected);
        }
        Ok(Verdict::Valid)
    }
}

/// Outcome of [`Digraph::validate_scdas`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    NotDominating,
    NotAbsorbent,
    NotStronglyConnected,
    EmptyOnNonempty,
}

impl Verdict {
    pub fn is_valid(self) -> bool {
        self == Verdict::Valid
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Valid => "valid",
            Verdict::NotDominating => "not_dominating",
            Verdict::NotAbsorbent => "not_absorbent",
            Verdict::NotStronglyConnected => "not_strongly_connected",
            Verdict::EmptyOnNonempty => "empty_on_nonempty",
        })
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<NodeId>>,
}

impl UndirectedGraph {
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u]
    }

    /// Edges `{u, v}` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    /// `(independent, maximal)`; maximal is only reported true for independent sets.
    pub fn is_independent_maximal(&self, set: &[NodeId]) -> Result<(bool, bool), GraphError> {
        let n = self.n();
        if let Some(&node) = set.iter().find(|&&v| v >= n) {
            return Err(GraphError::NodeOutOfRange { node, n });
        }
        let mut mask = vec![false; n];
        for &v in set {
            mask[v] = true;
        }
        let independent = set.iter().all(|&u| self.adj[u].iter().all(|&v| !mask[v]));
        let covered = (0..n).all(|v| mask[v] || self.adj[v].iter().any(|&u| mask[u]));
        Ok((independent, independent && covered))
    }
}

/// Nodes with geometry plus the arcs derived from the range rule.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGraph {
    nodes: Vec<DiskNode>,
    graph: Digraph,
}

impl DiskGraph {
    /// Builds the disk graph: arc `(u, v)` iff `u != v` and `dist(u, v) ≤ r_u`.
    /// Nodes may come in any order but their ids must be exactly `0..n`.
    pub fn build(mut nodes: Vec<DiskNode>) -> Result<Self, GraphError> {
        nodes.sort_by_key(|d| d.id);
        for (i, node) in nodes.iter().enumerate() {
            if i > 0 && nodes[i - 1].id == node.id {
                return Err(GraphError::DuplicateId(node.id));
            }
            if node.id != i {
                return Err(GraphError::NonDenseIds {
                    expected: i,
                    found: node.id,
                });
            }
            if !(node.x.is_finite() && node.y.is_finite() && node.r.is_finite()) {
                return Err(GraphError::NonFinite { id: node.id });
            }
            if node.r <= 0.0 {
                return Err(GraphError::NonPositiveRange {
                    id: node.id,
                    r: node.r,
                });
            }
        }
        let n = nodes.len();
        let mut arcs = Vec::new();
        for u in &nodes {
            for v in &nodes {
                if u.id != v.id && u.reaches(v) {
                    arcs.push((u.id, v.id));
                }
            }
        }
        let graph = Digraph::from_arcs(n, arcs)?;
        Ok(Self { nodes, graph })
    }

    pub fn nodes(&self) -> &[DiskNode] {
        &self.nodes
    }

    pub fn digraph(&self) -> &Digraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes.iter().map(|d| d.r).fold(f64::INFINITY, f64::min)
    }

    pub fn r_max(&self) -> f64 {
        self.nodes.iter().map(|d| d.r).fold(0.0, f64::max)
    }

    /// Transmission ratio `k = r_max / r_min` over all nodes (1 for an empty graph).
    pub fn transmission_ratio(&self) -> f64 {
        if self.nodes.is_empty() {
            1.0
        } else {
            self.r_max() / self.r_min()
        }
    }
}

/// A problem instance: either geometric or an abstract digraph with no
/// realisation as a disk graph (such as a pure directed 3-cycle).
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Disk(DiskGraph),
    Abstract(Digraph),
}

impl Instance {
    pub fn digraph(&self) -> &Digraph {
        match self {
            Instance::Disk(d) => d.digraph(),
            Instance::Abstract(g) => g,
        }
    }

    pub fn disk(&self) -> Option<&DiskGraph> {
        match self {
            Instance::Disk(d) => Some(d),
            Instance::Abstract(_) => None,
        }
    }

    /// `k`, when the instance has geometry.
    pub fn transmission_ratio(&self) -> Option<f64> {
        self.disk().map(DiskGraph::transmission_ratio)
    }
}

impl From<DiskGraph> for Instance {
    fn from(d: DiskGraph) -> Self {
        Instance::Disk(d)
    }
}

impl From<Digraph> for Instance {
    fn from(g: Digraph) -> Self {
        Instance::Abstract(g)
    }
}
