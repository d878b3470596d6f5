//! Exact oracle and the two comparison heuristics.
//!
//! DAST and G-CMA are reimplemented from their one-line descriptions (two
//! spanning trees; greedy dominating-absorbent set plus shortest paths between
//! components), not from their original publication. Root choice, greedy
//! scoring and every tie-break below are our own.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Digraph, NodeId};
use crate::solution::{Algorithm, Solution};

/// Largest instance the bitmask oracle accepts.
pub const ORACLE_MAX_NODES: usize = 64;

/// Largest instance the oracle is documented to finish on quickly.
pub const ORACLE_FEASIBLE_NODES: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaselineError {
    #[error("input graph is not strongly connected")]
    NotStronglyConnected,
    #[error("oracle supports at most {ORACLE_MAX_NODES} nodes, got {0}")]
    TooLarge(usize),
    #[error("oracle budget exceeded before finding an optimum (best known size {best_known})")]
    BudgetExceeded { best_known: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest cardinality searched; `None` means `n`.
    pub size_cap: Option<usize>,
    pub time_budget: Option<Duration>,
}

struct Masks {
    inc: Vec<u64>,
    out: Vec<u64>,
}

impl Masks {
    fn new(g: &Digraph) -> Self {
        let to_mask = |list: &[NodeId]| list.iter().fold(0u64, |m, &v| m | 1 << v);
        Self {
            inc: (0..g.n()).map(|v| to_mask(g.in_neighbors(v))).collect(),
            out: (0..g.n()).map(|v| to_mask(g.out_neighbors(v))).collect(),
        }
    }

    fn covers(&self, set: u64) -> bool {
        (0..self.inc.len())
            .all(|v| set & (1 << v) != 0 || (self.inc[v] & set != 0 && self.out[v] & set != 0))
    }

    fn strongly_connected(&self, set: u64) -> bool {
        if set == 0 {
            return true;
        }
        let start = set.trailing_zeros() as usize;
        let reach = |adj: &[u64]| {
            let mut seen = 1u64 << start;
            let mut frontier = seen;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = adj[v] & set & !seen;
                seen |= new;
                frontier |= new;
            }
            seen
        };
        reach(&self.out) == set && reach(&self.inc) == set
    }

    fn valid(&self, set: u64) -> bool {
        set != 0 && self.covers(set) && self.strongly_connected(set)
    }
}

/// Smallest valid backbone, enumerating subsets by increasing size and in
/// lexicographic order within a size. Among optima the lexicographically
/// smallest member list is returned.
pub fn brute_force_opt(g: &Digraph, cfg: &OracleConfig) -> Result<Solution, BaselineError> {
    let n = g.n();
    if n > ORACLE_MAX_NODES {
        return Err(BaselineError::TooLarge(n));
    }
    if !g.is_strongly_connected() {
        return Err(BaselineError::NotStronglyConnected);
    }
    if n == 0 {
        return Ok(Solution::new(Algorithm::Opt, []));
    }
    let masks = Masks::new(g);
    let started = Instant::now();
    let cap = cfg.size_cap.unwrap_or(n).min(n);
    let mut tested: u64 = 0;

    for size in 1..=cap {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let set = idx.iter().fold(0u64, |m, &v| m | 1 << v);
            if masks.valid(set) {
                return Ok(Solution::new(Algorithm::Opt, idx));
            }
            tested += 1;
            if tested.is_multiple_of(4096) {
                if let Some(budget) = cfg.time_budget {
                    if started.elapsed() > budget {
                        return Err(BaselineError::BudgetExceeded { best_known: n });
                    }
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Err(BaselineError::BudgetExceeded { best_known: n })
}

/// Advances `idx` (strictly increasing, values below `n`) to the next
/// combination in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Shortest-path arborescence from `root` in `g` (use the reversed graph for
/// the in-arborescence). Each node's parent is its smallest-id in-neighbor one
/// layer closer to the root. Returns `parent[v]` (`None` for the root and for
/// unreachable nodes).
pub fn bfs_arborescence(g: &Digraph, root: NodeId) -> Vec<Option<NodeId>> {
    let dist = g.bfs_distances(root);
    (0..g.n())
        .map(|v| {
            if v == root || dist[v] == usize::MAX {
                return None;
            }
            g.in_neighbors(v)
                .iter()
                .copied()
                .find(|&u| dist[u] != usize::MAX && dist[u] + 1 == dist[v])
        })
        .collect()
}

/// Dominating-absorbent spanning trees: root of maximum total degree, plus
/// the internal nodes of its shortest-path out- and in-arborescences.
pub fn dast(g: &Digraph) -> Result<Solution, BaselineError> {
    if !g.is_strongly_connected() {
        return Err(BaselineError::NotStronglyConnected);
    }
    if g.n() == 0 {
        return Ok(Solution::new(Algorithm::Dast, []));
    }
    let root = (0..g.n())
        .min_by_key(|&v| (std::cmp::Reverse(g.total_degree(v)), v))
        .expect("nonempty graph");
    let out_tree = bfs_arborescence(g, root);
    let in_tree = bfs_arborescence(&g.reversed(), root);
    let internal = out_tree.iter().chain(&in_tree).flatten().copied();
    Ok(Solution::new(
        Algorithm::Dast,
        std::iter::once(root).chain(internal),
    ))
}

/// Greedy dominating-absorbent set, then shortest connecting paths between
/// strongly connected components of the induced subgraph.
pub fn gcma(g: &Digraph) -> Result<Solution, BaselineError> {
    if !g.is_strongly_connected() {
        return Err(BaselineError::NotStronglyConnected);
    }
    let n = g.n();
    let mut in_set = vec![false; n];

    // phase 1: every outside node demands one in-neighbor and one
    // out-neighbor inside the set
    let mut need_dom = vec![true; n];
    let mut need_abs = vec![true; n];
    loop {
        let gain = |x: NodeId| {
            let own = need_dom[x] as usize + need_abs[x] as usize;
            let dom = g.out_neighbors(x).iter().filter(|&&y| need_dom[y]).count();
            let abs = g.in_neighbors(x).iter().filter(|&&y| need_abs[y]).count();
            own + dom + abs
        };
        let best = (0..n)
            .filter(|&x| !in_set[x])
            .map(|x| (gain(x), x))
            .filter(|&(gain, _)| gain > 0)
            .min_by_key(|&(gain, x)| (std::cmp::Reverse(gain), x));
        let Some((_, x)) = best else { break };
        in_set[x] = true;
        need_dom[x] = false;
        need_abs[x] = false;
        for &y in g.out_neighbors(x) {
            need_dom[y] = false;
        }
        for &y in g.in_neighbors(x) {
            need_abs[y] = false;
        }
    }

    // phase 2
    while let Some(path) = shortest_merging_path(g, &in_set) {
        for v in path {
            in_set[v] = true;
        }
    }
    Ok(Solution::new(
        Algorithm::Gcma,
        (0..n).filter(|&v| in_set[v]),
    ))
}

/// Inner nodes of the shortest path in `g` from a set component `A` to a set
/// component `B` that `A` cannot yet reach inside the set. Ties: smallest
/// source, then smallest target, then lexicographically smallest path.
/// `None` once the set induces a strongly connected graph.
fn shortest_merging_path(g: &Digraph, in_set: &[bool]) -> Option<Vec<NodeId>> {
    let members: Vec<NodeId> = (0..g.n()).filter(|&v| in_set[v]).collect();
    let (sub, ids) = g.induced(&members).expect("members are in range");
    let comps = sub.strongly_connected_components();
    if comps.len() <= 1 {
        return None;
    }
    let mut comp_of = vec![usize::MAX; g.n()];
    for (c, class) in comps.iter().enumerate() {
        for &i in class {
            comp_of[ids[i]] = c;
        }
    }
    // reach[c][d]: d reachable from c inside the set
    let reach: Vec<Vec<bool>> = comps
        .iter()
        .map(|class| {
            let dist = sub.bfs_distances(class[0]);
            let mut r = vec![false; comps.len()];
            for (i, d) in dist.into_iter().enumerate() {
                if d != usize::MAX {
                    r[comp_of[ids[i]]] = true;
                }
            }
            r
        })
        .collect();

    let mut best: Option<(usize, NodeId, NodeId, Vec<NodeId>)> = None;
    for &s in &members {
        let parent = lex_bfs_parents(g, s, g.n());
        for &t in &members {
            let (cs, ct) = (comp_of[s], comp_of[t]);
            if cs == ct || reach[cs][ct] {
                continue;
            }
            let Some(path) = walk_back(&parent, s, t) else {
                continue;
            };
            let cand = (path.len(), s, t, path);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    let (_, _, _, path) = best.expect("a strongly connected graph joins every pair of components");
    Some(path[1..path.len() - 1].to_vec())
}

/// BFS parents giving lexicographically smallest shortest paths from `src`,
/// exploring at most `max_depth` layers.
fn lex_bfs_parents(g: &Digraph, src: NodeId, max_depth: usize) -> Vec<Option<NodeId>> {
    let mut parent = vec![None; g.n()];
    let mut depth = vec![usize::MAX; g.n()];
    depth[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        if depth[u] >= max_depth {
            continue;
        }
        for &v in g.out_neighbors(u) {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    parent
}

fn walk_back(parent: &[Option<NodeId>], src: NodeId, dst: NodeId) -> Option<Vec<NodeId>> {
    let mut path = vec![dst];
    let mut cur = dst;
    while cur != src {
        cur = parent[cur]?;
        path.push(cur);
    }
    path.reverse();
    Some(path)
}
