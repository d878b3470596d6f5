//! Maximal independent sets of the bidirectional residue.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{NodeId, UndirectedGraph};

/// How the independent set is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MisMode {
    /// Lowest id first, sequential.
    Greedy,
    /// Simulated randomized rounds seeded with the given value.
    Luby(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisResult {
    /// Ascending.
    pub members: Vec<NodeId>,
    /// Synchronous rounds used (0 for the greedy mode).
    pub rounds: usize,
}

pub fn compute_mis(u: &UndirectedGraph, mode: MisMode) -> MisResult {
    match mode {
        MisMode::Greedy => greedy_mis(u),
        MisMode::Luby(seed) => luby_mis(u, seed),
    }
}

/// Scan ids upwards, taking each node with no neighbor taken so far.
pub fn greedy_mis(u: &UndirectedGraph) -> MisResult {
    let mut taken = vec![false; u.n()];
    for v in 0..u.n() {
        if u.neighbors(v).iter().all(|&w| !taken[w]) {
            taken[v] = true;
        }
    }
    MisResult {
        members: (0..u.n()).filter(|&v| taken[v]).collect(),
        rounds: 0,
    }
}

/// Randomized MIS with 64-bit priorities.
pub fn luby_mis(u: &UndirectedGraph, seed: u64) -> MisResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = LubyRun::new(u);
    while !run.finished() {
        run.round(|| rng.next_u64());
    }
    run.into_result()
}

/// State of a round-by-round Luby execution. Each round every live node
/// draws a priority (one draw per live node, ascending id); nodes whose
/// `(priority, id)` is smaller than that of every live neighbor join, and
/// they and their neighbors retire.
pub(crate) struct LubyRun<'g> {
    graph: &'g UndirectedGraph,
    live: Vec<bool>,
    member: Vec<bool>,
    rounds: usize,
}

/// What happened in one Luby round.
pub(crate) struct LubyRound {
    /// `(node, priority)` for every node live at the start of the round.
    pub drawn: Vec<(NodeId, u64)>,
    pub joined: Vec<NodeId>,
}

impl<'g> LubyRun<'g> {
    pub fn new(graph: &'g UndirectedGraph) -> Self {
        Self {
            graph,
            live: vec![true; graph.n()],
            member: vec![false; graph.n()],
            rounds: 0,
        }
    }

    pub fn finished(&self) -> bool {
        !self.live.iter().any(|&l| l)
    }

    pub fn round(&mut self, mut draw: impl FnMut() -> u64) -> LubyRound {
        let n = self.graph.n();
        let mut prio = vec![0u64; n];
        let mut drawn = Vec::new();
        for (v, p) in prio.iter_mut().enumerate() {
            if self.live[v] {
                *p = draw();
                drawn.push((v, *p));
            }
        }
        let joined: Vec<NodeId> = (0..n)
            .filter(|&v| {
                self.live[v]
                    && self
                        .graph
                        .neighbors(v)
                        .iter()
                        .filter(|&&w| self.live[w])
                        .all(|&w| (prio[v], v) < (prio[w], w))
            })
            .collect();
        for &v in &joined {
            self.member[v] = true;
            self.live[v] = false;
            for &w in self.graph.neighbors(v) {
                self.live[w] = false;
            }
        }
        self.rounds += 1;
        LubyRound { drawn, joined }
    }

    pub fn into_result(self) -> MisResult {
        MisResult {
            members: (0..self.graph.n()).filter(|&v| self.member[v]).collect(),
            rounds: self.rounds,
        }
    }
}

/// The round budget `c · log2 n` (with `n` floored at 2).
pub fn luby_round_budget(n: usize, c: f64) -> f64 {
    c * (n.max(2) as f64).log2()
}
