//! Low-degree elimination, high-degree selection.
//!
//! All nodes start white. Each step takes the white node `v` of minimum degree
//! (smallest id on ties). If the non-red nodes other than `v` do not induce a
//! strongly connected graph, `v` turns green. Otherwise `v` turns red, and when
//! no in-neighbor (out-neighbor) of `v` is green, the non-red in-neighbor
//! (out-neighbor) of maximum degree turns green. Afterwards any white node left
//! with a single non-red in-neighbor or out-neighbor forces that neighbor green.
//!
//! Degree is the number of distinct non-red in- or out-neighbors. The non-red
//! nodes form a valid backbone after every step; the greens are the output.

use std::fmt;

use thiserror::Error;

use crate::graph::{Digraph, NodeId};
use crate::solution::{Algorithm, Solution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LdhdError {
    #[error("input graph is not strongly connected")]
    NotStronglyConnected,
    #[error("no white node left")]
    NoWhiteNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    White,
    Green,
    Red,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdhdState {
    colors: Vec<Color>,
    degree: Vec<usize>,
    steps: usize,
    connectivity_checks: usize,
}

impl LdhdState {
    pub fn new(g: &Digraph) -> Self {
        let colors = vec![Color::White; g.n()];
        let degree = degrees_from_colors(g, &colors);
        Self {
            colors,
            degree,
            steps: 0,
            connectivity_checks: 0,
        }
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Strong-connectivity tests run so far.
    pub fn connectivity_checks(&self) -> usize {
        self.connectivity_checks
    }

    pub fn is_done(&self) -> bool {
        !self.colors.contains(&Color::White)
    }

    pub fn with_color(&self, c: Color) -> Vec<NodeId> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == c)
            .collect()
    }

    /// White and green nodes: the current feasible backbone.
    pub fn non_red(&self) -> Vec<NodeId> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] != Color::Red)
            .collect()
    }

    fn non_red_among(&self, nodes: &[NodeId]) -> Vec<NodeId> {
        nodes
            .iter()
            .copied()
            .filter(|&u| self.colors[u] != Color::Red)
            .collect()
    }

    /// Non-red node of maximum degree among `nodes` (smallest id on ties).
    fn pick_max_degree(&self, nodes: &[NodeId]) -> Option<NodeId> {
        nodes
            .iter()
            .copied()
            .filter(|&u| self.colors[u] != Color::Red)
            .min_by_key(|&u| (std::cmp::Reverse(self.degree[u]), u))
    }

    fn next_white(&self) -> Option<NodeId> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == Color::White)
            .min_by_key(|&v| (self.degree[v], v))
    }
}

/// Degree table recomputed from scratch.
pub fn degrees_from_colors(g: &Digraph, colors: &[Color]) -> Vec<usize> {
    (0..g.n())
        .map(|v| {
            g.neighbors(v)
                .into_iter()
                .filter(|&u| colors[u] != Color::Red)
                .count()
        })
        .collect()
}

/// One iteration of the main loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub step: usize,
    pub v: NodeId,
    /// `Green` or `Red`.
    pub verdict: Color,
    /// In-neighbor selected to dominate `v`, if one had to be selected.
    pub u: Option<NodeId>,
    /// Out-neighbor selected to absorb `v`, if one had to be selected.
    pub w: Option<NodeId>,
    /// Nodes turned green by the single-neighbor rule.
    pub forced: Vec<NodeId>,
}

impl fmt::Display for StepRecord {
    /// `step v verdict [u=.. w=.. forced=..]`; the bracketed part only for red steps.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<NodeId>| x.map_or("-".to_string(), |v| v.to_string());
        match self.verdict {
            Color::Red => {
                let forced = if self.forced.is_empty() {
                    "-".to_string()
                } else {
                    self.forced
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                write!(
                    f,
                    "{} {} red u={} w={} forced={}",
                    self.step,
                    self.v,
                    opt(self.u),
                    opt(self.w),
                    forced
                )
            }
            _ => write!(f, "{} {} green", self.step, self.v),
        }
    }
}

/// For every white node, turns green its sole non-red in-neighbor
/// (out-neighbor) if it has exactly one. Nodes are scanned in ascending id
/// and a node forced green earlier in the scan no longer counts as white.
/// Forcing never changes the red set, so one pass reaches the fixpoint.
/// Returns the newly green nodes in the order they changed.
pub fn forced_neighbor_rule(state: &mut LdhdState, g: &Digraph) -> Vec<NodeId> {
    let mut forced = Vec::new();
    for x in 0..g.n() {
        if state.colors[x] != Color::White {
            continue;
        }
        for side in [g.in_neighbors(x), g.out_neighbors(x)] {
            if let [only] = state.non_red_among(side)[..] {
                if state.colors[only] != Color::Green {
                    state.colors[only] = Color::Green;
                    forced.push(only);
                }
            }
        }
    }
    forced
}

/// Runs one iteration on `state`.
pub fn ldhd_step(state: &mut LdhdState, g: &Digraph) -> Result<StepRecord, LdhdError> {
    let v = state.next_white().ok_or(LdhdError::NoWhiteNode)?;
    state.steps += 1;
    let step = state.steps;

    let mut rest: Vec<bool> = state.colors.iter().map(|&c| c != Color::Red).collect();
    rest[v] = false;
    let keeps_connectivity = if rest.iter().any(|&r| r) {
        state.connectivity_checks += 1;
        g.is_strongly_connected_within(&rest)
    } else {
        false
    };

    if !keeps_connectivity {
        state.colors[v] = Color::Green;
        return Ok(StepRecord {
            step,
            v,
            verdict: Color::Green,
            u: None,
            w: None,
            forced: Vec::new(),
        });
    }

    state.colors[v] = Color::Red;
    for x in g.neighbors(v) {
        state.degree[x] -= 1;
    }

    let select = |side: &[NodeId], state: &mut LdhdState| {
        if side.iter().any(|&x| state.colors[x] == Color::Green) {
            return None;
        }
        let pick = state.pick_max_degree(side)?;
        state.colors[pick] = Color::Green;
        Some(pick)
    };
    let u = select(g.in_neighbors(v), state);
    let w = select(g.out_neighbors(v), state);
    let forced = forced_neighbor_rule(state, g);

    Ok(StepRecord {
        step,
        v,
        verdict: Color::Red,
        u,
        w,
        forced,
    })
}

#[derive(Debug, Clone)]
pub struct LdhdRun {
    pub solution: Solution,
    pub trace: Vec<StepRecord>,
    pub connectivity_checks: usize,
}

impl LdhdRun {
    /// One line per step, as produced by [`StepRecord`]'s `Display`.
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Runs the heuristic to completion. `observe` sees the state after every step.
pub fn ldhd_observed(
    g: &Digraph,
    mut observe: impl FnMut(&LdhdState, &StepRecord),
) -> Result<LdhdRun, LdhdError> {
    if !g.is_strongly_connected() {
        return Err(LdhdError::NotStronglyConnected);
    }
    let mut state = LdhdState::new(g);
    let mut trace = Vec::with_capacity(g.n());
    while !state.is_done() {
        let rec = ldhd_step(&mut state, g)?;
        observe(&state, &rec);
        trace.push(rec);
    }
    Ok(LdhdRun {
        solution: Solution::new(Algorithm::Ldhd, state.with_color(Color::Green)),
        trace,
        connectivity_checks: state.connectivity_checks,
    })
}

pub fn ldhd(g: &Digraph) -> Result<LdhdRun, LdhdError> {
    ldhd_observed(g, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Verdict;
    use crate::instance::{all_fixtures, fixture};

    fn g(name: &str) -> Digraph {
        fixture(name).unwrap().digraph().clone()
    }

    #[test]
    fn i1_hand_trace() {
        let run = ldhd(&g("i1_mixed")).unwrap();
        assert_eq!(run.solution.members(), &[1]);
        assert_eq!(
            run.trace_text(),
            "1 0 red u=1 w=- forced=-\n2 2 red u=- w=- forced=-\n"
        );
    }

    #[test]
    fn i1_first_step_colors() {
        let g = g("i1_mixed");
        let mut s = LdhdState::new(&g);
        assert_eq!(s.degrees(), &[2, 2, 2]);
        ldhd_step(&mut s, &g).unwrap();
        assert_eq!(s.colors(), &[Color::Red, Color::Green, Color::White]);
    }

    #[test]
    fn star_keeps_hub() {
        let run = ldhd(&g("star5")).unwrap();
        assert_eq!(run.solution.members(), &[0]);
        assert_eq!(run.trace[0].u, Some(0));
    }

    #[test]
    fn dicycle_keeps_everything() {
        let run = ldhd(&g("dicycle3")).unwrap();
        assert_eq!(run.solution.members(), &[0, 1, 2]);
        assert!(run.trace.iter().all(|s| s.verdict == Color::Green));
    }

    #[test]
    fn k3_first_step() {
        let g = g("k3");
        let mut s = LdhdState::new(&g);
        let rec = ldhd_step(&mut s, &g).unwrap();
        assert_eq!(
            (rec.v, rec.verdict, rec.u, rec.w),
            (0, Color::Red, Some(1), None)
        );
        assert_eq!(s.degrees()[1..], [1, 1]);
    }

    #[test]
    fn green_step_has_no_side_effects() {
        let g = g("dicycle3");
        let mut s = LdhdState::new(&g);
        let before = s.degrees().to_vec();
        let rec = ldhd_step(&mut s, &g).unwrap();
        assert_eq!(rec.verdict, Color::Green);
        assert_eq!(s.degrees(), &before[..]);
        assert_eq!(s.with_color(Color::Green), vec![rec.v]);
    }

    #[test]
    fn single_node_turns_green() {
        let run = ldhd(&Digraph::empty(1)).unwrap();
        assert_eq!(run.solution.members(), &[0]);
    }

    #[test]
    fn step_without_white_node_fails() {
        let g = Digraph::empty(1);
        let mut s = LdhdState::new(&g);
        ldhd_step(&mut s, &g).unwrap();
        assert_eq!(ldhd_step(&mut s, &g), Err(LdhdError::NoWhiteNode));
    }

    #[test]
    fn forced_rule_examples() {
        // i1 with 0 red: whites 1 and 2 each keep only the other; 1 comes
        // first, and 2 is then green so it forces nothing
        let g = g("i1_mixed");
        let mut s = LdhdState::new(&g);
        s.colors[0] = Color::Red;
        assert_eq!(forced_neighbor_rule(&mut s, &g), vec![2]);
        assert_eq!(s.colors()[2], Color::Green);

        // two non-red in-neighbors: nothing happens
        let g = Digraph::from_arcs(3, [(0, 2), (1, 2), (2, 0), (2, 1)]).unwrap();
        let mut s = LdhdState::new(&g);
        s.colors[2] = Color::Green;
        assert!(forced_neighbor_rule(&mut s, &g).is_empty());
    }

    #[test]
    fn forced_rule_reaches_fixpoint_in_one_pass() {
        // path 0 <-> 1 <-> 2 <-> 3 with 0 red: whites 1,2,3 force 2 (for 1 and 3);
        // a second pass changes nothing
        let arcs = [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)];
        let g = Digraph::from_arcs(4, arcs).unwrap();
        let mut s = LdhdState::new(&g);
        s.colors[0] = Color::Red;
        assert_eq!(forced_neighbor_rule(&mut s, &g), vec![2]);
        assert!(forced_neighbor_rule(&mut s, &g).is_empty());
    }

    #[test]
    fn rejects_disconnected_input() {
        let g = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(ldhd(&g).unwrap_err(), LdhdError::NotStronglyConnected);
    }

    #[test]
    fn fixtures_stay_valid_every_step() {
        for (name, inst) in all_fixtures() {
            let g = inst.digraph();
            let mut whites = g.n();
            let run = ldhd_observed(g, |state, _| {
                let now = state.with_color(Color::White).len();
                assert!(now < whites);
                whites = now;
                assert_eq!(
                    g.validate_scdas(&state.non_red()).unwrap(),
                    Verdict::Valid,
                    "{name}"
                );
                assert_eq!(state.degrees(), &degrees_from_colors(g, state.colors())[..]);
            })
            .unwrap();
            assert!(run.trace.len() <= g.n());
            assert!(run.connectivity_checks <= run.trace.len());
        }
    }
}
