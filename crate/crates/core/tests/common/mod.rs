//! Helpers shared by the integration tests. The checkers here deliberately
//! avoid the library's own graph routines: they work on adjacency matrices
//! and transitive closures.
#![allow(dead_code)]

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scdas::experiment::scaled_side;
use scdas::instance::{generate_instance, GenConfig};
use scdas::{Digraph, DiskGraph};

pub const R_MIN: f64 = 200.0;
pub const R_MAX: f64 = 600.0;

/// Area side used for random instances of `n` nodes: the full 1000 x 1000 square
/// from 50 nodes upwards, scaled down below that.
pub fn side_for(n: usize) -> f64 {
    if n >= 50 {
        1000.0
    } else {
        scaled_side(n)
    }
}

pub fn disk_instance(n: usize, seed: u64) -> DiskGraph {
    let cfg = GenConfig::new(n, side_for(n), R_MIN, R_MAX, seed);
    generate_instance(&cfg)
        .unwrap_or_else(|e| panic!("n={n} seed={seed}: {e}"))
        .graph
}

/// Random digraph where each ordered pair is an arc with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let coin = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            if u != v && coin < p {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arcs(n, arcs).unwrap()
}

pub fn matrix(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in g.arcs() {
        m[u][v] = true;
    }
    m
}

/// Reflexive-transitive closure of the subgraph induced by `keep`
/// (Floyd–Warshall).
pub fn closure(adj: &[Vec<bool>], keep: &[bool]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut r = vec![vec![false; n]; n];
    for u in 0..n {
        if !keep[u] {
            continue;
        }
        r[u][u] = true;
        for v in 0..n {
            if keep[v] && adj[u][v] {
                r[u][v] = true;
            }
        }
    }
    for k in 0..n {
        let via = r[k].clone();
        for row in r.iter_mut() {
            if row[k] {
                for (cell, &reach) in row.iter_mut().zip(&via) {
                    *cell |= reach;
                }
            }
        }
    }
    r
}

pub fn strongly_connected_naive(adj: &[Vec<bool>], keep: &[bool]) -> bool {
    let r = closure(adj, keep);
    let members: Vec<usize> = (0..adj.len()).filter(|&v| keep[v]).collect();
    members.iter().all(|&a| members.iter().all(|&b| r[a][b]))
}

/// Dominating, absorbent, nonempty and strongly connected.
pub fn is_scdas_naive(adj: &[Vec<bool>], keep: &[bool]) -> bool {
    let n = adj.len();
    if !keep.iter().any(|&k| k) {
        return n == 0;
    }
    let covered = (0..n).all(|v| {
        keep[v] || ((0..n).any(|u| keep[u] && adj[u][v]) && (0..n).any(|w| keep[w] && adj[v][w]))
    });
    covered && strongly_connected_naive(adj, keep)
}

/// Smallest valid set, found by growing the size and recursing over
/// include/exclude decisions in id order.
pub fn min_scdas_naive(adj: &[Vec<bool>]) -> Vec<usize> {
    fn pick(adj: &[Vec<bool>], keep: &mut Vec<bool>, from: usize, left: usize) -> bool {
        if left == 0 {
            return is_scdas_naive(adj, keep);
        }
        for v in from..adj.len() {
            if adj.len() - v < left {
                break;
            }
            keep[v] = true;
            if pick(adj, keep, v + 1, left - 1) {
                return true;
            }
            keep[v] = false;
        }
        false
    }
    let n = adj.len();
    for size in 1..=n {
        let mut keep = vec![false; n];
        if pick(adj, &mut keep, 0, size) {
            return (0..n).filter(|&v| keep[v]).collect();
        }
    }
    unreachable!("the full vertex set of a strongly connected graph is valid")
}

pub fn set_mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}
