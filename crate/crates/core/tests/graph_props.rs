mod common;

use common::*;
use scdas::instance::{generate_instance, GenConfig};
use scdas::io::{read_instance, write_instance, IdBase};
use scdas::Verdict;

#[test]
fn scc_matches_transitive_closure() {
    for seed in 0..1200u64 {
        let n = 1 + (seed % 8) as usize;
        let p = [0.15, 0.3, 0.5][(seed % 3) as usize];
        let g = random_digraph(n, p, seed);
        let adj = matrix(&g);
        let all = vec![true; n];
        let r = closure(&adj, &all);
        assert_eq!(
            g.is_strongly_connected(),
            strongly_connected_naive(&adj, &all),
            "seed {seed}"
        );
        let comps = g.strongly_connected_components();
        let mut comp_of = vec![usize::MAX; n];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                assert_eq!(comp_of[v], usize::MAX, "seed {seed}: {v} in two classes");
                comp_of[v] = i;
            }
        }
        for a in 0..n {
            for b in 0..n {
                assert_eq!(comp_of[a] == comp_of[b], r[a][b] && r[b][a], "seed {seed}");
            }
        }
    }
}

#[test]
fn induced_connectivity_matches_closure() {
    for seed in 0..600u64 {
        let n = 2 + (seed % 7) as usize;
        let g = random_digraph(n, 0.4, seed);
        let adj = matrix(&g);
        let keep: Vec<bool> = (0..n).map(|v| (seed >> v) & 1 == 1).collect();
        assert_eq!(
            g.is_strongly_connected_within(&keep),
            strongly_connected_naive(&adj, &keep),
            "seed {seed}"
        );
    }
}

#[test]
fn validator_matches_naive_checker() {
    for seed in 0..400u64 {
        let n = 2 + (seed % 7) as usize;
        let g = random_digraph(n, 0.45, 10_000 + seed);
        let adj = matrix(&g);
        for bits in 1u64..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| bits >> v & 1 == 1).collect();
            let ours = g.validate_scdas(&set).unwrap().is_valid();
            assert_eq!(
                ours,
                is_scdas_naive(&adj, &set_mask(n, &set)),
                "seed {seed} set {set:?}"
            );
        }
    }
}

#[test]
fn full_vertex_set_is_valid() {
    for seed in 0..200u64 {
        let n = 1 + (seed % 40) as usize;
        let g = disk_instance(n, seed);
        let all: Vec<usize> = (0..n).collect();
        assert_eq!(g.digraph().validate_scdas(&all).unwrap(), Verdict::Valid);
    }
}

#[test]
fn domination_is_monotone() {
    for seed in 0..300u64 {
        let n = 3 + (seed % 6) as usize;
        let g = random_digraph(n, 0.4, 20_000 + seed);
        for bits in 0u64..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| bits >> v & 1 == 1).collect();
            if !g.is_dominating_absorbent(&set).unwrap() {
                continue;
            }
            for extra in (0..n).filter(|v| !set.contains(v)) {
                let mut bigger = set.clone();
                bigger.push(extra);
                assert!(g.is_dominating_absorbent(&bigger).unwrap(), "seed {seed}");
            }
        }
    }
}

#[test]
fn disk_arcs_follow_the_range_rule() {
    for seed in 0..300u64 {
        let n = 2 + (seed % 30) as usize;
        let dg = disk_instance(n, seed);
        let g = dg.digraph();
        for a in dg.nodes() {
            for b in dg.nodes() {
                let (dx, dy) = (a.x - b.x, a.y - b.y);
                let expect = a.id != b.id && dx * dx + dy * dy <= a.r * a.r;
                assert_eq!(
                    g.has_arc(a.id, b.id),
                    expect,
                    "seed {seed}: {} -> {}",
                    a.id,
                    b.id
                );
            }
        }
    }
}

fn chi_square(samples: &[f64], lo: f64, hi: f64, bins: usize) -> f64 {
    let mut counts = vec![0usize; bins];
    for &s in samples {
        assert!((lo..hi).contains(&s) || s == hi, "{s} outside [{lo}, {hi}]");
        let b = (((s - lo) / (hi - lo)) * bins as f64) as usize;
        counts[b.min(bins - 1)] += 1;
    }
    let expect = samples.len() as f64 / bins as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expect).powi(2) / expect)
        .sum()
}

#[test]
fn generator_is_uniform() {
    // one node per instance: every attempt is accepted
    let (mut xs, mut ys, mut rs) = (Vec::new(), Vec::new(), Vec::new());
    for seed in 0..10_000u64 {
        let g = generate_instance(&GenConfig::new(1, 1000.0, 200.0, 600.0, seed))
            .unwrap()
            .graph;
        let node = g.nodes()[0];
        xs.push(node.x);
        ys.push(node.y);
        rs.push(node.r);
    }
    // 9 degrees of freedom, p = 0.001
    const CRITICAL: f64 = 27.88;
    assert!(chi_square(&xs, 0.0, 1000.0, 10) < CRITICAL);
    assert!(chi_square(&ys, 0.0, 1000.0, 10) < CRITICAL);
    assert!(chi_square(&rs, 200.0, 600.0, 10) < CRITICAL);
}

#[test]
fn generated_instances_are_strongly_connected_and_reproducible() {
    for seed in 0..50u64 {
        let cfg = GenConfig::new(20, 700.0, 150.0, 450.0, seed);
        let a = generate_instance(&cfg).unwrap();
        let b = generate_instance(&cfg).unwrap();
        assert_eq!(a, b);
        let adj = matrix(a.graph.digraph());
        assert!(strongly_connected_naive(&adj, &[true; 20]));
    }
}

#[test]
fn instance_files_round_trip() {
    for seed in 0..50u64 {
        let g = disk_instance(15, seed);
        for base in [IdBase::Zero, IdBase::OneBased] {
            let back = read_instance(&write_instance(&g, base), base).unwrap();
            assert_eq!(back.nodes(), g.nodes());
            assert_eq!(back.digraph(), g.digraph());
        }
    }
}
