//! Exact colouring checked against exhaustive enumeration.

use rand::Rng;

use pentaks_core::orthograph::{
    cabello18, classical_max, ClassicalMax, KsAssignment, KsSubgraph, OrthogonalityGraph,
};
use pentaks_core::paradoxes::HardyGraph;
use pentaks_core::sampling::stream_rng;

/// Best count over all 2^n assignments, `None` if none is valid.
fn brute_force(graph: &OrthogonalityGraph, weight: &[usize]) -> Option<usize> {
    let n = graph.node_count();
    assert!(n <= 20);
    let mut best = None;
    for mask in 0u32..(1 << n) {
        let values: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let a = KsAssignment { values };
        if a.is_valid(graph) {
            let score = a.ones_in(weight);
            best = Some(best.map_or(score, |b: usize| b.max(score)));
        }
    }
    best
}

/// Random graph: a few planted cliques declared as bases plus random edges.
fn random_graph(seed: u64) -> OrthogonalityGraph {
    let mut rng = stream_rng(seed, 0);
    let n = rng.random_range(3..=14);
    let mut edges = Vec::new();
    let mut bases = Vec::new();
    for _ in 0..rng.random_range(0..4) {
        let size = rng.random_range(2..=4.min(n));
        let mut basis: Vec<usize> = Vec::new();
        while basis.len() < size {
            let v = rng.random_range(0..n);
            if !basis.contains(&v) {
                basis.push(v);
            }
        }
        for (i, &a) in basis.iter().enumerate() {
            for &b in &basis[i + 1..] {
                edges.push((a, b));
            }
        }
        bases.push(basis);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < 0.25 {
                edges.push((i, j));
            }
        }
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    OrthogonalityGraph::new(labels, &edges, bases).unwrap()
}

fn check(graph: &OrthogonalityGraph, weight: &[usize]) {
    let exact = classical_max(graph, weight).unwrap();
    assert_eq!(exact.max(), brute_force(graph, weight), "graph {:?}", graph.edges());
    if let ClassicalMax::Colorable { max, witness } = exact {
        assert!(witness.is_valid(graph));
        assert_eq!(witness.ones_in(weight), max);
    }
}

#[test]
fn corpus_agrees_with_brute_force() {
    let all = |g: &OrthogonalityGraph| (0..g.node_count()).collect::<Vec<_>>();
    let corpus = [
        OrthogonalityGraph::pentagon(),
        OrthogonalityGraph::triad(),
        OrthogonalityGraph::complete(6),
        KsSubgraph::template(),
        HardyGraph::template(),
    ];
    for g in &corpus {
        check(g, &all(g));
        check(g, &[0]);
        check(g, &[]);
    }
}

#[test]
fn random_graphs_agree_with_brute_force() {
    for seed in 0..300 {
        let g = random_graph(seed);
        let mut rng = stream_rng(seed, 1);
        let weight: Vec<usize> = (0..g.node_count()).filter(|_| rng.random::<bool>()).collect();
        check(&g, &weight);
    }
}

#[test]
fn removing_a_basis_from_the_eighteen_ray_set_makes_it_colourable() {
    let g = cabello18();
    let labels = g.labels().to_vec();
    let bases: Vec<Vec<usize>> = g.bases()[1..].to_vec();
    let reduced = OrthogonalityGraph::new(labels, g.edges(), bases).unwrap();
    assert!(matches!(classical_max(&reduced, &[]).unwrap(), ClassicalMax::Colorable { .. }));
}
