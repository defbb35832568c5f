//! Orthogonality graphs, Kochen-Specker value assignments, and the two
//! concrete graphs built from them: the Kochen-Specker subgraph in three
//! dimensions and the 18-ray set in four.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pentagram::Pentagram;
use crate::spectral::{orthogonal_complement_3d, StateVector};

/// `|<u|v>|` below which a realized pair counts as orthogonal.
pub const EDGE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityGraph {
    labels: Vec<String>,
    adjacency: Vec<bool>,
    edges: Vec<(usize, usize)>,
    bases: Vec<Vec<usize>>,
    realization: Option<Vec<StateVector>>,
}

impl OrthogonalityGraph {
    /// Unrealized graph. Every declared basis must be a clique.
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)], bases: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        let mut adjacency = vec![false; n * n];
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i}, {j}) references a missing node")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop on node {i}")));
            }
            set.insert((i.min(j), i.max(j)));
            adjacency[i * n + j] = true;
            adjacency[j * n + i] = true;
        }
        for (b, basis) in bases.iter().enumerate() {
            let unique: BTreeSet<_> = basis.iter().collect();
            if unique.len() != basis.len() || basis.is_empty() {
                return Err(Error::InvalidGraph(format!("basis {b} has repeated or no nodes")));
            }
            for (x, &i) in basis.iter().enumerate() {
                if i >= n {
                    return Err(Error::InvalidGraph(format!("basis {b} references missing node {i}")));
                }
                for &j in &basis[x + 1..] {
                    if !adjacency[i * n + j] {
                        return Err(Error::InvalidGraph(format!(
                            "basis {b}: nodes {} and {} are not joined by an edge",
                            labels[i], labels[j]
                        )));
                    }
                }
            }
        }
        Ok(Self { labels, adjacency, edges: set.into_iter().collect(), bases, realization: None })
    }

    /// Attaches vectors to the nodes, checking dimensions, basis sizes and
    /// that every edge is orthogonal within [`EDGE_TOL`].
    pub fn with_realization(mut self, vectors: Vec<StateVector>) -> Result<Self> {
        if vectors.len() != self.labels.len() {
            return Err(Error::InvalidGraph(format!(
                "{} vectors for {} nodes",
                vectors.len(),
                self.labels.len()
            )));
        }
        let dim = vectors.first().map(StateVector::dim).unwrap_or(3);
        if let Some((i, v)) = vectors.iter().enumerate().find(|(_, v)| v.dim() != dim) {
            return Err(Error::InvalidGraph(format!(
                "node {} has dimension {}, expected {dim}",
                self.labels[i],
                v.dim()
            )));
        }
        for (b, basis) in self.bases.iter().enumerate() {
            if basis.len() != dim {
                return Err(Error::InvalidGraph(format!(
                    "basis {b} has {} nodes but the realization has dimension {dim}",
                    basis.len()
                )));
            }
        }
        for &(i, j) in &self.edges {
            let overlap = vectors[i].inner(&vectors[j]).norm();
            if overlap >= EDGE_TOL {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) is not orthogonal: |<u|v>| = {overlap:e}",
                    self.labels[i], self.labels[j]
                )));
            }
        }
        self.realization = Some(vectors);
        Ok(self)
    }

    /// Realized graph whose edges are all orthogonal pairs among `vectors`.
    pub fn from_vectors(labels: Vec<String>, vectors: Vec<StateVector>, bases: Vec<Vec<usize>>) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..vectors.len() {
            for j in (i + 1)..vectors.len() {
                if vectors[i].inner(&vectors[j]).norm() < EDGE_TOL {
                    edges.push((i, j));
                }
            }
        }
        Self::new(labels, &edges, bases)?.with_realization(vectors)
    }

    /// The bare 5-cycle `0-1-2-3-4-0`.
    pub fn pentagon() -> Self {
        let labels = (0..5).map(|i| i.to_string()).collect();
        let edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        Self::new(labels, &edges, Vec::new()).expect("valid")
    }

    /// `K_n` without bases.
    pub fn complete(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Self::new(labels, &edges, Vec::new()).expect("valid")
    }

    /// A triangle declared as one basis.
    pub fn triad() -> Self {
        let labels = (0..3).map(|i| i.to_string()).collect();
        Self::new(labels, &[(0, 1), (1, 2), (0, 2)], vec![vec![0, 1, 2]]).expect("valid")
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    pub fn realization(&self) -> Option<&[StateVector]> {
        self.realization.as_deref()
    }

    pub fn dim(&self) -> Option<usize> {
        self.realization().and_then(|r| r.first()).map(StateVector::dim)
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        let n = self.labels.len();
        i < n && j < n && self.adjacency[i * n + j]
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.labels.len()).filter(move |&j| self.is_edge(i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbours(i).count()
    }

    /// Largest `|<u|v>|` over declared edges, `None` when unrealized.
    pub fn max_edge_overlap(&self) -> Option<f64> {
        let r = self.realization()?;
        Some(
            self.edges
                .iter()
                .map(|&(i, j)| r[i].inner(&r[j]).norm())
                .fold(0.0, f64::max),
        )
    }
}

/// A 0/1 value per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsAssignment {
    pub values: Vec<bool>,
}

impl KsAssignment {
    /// No edge with both ends 1, every basis sums to exactly 1.
    pub fn is_valid(&self, graph: &OrthogonalityGraph) -> bool {
        if self.values.len() != graph.node_count() {
            return false;
        }
        let edges_ok = graph.edges().iter().all(|&(i, j)| !(self.values[i] && self.values[j]));
        let bases_ok = graph
            .bases()
            .iter()
            .all(|b| b.iter().filter(|&&i| self.values[i]).count() == 1);
        edges_ok && bases_ok
    }

    pub fn ones_in(&self, nodes: &[usize]) -> usize {
        nodes.iter().filter(|&&i| self.values[i]).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalMax {
    /// Best count of 1-valued nodes in the weight set, with a witness.
    Colorable { max: usize, witness: KsAssignment },
    /// No valid assignment exists at all.
    NonColorable,
}

impl ClassicalMax {
    pub fn max(&self) -> Option<usize> {
        match self {
            ClassicalMax::Colorable { max, .. } => Some(*max),
            ClassicalMax::NonColorable => None,
        }
    }
}

const UNSET: i8 = -1;

struct Search<'a> {
    graph: &'a OrthogonalityGraph,
    in_weight: Vec<bool>,
    node_bases: Vec<Vec<usize>>,
    best: Option<(usize, Vec<i8>)>,
}

impl Search<'_> {
    /// Sets `node` to `value` and propagates forced values. False on conflict.
    fn assign(&self, state: &mut [i8], node: usize, value: i8) -> bool {
        let mut stack = vec![(node, value)];
        while let Some((v, x)) = stack.pop() {
            if state[v] == x {
                continue;
            }
            if state[v] != UNSET {
                return false;
            }
            state[v] = x;
            if x == 1 {
                stack.extend(self.graph.neighbours(v).map(|nb| (nb, 0)));
            }
            for &b in &self.node_bases[v] {
                let basis = &self.graph.bases()[b];
                let ones = basis.iter().filter(|&&i| state[i] == 1).count();
                let open: Vec<usize> = basis.iter().copied().filter(|&i| state[i] == UNSET).collect();
                match (ones, open.len()) {
                    (o, _) if o > 1 => return false,
                    (0, 0) => return false,
                    (0, 1) => stack.push((open[0], 1)),
                    (1, _) => stack.extend(open.into_iter().map(|i| (i, 0))),
                    _ => {}
                }
            }
        }
        true
    }

    /// Unset node in the basis with the fewest open slots, else the unset
    /// node of highest degree.
    fn pick(&self, state: &[i8]) -> Option<usize> {
        let mut choice: Option<(usize, usize)> = None;
        for basis in self.graph.bases() {
            if basis.iter().any(|&i| state[i] == 1) {
                continue;
            }
            let open: Vec<usize> = basis.iter().copied().filter(|&i| state[i] == UNSET).collect();
            if let Some(&first) = open.iter().min() {
                if choice.is_none_or(|(n, _)| open.len() < n) {
                    choice = Some((open.len(), first));
                }
            }
        }
        if let Some((_, node)) = choice {
            return Some(node);
        }
        (0..state.len())
            .filter(|&i| state[i] == UNSET)
            .max_by_key(|&i| (self.graph.degree(i), core::cmp::Reverse(i)))
    }

    fn run(&mut self, state: Vec<i8>) {
        let ones = (0..state.len()).filter(|&i| self.in_weight[i] && state[i] == 1).count();
        let open = (0..state.len()).filter(|&i| self.in_weight[i] && state[i] == UNSET).count();
        if let Some((best, _)) = &self.best {
            if ones + open <= *best {
                return;
            }
        }
        match self.pick(&state) {
            None => {
                self.best = Some((ones, state));
            }
            Some(node) => {
                for value in [1, 0] {
                    let mut next = state.clone();
                    if self.assign(&mut next, node, value) {
                        self.run(next);
                    }
                }
            }
        }
    }
}

/// Exact maximum, over all Kochen-Specker assignments of `graph`, of the
/// number of 1-valued nodes in `weight_set`.
pub fn classical_max(graph: &OrthogonalityGraph, weight_set: &[usize]) -> Result<ClassicalMax> {
    let n = graph.node_count();
    let mut in_weight = vec![false; n];
    for &w in weight_set {
        if w >= n {
            return Err(Error::InvalidArgument(format!("weight node {w} out of range")));
        }
        in_weight[w] = true;
    }
    let mut node_bases = vec![Vec::new(); n];
    for (b, basis) in graph.bases().iter().enumerate() {
        for &i in basis {
            node_bases[i].push(b);
        }
    }
    let mut search = Search { graph, in_weight, node_bases, best: None };
    search.run(vec![UNSET; n]);
    Ok(match search.best {
        None => ClassicalMax::NonColorable,
        Some((max, state)) => ClassicalMax::Colorable {
            max,
            witness: KsAssignment { values: state.iter().map(|&v| v == 1).collect() },
        },
    })
}

/// Five nodes whose induced subgraph is exactly a 5-cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InducedPentagon {
    /// Cycle order, starting at the smallest node and continuing towards
    /// its smaller neighbour.
    pub cycle: [usize; 5],
}

impl InducedPentagon {
    pub fn nodes(&self) -> [usize; 5] {
        let mut n = self.cycle;
        n.sort_unstable();
        n
    }

    /// Pentagram of the realized rays on this cycle.
    pub fn pentagram(&self, graph: &OrthogonalityGraph) -> Result<Pentagram> {
        let r = graph
            .realization()
            .ok_or_else(|| Error::InvalidGraph("graph is not realized".into()))?;
        Pentagram::from_cycle(self.cycle.map(|i| r[i]))
    }
}

/// Every chordless 5-cycle, ordered lexicographically by sorted node set.
pub fn induced_pentagons(graph: &OrthogonalityGraph) -> Vec<InducedPentagon> {
    let n = graph.node_count();
    let adj = |i: usize, j: usize| graph.is_edge(i, j);
    let mut out = Vec::new();
    for c0 in 0..n {
        for c1 in graph.neighbours(c0).filter(|&v| v > c0) {
            for c2 in graph.neighbours(c1).filter(|&v| v > c0 && !adj(v, c0)) {
                for c3 in graph.neighbours(c2).filter(|&v| v > c0 && v != c1 && !adj(v, c0) && !adj(v, c1)) {
                    for c4 in graph.neighbours(c3).filter(|&v| {
                        v > c1 && v != c2 && adj(v, c0) && !adj(v, c1) && !adj(v, c2)
                    }) {
                        out.push(InducedPentagon { cycle: [c0, c1, c2, c3, c4] });
                    }
                }
            }
        }
    }
    out.sort_by_key(|p| (p.nodes(), p.cycle));
    out
}

/// The 5-cycle realized by a pentagram: cycle position `i` holds pentagram
/// vector `2i mod 5`, so consecutive nodes are orthogonal.
pub fn pentagram_graph(p: &Pentagram) -> OrthogonalityGraph {
    let vectors = (0..5).map(|i| p.vectors()[(2 * i) % 5]).collect();
    OrthogonalityGraph::pentagon()
        .with_realization(vectors)
        .expect("pentagram orthogonality is checked on construction")
}

const CABELLO18_DATA: &str = include_str!("../data/cabello18.txt");

/// The 18-ray, 9-basis set in four real dimensions, loaded from the bundled
/// data file. Nodes are numbered by first appearance; labels are the
/// unnormalized integer rays.
pub fn cabello18() -> OrthogonalityGraph {
    parse_basis_table(CABELLO18_DATA).expect("bundled data file is valid")
}

/// Parses the `a,b,c,d; ...` basis table format of the bundled data.
pub fn parse_basis_table(text: &str) -> Result<OrthogonalityGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut rays: Vec<Vec<f64>> = Vec::new();
    let mut bases = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut basis = Vec::new();
        for ray in line.split(';') {
            let entries: Vec<f64> = ray
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<core::result::Result<_, _>>()
                .map_err(|_| Error::InvalidGraph(format!("line {}: bad ray '{}'", lineno + 1, ray.trim())))?;
            let label = format!("({})", ray.split(',').map(str::trim).collect::<Vec<_>>().join(","));
            let index = match labels.iter().position(|l| *l == label) {
                Some(i) => i,
                None => {
                    labels.push(label);
                    rays.push(entries);
                    labels.len() - 1
                }
            };
            basis.push(index);
        }
        bases.push(basis);
    }
    let vectors = rays
        .iter()
        .map(|r| StateVector::from_real_normalized(r))
        .collect::<Result<Vec<_>>>()?;
    OrthogonalityGraph::from_vectors(labels, vectors, bases)
}

/// Node indices of the Kochen-Specker subgraph.
pub mod ks_nodes {
    pub const PSI_U: usize = 0;
    pub const E2: usize = 1;
    pub const E1: usize = 2;
    pub const F1: usize = 3;
    pub const F2: usize = 4;
    pub const E3: usize = 5;
    pub const F3: usize = 6;
    pub const PSI_D: usize = 7;
    pub const LABELS: [&str; 8] = ["psi_u", "e2", "e1", "f1", "f2", "e3", "f3", "psi_d"];
    /// Upper pentagon in cycle order.
    pub const UPPER: [usize; 5] = [PSI_U, E2, E1, F1, F2];
    /// Lower pentagon in cycle order; shares the edge `e1 - f1` with the upper one.
    pub const LOWER: [usize; 5] = [PSI_D, E3, E1, F1, F3];
    pub const TRIAD_E: [usize; 3] = [E1, E2, E3];
    pub const TRIAD_F: [usize; 3] = [F1, F2, F3];
}

/// The Kochen-Specker subgraph: an upper pentagon
/// `psi_u - e2 - e1 - f1 - f2`, the triads `(e1, e2, e3)` and
/// `(f1, f2, f3)`, and `psi_d _|_ e3, f3`, which closes the lower pentagon
/// `psi_d - e3 - e1 - f1 - f3`.
#[derive(Clone, Debug, PartialEq)]
pub struct KsSubgraph {
    graph: OrthogonalityGraph,
}

impl KsSubgraph {
    /// Graph skeleton shared by every realization.
    pub fn template() -> OrthogonalityGraph {
        use ks_nodes::*;
        let labels = LABELS.iter().map(|s| s.to_string()).collect();
        let mut edges = Vec::new();
        for cycle in [UPPER, LOWER] {
            for i in 0..5 {
                edges.push((cycle[i], cycle[(i + 1) % 5]));
            }
        }
        edges.extend([(E2, E3), (F2, F3)]);
        OrthogonalityGraph::new(labels, &edges, vec![TRIAD_E.to_vec(), TRIAD_F.to_vec()]).expect("valid template")
    }

    pub fn graph(&self) -> &OrthogonalityGraph {
        &self.graph
    }

    pub fn vector(&self, node: usize) -> StateVector {
        self.graph.realization().expect("realized")[node]
    }

    pub fn psi_u(&self) -> StateVector {
        self.vector(ks_nodes::PSI_U)
    }

    pub fn psi_d(&self) -> StateVector {
        self.vector(ks_nodes::PSI_D)
    }

    pub fn upper(&self) -> Pentagram {
        Pentagram::from_cycle(ks_nodes::UPPER.map(|i| self.vector(i))).expect("realized graph is consistent")
    }

    pub fn lower(&self) -> Pentagram {
        Pentagram::from_cycle(ks_nodes::LOWER.map(|i| self.vector(i))).expect("realized graph is consistent")
    }

    /// `(sum_i |<psi_d|e_i>|^2, sum_i |<psi_d|f_i>|^2)`, both 1 for a closed realization.
    pub fn triad_sums(&self) -> (f64, f64) {
        let d = self.psi_d();
        let sum = |t: [usize; 3]| t.iter().map(|&i| self.vector(i).overlap_sq(&d)).sum();
        (sum(ks_nodes::TRIAD_E), sum(ks_nodes::TRIAD_F))
    }
}

/// Completes the Kochen-Specker subgraph from its upper pentagon in three
/// dimensions. Pentagram vector `k` sits at upper-cycle position `3k mod 5`,
/// so `psi_u = |0>`, `e2 = |2>`, `e1 = |4>`, `f1 = |1>`, `f2 = |3>`.
pub fn realize_ks_subgraph(upper: &Pentagram) -> Result<KsSubgraph> {
    if upper.dim() != 3 {
        return Err(Error::InvalidDimension { expected: "3", found: upper.dim() });
    }
    if upper.is_degenerate() {
        return Err(Error::Degenerate("upper pentagon has coinciding projectors"));
    }
    let v = upper.vectors();
    let (psi_u, e2, e1, f1, f2) = (v[0], v[2], v[4], v[1], v[3]);
    let e3 = orthogonal_complement_3d(&e1, &e2)?;
    let f3 = orthogonal_complement_3d(&f1, &f2)?;
    let psi_d = orthogonal_complement_3d(&e3, &f3)?;
    let graph = KsSubgraph::template().with_realization(vec![psi_u, e2, e1, f1, f2, e3, f3, psi_d])?;
    Ok(KsSubgraph { graph })
}

/// The realization with `psi_u = (1, 1, 1)/sqrt3`, `e1 = (1, 0, 0)`,
/// `f1 = (0, 1, 0)`, `e2 = (0, 1, -1)/sqrt2` and `f2 = (1, 0, -1)/sqrt2`.
/// Here `psi_d` is proportional to `(1, 1, -1)`.
pub fn canonical_ks_subgraph() -> KsSubgraph {
    let r = |v: [f64; 3]| StateVector::from_real_normalized(&v).expect("nonzero");
    let cycle = [
        r([1.0, 1.0, 1.0]),
        r([0.0, 1.0, -1.0]),
        r([1.0, 0.0, 0.0]),
        r([0.0, 1.0, 0.0]),
        r([1.0, 0.0, -1.0]),
    ];
    let upper = Pentagram::from_cycle(cycle).expect("orthogonal cycle");
    realize_ks_subgraph(&upper).expect("non-degenerate")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_and_triad_bounds() {
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(classical_max(&OrthogonalityGraph::pentagon(), &all).unwrap().max(), Some(2));
        assert_eq!(classical_max(&OrthogonalityGraph::triad(), &[0, 1, 2]).unwrap().max(), Some(1));
    }

    #[test]
    fn basis_must_be_a_clique() {
        let labels = (0..3).map(|i| i.to_string()).collect();
        let err = OrthogonalityGraph::new(labels, &[(0, 1)], vec![vec![0, 1, 2]]).unwrap_err();
        assert!(matches!(err, Error::InvalidGraph(_)));
    }

    #[test]
    fn realization_rejects_non_orthogonal_edge() {
        let v = StateVector::basis(3, 0).unwrap();
        let w = StateVector::from_real_normalized(&[1.0, 1.0, 0.0]).unwrap();
        let labels = vec!["a".into(), "b".into()];
        let g = OrthogonalityGraph::new(labels, &[(0, 1)], Vec::new()).unwrap();
        assert!(g.with_realization(vec![v, w]).is_err());
    }

    #[test]
    fn pentagon_counts() {
        assert_eq!(induced_pentagons(&OrthogonalityGraph::pentagon()).len(), 1);
        assert_eq!(induced_pentagons(&OrthogonalityGraph::complete(5)).len(), 0);
    }

    #[test]
    fn cabello_structure() {
        let g = cabello18();
        assert_eq!(g.node_count(), 18);
        assert_eq!(g.bases().len(), 9);
        for i in 0..18 {
            assert_eq!(g.bases().iter().filter(|b| b.contains(&i)).count(), 2);
        }
        assert_eq!(classical_max(&g, &[]).unwrap(), ClassicalMax::NonColorable);
    }

    #[test]
    fn canonical_realization_has_one_ninth() {
        let g = canonical_ks_subgraph();
        assert!((g.psi_u().overlap_sq(&g.psi_d()) - 1.0 / 9.0).abs() < 1e-15);
        let (se, sf) = g.triad_sums();
        assert!((se - 1.0).abs() < 1e-12 && (sf - 1.0).abs() < 1e-12);
        assert!(g.lower().orthogonality_residual() < 1e-12);
    }

    #[test]
    fn pentagram_graph_round_trips() {
        let p = crate::pentagram3::build_family(&crate::pentagram3::PentagramParams::regular()).unwrap();
        let g = pentagram_graph(&p);
        let pent = induced_pentagons(&g);
        assert_eq!(pent.len(), 1);
        let q = pent[0].pentagram(&g).unwrap();
        assert!((q.overlap_sum() - p.overlap_sum()).abs() < 1e-14);
    }

    #[test]
    fn ks_template_forbids_both_ends() {
        let t = KsSubgraph::template();
        // psi_u and psi_d can never both be 1.
        let r = classical_max(&t, &[ks_nodes::PSI_U, ks_nodes::PSI_D]).unwrap();
        assert_eq!(r.max(), Some(1));
    }
}
