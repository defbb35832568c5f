//! Serializable summaries of library results. The command line prints these
//! and nothing else, so a library call followed by the matching builder
//! reproduces its output exactly.

use serde::Serialize;

use pentaks_core::magical::TailoredPentagram;
use pentaks_core::orthograph::{ClassicalMax, InducedPentagon, OrthogonalityGraph};
use pentaks_core::paradoxes::{GameStats, HardyGraph, HardyOptimum, HardyParams, KsOptimum};
use pentaks_core::pentagram3::{FamilyExtremum, FamilySample, PentagramParams};
use pentaks_core::pentagram4::{ConjectureReport, ConjectureStatus, Pentagram4Class, Pentagram4Kind};
use pentaks_core::{Pentagram, Spectrum, StateVector};

use crate::formats::{PentagramJson, StateVectorJson};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamsJson {
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    pub nu: f64,
}

impl From<&PentagramParams> for ParamsJson {
    fn from(p: &PentagramParams) -> Self {
        Self { a: p.a, b: p.b, mu: p.mu, nu: p.nu }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsJson>,
    #[serde(rename = "A")]
    pub overlap_sum: f64,
    /// Descending.
    pub spectrum: Vec<f64>,
    pub regular: bool,
    pub degenerate: bool,
}

pub fn spectrum_report(params: Option<&PentagramParams>, pentagram: &Pentagram) -> SpectrumReport {
    SpectrumReport {
        params: params.map(ParamsJson::from),
        overlap_sum: pentagram.overlap_sum(),
        spectrum: pentagram.spectrum().values().to_vec(),
        regular: pentagram.is_regular(),
        degenerate: pentagram.is_degenerate(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremumReport {
    pub objective: &'static str,
    pub params: ParamsJson,
    pub value: f64,
    #[serde(rename = "A")]
    pub overlap_sum: f64,
}

pub fn extremum_report(objective: &'static str, e: &FamilyExtremum) -> ExtremumReport {
    ExtremumReport { objective, params: (&e.params).into(), value: e.value, overlap_sum: e.overlap_sum }
}

pub const SCAN_HEADER: [&str; 8] = ["a", "b", "mu", "nu", "A", "lambda1", "lambda2", "lambda3"];

pub fn scan_record(s: &FamilySample) -> [f64; 8] {
    let p = s.params;
    [p.a, p.b, p.mu, p.nu, s.overlap_sum, s.spectrum[0], s.spectrum[1], s.spectrum[2]]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailorReport {
    pub sigma: f64,
    pub concurrence: f64,
    pub sin_a: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub pentagram: PentagramJson,
    pub expectation: f64,
    pub predicted: f64,
    pub violates: bool,
}

pub fn tailor_report(t: &TailoredPentagram) -> TailorReport {
    TailorReport {
        sigma: t.sigma,
        concurrence: t.concurrence,
        sin_a: t.sin_a,
        lambda1: t.lambda1,
        lambda2: t.lambda2,
        pentagram: (&t.pentagram).into(),
        expectation: t.expectation,
        predicted: t.predicted(),
        violates: t.violates(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColorReport {
    pub colorable: bool,
    pub weight_set: Vec<String>,
    /// Largest number of weighted nodes set to 1.
    pub max: Option<usize>,
    /// Nodes set to 1 in an optimal assignment.
    pub ones: Option<Vec<String>>,
}

pub fn color_report(graph: &OrthogonalityGraph, weight_set: &[usize], result: &ClassicalMax) -> ColorReport {
    let labels = |idx: &mut dyn Iterator<Item = usize>| idx.map(|i| graph.labels()[i].clone()).collect::<Vec<_>>();
    match result {
        ClassicalMax::Colorable { max, witness } => ColorReport {
            colorable: true,
            weight_set: labels(&mut weight_set.iter().copied()),
            max: Some(*max),
            ones: Some(labels(&mut (0..graph.node_count()).filter(|&i| witness.values[i]))),
        },
        ClassicalMax::NonColorable => ColorReport {
            colorable: false,
            weight_set: labels(&mut weight_set.iter().copied()),
            max: None,
            ones: None,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PentagonEntry {
    pub cycle: [usize; 5],
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PentagonsReport {
    pub count: usize,
    pub pentagons: Vec<PentagonEntry>,
}

/// Spectra are included when the graph is realized.
pub fn pentagons_report(graph: &OrthogonalityGraph, pentagons: &[InducedPentagon]) -> PentagonsReport {
    let entries = pentagons
        .iter()
        .map(|p| PentagonEntry {
            cycle: p.cycle,
            labels: p.cycle.iter().map(|&i| graph.labels()[i].clone()).collect(),
            spectrum: p.pentagram(graph).ok().map(|pg| pg.spectrum().values().to_vec()),
        })
        .collect();
    PentagonsReport { count: pentagons.len(), pentagons: entries }
}

pub const PENTAGON_CSV_HEADER: [&str; 9] = ["v0", "v1", "v2", "v3", "v4", "lambda1", "lambda2", "lambda3", "lambda4"];

/// Cycle labels followed by the descending spectrum.
pub fn pentagon_record(graph: &OrthogonalityGraph, p: &InducedPentagon, s: &Spectrum) -> Vec<String> {
    let mut row: Vec<String> = p.cycle.iter().map(|&i| graph.labels()[i].clone()).collect();
    row.extend(s.values().iter().map(|v| v.to_string()));
    row
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KsMaxReport {
    pub params: ParamsJson,
    pub p: f64,
    /// `<psi_d|Sigma_u|psi_d>` at `params`.
    pub expectation: f64,
    /// Independent maximum of `<psi_d|Sigma_u|psi_d>`.
    pub expectation_max: f64,
    pub expectation_params: ParamsJson,
    pub p_at_expectation_params: f64,
}

pub fn ks_max_report(o: &KsOptimum) -> KsMaxReport {
    KsMaxReport {
        params: (&o.params).into(),
        p: o.p,
        expectation: o.expectation,
        expectation_max: o.expectation_max,
        expectation_params: (&o.expectation_params).into(),
        p_at_expectation_params: o.p_at_expectation_params,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameReport {
    pub runs: u64,
    pub selected: u64,
    pub wins_among_selected: u64,
    pub rng_seed: u64,
    pub selected_fraction: f64,
    pub conditional_win_rate: Option<f64>,
}

pub fn game_report(s: &GameStats) -> GameReport {
    GameReport {
        runs: s.runs,
        selected: s.selected,
        wins_among_selected: s.wins_among_selected,
        rng_seed: s.rng_seed,
        selected_fraction: s.selected_fraction(),
        conditional_win_rate: s.conditional_win_rate(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardyParamsJson {
    pub alpha: f64,
    pub phi: f64,
    pub beta: f64,
    pub chi: f64,
}

impl From<&HardyParams> for HardyParamsJson {
    fn from(p: &HardyParams) -> Self {
        Self { alpha: p.alpha, phi: p.phi, beta: p.beta, chi: p.chi }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardyConstraintsJson {
    pub a1_not_b2: f64,
    pub not_a2_b1: f64,
    pub a2_b2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardyReport {
    pub params: HardyParamsJson,
    pub p: f64,
    pub expectation: f64,
    pub constraints: HardyConstraintsJson,
    pub psi: StateVectorJson,
    pub psi_concurrence: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart_values: Option<Vec<f64>>,
}

pub fn hardy_report(h: &HardyGraph, optimum: Option<&HardyOptimum>) -> HardyReport {
    let c = h.constraints();
    HardyReport {
        params: (&h.params).into(),
        p: h.probability(),
        expectation: h.upper_expectation(),
        constraints: HardyConstraintsJson { a1_not_b2: c.a1_not_b2, not_a2_b1: c.not_a2_b1, a2_b2: c.a2_b2 },
        psi: (&h.psi()).into(),
        psi_concurrence: h.psi_concurrence(),
        restart_values: optimum.map(|o| o.restart_values.clone()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pentagram4Report {
    pub kind: &'static str,
    pub spectrum: Vec<f64>,
    pub concurrences: [f64; 5],
    pub restart: usize,
    /// Restarts that converged to this solution, when counted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hits: Option<usize>,
    pub pentagram: PentagramJson,
}

pub fn pentagram4_report(c: &Pentagram4Class, hits: Option<usize>) -> Pentagram4Report {
    Pentagram4Report {
        kind: match c.kind {
            Pentagram4Kind::Separable => "separable",
            Pentagram4Kind::MaximallyEntangled => "maximally-entangled",
        },
        spectrum: c.spectrum.values().to_vec(),
        concurrences: c.concurrences(),
        restart: c.restart,
        hits,
        pentagram: (&c.pentagram).into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureJson {
    pub dim: usize,
    pub pentagons: usize,
    pub samples: u64,
    pub seed: u64,
    pub violating: u64,
    pub violating_fraction: f64,
    pub min_value: f64,
    pub argmin_index: u64,
    pub argmin_state: StateVectorJson,
    pub refined_value: f64,
    pub refined_state: StateVectorJson,
    pub status: &'static str,
}

pub fn conjecture_report(r: &ConjectureReport) -> ConjectureJson {
    ConjectureJson {
        dim: r.dim,
        pentagons: r.pentagons,
        samples: r.samples,
        seed: r.seed,
        violating: r.violating,
        violating_fraction: r.violating_fraction,
        min_value: r.min_value,
        argmin_index: r.argmin_index,
        argmin_state: (&r.argmin_state).into(),
        refined_value: r.refined_value,
        refined_state: (&r.refined_state).into(),
        status: match r.status {
            ConjectureStatus::NoCounterexampleFound => "no-counterexample-found",
            ConjectureStatus::NonViolatingStateFound => "non-violating-state-found",
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ValidateReport {
    Graph {
        nodes: usize,
        edges: usize,
        bases: usize,
        dim: Option<usize>,
        max_edge_overlap: Option<f64>,
    },
    State {
        dim: usize,
        concurrence: f64,
    },
    Pentagram {
        dim: usize,
        #[serde(rename = "A")]
        overlap_sum: f64,
        orthogonality_residual: f64,
        regular: bool,
        degenerate: bool,
    },
}

pub fn validate_graph_report(g: &OrthogonalityGraph) -> ValidateReport {
    ValidateReport::Graph {
        nodes: g.node_count(),
        edges: g.edges().len(),
        bases: g.bases().len(),
        dim: g.dim(),
        max_edge_overlap: g.max_edge_overlap(),
    }
}

pub fn validate_state_report(s: &StateVector) -> ValidateReport {
    ValidateReport::State { dim: s.dim(), concurrence: pentaks_core::magical::concurrence(s) }
}

pub fn validate_pentagram_report(p: &Pentagram) -> ValidateReport {
    ValidateReport::Pentagram {
        dim: p.dim(),
        overlap_sum: p.overlap_sum(),
        orthogonality_residual: p.orthogonality_residual(),
        regular: p.is_regular(),
        degenerate: p.is_degenerate(),
    }
}
