//! Probabilistic paradoxes built on pentagon graphs: the Kochen-Specker
//! subgraph probability, the Aharon-Vaidman three-box game, and Hardy's
//! paradox as a separability-constrained completion of the same graph.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::golden::PHI_INV_5;
use crate::magical::two_qubit_concurrence;
use crate::optimize::{nelder_mead_restarted, NelderMeadOptions};
use crate::orthograph::{canonical_ks_subgraph, realize_ks_subgraph, KsSubgraph, OrthogonalityGraph};
use crate::pentagram::Pentagram;
use crate::pentagram3::{build_family, FamilyGrid, PentagramParams};
use crate::sampling::stream_rng;
use crate::spectral::{orthogonal_complement, StateVector, C64};

/// `p = |<psi_u|psi_d>|^2`.
pub fn ks_probability(g: &KsSubgraph) -> f64 {
    g.psi_u().overlap_sq(&g.psi_d())
}

/// `|<psi_d|Sigma_u|psi_d> - (p + 2)|`, where `Sigma_u` is the upper pentagram.
pub fn verify_p_plus_2(g: &KsSubgraph) -> f64 {
    let expectation = g.upper().expectation(&g.psi_d());
    (expectation - (ks_probability(g) + 2.0)).abs()
}

/// Kochen-Specker subgraph completed from a member of the 3D family.
pub fn ks_subgraph_from_params(params: &PentagramParams) -> Result<KsSubgraph> {
    realize_ks_subgraph(&build_family(params)?)
}

/// Upper pentagon drawn uniformly from the parameter box of the 3D family.
pub fn random_ks_subgraph<R: Rng + ?Sized>(rng: &mut R, real_only: bool) -> Result<KsSubgraph> {
    loop {
        let a = rng.random::<f64>() * FRAC_PI_2;
        let b = rng.random::<f64>() * FRAC_PI_2;
        let (mu, nu) = if real_only {
            (0.0, 0.0)
        } else {
            (rng.random::<f64>() * TAU, rng.random::<f64>() * TAU)
        };
        match ks_subgraph_from_params(&PentagramParams::folded(a, b, mu, nu)) {
            Err(Error::Degenerate(_)) | Err(Error::SingularFamily) => continue,
            other => return other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsOptimum {
    /// Upper-pentagon parameters maximizing `p`.
    pub params: PentagramParams,
    pub p: f64,
    /// `<psi_d|Sigma_u|psi_d>` at `params`.
    pub expectation: f64,
    /// Parameters from an independent maximization of `<psi_d|Sigma_u|psi_d>`.
    pub expectation_params: PentagramParams,
    pub expectation_max: f64,
    /// `p` evaluated at `expectation_params`.
    pub p_at_expectation_params: f64,
}

impl KsOptimum {
    /// Both maximizations agree: `max <Sigma_u> = max p + 2` and each argmax
    /// is optimal for the other objective.
    pub fn argmax_agrees(&self, tol: f64) -> bool {
        (self.expectation_max - (self.p + 2.0)).abs() < tol && (self.p_at_expectation_params - self.p).abs() < tol
    }
}

fn ks_objective(params: &PentagramParams, use_expectation: bool) -> f64 {
    match ks_subgraph_from_params(params) {
        Ok(g) if use_expectation => g.upper().expectation(&g.psi_d()),
        Ok(g) => ks_probability(&g),
        Err(_) => f64::NEG_INFINITY,
    }
}

fn maximize_over_family(real_only: bool, use_expectation: bool) -> (PentagramParams, f64) {
    let grid = if real_only {
        FamilyGrid { angle_points: 64, phase_points: 1 }
    } else {
        FamilyGrid { angle_points: 24, phase_points: 12 }
    };
    let mut best = (PentagramParams::regular(), f64::NEG_INFINITY);
    for p in grid.points() {
        let v = ks_objective(&p, use_expectation);
        if v > best.1 {
            best = (p, v);
        }
    }
    let opts = NelderMeadOptions { step: 0.05, x_tol: 1e-12, f_tol: 1e-18, max_evals: 40_000 };
    let params_of = |x: &[f64]| {
        if real_only {
            PentagramParams::folded(x[0], x[1], 0.0, 0.0)
        } else {
            PentagramParams::folded(x[0], x[1], x[2], x[3])
        }
    };
    let start = best.0.as_array();
    let dims = if real_only { 2 } else { 4 };
    let m = nelder_mead_restarted(|x| -ks_objective(&params_of(x), use_expectation), &start[..dims], opts, 6);
    let params = params_of(&m.x);
    (params, -m.value)
}

/// Maximizes `p` over the upper pentagon, optionally restricted to real
/// pentagons, and cross-checks against maximizing `<psi_d|Sigma_u|psi_d>`.
pub fn maximize_ks_probability(real_only: bool) -> Result<KsOptimum> {
    let (params, p) = maximize_over_family(real_only, false);
    let (expectation_params, expectation_max) = maximize_over_family(real_only, true);
    let g = ks_subgraph_from_params(&params)?;
    let expectation = g.upper().expectation(&g.psi_d());
    let p_at_expectation_params = ks_probability(&ks_subgraph_from_params(&expectation_params)?);
    Ok(KsOptimum { params, p, expectation, expectation_params, expectation_max, p_at_expectation_params })
}

/// Outcome counts of the three-box game.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GameStats {
    pub runs: u64,
    /// Runs in which Alice's measurement of `psi_d` answered yes.
    pub selected: u64,
    /// Selected runs in which Bob found the particle.
    pub wins_among_selected: u64,
    pub rng_seed: u64,
}

impl GameStats {
    pub fn selected_fraction(&self) -> f64 {
        self.selected as f64 / self.runs as f64
    }

    /// `None` when no run was selected.
    pub fn conditional_win_rate(&self) -> Option<f64> {
        (self.selected > 0).then(|| self.wins_among_selected as f64 / self.selected as f64)
    }

    /// Folds one run into the totals.
    pub fn record(&mut self, outcome: RunOutcome) {
        self.runs += 1;
        if outcome.selected {
            self.selected += 1;
            if outcome.found {
                self.wins_among_selected += 1;
            }
        }
    }

    /// Sum of two partial tallies with the same seed.
    pub fn merge(mut self, other: GameStats) -> GameStats {
        self.runs += other.runs;
        self.selected += other.selected;
        self.wins_among_selected += other.wins_among_selected;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    /// Bob opened box 2 rather than box 1.
    pub second_box: bool,
    pub found: bool,
    pub selected: bool,
}

/// The three-box game on a realized Kochen-Specker subgraph. The boxes are
/// `e1` and `f1`, the particle starts in `psi_u`, and Alice post-selects on
/// `psi_d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AvGame {
    pub psi_u: StateVector,
    pub psi_d: StateVector,
    pub boxes: [StateVector; 2],
}

impl AvGame {
    pub fn new(g: &KsSubgraph) -> Self {
        use crate::orthograph::ks_nodes::{E1, F1};
        Self { psi_u: g.psi_u(), psi_d: g.psi_d(), boxes: [g.vector(E1), g.vector(F1)] }
    }

    /// Boxes `(1,0,0)` and `(0,1,0)`, `psi_u = (1,1,1)/sqrt3`.
    pub fn canonical() -> Self {
        Self::new(&canonical_ks_subgraph())
    }

    /// State after Bob opens `which` and finds nothing: `psi_u` projected off
    /// the box and renormalized.
    pub fn after_miss(&self, which: usize) -> StateVector {
        let b = &self.boxes[which];
        let c = b.inner(&self.psi_u);
        let amps: Vec<C64> = (0..self.psi_u.dim())
            .map(|k| self.psi_u.amplitudes()[k] - c * b.amplitudes()[k])
            .collect();
        StateVector::normalized(&amps).expect("psi_u is not a box state")
    }

    /// Run `index` of the game seeded by `seed`; independent of every other run.
    pub fn run(&self, seed: u64, index: u64) -> RunOutcome {
        let mut rng = stream_rng(seed, index);
        let second_box = rng.random::<bool>();
        let which = usize::from(second_box);
        let box_state = self.boxes[which];
        let found = rng.random::<f64>() < box_state.overlap_sq(&self.psi_u);
        let state = if found { box_state } else { self.after_miss(which) };
        let selected = rng.random::<f64>() < state.overlap_sq(&self.psi_d);
        RunOutcome { second_box, found, selected }
    }

    /// Runs `0..runs` sequentially.
    pub fn play(&self, runs: u64, seed: u64) -> Result<GameStats> {
        if runs == 0 {
            return Err(Error::InvalidArgument("runs must be at least 1".to_string()));
        }
        let mut stats = GameStats { rng_seed: seed, ..GameStats::default() };
        for i in 0..runs {
            stats.record(self.run(seed, i));
        }
        Ok(stats)
    }
}

/// The canonical three-box game played `runs` times.
pub fn av_game(runs: u64, seed: u64) -> Result<GameStats> {
    AvGame::canonical().play(runs, seed)
}

/// Single-qubit directions `a1 = (cos alpha, e^{i phi} sin alpha)` and
/// `b1 = (cos beta, e^{i chi} sin beta)`; `a2 = b2 = |0>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardyParams {
    pub alpha: f64,
    pub phi: f64,
    pub beta: f64,
    pub chi: f64,
}

impl HardyParams {
    pub fn as_array(&self) -> [f64; 4] {
        [self.alpha, self.phi, self.beta, self.chi]
    }
}

fn qubit(theta: f64, phase: f64) -> [C64; 2] {
    [C64::new(theta.cos(), 0.0), C64::from_polar(theta.sin(), phase)]
}

fn qubit_perp(theta: f64, phase: f64) -> [C64; 2] {
    [-C64::from_polar(theta.sin(), -phase), C64::new(theta.cos(), 0.0)]
}

fn product(x: [C64; 2], y: [C64; 2]) -> StateVector {
    StateVector::normalized(&[x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]]).expect("unit factors")
}

/// Node indices and labels of the Hardy graph. A `~` marks the orthogonal
/// single-qubit state, so `a1~b2` is `|a1> (x) |b2-perp>`.
pub mod hardy_nodes {
    pub const A1B1: usize = 0;
    pub const NA1_NB2: usize = 1;
    pub const NA2_B2: usize = 2;
    pub const A2_NB2: usize = 3;
    pub const NA2_NB1: usize = 4;
    pub const A1_NB2: usize = 5;
    pub const NA2_B1: usize = 6;
    pub const A2B2: usize = 7;
    pub const PSI: usize = 8;
    pub const LABELS: [&str; 9] = ["a1b1", "~a1~b2", "~a2b2", "a2~b2", "~a2~b1", "a1~b2", "~a2b1", "a2b2", "Psi"];
    /// Upper pentagon in cycle order.
    pub const UPPER: [usize; 5] = [A1B1, NA1_NB2, NA2_B2, A2_NB2, NA2_NB1];
    /// Lower pentagon in cycle order.
    pub const LOWER: [usize; 5] = [PSI, A1_NB2, NA2_B2, A2_NB2, NA2_B1];
}

/// Hardy's graph: the Kochen-Specker subgraph in four dimensions with
/// separable upper-pentagon states, plus the outlier `|a2 b2>`.
#[derive(Clone, Debug, PartialEq)]
pub struct HardyGraph {
    pub params: HardyParams,
    graph: OrthogonalityGraph,
}

/// The three joint probabilities that vanish in Hardy's argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardyConstraints {
    /// `P(A1 = 1, B2 = 0) = |<a1 ~b2|Psi>|^2`.
    pub a1_not_b2: f64,
    /// `P(A2 = 0, B1 = 1) = |<~a2 b1|Psi>|^2`.
    pub not_a2_b1: f64,
    /// `P(A2 = 1, B2 = 1) = |<a2 b2|Psi>|^2`.
    pub a2_b2: f64,
}

impl HardyConstraints {
    pub fn max(&self) -> f64 {
        self.a1_not_b2.max(self.not_a2_b1).max(self.a2_b2)
    }
}

impl HardyGraph {
    /// Graph skeleton: both pentagons, the two tetrads through the outlier,
    /// and `Psi` orthogonal to `a1~b2`, `~a2b1` and `a2b2`.
    pub fn template() -> OrthogonalityGraph {
        use hardy_nodes::*;
        let labels = LABELS.iter().map(|s| s.to_string()).collect();
        let e_basis = vec![NA2_B2, NA1_NB2, A1_NB2, A2B2];
        let f_basis = vec![A2_NB2, NA2_NB1, NA2_B1, A2B2];
        let mut edges = Vec::new();
        for cycle in [UPPER, LOWER] {
            for i in 0..5 {
                edges.push((cycle[i], cycle[(i + 1) % 5]));
            }
        }
        for basis in [&e_basis, &f_basis] {
            for (x, &i) in basis.iter().enumerate() {
                for &j in &basis[x + 1..] {
                    edges.push((i, j));
                }
            }
        }
        edges.push((PSI, A2B2));
        OrthogonalityGraph::new(labels, &edges, vec![e_basis, f_basis]).expect("valid template")
    }

    pub fn graph(&self) -> &OrthogonalityGraph {
        &self.graph
    }

    pub fn vector(&self, node: usize) -> StateVector {
        self.graph.realization().expect("realized")[node]
    }

    pub fn psi(&self) -> StateVector {
        self.vector(hardy_nodes::PSI)
    }

    pub fn upper(&self) -> Pentagram {
        Pentagram::from_cycle(hardy_nodes::UPPER.map(|i| self.vector(i))).expect("realized graph is consistent")
    }

    /// `p = P(A1 = 1, B1 = 1) = |<a1 b1|Psi>|^2`.
    pub fn probability(&self) -> f64 {
        self.vector(hardy_nodes::A1B1).overlap_sq(&self.psi())
    }

    /// `<Psi|Sigma_u|Psi>`.
    pub fn upper_expectation(&self) -> f64 {
        self.upper().expectation(&self.psi())
    }

    pub fn constraints(&self) -> HardyConstraints {
        use hardy_nodes::*;
        let psi = self.psi();
        HardyConstraints {
            a1_not_b2: self.vector(A1_NB2).overlap_sq(&psi),
            not_a2_b1: self.vector(NA2_B1).overlap_sq(&psi),
            a2_b2: self.vector(A2B2).overlap_sq(&psi),
        }
    }

    /// Largest product-basis concurrence among the eight nodes other than `Psi`.
    pub fn max_separable_concurrence(&self) -> f64 {
        (0..hardy_nodes::PSI)
            .map(|i| two_qubit_concurrence(&self.vector(i)).expect("dimension 4"))
            .fold(0.0, f64::max)
    }

    pub fn psi_concurrence(&self) -> f64 {
        two_qubit_concurrence(&self.psi()).expect("dimension 4")
    }

    /// Nodes orthogonal to the outlier, which span a 3-dimensional subspace.
    pub fn subspace_nodes(&self) -> Vec<usize> {
        let o = self.vector(hardy_nodes::A2B2);
        (0..9)
            .filter(|&i| i != hardy_nodes::A2B2 && self.vector(i).inner(&o).norm() < 1e-9)
            .collect()
    }
}

/// Completes Hardy's graph from the separable upper pentagon.
pub fn hardy_construct(params: &HardyParams) -> Result<HardyGraph> {
    let HardyParams { alpha, phi, beta, chi } = *params;
    let a1 = qubit(alpha, phi);
    let na1 = qubit_perp(alpha, phi);
    let b1 = qubit(beta, chi);
    let nb1 = qubit_perp(beta, chi);
    let zero = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let one = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    let (a2, na2, b2, nb2) = (zero, one, zero, one);

    let a1b1 = product(a1, b1);
    let a2b2 = product(a2, b2);
    if a1b1.inner(&a2b2).norm() < 1e-12 {
        return Err(Error::HardyCollapse);
    }
    let upper = [a1b1, product(na1, nb2), product(na2, b2), product(a2, nb2), product(na2, nb1)];
    if Pentagram::from_cycle(upper)?.is_degenerate() {
        return Err(Error::Degenerate("upper pentagon has coinciding projectors"));
    }
    let a1_nb2 = product(a1, nb2);
    let na2_b1 = product(na2, b1);
    let psi = orthogonal_complement(&[a1_nb2, na2_b1, a2b2])?;
    let mut vectors = upper.to_vec();
    vectors.extend([a1_nb2, na2_b1, a2b2, psi]);
    let graph = HardyGraph::template().with_realization(vectors)?;
    Ok(HardyGraph { params: *params, graph })
}

/// Hardy parameters drawn uniformly from the parameter box.
pub fn random_hardy_params<R: Rng + ?Sized>(rng: &mut R) -> HardyParams {
    HardyParams {
        alpha: rng.random::<f64>() * FRAC_PI_2,
        phi: rng.random::<f64>() * TAU,
        beta: rng.random::<f64>() * FRAC_PI_2,
        chi: rng.random::<f64>() * TAU,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardyOptimum {
    pub params: HardyParams,
    pub p: f64,
    /// `<Psi|Sigma_u|Psi>` at the optimum.
    pub expectation: f64,
    /// Optimum of every restart, in restart order.
    pub restart_values: Vec<f64>,
}

impl HardyOptimum {
    /// `max - min` over the restarts.
    pub fn restart_spread(&self) -> f64 {
        let hi = self.restart_values.iter().copied().fold(f64::MIN, f64::max);
        let lo = self.restart_values.iter().copied().fold(f64::MAX, f64::min);
        hi - lo
    }
}

/// Default number of random starts for [`hardy_maximize`].
pub const HARDY_RESTARTS: usize = 10;
/// Default seed for [`hardy_maximize`].
pub const HARDY_SEED: u64 = 5;

fn hardy_probability(x: &[f64]) -> f64 {
    let params = HardyParams { alpha: x[0], phi: x[1], beta: x[2], chi: x[3] };
    hardy_construct(&params).map(|h| h.probability()).unwrap_or(f64::NEG_INFINITY)
}

/// One local maximization of `p` from a random start drawn from
/// substream `index` of `seed`.
pub fn hardy_restart(seed: u64, index: u64) -> (HardyParams, f64) {
    let mut rng = stream_rng(seed, index);
    let start = loop {
        let p = random_hardy_params(&mut rng);
        if hardy_probability(&p.as_array()).is_finite() {
            break p;
        }
    };
    let opts = NelderMeadOptions { step: 0.1, x_tol: 1e-12, f_tol: 1e-18, max_evals: 20_000 };
    let m = nelder_mead_restarted(|x| -hardy_probability(x), &start.as_array(), opts, 6);
    (HardyParams { alpha: m.x[0], phi: m.x[1], beta: m.x[2], chi: m.x[3] }, -m.value)
}

/// Maximizes `p` over separable upper pentagons from `restarts` random starts.
pub fn hardy_maximize_with(restarts: usize, seed: u64) -> Result<HardyOptimum> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".to_string()));
    }
    let runs: Vec<(HardyParams, f64)> = (0..restarts as u64).map(|i| hardy_restart(seed, i)).collect();
    hardy_optimum_from(runs)
}

/// Reduces restart results to the best one; ties go to the earliest restart.
pub fn hardy_optimum_from(runs: Vec<(HardyParams, f64)>) -> Result<HardyOptimum> {
    let (params, p) = runs
        .iter()
        .copied()
        .fold(None::<(HardyParams, f64)>, |acc, r| match acc {
            Some(b) if b.1 >= r.1 => Some(b),
            _ => Some(r),
        })
        .filter(|(_, p)| p.is_finite())
        .ok_or(Error::NotFound { restarts: runs.len() })?;
    let expectation = hardy_construct(&params)?.upper_expectation();
    Ok(HardyOptimum { params, p, expectation, restart_values: runs.iter().map(|r| r.1).collect() })
}

/// [`hardy_maximize_with`] using [`HARDY_RESTARTS`] and [`HARDY_SEED`].
pub fn hardy_maximize() -> Result<HardyOptimum> {
    hardy_maximize_with(HARDY_RESTARTS, HARDY_SEED)
}

/// The closed-form optimum, `Phi^-5`.
pub const HARDY_OPTIMUM: f64 = PHI_INV_5;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_ks_values() {
        let g = canonical_ks_subgraph();
        assert!((ks_probability(&g) - 1.0 / 9.0).abs() < 1e-15);
        assert!(verify_p_plus_2(&g) < 1e-14);
    }

    #[test]
    fn av_game_miss_is_orthogonal_to_psi_d() {
        let game = AvGame::canonical();
        for which in 0..2 {
            assert_eq!(game.after_miss(which).overlap_sq(&game.psi_d), 0.0);
        }
        assert!(av_game(0, 1).is_err());
    }

    #[test]
    fn hardy_collapse_and_constraints() {
        let bad = HardyParams { alpha: FRAC_PI_2, phi: 0.0, beta: 0.4, chi: 0.0 };
        assert_eq!(hardy_construct(&bad).unwrap_err(), Error::HardyCollapse);
        let h = hardy_construct(&HardyParams { alpha: 0.7, phi: 0.3, beta: 1.1, chi: 2.0 }).unwrap();
        assert!(h.constraints().max() < 1e-20);
        assert!(h.max_separable_concurrence() < 1e-12);
        assert!(h.psi_concurrence() > 0.0);
        assert_eq!(h.subspace_nodes().len(), 7);
        assert!((h.upper_expectation() - h.probability() - 2.0).abs() < 1e-12);
    }
}
