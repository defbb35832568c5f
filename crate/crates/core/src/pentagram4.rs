//! Pentagrams in four dimensions, read as two-qubit states.
//!
//! Regular pentagrams are found by multi-start least squares over
//! parameterizations that build in normalization and either separability
//! (each vector a product of two Bloch states) or maximal entanglement
//! (each vector real in the magical basis). The residuals are the five
//! orthogonality relations and the equality of the five neighbour overlaps.
//!
//! The conjecture scan asks, for a realized graph, whether every state has
//! `<Sigma> > 2` for at least one of the graph's pentagons.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::magical::{from_magic_basis, two_qubit_concurrence};
use crate::optimize::{levenberg_marquardt, nelder_mead_restarted, LevenbergMarquardtOptions, NelderMeadOptions};
use crate::orthograph::{cabello18, induced_pentagons, InducedPentagon, OrthogonalityGraph};
use crate::pentagram::Pentagram;
use crate::sampling::{haar_state, stream_rng};
use crate::spectral::{Spectrum, StateVector, C64, MAX_DIM};

/// Restart budget of the regular-pentagram searches.
pub const SEARCH_BUDGET: usize = 100;
/// Seed of the regular-pentagram searches.
pub const SEARCH_SEED: u64 = 4;
/// A restart counts as a solution below this residual norm.
pub const SOLUTION_TOL: f64 = 1e-10;
/// Spectra closer than this (max abs difference) are the same solution.
pub const SPECTRUM_MATCH_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pentagram4Kind {
    Separable,
    MaximallyEntangled,
}

/// A 4D pentagram in product-basis coordinates, with its kind and spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct Pentagram4Class {
    pub kind: Pentagram4Kind,
    pub pentagram: Pentagram,
    pub spectrum: Spectrum,
    /// Restart index that produced it.
    pub restart: usize,
}

impl Pentagram4Class {
    /// Product-basis concurrence of each vector.
    pub fn concurrences(&self) -> [f64; 5] {
        self.pentagram.vectors().map(|v| two_qubit_concurrence(&v).expect("dimension 4"))
    }

    /// Separable: every concurrence below `1e-8`. Maximally entangled: every
    /// concurrence above `1 - 1e-8`.
    pub fn kind_holds(&self) -> bool {
        let c = self.concurrences();
        match self.kind {
            Pentagram4Kind::Separable => c.iter().all(|&x| x < 1e-8),
            Pentagram4Kind::MaximallyEntangled => c.iter().all(|&x| x > 1.0 - 1e-8),
        }
    }
}

fn bloch(theta: f64, phase: f64) -> [C64; 2] {
    let h = 0.5 * theta;
    [C64::new(h.cos(), 0.0), C64::from_polar(h.sin(), phase)]
}

fn separable_vectors(x: &[f64]) -> [StateVector; 5] {
    core::array::from_fn(|k| {
        let p = &x[4 * k..4 * k + 4];
        let (u, v) = (bloch(p[0], p[1]), bloch(p[2], p[3]));
        StateVector::new(&[u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]]).expect("unit by construction")
    })
}

/// Unnormalized real magical-basis coordinates, normalized and mapped to
/// product coordinates. `None` if a block is zero.
fn entangled_vectors(x: &[f64]) -> Option<[StateVector; 5]> {
    let mut out = [StateVector::basis(4, 0).expect("valid"); 5];
    for (k, slot) in out.iter_mut().enumerate() {
        let magic = StateVector::from_real_normalized(&x[4 * k..4 * k + 4]).ok()?;
        *slot = from_magic_basis(&magic).ok()?;
    }
    Some(out)
}

/// Orthogonality (real and imaginary parts) and regularity residuals.
fn regular_residuals(v: &[StateVector; 5]) -> Vec<f64> {
    let mut r = Vec::with_capacity(14);
    for k in 0..5 {
        let z = v[k].inner(&v[(k + 2) % 5]);
        r.push(z.re);
        r.push(z.im);
    }
    let o: [f64; 5] = core::array::from_fn(|k| v[k].overlap_sq(&v[(k + 1) % 5]));
    for k in 0..4 {
        r.push(o[k] - o[k + 1]);
    }
    r
}

fn random_start(seed: u64, index: u64, scale: f64) -> Vec<f64> {
    let mut rng = stream_rng(seed, index);
    (0..20).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

fn accept(kind: Pentagram4Kind, vectors: [StateVector; 5], residual: f64, restart: usize) -> Option<Pentagram4Class> {
    if residual >= SOLUTION_TOL {
        return None;
    }
    let pentagram = Pentagram::new(vectors).ok()?;
    if pentagram.is_degenerate() || pentagram.regularity_spread() > 1e-6 {
        return None;
    }
    let spectrum = pentagram.spectrum();
    let class = Pentagram4Class { kind, pentagram, spectrum, restart };
    class.kind_holds().then_some(class)
}

fn lm_options() -> LevenbergMarquardtOptions {
    LevenbergMarquardtOptions { max_iters: 400, residual_tol: 1e-14, step_tol: 1e-16 }
}

/// Restart `index` of the separable search; `None` if it did not converge.
pub fn separable_attempt(seed: u64, index: u64) -> Option<Pentagram4Class> {
    let x0 = random_start(seed, index, 2.0);
    let fit = levenberg_marquardt(|x| regular_residuals(&separable_vectors(x)), &x0, lm_options());
    accept(Pentagram4Kind::Separable, separable_vectors(&fit.x), fit.residual_norm, index as usize)
}

/// Restart `index` of the maximally entangled search.
pub fn entangled_attempt(seed: u64, index: u64) -> Option<Pentagram4Class> {
    let x0 = random_start(seed, index, 1.0);
    let residuals = |x: &[f64]| match entangled_vectors(x) {
        Some(v) => regular_residuals(&v),
        None => alloc::vec![f64::INFINITY; 14],
    };
    let fit = levenberg_marquardt(residuals, &x0, lm_options());
    let vectors = entangled_vectors(&fit.x)?;
    accept(Pentagram4Kind::MaximallyEntangled, vectors, fit.residual_norm, index as usize)
}

/// First converged separable regular pentagram within `budget` restarts.
pub fn separable_regular_with(budget: usize, seed: u64) -> Result<Pentagram4Class> {
    (0..budget as u64)
        .find_map(|i| separable_attempt(seed, i))
        .ok_or(Error::NotFound { restarts: budget })
}

/// The regular separable pentagram.
pub fn separable_regular() -> Result<Pentagram4Class> {
    separable_regular_with(SEARCH_BUDGET, SEARCH_SEED)
}

/// Distinct solutions (by spectrum) among converged restarts, each
/// represented by its earliest restart, sorted by descending `lambda_max`.
pub fn distinct_solutions(attempts: impl IntoIterator<Item = Option<Pentagram4Class>>) -> Vec<(Pentagram4Class, usize)> {
    let mut classes: Vec<(Pentagram4Class, usize)> = Vec::new();
    for found in attempts.into_iter().flatten() {
        match classes
            .iter_mut()
            .find(|(c, _)| c.spectrum.distance(found.spectrum.values()) < SPECTRUM_MATCH_TOL)
        {
            Some((_, count)) => *count += 1,
            None => classes.push((found, 1)),
        }
    }
    classes.sort_by(|a, b| b.0.spectrum.max().total_cmp(&a.0.spectrum.max()));
    classes
}

/// Every distinct maximally entangled regular pentagram found in `budget`
/// restarts, with how many restarts reached it.
pub fn entangled_regular_with(budget: usize, seed: u64) -> Result<Vec<(Pentagram4Class, usize)>> {
    let classes = distinct_solutions((0..budget as u64).map(|i| entangled_attempt(seed, i)));
    if classes.is_empty() {
        return Err(Error::NotFound { restarts: budget });
    }
    Ok(classes)
}

/// The maximally entangled regular pentagrams, highest `lambda_max` first.
pub fn entangled_regular() -> Result<Vec<Pentagram4Class>> {
    Ok(entangled_regular_with(SEARCH_BUDGET, SEARCH_SEED)?.into_iter().map(|(c, _)| c).collect())
}

/// Every induced pentagon of the 18-ray set with its spectrum.
pub fn cabello_pentagon_spectra() -> Vec<(InducedPentagon, Spectrum)> {
    pentagon_spectra(&cabello18()).expect("the bundled set is realized")
}

/// Every induced pentagon of a realized graph with its spectrum.
pub fn pentagon_spectra(graph: &OrthogonalityGraph) -> Result<Vec<(InducedPentagon, Spectrum)>> {
    induced_pentagons(graph)
        .into_iter()
        .map(|p| Ok((p, p.pentagram(graph)?.spectrum())))
        .collect()
}

/// Expectations above `2 + VIOLATION_TOL` count as violations.
pub const VIOLATION_TOL: f64 = 1e-12;

/// Pentagram operators of every induced pentagon of a realized graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureProblem {
    dim: usize,
    pentagons: Vec<InducedPentagon>,
    pentagrams: Vec<Pentagram>,
}

/// The best pentagon for one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleOutcome {
    pub index: u64,
    pub state: StateVector,
    /// `max` over pentagons of `<Sigma>`.
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjectureStatus {
    /// Every sampled state and the refined minimum exceed 2.
    NoCounterexampleFound,
    /// Some state has `<Sigma> <= 2` for every pentagon.
    NonViolatingStateFound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureReport {
    pub dim: usize,
    pub pentagons: usize,
    pub samples: u64,
    pub seed: u64,
    /// Samples whose best pentagon gives `<Sigma> > 2`.
    pub violating: u64,
    pub violating_fraction: f64,
    /// Minimum over samples of the per-state maximum.
    pub min_value: f64,
    pub argmin_index: u64,
    pub argmin_state: StateVector,
    /// Local minimum reached from the worst sample.
    pub refined_value: f64,
    pub refined_state: StateVector,
    pub status: ConjectureStatus,
}

impl ConjectureProblem {
    pub fn new(graph: &OrthogonalityGraph) -> Result<Self> {
        let dim = graph
            .dim()
            .ok_or_else(|| Error::InvalidGraph("graph is not realized".into()))?;
        if dim != 3 && dim != 4 {
            return Err(Error::InvalidDimension { expected: "3 or 4", found: dim });
        }
        let pentagons = induced_pentagons(graph);
        if pentagons.is_empty() {
            return Err(Error::NoPentagons);
        }
        let pentagrams = pentagons.iter().map(|p| p.pentagram(graph)).collect::<Result<_>>()?;
        Ok(Self { dim, pentagons, pentagrams })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pentagons(&self) -> &[InducedPentagon] {
        &self.pentagons
    }

    /// `max` over pentagons of `<psi|Sigma|psi>`.
    pub fn best_value(&self, psi: &StateVector) -> f64 {
        self.pentagrams.iter().map(|p| p.expectation(psi)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Haar-random state `index` of `seed` and its best value.
    pub fn sample(&self, seed: u64, index: u64) -> SampleOutcome {
        let mut rng = stream_rng(seed, index);
        let state = haar_state(self.dim, &mut rng).expect("dimension checked");
        SampleOutcome { index, state, value: self.best_value(&state) }
    }

    /// Nelder-Mead over unnormalized complex amplitudes, started at `start`.
    pub fn refine(&self, start: &StateVector) -> (StateVector, f64) {
        let d = self.dim;
        let to_state = |x: &[f64]| {
            let amps: Vec<C64> = (0..d).map(|k| C64::new(x[2 * k], x[2 * k + 1])).collect();
            StateVector::normalized(&amps).ok()
        };
        let mut x0 = [0.0; 2 * MAX_DIM];
        for (k, a) in start.amplitudes().iter().enumerate() {
            x0[2 * k] = a.re;
            x0[2 * k + 1] = a.im;
        }
        let opts = NelderMeadOptions { step: 0.05, x_tol: 1e-10, f_tol: 1e-15, max_evals: 20_000 };
        let objective = |x: &[f64]| to_state(x).map_or(f64::INFINITY, |s| self.best_value(&s));
        let m = nelder_mead_restarted(objective, &x0[..2 * d], opts, 4);
        match to_state(&m.x) {
            Some(s) if self.best_value(&s) < self.best_value(start) => {
                let v = self.best_value(&s);
                (s, v)
            }
            _ => (*start, self.best_value(start)),
        }
    }

    /// Reduces sample outcomes (in any order) to a report. Ties in the
    /// minimum go to the lowest index.
    pub fn report(&self, seed: u64, outcomes: impl IntoIterator<Item = SampleOutcome>) -> Result<ConjectureReport> {
        let mut samples = 0u64;
        let mut violating = 0u64;
        let mut worst: Option<SampleOutcome> = None;
        for o in outcomes {
            samples += 1;
            if o.value > 2.0 + VIOLATION_TOL {
                violating += 1;
            }
            let better = match &worst {
                None => true,
                Some(w) => o.value < w.value || (o.value == w.value && o.index < w.index),
            };
            if better {
                worst = Some(o);
            }
        }
        let worst = worst.ok_or_else(|| Error::InvalidArgument("samples must be at least 1".into()))?;
        let (refined_state, refined_value) = self.refine(&worst.state);
        let status = if worst.value <= 2.0 + VIOLATION_TOL || refined_value <= 2.0 + VIOLATION_TOL {
            ConjectureStatus::NonViolatingStateFound
        } else {
            ConjectureStatus::NoCounterexampleFound
        };
        Ok(ConjectureReport {
            dim: self.dim,
            pentagons: self.pentagons.len(),
            samples,
            seed,
            violating,
            violating_fraction: violating as f64 / samples as f64,
            min_value: worst.value,
            argmin_index: worst.index,
            argmin_state: worst.state,
            refined_value,
            refined_state,
            status,
        })
    }
}

/// Samples `samples` Haar-random states and reports how many are caught by
/// some pentagon of `graph`.
pub fn conjecture_scan(graph: &OrthogonalityGraph, samples: u64, seed: u64) -> Result<ConjectureReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let problem = ConjectureProblem::new(graph)?;
    problem.report(seed, (0..samples).map(|i| problem.sample(seed, i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameterizations_are_normalized_and_typed() {
        let x = random_start(3, 0, 2.0);
        for v in separable_vectors(&x) {
            assert!(two_qubit_concurrence(&v).unwrap() < 1e-12);
        }
        for v in entangled_vectors(&x).unwrap() {
            assert!((two_qubit_concurrence(&v).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn graph_without_pentagons_is_rejected() {
        let v: Vec<_> = (0..3).map(|i| StateVector::basis(3, i).unwrap()).collect();
        let labels = (0..3).map(|i| alloc::format!("{i}")).collect();
        let g = OrthogonalityGraph::from_vectors(labels, v, alloc::vec![alloc::vec![0, 1, 2]]).unwrap();
        assert_eq!(conjecture_scan(&g, 10, 0).unwrap_err(), Error::NoPentagons);
    }
}
