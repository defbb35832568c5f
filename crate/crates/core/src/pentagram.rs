//! Five unit vectors with `<k|k+2> = 0` (indices mod 5) and the operator
//! they define, `Sigma = sum_k |k><k|`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::spectral::{HermitianOperator, Spectrum, StateVector, MAX_DIM};

/// Largest `|<k|k+2>|` accepted by [`Pentagram::new`].
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Overlap moduli within this are considered equal by [`Pentagram::is_regular`].
pub const REGULARITY_TOL: f64 = 1e-8;
/// Two projectors coincide when `|<j|k>| > 1 - DEGENERACY_TOL`.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pentagram {
    vectors: [StateVector; 5],
}

impl Pentagram {
    /// Checks the shared dimension and the five orthogonality relations.
    pub fn new(vectors: [StateVector; 5]) -> Result<Self> {
        Self::with_tolerance(vectors, ORTHOGONALITY_TOL)
    }

    pub fn with_tolerance(vectors: [StateVector; 5], tol: f64) -> Result<Self> {
        let dim = vectors[0].dim();
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::InvalidDimension { expected: "equal dimensions", found: v.dim() });
        }
        for k in 0..5 {
            let j = (k + 2) % 5;
            let overlap = vectors[k].inner(&vectors[j]).norm();
            if overlap > tol {
                return Err(Error::NotOrthogonal { i: k, j, overlap });
            }
        }
        Ok(Self { vectors })
    }

    /// Builds a pentagram from five rays listed around an orthogonality
    /// pentagon, `cycle[i] _|_ cycle[i+1]`. Pentagram index `k` is cycle
    /// position `3k mod 5`.
    pub fn from_cycle(cycle: [StateVector; 5]) -> Result<Self> {
        let vectors = core::array::from_fn(|k| cycle[(3 * k) % 5]);
        Self::new(vectors)
    }

    pub fn vectors(&self) -> &[StateVector; 5] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    pub fn operator(&self) -> HermitianOperator {
        HermitianOperator::sum_of_projectors(&self.vectors).expect("dimensions checked on construction")
    }

    /// `p_{k,k+1} = |<k|k+1>|^2` for `k = 0..5`.
    pub fn neighbour_overlaps(&self) -> [f64; 5] {
        core::array::from_fn(|k| self.vectors[k].overlap_sq(&self.vectors[(k + 1) % 5]))
    }

    /// `A = sum_k |<k|k+1>|^2`.
    pub fn overlap_sum(&self) -> f64 {
        self.neighbour_overlaps().iter().sum()
    }

    pub fn expectation(&self, psi: &StateVector) -> f64 {
        self.vectors.iter().map(|v| v.overlap_sq(psi)).sum()
    }

    pub fn spectrum(&self) -> Spectrum {
        self.operator().spectrum()
    }

    /// All five non-orthogonal overlap moduli agree within [`REGULARITY_TOL`].
    pub fn is_regular(&self) -> bool {
        self.regularity_spread() <= REGULARITY_TOL
    }

    /// `max - min` of the five moduli `|<k|k+1>|`.
    pub fn regularity_spread(&self) -> f64 {
        let moduli = self.neighbour_overlaps().map(f64::sqrt);
        let hi = moduli.iter().copied().fold(f64::MIN, f64::max);
        let lo = moduli.iter().copied().fold(f64::MAX, f64::min);
        hi - lo
    }

    /// Two of the projectors coincide.
    pub fn is_degenerate(&self) -> bool {
        self.neighbour_overlaps()
            .iter()
            .any(|p| p.sqrt() > 1.0 - DEGENERACY_TOL)
    }

    /// Largest `|<k|k+2>|`.
    pub fn orthogonality_residual(&self) -> f64 {
        (0..5)
            .map(|k| self.vectors[k].inner(&self.vectors[(k + 2) % 5]).norm())
            .fold(0.0, f64::max)
    }

    /// Applies a real orthogonal matrix to every vector.
    pub fn rotated(&self, rows: &[[f64; MAX_DIM]; MAX_DIM]) -> Result<Self> {
        Self::new(self.vectors.map(|v| v.rotated(rows)))
    }
}
