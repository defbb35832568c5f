//! Magical bases, concurrence, and tailored pentagrams.
//!
//! In a magical basis the relevant rotation group (SO(3) acting on spin 1,
//! or the local group SU(2) x SU(2) ~ SO(4) acting on two qubits) is
//! represented by real orthogonal matrices. There every state splits as
//! `psi = e^{-i phi} (cos s x + i sin s y)` with real orthonormal `x, y` and
//! `0 <= s <= pi/4`, and `C = |sum_k psi_k^2| = cos 2s` labels the orbit.
//!
//! The two-qubit magical basis used throughout, in product coordinates
//! `(|00>, |01>, |10>, |11>)`:
//!
//! ```text
//!   m1 =   (|00> + |11>) / sqrt 2
//!   m2 = i (|00> - |11>) / sqrt 2
//!   m3 = i (|01> + |10>) / sqrt 2
//!   m4 =   (|01> - |10>) / sqrt 2
//! ```

use core::f64::consts::FRAC_1_SQRT_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::pentagram::Pentagram;
use crate::pentagram3::{build_family, PentagramParams};
use crate::spectral::{cross3, StateVector, C64, MAX_DIM, PHASE_TOL};

/// Concurrence at or below which a state is treated as coherent (separable in 4D).
pub const COHERENT_TOL: f64 = 1e-8;

/// Default small angle for [`tailor_pentagram`].
pub const DEFAULT_EPSILON: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalDecomposition {
    dim: usize,
    x: [f64; MAX_DIM],
    y: [f64; MAX_DIM],
    sigma: f64,
    /// `psi = e^{-i phase} (cos sigma x + i sin sigma y)`.
    phase: f64,
}

impl CanonicalDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self) -> &[f64] {
        &self.x[..self.dim]
    }

    pub fn y(&self) -> &[f64] {
        &self.y[..self.dim]
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// `cos 2 sigma`.
    pub fn concurrence(&self) -> f64 {
        (2.0 * self.sigma).cos()
    }

    /// `cos sigma x + i sin sigma y`, the representative without the global phase.
    pub fn representative(&self) -> StateVector {
        let (s, c) = self.sigma.sin_cos();
        let mut amps = [C64::new(0.0, 0.0); MAX_DIM];
        for (k, a) in amps.iter_mut().enumerate().take(self.dim) {
            *a = C64::new(c * self.x[k], s * self.y[k]);
        }
        StateVector::normalized(&amps[..self.dim]).expect("unit by construction")
    }
}

/// Splits `psi` (magical-basis coordinates) into its canonical real and
/// imaginary parts. `x` carries the phase convention: its first component
/// above [`PHASE_TOL`] is positive.
pub fn canonical_decompose(psi: &StateVector) -> CanonicalDecomposition {
    let dim = psi.dim();
    let z = psi.bilinear_square();
    let phase = if z.norm() > 1e-15 { -z.arg() / 2.0 } else { 0.0 };
    let mut rotated = psi.rephased(phase);

    let mut u = [0.0; MAX_DIM];
    let mut w = [0.0; MAX_DIM];
    let fill = |r: &StateVector, u: &mut [f64; MAX_DIM], w: &mut [f64; MAX_DIM]| {
        for (k, a) in r.amplitudes().iter().enumerate() {
            u[k] = a.re;
            w[k] = a.im;
        }
    };
    fill(&rotated, &mut u, &mut w);
    let mut total_phase = phase;
    if let Some(lead) = u[..dim].iter().copied().find(|v| v.abs() > PHASE_TOL) {
        if lead < 0.0 {
            total_phase += core::f64::consts::PI;
            rotated = psi.rephased(total_phase);
            fill(&rotated, &mut u, &mut w);
        }
    }

    let nu = norm(&u[..dim]);
    // Remove the residual x.y from rounding before normalizing y.
    let x = scaled(&u, 1.0 / nu);
    let d = dot(&x[..dim], &w[..dim]);
    for k in 0..dim {
        w[k] -= d * x[k];
    }
    let nw = norm(&w[..dim]);
    let y = if nw > 1e-12 { scaled(&w, 1.0 / nw) } else { some_orthogonal(&x, dim) };
    let sigma = nw.atan2(nu);
    CanonicalDecomposition { dim, x, y, sigma, phase: total_phase }
}

/// `|sum_k psi_k^2|`, coordinates in a magical basis.
pub fn concurrence(psi: &StateVector) -> f64 {
    psi.bilinear_square().norm().min(1.0)
}

/// Product-basis concurrence `2 |ad - bc|` of a two-qubit pure state.
pub fn two_qubit_concurrence(product: &StateVector) -> Result<f64> {
    if product.dim() != 4 {
        return Err(Error::InvalidDimension { expected: "4", found: product.dim() });
    }
    let [a, b, c, d] = [0, 1, 2, 3].map(|i| product.amplitudes()[i]);
    Ok((2.0 * (a * d - b * c).norm()).min(1.0))
}

/// Rows are the magical basis vectors in product coordinates.
pub fn magic_basis() -> [[C64; 4]; 4] {
    let h = FRAC_1_SQRT_2;
    let r = |x: f64| C64::new(x, 0.0);
    let i = |x: f64| C64::new(0.0, x);
    [
        [r(h), r(0.0), r(0.0), r(h)],
        [i(h), r(0.0), r(0.0), i(-h)],
        [r(0.0), i(h), i(h), r(0.0)],
        [r(0.0), r(h), r(-h), r(0.0)],
    ]
}

/// Product-basis coordinates to magical-basis coordinates.
pub fn to_magic_basis(product: &StateVector) -> Result<StateVector> {
    if product.dim() != 4 {
        return Err(Error::InvalidDimension { expected: "4", found: product.dim() });
    }
    let m = magic_basis();
    let a = product.amplitudes();
    let out: [C64; 4] = core::array::from_fn(|k| (0..4).map(|j| m[k][j].conj() * a[j]).sum());
    StateVector::normalized(&out)
}

/// Inverse of [`to_magic_basis`].
pub fn from_magic_basis(magic: &StateVector) -> Result<StateVector> {
    if magic.dim() != 4 {
        return Err(Error::InvalidDimension { expected: "4", found: magic.dim() });
    }
    let m = magic_basis();
    let a = magic.amplitudes();
    let out: [C64; 4] = core::array::from_fn(|j| (0..4).map(|k| m[k][j] * a[k]).sum());
    StateVector::normalized(&out)
}

/// A real pentagram rotated so that its top two eigenvectors are the
/// canonical `x` and `y` of a given state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailoredPentagram {
    pub pentagram: Pentagram,
    /// `sin a = sin b` of the real symmetric family member that was rotated.
    pub sin_a: f64,
    pub sigma: f64,
    pub concurrence: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `<psi|Sigma|psi>` evaluated directly.
    pub expectation: f64,
}

impl TailoredPentagram {
    /// `lambda1 cos^2 sigma + lambda2 sin^2 sigma`.
    pub fn predicted(&self) -> f64 {
        let (s, c) = self.sigma.sin_cos();
        self.lambda1 * c * c + self.lambda2 * s * s
    }

    /// `<Sigma>` exceeds 2 beyond the `1e-12` boundary tolerance.
    pub fn violates(&self) -> bool {
        self.expectation > 2.0 + 1e-12
    }
}

/// Tailors a nearly degenerate real pentagram to `psi`.
///
/// `epsilon` caps the family angle. The angle actually used satisfies
/// `sin^2 a = min(sin^2 epsilon, C / 2)`: for fixed `a` the expectation is
/// `2 + sin^2 a (C - sin^2 a) + O(sin^6 a)`, so the cap alone would leave
/// states with `C < sin^2 epsilon` below the bound. States with
/// `C <= COHERENT_TOL` get the degenerate pentagram, whose top eigenvalue
/// is doubly degenerate at 2.
pub fn tailor_pentagram(psi: &StateVector, epsilon: f64) -> Result<TailoredPentagram> {
    if !(epsilon > 0.0 && epsilon <= 0.2) {
        return Err(Error::InvalidArgument(alloc::format!("epsilon = {epsilon} must lie in (0, 0.2]")));
    }
    let c = concurrence(psi);
    let s = if c <= COHERENT_TOL { 0.0 } else { epsilon.sin().min((c / 2.0).sqrt()) };
    tailor_with_symmetric(psi, s)
}

/// Rotates the real symmetric family member with `sin a = sin b = s` onto
/// the canonical pair of `psi`. With `s^2 = PHI - 1` this is the regular
/// pentagram.
pub fn tailor_with_symmetric(psi: &StateVector, s: f64) -> Result<TailoredPentagram> {
    if psi.dim() != 3 {
        return Err(Error::InvalidDimension { expected: "3", found: psi.dim() });
    }
    let decomposition = canonical_decompose(psi);
    let base = build_family(&PentagramParams::real_symmetric(s)?)?;
    let es = base.operator().eigensystem();
    let real3 = |v: &StateVector| {
        let r = v.real_parts();
        [r[0], r[1], r[2]]
    };
    let v1 = real3(&es.vectors[0]);
    let v2 = real3(&es.vectors[1]);
    let v3 = cross3(v1, v2);
    let xd = decomposition.x();
    let yd = decomposition.y();
    let x = [xd[0], xd[1], xd[2]];
    let y = [yd[0], yd[1], yd[2]];
    let z = cross3(x, y);

    let mut rows = [[0.0; MAX_DIM]; MAX_DIM];
    for i in 0..3 {
        for j in 0..3 {
            rows[i][j] = x[i] * v1[j] + y[i] * v2[j] + z[i] * v3[j];
        }
    }
    let pentagram = base.rotated(&rows)?;
    let values = es.spectrum.values();
    Ok(TailoredPentagram {
        expectation: pentagram.expectation(psi),
        pentagram,
        sin_a: s,
        sigma: decomposition.sigma(),
        concurrence: concurrence(psi),
        lambda1: values[0],
        lambda2: values[1],
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn scaled(a: &[f64; MAX_DIM], k: f64) -> [f64; MAX_DIM] {
    a.map(|v| v * k)
}

/// First standard basis vector with the largest component orthogonal to `x`.
fn some_orthogonal(x: &[f64; MAX_DIM], dim: usize) -> [f64; MAX_DIM] {
    let mut best = [0.0; MAX_DIM];
    let mut best_norm = -1.0;
    for i in 0..dim {
        let mut e = [0.0; MAX_DIM];
        e[i] = 1.0;
        let d = x[i];
        for k in 0..dim {
            e[k] -= d * x[k];
        }
        let n = norm(&e[..dim]);
        if n > best_norm + 1e-12 {
            best_norm = n;
            best = e;
        }
    }
    scaled(&best, 1.0 / best_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::{REGULAR_SIN_SQ, SQRT_5};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn real_vector_has_sigma_zero() {
        let psi = StateVector::basis(3, 0).unwrap();
        let d = canonical_decompose(&psi);
        assert_eq!(d.sigma(), 0.0);
        assert_eq!(d.x(), &[1.0, 0.0, 0.0]);
        assert!(d.y()[0].abs() < 1e-15);
        assert!((concurrence(&psi) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_state_has_sigma_quarter_pi() {
        let psi = StateVector::normalized(&[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let d = canonical_decompose(&psi);
        assert!((d.sigma() - core::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(concurrence(&psi) < 1e-15);
    }

    #[test]
    fn magic_basis_is_unitary() {
        let m = magic_basis();
        for i in 0..4 {
            for j in 0..4 {
                let ip: C64 = (0..4).map(|k| m[i][k].conj() * m[j][k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn bell_and_product_concurrence() {
        let bell = StateVector::from_real_normalized(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let m = to_magic_basis(&bell).unwrap();
        assert!((concurrence(&m) - 1.0).abs() < 1e-12);
        assert!((two_qubit_concurrence(&bell).unwrap() - 1.0).abs() < 1e-12);
        let zero = StateVector::basis(4, 0).unwrap();
        assert!(concurrence(&to_magic_basis(&zero).unwrap()) < 1e-15);
        let back = from_magic_basis(&to_magic_basis(&bell).unwrap()).unwrap();
        assert!((back.fidelity(&bell) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tailored_regular_on_real_state_gives_sqrt5() {
        let psi = StateVector::from_real_normalized(&[1.0, 2.0, -0.5]).unwrap();
        let t = tailor_with_symmetric(&psi, REGULAR_SIN_SQ.sqrt()).unwrap();
        assert!((t.expectation - SQRT_5).abs() < 1e-12);
    }

    #[test]
    fn tailored_coherent_state_sits_on_the_bound() {
        let psi = StateVector::normalized(&[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let t = tailor_pentagram(&psi, DEFAULT_EPSILON).unwrap();
        assert!((t.expectation - 2.0).abs() < 1e-10);
        assert!(!t.violates());
    }

    #[test]
    fn epsilon_range_is_checked() {
        let psi = StateVector::basis(3, 0).unwrap();
        assert!(tailor_pentagram(&psi, 0.0).is_err());
        assert!(tailor_pentagram(&psi, 0.3).is_err());
        let four = StateVector::basis(4, 0).unwrap();
        assert!(tailor_pentagram(&four, 0.05).is_err());
    }
}
