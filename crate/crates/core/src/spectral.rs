//! Small complex vectors and Hermitian operators in dimension 3 and 4.
//!
//! Everything is stored inline in fixed `4`-slot arrays so no allocation is
//! needed for the arithmetic itself. Eigendecomposition uses cyclic complex
//! Jacobi rotations, which are accurate to machine precision at these sizes.

#![allow(clippy::needless_range_loop)]

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const MAX_DIM: usize = 4;

/// Unit-norm tolerance for [`StateVector::new`].
pub const NORM_TOL: f64 = 1e-12;
/// Entrywise tolerance for [`HermitianOperator::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Components smaller than this are skipped when fixing the global phase.
pub const PHASE_TOL: f64 = 1e-8;
/// Gram determinant below which two rays are considered parallel.
pub const GRAM_TOL: f64 = 1e-10;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn check_dim(dim: usize) -> Result<()> {
    if dim == 3 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidDimension { expected: "3 or 4", found: dim })
    }
}

/// Multiplies `amps` by the phase that makes the first component with
/// modulus above [`PHASE_TOL`] real and positive.
pub fn fix_phase(amps: &mut [C64]) {
    if let Some(lead) = amps.iter().copied().find(|z| z.norm() > PHASE_TOL) {
        let phase = lead.conj() / lead.norm();
        for z in amps.iter_mut() {
            *z *= phase;
        }
    }
}

/// A unit vector in `C^3` or `C^4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    dim: usize,
    amps: [C64; MAX_DIM],
}

impl StateVector {
    /// Wraps `amps`, requiring dimension 3 or 4 and unit norm within [`NORM_TOL`].
    pub fn new(amps: &[C64]) -> Result<Self> {
        check_dim(amps.len())?;
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self::from_slice(amps))
    }

    /// Normalizes `amps` first. Fails on a zero vector.
    pub fn normalized(amps: &[C64]) -> Result<Self> {
        check_dim(amps.len())?;
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        let mut v = Self::from_slice(amps);
        for z in v.amps[..v.dim].iter_mut() {
            *z /= norm;
        }
        Ok(v)
    }

    pub fn from_real(re: &[f64]) -> Result<Self> {
        let mut buf = [ZERO; MAX_DIM];
        let n = re.len().min(MAX_DIM);
        for (z, &x) in buf.iter_mut().zip(&re[..n]) {
            *z = C64::new(x, 0.0);
        }
        if re.len() > MAX_DIM {
            return Err(Error::InvalidDimension { expected: "3 or 4", found: re.len() });
        }
        Self::new(&buf[..n])
    }

    /// Like [`StateVector::from_real`] but normalizes first.
    pub fn from_real_normalized(re: &[f64]) -> Result<Self> {
        if re.len() > MAX_DIM {
            return Err(Error::InvalidDimension { expected: "3 or 4", found: re.len() });
        }
        let mut buf = [ZERO; MAX_DIM];
        for (z, &x) in buf.iter_mut().zip(re) {
            *z = C64::new(x, 0.0);
        }
        Self::normalized(&buf[..re.len()])
    }

    /// `e_index` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::InvalidArgument(alloc::format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = [ZERO; MAX_DIM];
        amps[index] = ONE;
        Ok(Self { dim, amps })
    }

    fn from_slice(amps: &[C64]) -> Self {
        let mut buf = [ZERO; MAX_DIM];
        buf[..amps.len()].copy_from_slice(amps);
        Self { dim: amps.len(), amps: buf }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps[..self.dim]
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes()
            .iter()
            .zip(other.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn overlap_sq(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Bilinear square `sum_k psi_k^2`, no conjugation.
    pub fn bilinear_square(&self) -> C64 {
        self.amplitudes().iter().map(|z| z * z).sum()
    }

    /// Complex conjugate in the current basis.
    pub fn conj(&self) -> StateVector {
        let mut out = *self;
        for z in out.amps.iter_mut() {
            *z = z.conj();
        }
        out
    }

    /// Same ray with the global phase fixed by [`fix_phase`].
    pub fn with_phase_convention(&self) -> StateVector {
        let mut out = *self;
        fix_phase(&mut out.amps[..out.dim]);
        out
    }

    /// Multiplies by a global phase `e^{i phase}`.
    pub fn rephased(&self, phase: f64) -> StateVector {
        let u = C64::from_polar(1.0, phase);
        let mut out = *self;
        for z in out.amps.iter_mut() {
            *z *= u;
        }
        out
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.amplitudes().iter().all(|z| z.im.abs() <= tol)
    }

    /// Real parts of the amplitudes.
    pub fn real_parts(&self) -> [f64; MAX_DIM] {
        let mut out = [0.0; MAX_DIM];
        for (o, z) in out.iter_mut().zip(self.amplitudes()) {
            *o = z.re;
        }
        out
    }

    /// Applies a real `dim x dim` matrix given row-major.
    pub fn rotated(&self, rows: &[[f64; MAX_DIM]; MAX_DIM]) -> StateVector {
        let mut out = [ZERO; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = (0..self.dim).map(|j| self.amps[j] * rows[i][j]).sum();
        }
        StateVector { dim: self.dim, amps: out }
    }

    /// Fidelity `|<self|other>|^2`, the phase-insensitive comparison of two rays.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.overlap_sq(other)
    }
}

/// A Hermitian `dim x dim` operator, `dim` in {3, 4}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    m: [[C64; MAX_DIM]; MAX_DIM],
}

impl HermitianOperator {
    /// Row-major entries; rejects operators that differ from their adjoint
    /// by more than [`HERMITIAN_TOL`] in any entry.
    pub fn new(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(alloc::format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut m = [[ZERO; MAX_DIM]; MAX_DIM];
        for i in 0..dim {
            for j in 0..dim {
                m[i][j] = entries[i * dim + j];
            }
        }
        let op = Self { dim, m };
        let deviation = op.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(op)
    }

    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, m: [[ZERO; MAX_DIM]; MAX_DIM] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut op = Self::zero(dim)?;
        for i in 0..dim {
            op.m[i][i] = ONE;
        }
        Ok(op)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let mut op = Self::zero(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            op.m[i][i] = C64::new(v, 0.0);
        }
        Ok(op)
    }

    /// `|v><v|`.
    pub fn projector(v: &StateVector) -> Self {
        let mut m = [[ZERO; MAX_DIM]; MAX_DIM];
        let a = v.amplitudes();
        for i in 0..v.dim() {
            for j in 0..v.dim() {
                m[i][j] = a[i] * a[j].conj();
            }
        }
        Self { dim: v.dim(), m }
    }

    /// Sum of rank-one projectors. All vectors must share one dimension.
    pub fn sum_of_projectors<'a, I>(vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a StateVector>,
    {
        let mut it = vectors.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty projector sum".into()))?;
        let mut acc = Self::projector(first);
        for v in it {
            if v.dim() != acc.dim {
                return Err(Error::InvalidDimension { expected: "matching dimensions", found: v.dim() });
            }
            let p = Self::projector(v);
            for i in 0..acc.dim {
                for j in 0..acc.dim {
                    acc.m[i][j] += p.m[i][j];
                }
            }
        }
        Ok(acc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[i][j]
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.dim * self.dim);
        for row in &self.m[..self.dim] {
            out.extend_from_slice(&row[..self.dim]);
        }
        out
    }

    fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn apply(&self, v: &StateVector) -> [C64; MAX_DIM] {
        let mut out = [ZERO; MAX_DIM];
        let a = v.amplitudes();
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = (0..self.dim).map(|j| self.m[i][j] * a[j]).sum();
        }
        out
    }

    /// `<v|op|v>`; real for Hermitian operators.
    pub fn expectation(&self, v: &StateVector) -> f64 {
        let w = self.apply(v);
        v.amplitudes()
            .iter()
            .zip(&w)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.m[i][i].re).sum()
    }

    fn matmul(&self, other: &Self) -> [[C64; MAX_DIM]; MAX_DIM] {
        let n = self.dim;
        let mut out = [[ZERO; MAX_DIM]; MAX_DIM];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = (0..n).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        out
    }

    /// `Tr op^2`.
    pub fn trace_of_square(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.m[i][j].norm_sqr();
            }
        }
        acc
    }

    /// `Tr op^3`.
    pub fn trace_of_cube(&self) -> f64 {
        let sq = self.matmul(self);
        let mut acc = 0.0;
        for i in 0..self.dim {
            for k in 0..self.dim {
                acc += (sq[i][k] * self.m[k][i]).re;
            }
        }
        acc
    }

    /// `O op O^T` for a real orthogonal `O`, given row-major.
    pub fn conjugated_by_real(&self, rows: &[[f64; MAX_DIM]; MAX_DIM]) -> Self {
        let n = self.dim;
        let mut tmp = [[ZERO; MAX_DIM]; MAX_DIM];
        for i in 0..n {
            for j in 0..n {
                tmp[i][j] = (0..n).map(|k| self.m[i][k] * rows[j][k]).sum();
            }
        }
        let mut out = [[ZERO; MAX_DIM]; MAX_DIM];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = (0..n).map(|k| tmp[k][j] * rows[i][k]).sum();
            }
        }
        Self { dim: n, m: out }
    }

    /// Eigenvalues in descending order with orthonormal eigenvectors.
    pub fn eigensystem(&self) -> Eigensystem {
        jacobi_eigensystem(self)
    }

    pub fn spectrum(&self) -> Spectrum {
        self.eigensystem().spectrum
    }
}

/// Descending real eigenvalues of a Hermitian operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum {
    dim: usize,
    values: [f64; MAX_DIM],
}

impl Spectrum {
    /// Sorts `values` in descending order.
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_DIM {
            return Err(Error::InvalidDimension { expected: "1 to 4 eigenvalues", found: values.len() });
        }
        let mut buf = [0.0; MAX_DIM];
        buf[..values.len()].copy_from_slice(values);
        buf[..values.len()].sort_by(|a, b| b.total_cmp(a));
        Ok(Self { dim: values.len(), values: buf })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values[..self.dim]
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.dim - 1]
    }

    pub fn sum(&self) -> f64 {
        self.values().iter().sum()
    }

    /// Largest entrywise distance to `other`, infinite when dimensions differ.
    pub fn distance(&self, other: &[f64]) -> f64 {
        if other.len() != self.dim {
            return f64::INFINITY;
        }
        self.values()
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigensystem {
    pub spectrum: Spectrum,
    /// `vectors[i]` belongs to `spectrum.values()[i]`.
    pub vectors: Vec<StateVector>,
}

impl Eigensystem {
    /// `sum_i lambda_i |v_i><v_i|`.
    pub fn reconstruct(&self) -> HermitianOperator {
        let dim = self.spectrum.dim();
        let mut m = [[ZERO; MAX_DIM]; MAX_DIM];
        for (lambda, v) in self.spectrum.values().iter().zip(&self.vectors) {
            let a = v.amplitudes();
            for i in 0..dim {
                for j in 0..dim {
                    m[i][j] += a[i] * a[j].conj() * *lambda;
                }
            }
        }
        HermitianOperator { dim, m }
    }
}

fn jacobi_eigensystem(op: &HermitianOperator) -> Eigensystem {
    let n = op.dim;
    let mut a = op.m;
    // Start from the exactly Hermitian part.
    for i in 0..n {
        a[i][i] = C64::new(a[i][i].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[i][j] + a[j][i].conj()) * 0.5;
            a[i][j] = avg;
            a[j][i] = avg.conj();
        }
    }
    let mut v = [[ZERO; MAX_DIM]; MAX_DIM];
    for (i, row) in v.iter_mut().enumerate().take(n) {
        row[i] = ONE;
    }

    let scale: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a[i][j].norm_sqr())
        .sum::<f64>()
        .sqrt();

    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale || off < 1e-300 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let r = a[p][q].norm();
                if r <= 1e-300 {
                    continue;
                }
                // Phase e^{-i theta} on column q makes a_pq real, then a real
                // Jacobi rotation annihilates it.
                let phase = a[p][q].conj() / r;
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns p, q of G.
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase * (-s);
                let g_qq = phase * c;

                // A <- A G (columns p, q).
                for row in a.iter_mut().take(n) {
                    let ap = row[p];
                    let aq = row[q];
                    row[p] = ap * g_pp + aq * g_qp;
                    row[q] = ap * g_pq + aq * g_qq;
                }
                // A <- G^dagger A (rows p, q).
                for k in 0..n {
                    let ap = a[p][k];
                    let aq = a[q][k];
                    a[p][k] = g_pp.conj() * ap + g_qp.conj() * aq;
                    a[q][k] = g_pq.conj() * ap + g_qq.conj() * aq;
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p].im = 0.0;
                a[q][q].im = 0.0;
                // V <- V G.
                for row in v.iter_mut().take(n) {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = vp * g_pp + vq * g_qp;
                    row[q] = vp * g_pq + vq * g_qq;
                }
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order[..n].sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    let mut values = [0.0; MAX_DIM];
    let mut vectors = Vec::with_capacity(n);
    for (slot, &col) in order[..n].iter().enumerate() {
        values[slot] = a[col][col].re;
        let mut amps = [ZERO; MAX_DIM];
        for (i, z) in amps.iter_mut().enumerate().take(n) {
            *z = v[i][col];
        }
        fix_phase(&mut amps[..n]);
        vectors.push(StateVector { dim: n, amps });
    }
    Eigensystem { spectrum: Spectrum { dim: n, values }, vectors }
}

/// Evaluates `x^3 + c2 x^2 + c1 x + c0`.
pub fn eval_monic_cubic(coeffs: [f64; 3], x: f64) -> f64 {
    let [c2, c1, c0] = coeffs;
    ((x + c2) * x + c1) * x + c0
}

/// Real roots of the monic cubic `x^3 + c2 x^2 + c1 x + c0`, descending.
///
/// Fails with [`Error::ComplexRoots`] when the discriminant is below
/// `-1e-12` (scaled by the coefficient magnitude).
pub fn cubic_roots(coeffs: [f64; 3]) -> Result<[f64; 3]> {
    let [c2, c1, c0] = coeffs;
    let disc = 18.0 * c2 * c1 * c0 - 4.0 * c2.powi(3) * c0 + c2 * c2 * c1 * c1
        - 4.0 * c1.powi(3)
        - 27.0 * c0 * c0;
    let scale = coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs())).powi(4);
    if disc < -1e-12 * scale {
        return Err(Error::ComplexRoots { discriminant: disc });
    }
    let shift = -c2 / 3.0;
    // Depressed cubic t^3 + p t + q with x = t + shift.
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2.powi(3) / 27.0 - c2 * c1 / 3.0 + c0;
    let mut roots = if p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        [
            shift + m * phi.cos(),
            shift + m * (phi - 2.0 * PI / 3.0).cos(),
            shift + m * (phi - 4.0 * PI / 3.0).cos(),
        ]
    } else {
        // Nonnegative p with a nonnegative discriminant: a triple root.
        let t = (-q).cbrt();
        [shift + t; 3]
    };
    for r in roots.iter_mut() {
        *r = polish_root(coeffs, *r);
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

/// Guarded Newton steps: only accepted while the residual shrinks.
fn polish_root(coeffs: [f64; 3], mut x: f64) -> f64 {
    let [c2, c1, _] = coeffs;
    let mut fx = eval_monic_cubic(coeffs, x).abs();
    for _ in 0..8 {
        let d = (3.0 * x + 2.0 * c2) * x + c1;
        if d == 0.0 {
            break;
        }
        let cand = x - eval_monic_cubic(coeffs, x) / d;
        let fc = eval_monic_cubic(coeffs, cand).abs();
        if fc < fx {
            x = cand;
            fx = fc;
        } else {
            break;
        }
    }
    x
}

/// The unique ray orthogonal to `v1` and `v2` in dimension 3, as the
/// conjugated cross product, with the phase convention applied.
pub fn orthogonal_complement_3d(v1: &StateVector, v2: &StateVector) -> Result<StateVector> {
    if v1.dim() != 3 || v2.dim() != 3 {
        return Err(Error::InvalidDimension { expected: "3", found: v1.dim().max(v2.dim()) });
    }
    let gram = v1.inner(v1).re * v2.inner(v2).re - v1.overlap_sq(v2);
    if gram <= GRAM_TOL {
        return Err(Error::Degenerate("orthogonal complement of near-parallel rays"));
    }
    let a = v1.amplitudes();
    let b = v2.amplitudes();
    let cross = [
        (a[1] * b[2] - a[2] * b[1]).conj(),
        (a[2] * b[0] - a[0] * b[2]).conj(),
        (a[0] * b[1] - a[1] * b[0]).conj(),
    ];
    Ok(StateVector::normalized(&cross)?.with_phase_convention())
}

/// The ray orthogonal to `dim - 1` given vectors, found by Gram-Schmidt
/// against the standard basis.
pub fn orthogonal_complement(vectors: &[StateVector]) -> Result<StateVector> {
    let dim = vectors
        .first()
        .map(StateVector::dim)
        .ok_or_else(|| Error::InvalidArgument("no vectors given".into()))?;
    if vectors.len() + 1 != dim || vectors.iter().any(|v| v.dim() != dim) {
        return Err(Error::InvalidArgument(alloc::format!(
            "need {} vectors of dimension {dim}",
            dim.saturating_sub(1)
        )));
    }
    let mut basis: Vec<[C64; MAX_DIM]> = Vec::with_capacity(dim);
    for v in vectors {
        let mut w = [ZERO; MAX_DIM];
        w[..dim].copy_from_slice(v.amplitudes());
        if !project_out(&mut w, &basis, dim) {
            return Err(Error::Degenerate("input vectors are linearly dependent"));
        }
        basis.push(w);
    }
    let mut best: Option<([C64; MAX_DIM], f64)> = None;
    for i in 0..dim {
        let mut w = [ZERO; MAX_DIM];
        w[i] = ONE;
        for b in &basis {
            let c: C64 = (0..dim).map(|k| b[k].conj() * w[k]).sum();
            for k in 0..dim {
                w[k] -= b[k] * c;
            }
        }
        let n = (0..dim).map(|k| w[k].norm_sqr()).sum::<f64>();
        if best.as_ref().is_none_or(|(_, bn)| n > *bn) {
            best = Some((w, n));
        }
    }
    let (mut w, _) = best.expect("dim >= 3");
    project_out(&mut w, &basis, dim);
    Ok(StateVector::new(&w[..dim])?.with_phase_convention())
}

/// Two passes of modified Gram-Schmidt; normalizes `w` in place. Returns
/// false when the residual Gram determinant falls below [`GRAM_TOL`].
fn project_out(w: &mut [C64; MAX_DIM], basis: &[[C64; MAX_DIM]], dim: usize) -> bool {
    let before: f64 = (0..dim).map(|k| w[k].norm_sqr()).sum();
    for _ in 0..2 {
        for b in basis {
            let c: C64 = (0..dim).map(|k| b[k].conj() * w[k]).sum();
            for k in 0..dim {
                w[k] -= b[k] * c;
            }
        }
    }
    let after: f64 = (0..dim).map(|k| w[k].norm_sqr()).sum();
    if after <= GRAM_TOL * before.max(1e-300) {
        return false;
    }
    let n = after.sqrt();
    for z in w[..dim].iter_mut() {
        *z /= n;
    }
    true
}

/// Cross product in `R^3`.
pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn check_eigensystem(op: &HermitianOperator) {
        let es = op.eigensystem();
        let vals = es.spectrum.values();
        for w in vals.windows(2) {
            assert!(w[0] >= w[1]);
        }
        for (lambda, v) in vals.iter().zip(&es.vectors) {
            let av = op.apply(v);
            for (x, y) in av.iter().zip(v.amplitudes()) {
                assert!((x - y * *lambda).norm() < 1e-9);
            }
        }
        for i in 0..es.vectors.len() {
            for j in 0..es.vectors.len() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((es.vectors[i].inner(&es.vectors[j]) - expect).norm() < 1e-10);
            }
        }
        let rec = es.reconstruct();
        for (a, b) in rec.entries().iter().zip(op.entries()) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!((es.spectrum.sum() - op.trace()).abs() < 1e-9);
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        let id = HermitianOperator::identity(3).unwrap();
        assert_eq!(id.spectrum().values(), &[1.0, 1.0, 1.0]);
        check_eigensystem(&id);
        let d = HermitianOperator::diagonal(&[0.0, 5.0, 0.0]).unwrap();
        assert_eq!(d.spectrum().values(), &[5.0, 0.0, 0.0]);
        check_eigensystem(&d);
    }

    #[test]
    fn complex_hermitian_4x4() {
        let entries = vec![
            c(2.0, 0.0), c(1.0, 1.0), c(0.0, -0.5), c(0.3, 0.0),
            c(1.0, -1.0), c(-1.0, 0.0), c(0.2, 0.7), c(0.0, 0.0),
            c(0.0, 0.5), c(0.2, -0.7), c(0.5, 0.0), c(-1.1, 0.4),
            c(0.3, 0.0), c(0.0, 0.0), c(-1.1, -0.4), c(3.0, 0.0),
        ];
        let op = HermitianOperator::new(4, &entries).unwrap();
        check_eigensystem(&op);
        let es = op.eigensystem();
        let sq: f64 = es.spectrum.values().iter().map(|l| l * l).sum();
        assert!((sq - op.trace_of_square()).abs() < 1e-9);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut entries = vec![C64::new(0.0, 0.0); 9];
        entries[1] = c(1.0, 0.0);
        assert!(matches!(HermitianOperator::new(3, &entries), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn state_vector_validation() {
        assert!(StateVector::from_real(&[1.0, 0.0]).is_err());
        assert!(matches!(
            StateVector::from_real(&[1.0, 1.0, 0.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(StateVector::from_real_normalized(&[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn cubic_roots_examples() {
        let r = cubic_roots([-5.0, 8.0, -4.0]).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-7 && (r[1] - 2.0).abs() < 1e-7);
        assert!((r[2] - 1.0).abs() < 1e-12);
        // (x - 1)(x - 2)(x - 3)
        let r = cubic_roots([-6.0, 11.0, -6.0]).unwrap();
        assert!((r[0] - 3.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12 && (r[2] - 1.0).abs() < 1e-12);
        // triple root
        let r = cubic_roots([-3.0, 3.0, -1.0]).unwrap();
        assert!(r.iter().all(|x| (x - 1.0).abs() < 1e-5));
        // x^3 + x has a complex pair
        assert!(matches!(cubic_roots([0.0, 1.0, 0.0]), Err(Error::ComplexRoots { .. })));
    }

    #[test]
    fn complement_examples() {
        let e1 = StateVector::basis(3, 0).unwrap();
        let e2 = StateVector::basis(3, 1).unwrap();
        let w = orthogonal_complement_3d(&e1, &e2).unwrap();
        assert_eq!(w, StateVector::basis(3, 2).unwrap());

        let v = StateVector::from_real_normalized(&[0.0, 1.0, 1.0]).unwrap();
        let w = orthogonal_complement_3d(&e1, &v).unwrap();
        let expect = StateVector::from_real_normalized(&[0.0, 1.0, -1.0]).unwrap();
        assert!((w.fidelity(&expect) - 1.0).abs() < 1e-12);
        assert!(w.amplitudes()[1].re > 0.0);

        assert!(matches!(orthogonal_complement_3d(&e1, &e1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn general_complement_in_four_dimensions() {
        let vs = [
            StateVector::from_real_normalized(&[1.0, 1.0, 0.0, 0.0]).unwrap(),
            StateVector::from_real_normalized(&[0.0, 0.0, 1.0, 1.0]).unwrap(),
            StateVector::normalized(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]).unwrap(),
        ];
        let w = orthogonal_complement(&vs).unwrap();
        for v in &vs {
            assert!(v.inner(&w).norm() < 1e-12);
        }
        let dup = [vs[0], vs[0], vs[1]];
        assert!(orthogonal_complement(&dup).is_err());
    }

    #[test]
    fn phase_convention_makes_leading_component_positive() {
        let v = StateVector::normalized(&[c(0.0, 0.0), c(0.0, -2.0), c(1.0, 1.0)]).unwrap();
        let w = v.with_phase_convention();
        assert!(w.amplitudes()[1].im.abs() < 1e-15 && w.amplitudes()[1].re > 0.0);
        assert!((w.fidelity(&v) - 1.0).abs() < 1e-14);
    }
}
