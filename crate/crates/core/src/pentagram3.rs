//! The three-dimensional pentagram family.
//!
//! Up to a unitary change of basis every 3D pentagram is one of
//!
//! ```text
//!   |0> = (1, 0, 0)
//!   |1> = (cos a, 0, e^{i mu} sin a)
//!   |2> = (0, cos b, e^{i nu} sin b)
//!   |3> = (0, 1, 0)
//!   |4> = (e^{-i mu} sin a cos b, e^{-i nu} cos a sin b, -cos a cos b) / sqrt(1 - sin^2 a sin^2 b)
//! ```
//!
//! and its spectrum depends only on the overlap sum `A = sum_k |<k|k+1>|^2`
//! through the characteristic cubic
//! `lambda^3 - 5 lambda^2 + (10 - A) lambda + 3A - 10`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::golden::REGULAR_SIN_SQ;
use crate::optimize::{nelder_mead_restarted, NelderMeadOptions};
use crate::pentagram::Pentagram;
use crate::spectral::{cubic_roots, StateVector, C64};

/// Four angles labelling a 3D pentagram.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PentagramParams {
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    pub nu: f64,
}

impl PentagramParams {
    /// `a, b` in `[0, pi/2]`, `mu, nu` in `[0, 2 pi)`.
    pub fn new(a: f64, b: f64, mu: f64, nu: f64) -> Result<Self> {
        let angle_ok = |x: f64| (0.0..=FRAC_PI_2).contains(&x);
        let phase_ok = |x: f64| (0.0..TAU).contains(&x);
        if !angle_ok(a) || !angle_ok(b) {
            return Err(Error::InvalidArgument(alloc::format!(
                "angles a = {a}, b = {b} must lie in [0, pi/2]"
            )));
        }
        if !phase_ok(mu) || !phase_ok(nu) {
            return Err(Error::InvalidArgument(alloc::format!(
                "phases mu = {mu}, nu = {nu} must lie in [0, 2 pi)"
            )));
        }
        Ok(Self { a, b, mu, nu })
    }

    /// Clamps the angles and wraps the phases into range.
    pub fn folded(a: f64, b: f64, mu: f64, nu: f64) -> Self {
        let wrap = |x: f64| {
            let r = x % TAU;
            let w = if r < 0.0 { r + TAU } else { r };
            if w >= TAU {
                0.0
            } else {
                w
            }
        };
        Self { a: a.clamp(0.0, FRAC_PI_2), b: b.clamp(0.0, FRAC_PI_2), mu: wrap(mu), nu: wrap(nu) }
    }

    /// Real symmetric member with `sin a = sin b = s`.
    pub fn real_symmetric(s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidArgument(alloc::format!("s = {s} must lie in [0, 1]")));
        }
        let a = s.asin();
        Ok(Self { a, b: a, mu: 0.0, nu: 0.0 })
    }

    /// `sin^2 a = sin^2 b = PHI - 1`, real.
    pub fn regular() -> Self {
        Self::real_symmetric(REGULAR_SIN_SQ.sqrt()).expect("in range")
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.mu, self.nu]
    }
}

/// The five family vectors for `params`.
pub fn build_family(params: &PentagramParams) -> Result<Pentagram> {
    let (sa, ca) = params.a.sin_cos();
    let (sb, cb) = params.b.sin_cos();
    let den = 1.0 - sa * sa * sb * sb;
    if den <= 1e-12 {
        return Err(Error::SingularFamily);
    }
    let r = den.sqrt();
    let emu = C64::from_polar(1.0, params.mu);
    let enu = C64::from_polar(1.0, params.nu);
    let zero = C64::new(0.0, 0.0);
    let re = |x: f64| C64::new(x, 0.0);
    let vectors = [
        StateVector::new(&[re(1.0), zero, zero])?,
        StateVector::normalized(&[re(ca), zero, emu * sa])?,
        StateVector::normalized(&[zero, re(cb), enu * sb])?,
        StateVector::new(&[zero, re(1.0), zero])?,
        StateVector::normalized(&[emu.conj() * (sa * cb / r), enu.conj() * (ca * sb / r), re(-ca * cb / r)])?,
    ];
    Pentagram::new(vectors)
}

/// `A = 2 - sin^2 a sin^2 b cos^2 a cos^2 b / (1 - sin^2 a sin^2 b)`.
pub fn overlap_sum_closed_form(params: &PentagramParams) -> Result<f64> {
    let sa2 = params.a.sin().powi(2);
    let sb2 = params.b.sin().powi(2);
    let den = 1.0 - sa2 * sb2;
    if den <= 1e-12 {
        return Err(Error::SingularFamily);
    }
    Ok(2.0 - sa2 * sb2 * (1.0 - sa2) * (1.0 - sb2) / den)
}

/// Coefficients `[c2, c1, c0]` of the monic characteristic cubic for overlap sum `A`.
pub fn characteristic_cubic(overlap_sum: f64) -> [f64; 3] {
    [-5.0, 10.0 - overlap_sum, 3.0 * overlap_sum - 10.0]
}

/// Descending 3D pentagram spectrum from `A` alone.
pub fn spectrum_from_overlap_sum(overlap_sum: f64) -> Result<[f64; 3]> {
    cubic_roots(characteristic_cubic(overlap_sum))
}

/// Eigenvalues of the real symmetric pentagram with `sin a = sin b = s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSpectrum {
    pub lambda0: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl CurveSpectrum {
    pub fn sorted(&self) -> [f64; 3] {
        let mut v = [self.lambda0, self.lambda_plus, self.lambda_minus];
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// `lambda0 = 2 - s^2`,
/// `lambda+- = (3 + s^2)/2 +- sqrt((1 + 3s^2 - 5s^4 + s^6) / (1 + s^2)) / 2`.
pub fn spectrum_curve(s: f64) -> Result<CurveSpectrum> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(alloc::format!("s = {s} must lie in [0, 1]")));
    }
    let s2 = s * s;
    let radicand = (1.0 + 3.0 * s2 - 5.0 * s2 * s2 + s2 * s2 * s2) / (1.0 + s2);
    let root = radicand.max(0.0).sqrt();
    Ok(CurveSpectrum {
        lambda0: 2.0 - s2,
        lambda_plus: (3.0 + s2) / 2.0 + root / 2.0,
        lambda_minus: (3.0 + s2) / 2.0 - root / 2.0,
    })
}

/// `lambda_+ - 2` for the real symmetric pentagram, without cancellation.
pub fn curve_top_excess(s: f64) -> f64 {
    let s2 = s * s;
    let radicand = (1.0 + 3.0 * s2 - 5.0 * s2 * s2 + s2 * s2 * s2) / (1.0 + s2);
    2.0 * s2 * (1.0 - s2) / ((1.0 + s2) * (radicand.max(0.0).sqrt() + 1.0 - s2))
}

/// Largest eigenvalue reached at a family point, via the overlap sum of the
/// constructed vectors and the characteristic cubic.
pub fn lambda_max_at(params: &PentagramParams) -> Result<f64> {
    let a = build_family(params)?.overlap_sum();
    Ok(spectrum_from_overlap_sum(a)?[0])
}

/// Grid resolution for the family scans: points per angle, endpoints
/// included. Phase grids cover `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyGrid {
    pub angle_points: usize,
    pub phase_points: usize,
}

impl Default for FamilyGrid {
    fn default() -> Self {
        Self { angle_points: 64, phase_points: 64 }
    }
}

impl FamilyGrid {
    fn angles(&self) -> impl Iterator<Item = f64> + Clone {
        let n = self.angle_points.max(2);
        (0..n).map(move |i| FRAC_PI_2 * i as f64 / (n - 1) as f64)
    }

    fn phases(&self) -> impl Iterator<Item = f64> + Clone {
        let n = self.phase_points.max(1);
        (0..n).map(move |i| TAU * i as f64 / n as f64)
    }

    /// Number of distinct values of `a`.
    pub fn slices(&self) -> usize {
        self.angle_points.max(2)
    }

    /// Grid points with `a` at index `i`, in lexicographic order. Slices
    /// `0..slices()` concatenated give [`FamilyGrid::points`].
    pub fn slice(&self, i: usize) -> impl Iterator<Item = PentagramParams> + '_ {
        let n = self.slices();
        let a = FRAC_PI_2 * i as f64 / (n - 1) as f64;
        let phases = self.phases();
        self.angles().flat_map(move |b| {
            let phases2 = phases.clone();
            phases.clone().flat_map(move |mu| phases2.clone().map(move |nu| PentagramParams { a, b, mu, nu }))
        })
    }

    /// All grid points in lexicographic `(a, b, mu, nu)` order.
    pub fn points(&self) -> impl Iterator<Item = PentagramParams> + '_ {
        let angles = self.angles();
        let phases = self.phases();
        angles.clone().flat_map(move |a| {
            let phases = phases.clone();
            angles.clone().flat_map(move |b| {
                let phases2 = phases.clone();
                phases.clone().flat_map(move |mu| phases2.clone().map(move |nu| PentagramParams { a, b, mu, nu }))
            })
        })
    }
}

/// An extremum of some function over the family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyExtremum {
    pub params: PentagramParams,
    pub value: f64,
    /// Overlap sum at `params`.
    pub overlap_sum: f64,
}

/// Maximizes `lambda_max` over all four angles: grid scan, then Nelder-Mead
/// from the best grid point. Ties on the grid go to the lexicographically
/// smallest parameters.
pub fn max_eigenvalue_over_family(grid: FamilyGrid) -> Result<FamilyExtremum> {
    let best = best_lambda_max(grid.points()).ok_or(Error::NotFound { restarts: 0 })?;
    max_eigenvalue_from(best.0)
}

/// Grid point with the largest `lambda_max`; the first one wins ties.
pub fn best_lambda_max(points: impl IntoIterator<Item = PentagramParams>) -> Option<(PentagramParams, f64)> {
    let mut best: Option<(PentagramParams, f64)> = None;
    for p in points {
        if let Ok(v) = lambda_max_at(&p) {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((p, v));
            }
        }
    }
    best
}

/// Nelder-Mead refinement of `lambda_max` from `start`.
pub fn max_eigenvalue_from(start: PentagramParams) -> Result<FamilyExtremum> {
    refine(start.as_array(), |p| lambda_max_at(p).map(|v| -v))
        .map(|(params, neg)| (params, -neg))
        .and_then(|(params, value)| {
            Ok(FamilyExtremum { params, value, overlap_sum: build_family(&params)?.overlap_sum() })
        })
}

/// Same maximization restricted to real symmetric pentagrams (`mu = nu = 0`, `a = b`).
pub fn max_eigenvalue_real_symmetric(points: usize) -> Result<FamilyExtremum> {
    let n = points.max(2);
    let objective = |a: f64| {
        let p = PentagramParams::folded(a, a, 0.0, 0.0);
        lambda_max_at(&p).unwrap_or(f64::NEG_INFINITY)
    };
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..n {
        let a = FRAC_PI_2 * i as f64 / (n - 1) as f64;
        let v = objective(a);
        if v > best.1 {
            best = (a, v);
        }
    }
    let m = nelder_mead_restarted(|x| -objective(x[0]), &[best.0], refine_options(), 4);
    let params = PentagramParams::folded(m.x[0], m.x[0], 0.0, 0.0);
    Ok(FamilyExtremum { params, value: -m.value, overlap_sum: build_family(&params)?.overlap_sum() })
}

/// One row of a family scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySample {
    pub params: PentagramParams,
    pub overlap_sum: f64,
    /// Descending eigenvalues from the eigensolver.
    pub spectrum: [f64; 3],
}

/// Evaluates one grid point; `None` at the singular corner.
pub fn sample_family(params: &PentagramParams) -> Option<FamilySample> {
    let p = build_family(params).ok()?;
    let s = p.spectrum();
    let v = s.values();
    Some(FamilySample { params: *params, overlap_sum: p.overlap_sum(), spectrum: [v[0], v[1], v[2]] })
}

/// Every non-singular point of `grid`, in lexicographic order.
pub fn scan_family(grid: FamilyGrid) -> Vec<FamilySample> {
    grid.points().filter_map(|p| sample_family(&p)).collect()
}

/// Minimum of the overlap sum among `samples`, refined by Nelder-Mead over
/// `(a, b)` with the phases of the best sample held fixed.
pub fn refine_overlap_minimum(samples: &[FamilySample]) -> Result<FamilyExtremum> {
    let best = samples
        .iter()
        .fold(None::<&FamilySample>, |acc, s| match acc {
            Some(b) if b.overlap_sum <= s.overlap_sum => Some(b),
            _ => Some(s),
        })
        .ok_or_else(|| Error::InvalidArgument("empty scan".into()))?;
    let (mu, nu) = (best.params.mu, best.params.nu);
    let objective = |x: &[f64]| {
        let p = PentagramParams::folded(x[0], x[1], mu, nu);
        build_family(&p).map(|pg| pg.overlap_sum()).unwrap_or(f64::INFINITY)
    };
    let m = nelder_mead_restarted(objective, &[best.params.a, best.params.b], refine_options(), 4);
    let params = PentagramParams::folded(m.x[0], m.x[1], mu, nu);
    Ok(FamilyExtremum { params, value: m.value, overlap_sum: m.value })
}

fn refine_options() -> NelderMeadOptions {
    NelderMeadOptions { step: 0.02, x_tol: 1e-10, f_tol: 1e-16, max_evals: 20_000 }
}

fn refine<F>(start: [f64; 4], objective: F) -> Result<(PentagramParams, f64)>
where
    F: Fn(&PentagramParams) -> Result<f64>,
{
    let f = |x: &[f64]| {
        let p = PentagramParams::folded(x[0], x[1], x[2], x[3]);
        objective(&p).unwrap_or(f64::INFINITY)
    };
    let m = nelder_mead_restarted(f, &start, refine_options(), 4);
    Ok((PentagramParams::folded(m.x[0], m.x[1], m.x[2], m.x[3]), m.value))
}

/// Half-opening angle, in degrees, of the cone around the top eigenvector
/// inside which every state has `<Sigma> > 2`.
///
/// A state `cos t v1 + sin t w` with `w _|_ v1` has expectation
/// `lambda_max cos^2 t + <w|Sigma|w> sin^2 t`, worst when `w` is the bottom
/// eigenvector, so the boundary solves
/// `lambda_max cos^2 t + lambda_min sin^2 t = 2`.
pub fn violation_cone_angle(p: &Pentagram) -> Result<f64> {
    let s = p.spectrum();
    let top = s.max();
    let bottom = s.min();
    if top <= 2.0 + 1e-12 {
        return Err(Error::NoViolation { lambda_max: top });
    }
    let cos2 = (2.0 - bottom) / (top - bottom);
    Ok(cos2.sqrt().clamp(0.0, 1.0).acos() * 180.0 / PI)
}

/// The analytic cone angle for the regular pentagram: solution of
/// `sqrt5 cos^2 t + ((5 - sqrt5)/2) sin^2 t = 2`, in degrees.
pub fn regular_cone_angle_analytic() -> f64 {
    let r5 = 5.0f64.sqrt();
    let low = (5.0 - r5) / 2.0;
    ((2.0 - low) / (r5 - low)).sqrt().acos() * 180.0 / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::{A_MIN, SQRT_5};

    #[test]
    fn degenerate_corner() {
        let p = build_family(&PentagramParams::new(0.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert!(p.is_degenerate());
        assert!((p.overlap_sum() - 2.0).abs() < 1e-15);
        let s = p.spectrum();
        assert!(s.distance(&[2.0, 2.0, 1.0]) < 1e-9);
        assert!(matches!(violation_cone_angle(&p), Err(Error::NoViolation { .. })));
    }

    #[test]
    fn regular_member() {
        let params = PentagramParams::regular();
        let p = build_family(&params).unwrap();
        assert!(p.is_regular());
        assert!((p.overlap_sum() - A_MIN).abs() < 1e-12);
        assert!((overlap_sum_closed_form(&params).unwrap() - A_MIN).abs() < 1e-12);
        let s = p.spectrum();
        assert!((s.max() - SQRT_5).abs() < 1e-12);
    }

    #[test]
    fn singular_corner_rejected() {
        let p = PentagramParams::new(FRAC_PI_2, FRAC_PI_2, 0.0, 0.0).unwrap();
        assert_eq!(build_family(&p).unwrap_err(), Error::SingularFamily);
    }

    #[test]
    fn parameter_ranges_enforced() {
        assert!(PentagramParams::new(-0.1, 0.0, 0.0, 0.0).is_err());
        assert!(PentagramParams::new(0.0, 0.0, TAU, 0.0).is_err());
        let f = PentagramParams::folded(2.0, -1.0, -0.5, 7.0);
        assert!(PentagramParams::new(f.a, f.b, f.mu, f.nu).is_ok());
    }

    #[test]
    fn curve_endpoints() {
        let c = spectrum_curve(0.0).unwrap();
        assert_eq!(c.sorted(), [2.0, 2.0, 1.0]);
        let c = spectrum_curve(REGULAR_SIN_SQ.sqrt()).unwrap();
        assert!((c.lambda_plus - SQRT_5).abs() < 1e-12);
        let low = (5.0 - SQRT_5) / 2.0;
        assert!((c.lambda0 - low).abs() < 1e-12 && (c.lambda_minus - low).abs() < 1e-12);
        assert!(spectrum_curve(1.5).is_err());
    }

    #[test]
    fn stable_top_excess_matches_direct_formula() {
        for s in [0.01, 0.1, 0.5, 0.9] {
            let c = spectrum_curve(s).unwrap();
            assert!((curve_top_excess(s) - (c.lambda_plus - 2.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn slices_concatenate_to_the_grid() {
        let g = FamilyGrid { angle_points: 4, phase_points: 3 };
        let joined: Vec<_> = (0..g.slices()).flat_map(|i| g.slice(i).collect::<Vec<_>>()).collect();
        assert_eq!(joined, g.points().collect::<Vec<_>>());
    }

    #[test]
    fn grid_points_are_lexicographic() {
        let g = FamilyGrid { angle_points: 3, phase_points: 2 };
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts.len(), 36);
        for w in pts.windows(2) {
            assert!(w[0].as_array() < w[1].as_array());
        }
    }

    #[test]
    fn regular_cone_is_about_thirty_one_and_a_half_degrees() {
        let p = build_family(&PentagramParams::regular()).unwrap();
        let angle = violation_cone_angle(&p).unwrap();
        assert!((angle - regular_cone_angle_analytic()).abs() < 1e-9);
        assert!((angle - 31.717_474_411_461).abs() < 1e-9);
    }
}
