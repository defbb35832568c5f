//! Derivative-free local optimizers used by the family scans and the
//! constrained searches: Nelder-Mead for scalar objectives and
//! Levenberg-Marquardt (finite-difference Jacobian) for residual vectors.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    /// Initial simplex edge length.
    pub step: f64,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
    /// Stop when the spread of objective values falls below this.
    pub f_tol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { step: 0.05, x_tol: 1e-10, f_tol: 1e-16, max_evals: 20_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Minimizes `f` starting from `x0`. Non-finite objective values are
/// treated as `+inf`, which lets callers encode infeasible regions.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    loop {
        // Order by value; ties keep insertion order.
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        values = idx.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|x| x.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let spread = values[n] - values[0];
        let flat = spread.is_finite() && spread <= opts.f_tol && diameter < opts.x_tol.sqrt();
        if evals >= opts.max_evals || diameter < opts.x_tol || flat {
            break;
        }

        for (j, c) in centroid.iter_mut().enumerate() {
            *c = simplex[..n].iter().map(|x| x[j]).sum::<f64>() / n as f64;
        }
        let worst = &simplex[n];
        for j in 0..n {
            trial[j] = centroid[j] + (centroid[j] - worst[j]);
        }
        let fr = eval(&trial, &mut evals);
        if fr < values[0] {
            for j in 0..n {
                trial2[j] = centroid[j] + 2.0 * (centroid[j] - worst[j]);
            }
            let fe = eval(&trial2, &mut evals);
            if fe < fr {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fe;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = fr;
            continue;
        }
        // Contraction, outside or inside.
        let outside = fr < values[n];
        for j in 0..n {
            trial2[j] = if outside {
                centroid[j] + 0.5 * (trial[j] - centroid[j])
            } else {
                centroid[j] + 0.5 * (worst[j] - centroid[j])
            };
        }
        let fc = eval(&trial2, &mut evals);
        if fc < values[n].min(fr) {
            simplex[n].copy_from_slice(&trial2);
            values[n] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        let best = simplex[0].clone();
        for i in 1..=n {
            for j in 0..n {
                simplex[i][j] = best[j] + 0.5 * (simplex[i][j] - best[j]);
            }
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    let (best, value) = simplex
        .into_iter()
        .zip(values)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("simplex is never empty");
    Minimum { x: best, value, evals }
}

/// Nelder-Mead restarted from its own optimum until the value stops
/// improving, which recovers from premature simplex collapse.
pub fn nelder_mead_restarted<F>(mut f: F, x0: &[f64], opts: NelderMeadOptions, rounds: usize) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut best = nelder_mead(&mut f, x0, opts);
    let mut evals = best.evals;
    for _ in 1..rounds.max(1) {
        let next = nelder_mead(&mut f, &best.x, NelderMeadOptions { step: opts.step * 0.1, ..opts });
        evals += next.evals;
        let improved = next.value < best.value - 1e-16 * best.value.abs().max(1.0);
        if next.value <= best.value {
            best = next;
        }
        if !improved {
            break;
        }
    }
    best.evals = evals;
    best
}

#[derive(Clone, Copy, Debug)]
pub struct LevenbergMarquardtOptions {
    pub max_iters: usize,
    /// Converged once the residual norm drops below this.
    pub residual_tol: f64,
    /// Gives up when the relative step falls below this.
    pub step_tol: f64,
}

impl Default for LevenbergMarquardtOptions {
    fn default() -> Self {
        Self { max_iters: 400, residual_tol: 1e-14, step_tol: 1e-16 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeastSquares {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Drives `residuals(x)` towards zero. The Jacobian is taken by central
/// differences.
pub fn levenberg_marquardt<F>(mut residuals: F, x0: &[f64], opts: LevenbergMarquardtOptions) -> LeastSquares
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = residuals(&x);
    let m = r.len();
    let mut cost = norm_sq(&r);
    let mut lambda = 1e-3;
    let mut iterations = 0;

    while iterations < opts.max_iters {
        if cost.sqrt() < opts.residual_tol {
            break;
        }
        iterations += 1;

        let mut jac = vec![0.0; m * n];
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1.0);
            let orig = x[j];
            x[j] = orig + h;
            let rp = residuals(&x);
            x[j] = orig - h;
            let rm = residuals(&x);
            x[j] = orig;
            for i in 0..m {
                jac[i * n + j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let mut jtj = vec![0.0; n * n];
        let mut jtr = vec![0.0; n];
        for i in 0..m {
            for a in 0..n {
                let ja = jac[i * n + a];
                jtr[a] += ja * r[i];
                for b in a..n {
                    jtj[a * n + b] += ja * jac[i * n + b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                jtj[a * n + b] = jtj[b * n + a];
            }
        }

        let mut accepted = false;
        for _ in 0..30 {
            let mut sys = jtj.clone();
            for a in 0..n {
                sys[a * n + a] += lambda * (jtj[a * n + a] + 1e-12);
            }
            let mut rhs: Vec<f64> = jtr.iter().map(|g| -g).collect();
            if !solve_in_place(&mut sys, &mut rhs, n) {
                lambda *= 10.0;
                continue;
            }
            let cand: Vec<f64> = x.iter().zip(&rhs).map(|(a, d)| a + d).collect();
            let rc = residuals(&cand);
            let cc = norm_sq(&rc);
            if cc.is_finite() && cc < cost {
                let step = rhs.iter().map(|d| d.abs()).fold(0.0, f64::max);
                let xscale = x.iter().map(|v| v.abs()).fold(1.0, f64::max);
                x = cand;
                r = rc;
                cost = cc;
                lambda = (lambda * 0.3).max(1e-15);
                accepted = true;
                if step < opts.step_tol * xscale {
                    iterations = opts.max_iters;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }

    let residual_norm = cost.sqrt();
    LeastSquares { x, residual_norm, converged: residual_norm < opts.residual_tol, iterations }
}

fn norm_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Gaussian elimination with partial pivoting; `a` is row-major `n x n`.
fn solve_in_place(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .expect("non-empty range");
        if a[pivot * n + col].abs() < 1e-300 {
            return false;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        let d = a[col * n + col];
        for row in (col + 1)..n {
            let factor = a[row * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let s: f64 = ((col + 1)..n).map(|k| a[col * n + k] * b[k]).sum();
        b[col] = (b[col] - s) / a[col * n + col];
    }
    b.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_rosenbrock_minimum() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead_restarted(rosen, &[-1.2, 1.0], NelderMeadOptions::default(), 5);
        assert!((m.x[0] - 1.0).abs() < 1e-6, "{:?}", m);
        assert!((m.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_treats_nan_as_infeasible() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.5).powi(2) };
        let m = nelder_mead(f, &[0.1], NelderMeadOptions::default());
        assert!((m.x[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn levenberg_marquardt_solves_nonlinear_system() {
        // x^2 + y^2 = 1, x = y
        let res = |x: &[f64]| vec![x[0] * x[0] + x[1] * x[1] - 1.0, x[0] - x[1]];
        let out = levenberg_marquardt(res, &[2.0, 0.3], LevenbergMarquardtOptions::default());
        assert!(out.converged, "{:?}", out);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((out.x[0] - h).abs() < 1e-12 && (out.x[1] - h).abs() < 1e-12);
    }
}
