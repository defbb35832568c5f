//! Seeded random streams and Haar-random pure states.
//!
//! Every stochastic quantity is drawn from a ChaCha8 stream keyed by
//! `(seed, index)`, so results do not depend on evaluation order or on how
//! work is split across threads.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pentagram::Pentagram;
use crate::spectral::{StateVector, C64, MAX_DIM};

/// Independent generator for substream `index` of `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Haar-uniform unit vector: normalized standard complex Gaussian amplitudes.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<StateVector> {
    if dim != 3 && dim != 4 {
        return Err(Error::InvalidDimension { expected: "3 or 4", found: dim });
    }
    let mut amps = [C64::new(0.0, 0.0); MAX_DIM];
    for a in amps.iter_mut().take(dim) {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *a = C64::new(re, im);
    }
    StateVector::normalized(&amps[..dim])
}

/// Haar-uniform real unit vector.
pub fn random_real_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<StateVector> {
    if dim != 3 && dim != 4 {
        return Err(Error::InvalidDimension { expected: "3 or 4", found: dim });
    }
    let mut re = [0.0; MAX_DIM];
    for r in re.iter_mut().take(dim) {
        *r = rng.sample(StandardNormal);
    }
    StateVector::from_real_normalized(&re[..dim])
}

/// Haar vector conditioned to be orthogonal to every vector in `against`.
pub fn haar_state_orthogonal_to<R: Rng + ?Sized>(against: &[StateVector], rng: &mut R) -> Result<StateVector> {
    let dim = against.first().map_or(3, StateVector::dim);
    let mut basis: Vec<[C64; MAX_DIM]> = Vec::new();
    for v in against {
        let mut w = [C64::new(0.0, 0.0); MAX_DIM];
        w[..dim].copy_from_slice(v.amplitudes());
        project_out(&mut w, &basis, dim);
        let n = norm(&w, dim);
        if n > 1e-9 {
            basis.push(w.map(|z| z / n));
        }
    }
    if basis.len() >= dim {
        return Err(Error::Degenerate("constraints leave no orthogonal direction"));
    }
    loop {
        let mut w = [C64::new(0.0, 0.0); MAX_DIM];
        w[..dim].copy_from_slice(haar_state(dim, rng)?.amplitudes());
        project_out(&mut w, &basis, dim);
        if norm(&w, dim) > 1e-6 {
            return StateVector::normalized(&w[..dim]);
        }
    }
}

fn project_out(w: &mut [C64], basis: &[[C64; MAX_DIM]], dim: usize) {
    for b in basis {
        let c: C64 = (0..dim).map(|k| b[k].conj() * w[k]).sum();
        for k in 0..dim {
            w[k] -= c * b[k];
        }
    }
}

fn norm(w: &[C64], dim: usize) -> f64 {
    w[..dim].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A random pentagram: each vector is Haar-distributed subject to the
/// orthogonality relations with the vectors already drawn, in the order
/// `|0>, |2>, |4>, |1>, |3>`.
pub fn random_pentagram<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Pentagram> {
    let v0 = haar_state(dim, rng)?;
    let v2 = haar_state_orthogonal_to(&[v0], rng)?;
    let v4 = haar_state_orthogonal_to(&[v2], rng)?;
    let v1 = haar_state_orthogonal_to(&[v4], rng)?;
    let v3 = haar_state_orthogonal_to(&[v0, v1], rng)?;
    Pentagram::new([v0, v1, v2, v3, v4])
}
