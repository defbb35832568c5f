//! Pentagram operators and the Kochen-Specker inequalities they give rise to.
//!
//! The crate is `no_std` and only needs `alloc`. Everything in it is a pure
//! function of its inputs: the five-vector pentagram configurations in three
//! and four dimensions, their spectra, the magical-basis machinery used to
//! classify states, orthogonality graphs with exact Kochen-Specker colouring,
//! and the probabilistic paradoxes (the Kochen-Specker subgraph, the
//! Aharon-Vaidman game and Hardy's paradox) that are built on top of them.
//!
//! IO, file formats and the command line live in the companion `pentaks`
//! crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod golden;
pub mod magical;
pub mod optimize;
pub mod orthograph;
pub mod paradoxes;
pub mod pentagram;
pub mod pentagram3;
pub mod pentagram4;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use pentagram::Pentagram;
pub use spectral::{HermitianOperator, Spectrum, StateVector, C64};
