//! File formats, parallel drivers and the command-line front end for
//! [`pentaks_core`].
//!
//! States, operators, pentagrams and graphs are read and written as JSON
//! (see [`formats`]); family scans and pentagon tables are CSV. Every file
//! written by the binary gets a [`manifest::RunManifest`] beside it.

pub mod cli;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod parallel;
pub mod reports;

pub use error::{AppError, Result};
