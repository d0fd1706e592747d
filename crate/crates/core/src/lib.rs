//! Kraus-channel evolution of two-qubit pure states and Wootters concurrence.
//!
//! Basis order is `|a1 b1>, |a1 b2>, |a2 b1>, |a2 b2>` with amplitudes
//! `(a, b, c, d)`. Intraparticle channels act on the joint four-level space;
//! interparticle channels are tensor products of single-qubit operators.

pub mod analysis;
pub mod channels;
pub mod concurrence;
pub mod error;
pub mod matrix;
pub mod state;

pub use analysis::*;
pub use channels::*;
pub use concurrence::*;
pub use error::{DensityViolation, Error, Result};
pub use matrix::{
    eig_hermitian4, eigh4, psd_sqrt, singular_values4, spin_flip, tensor2x2, CMat2, CMat4, HermitianEigen, C64,
};
pub use state::*;
