//! Numerical verification of Mellin-transform functional equations.
//!
//! The crate is `no_std` (with `alloc`) and contains every numerical piece:
//! complex special functions, Dirichlet characters and L-series, closed-form
//! Mellin kernels, a double-exponential Mellin quadrature engine, modular
//! form q-expansions, and the verifier that samples a strip, fits the
//! constants `Q` and `sigma^2` of `ratio(s) = sigma^2 * Q^s`, and judges the
//! outcome. File formats, configuration and the command line live in the
//! `feqtool` crate.
#![no_std]

extern crate alloc;

pub mod cases;
pub mod characters;
pub mod complexfn;
mod error;
pub mod feq;
pub mod kernels;
pub mod lseries;
pub mod mellin;
pub mod modular;

pub use error::{Error, Result};

/// Double-precision complex number used for every value in the crate.
pub type Complex = num_complex::Complex64;

/// Shorthand constructor for [`Complex`].
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
