//! Spectral analysis of tridiagonal k-Toeplitz operators with complex entries.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: dense and tridiagonal eigensolvers, quadratic roots,
//!   contour quadrature and winding numbers.
//! - [`symbol`]: unit cells, the symbol `f(z)` and its polynomial data.
//! - [`spectra`]: essential spectrum, the equal-modulus set and truncations.
//! - [`edge`]: edge-mode detection and the open-limit spectrum.
//! - [`interface`]: mirror-symmetric interface operators and their modes.
//! - [`resonators`]: capacitance matrices of damped resonator chains.
//! - [`disorder`]: chiral interface chains with random couplings.
//! - [`fdm`]: finite-difference cells for the continuum comparison.

pub mod disorder;
pub mod edge;
pub mod error;
pub mod fdm;
pub mod interface;
pub mod numerics;
pub mod resonators;
pub mod spectra;
pub mod symbol;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
