//! Spectral laboratory for dispersive propagators, resolvents and level-set
//! restriction of the Fourier transform.
//!
//! The crate discretizes ℝⁿ on a truncated uniform lattice, realizes the
//! unitary Fourier transform exactly on that lattice, and provides the
//! operators needed to measure smoothing, resolvent, trace and commutator
//! estimate ratios for elliptic homogeneous symbols.

pub mod error;
pub mod evolution;
pub mod grid;
pub mod harness;
pub mod multiplier;
pub mod resolvent;
pub mod symbol;
pub mod trace;

pub use error::{LabError, Result};
pub use grid::{Field, GridSpec, Space};
pub use symbol::{SymbolKind, SymbolSpec};
