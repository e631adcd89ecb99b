//! Simulation library for a cyclic (Δ-type) three-level artificial atom
//! coupled to a single quantized field mode.
//!
//! The crate is organised bottom-up:
//!
//! - [`numkernel`]: truncated Fock space, dense operator algebra, Hermitian
//!   spectral decomposition and exact unitary propagation.
//! - [`fluxqubit`]: the three-junction loop potential, its grid spectrum and
//!   the flux-coupling transition matrix elements.
//! - [`hamiltonians`]: lab, rotating and dressed frame Hamiltonians and the
//!   analytic effective Hamiltonians obtained after eliminating `|e⟩`.
//! - [`fnt`]: a generic second-order elimination engine (the generalized
//!   Fröhlich–Nakajima transformation) and its model-specific generator.
//! - [`dynamics`]: cat-state and coherent-state generation, the overlap
//!   exponent, photon number and generation rate, exact-vs-effective runs.
//!
//! Units: `ħ = 1` throughout.

pub mod dynamics;
pub mod error;
pub mod fluxqubit;
pub mod fnt;
pub mod hamiltonians;
pub mod numkernel;

pub use error::{Error, Result};
pub use numkernel::{C64, CMatrix, CVector};
