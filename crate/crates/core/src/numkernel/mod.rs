//! Numeric substrate: truncated Fock space, dense operators, Hermitian
//! spectral decomposition and time-independent unitary propagation.
//!
//! The joint atom ⊗ field basis is atom-major: the state `|i, n⟩` (atomic
//! level `i` in the order b, c, e and photon number `n`) lives at index
//! `i * fock_dim + n`.

mod operator;
mod space;
mod spectral;
mod state;

pub use operator::{boson_annihilation, embed, number_operator, Operator};
pub use space::{AtomLevel, HilbertSpace, ATOM_DIM};
pub use spectral::{evolve_unitary, expm, hermitian_eig, Evolver, SpectralDecomposition};
pub use state::{coherent_state, fock_dim_for, QuantumState};

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;

/// Relative Hermiticity tolerance: `max|M - M†| <= HERMITIAN_TOL * max|M|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
