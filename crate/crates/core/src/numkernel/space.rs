use crate::error::{Error, Result};

use super::state::QuantumState;

pub const ATOM_DIM: usize = 3;

/// Bare levels of the artificial atom, in basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    B,
    C,
    E,
}

impl AtomLevel {
    pub const ALL: [AtomLevel; 3] = [AtomLevel::B, AtomLevel::C, AtomLevel::E];

    pub fn index(self) -> usize {
        match self {
            AtomLevel::B => 0,
            AtomLevel::C => 1,
            AtomLevel::E => 2,
        }
    }
}

/// Three-level atom ⊗ truncated Fock space `{|0⟩, …, |fock_dim - 1⟩}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    fock_dim: usize,
}

impl HilbertSpace {
    pub fn new(fock_dim: usize) -> Result<Self> {
        if fock_dim < 2 {
            return Err(Error::InvalidDimension {
                dim: fock_dim,
                reason: "fock_dim must be at least 2",
            });
        }
        Ok(Self { fock_dim })
    }

    pub fn atom_dim(&self) -> usize {
        ATOM_DIM
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn total_dim(&self) -> usize {
        ATOM_DIM * self.fock_dim
    }

    /// Index of `|atom, photons⟩` in the atom-major layout.
    pub fn index(&self, atom: usize, photons: usize) -> usize {
        debug_assert!(atom < ATOM_DIM && photons < self.fock_dim);
        atom * self.fock_dim + photons
    }

    pub fn basis_state(&self, atom: usize, photons: usize) -> QuantumState {
        QuantumState::basis(self.total_dim(), self.index(atom, photons))
    }
}
