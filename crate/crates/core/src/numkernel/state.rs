use super::{CVector, C64};
use crate::error::{Error, Result};

/// Complex amplitude vector. States produced by this crate are normalized;
/// [`QuantumState::from_amplitudes`] deliberately does not renormalize so that
/// projections and unnormalized branches can be represented too.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState(CVector);

impl QuantumState {
    pub fn from_amplitudes(amplitudes: CVector) -> Self {
        Self(amplitudes)
    }

    /// Normalizes `amplitudes`; a zero vector is rejected.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("cannot normalize a vector of norm {norm}"),
            });
        }
        Ok(Self(amplitudes.unscale(norm)))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    pub fn into_amplitudes(self) -> CVector {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> C64 {
        self.0.dotc(&other.0)
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &QuantumState) -> f64 {
        self.inner(other).norm()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.0[index].norm_sqr()
    }
}

/// Coherent state `|α⟩` truncated to `fock_dim` levels and renormalized.
///
/// Requires `|α|² <= fock_dim / 4` so the discarded Poisson tail is
/// negligible for the tolerances used in this crate.
pub fn coherent_state(alpha: C64, fock_dim: usize) -> Result<QuantumState> {
    if fock_dim < 2 {
        return Err(Error::InvalidDimension { dim: fock_dim, reason: "fock_dim must be at least 2" });
    }
    let mean = alpha.norm_sqr();
    let limit = fock_dim as f64 / 4.0;
    if mean > limit {
        return Err(Error::Truncation { mean_photons: mean, limit, suggested: fock_dim_for(alpha.norm(), fock_dim) });
    }
    let mut amps = CVector::zeros(fock_dim);
    amps[0] = C64::new((-mean / 2.0).exp(), 0.0);
    for n in 1..fock_dim {
        amps[n] = amps[n - 1] * alpha / (n as f64).sqrt();
    }
    QuantumState::normalized(amps)
}

/// Smallest dimension of the form `min_dim * 2^k` that satisfies the
/// coherent-state truncation guard for amplitudes up to `max_abs_alpha`.
pub fn fock_dim_for(max_abs_alpha: f64, min_dim: usize) -> usize {
    let need = 4.0 * max_abs_alpha * max_abs_alpha;
    let mut dim = min_dim.max(2);
    while (dim as f64) < need {
        dim *= 2;
    }
    dim
}
