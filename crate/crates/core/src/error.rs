use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian: max|M - M^dagger| = {defect:e} (allowed {allowed:e})")]
    NotHermitian { defect: f64, allowed: f64 },

    #[error("basis is not unitary: max|B^dagger B - 1| = {defect:e}")]
    NotUnitary { defect: f64 },

    #[error(
        "truncation guard violated: |alpha|^2 = {mean_photons} exceeds fock_dim/4 = {limit}; \
         increase fock_dim to at least {suggested}"
    )]
    Truncation { mean_photons: f64, limit: f64, suggested: usize },

    #[error("degenerate coupled pair ({row}, {col}): |E_n - E_m| = {gap:e} <= {tol:e}")]
    DegenerateCoupling { row: usize, col: usize, gap: f64, tol: f64 },

    #[error("resonant denominator {which} = {value:e}: adiabatic elimination is invalid")]
    Resonance { which: &'static str, value: f64 },

    #[error("frequency matching violated: Omega_e - Omega_c - omega = {mismatch:e}")]
    MatchingCondition { mismatch: f64 },

    #[error("mixing angle undefined: Delta_c and lambda both vanish")]
    UndefinedMixingAngle,

    #[error("eigensolver did not converge after {iterations} iterations (max residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl Error {
    /// Numeric failures (non-convergence, truncation, resonances) as opposed to
    /// malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. }
                | Error::Truncation { .. }
                | Error::Resonance { .. }
                | Error::DegenerateCoupling { .. }
        )
    }
}
