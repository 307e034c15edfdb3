use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The quasimomentum phase-matches a free-space photon through the
    /// reciprocal vector `g` (diffraction / Rayleigh-Wood resonance).
    #[error("singular configuration: |k + g| = k0 for g = {g:?} (|k+g| - k0 = {mismatch:e})")]
    Singular { g: [f64; 3], mismatch: f64 },

    #[error("lattice sum did not converge within {shells} shells (last shell {last_shell:e}, reference {reference:e})")]
    Convergence {
        shells: usize,
        last_shell: f64,
        reference: f64,
    },

    #[error("direct sum truncated: outermost shell contributes {last_shell:e} > {tolerance:e}")]
    Truncation { last_shell: f64, tolerance: f64 },

    #[error("unknown high-symmetry label `{0}`")]
    UnknownLabel(String),

    #[error("slab width w/a = {0} is not a positive multiple of 1/2")]
    SlabWidth(f64),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("Berry flux {flux} is not within 0.1 of an integer")]
    InconclusiveFlux { flux: f64 },
}

impl Error {
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::Singular { .. })
    }
}
