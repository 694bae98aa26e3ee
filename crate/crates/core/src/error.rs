use num_complex::Complex64;

/// Error type shared by all modules of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("gamma pole: {z} is within 1e-14 of a non-positive integer")]
    GammaPole { z: Complex64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {max_terms} terms (argument modulus {arg_abs:.6e})")]
    NonConvergence { max_terms: usize, arg_abs: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("non-real result: |Im| = {im:.3e} against |Re| = {re:.3e}")]
    NonReal { re: f64, im: f64 },

    #[error("points live on different hyperboloids: radius {0} vs {1}")]
    MismatchedRadius(f64, f64),

    #[error("sampled domain of dependence is not a single arc")]
    DisconnectedResult,

    #[error("interval contains no interior grid point after snapping")]
    EmptyInterval,

    #[error("intervals overlap: {0}")]
    Overlap(String),

    #[error("window too large: exp(pi r window) = {0:.3e} exceeds the double-precision budget")]
    WindowTooLarge(f64),

    #[error("boost exponent overflow: |Im t| * spectral radius = {0:.3e}")]
    Overflow(f64),

    #[error("mode cutoff violated: {0}")]
    Cutoff(String),

    #[error("polynomial is not bounded below (needs even degree and positive leading coefficient)")]
    UnboundedPolynomial,

    #[error("normal-ordered power degree {0} exceeds the cap of 8")]
    DegreeCap(usize),

    #[error("Fock dimension {0} exceeds the guard of {1}")]
    FockDimension(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
