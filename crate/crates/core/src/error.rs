use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("series has a nonzero constant term (valuation 0)")]
    NonzeroConstantTerm,

    #[error("precision {0} below the minimum of 30 decimal digits")]
    PrecisionTooLow(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Padé system is singular or ill-conditioned (condition estimate {cond:.3e})")]
    PadeSingular { cond: f64 },

    #[error("evaluation point within {distance:.3e} of a detected pole (guard {guard:.3e})")]
    PoleProximity { distance: f64, guard: f64 },

    #[error("quadrature did not converge: error estimate {err:.3e} after {panels} panels")]
    QuadNonConvergent { err: f64, panels: usize },

    #[error("averaged value has imaginary residue {residue:.3e} above the limit {limit:.3e}")]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error("Catalan polynomial recursion degenerate at depth {0}")]
    CatalanDegenerate(usize),

    #[error("term-bound truncation not reached before n = {0}")]
    TruncationNotReached(usize),

    #[error("root finding did not converge after {0} iterations")]
    RootsNotConverged(usize),
}
