//! Error type shared across the crate.

/// Errors raised by model construction, classification, and integration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar parameter failed its validity requirement.
    #[error("parameter {name} must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// A state vector violated an invariant (range, ordering, or sum).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The dominance assumption (f_S > h_C and f_C > h_S) does not hold.
    #[error(
        "dominance assumption violated: need f_S > h_C and f_C > h_S \
         (f_S={f_s}, h_C={h_c}, f_C={f_c}, h_S={h_s})"
    )]
    DominanceViolation {
        f_s: f64,
        h_s: f64,
        f_c: f64,
        h_c: f64,
    },

    /// The population split sits on a boundary where classification is undefined.
    #[error("degenerate population split S={s}; classification requires 0 < S < 1")]
    DegenerateSplit { s: f64 },

    /// Parameters fall outside the regime the requested closed form covers.
    #[error("outside the requested regime: {0}")]
    RegionError(String),

    /// A sweep or basin specification is inconsistent.
    #[error("configuration error: {0}")]
    ConfigError(String),

    /// The adaptive integrator could not continue.
    #[error("integration failure at t={t}: {what}")]
    IntegrationFailure { what: String, t: f64 },

    /// A trajectory hit the time horizon without converging; carries the final state.
    #[error("trajectory inconclusive: horizon reached at t={t} with SB={sb}, CR={cr}, S={s}")]
    Inconclusive { t: f64, sb: f64, cr: f64, s: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
