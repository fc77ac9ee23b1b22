//! Crate-wide error type.
//!
//! Two failure families matter to callers: *domain* errors (arguments outside
//! the supported region, detected before any numerics run) and *truncation*
//! errors (the Fock cutoff `n_max` cannot represent the requested state to the
//! promised fidelity; these carry the achieved norm deficit so the caller can
//! see how far off the cutoff was). Divergent sensitivity (zero slope) is
//! deliberately *not* an error — it is a reported status on a result row.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Fock-space cutoff cannot honor the request: either a precondition
    /// on `n_max` fails or more probability mass than tolerated was lost.
    /// `context` names the measured quantity; `deficit` is its value and
    /// `limit` the bound it broke.
    #[error("truncation error: {context}: {deficit:.3e} exceeds {limit:.1e} (n_max = {n_max})")]
    Truncation {
        context: &'static str,
        deficit: f64,
        limit: f64,
        n_max: usize,
    },

    /// No closed form exists for this input family; use the Fock oracle.
    #[error("no closed form for coherent ⊗ PACS with m = {m}; use the oracle path")]
    NoClosedForm { m: u32 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the truncated-numerics kind (CLI exit code 3).
    pub fn is_truncation(&self) -> bool {
        matches!(self, Error::Truncation { .. })
    }
}
