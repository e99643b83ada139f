use crate::hodge::HodgeKey;

/// Errors surfaced by graph enumeration, weight handling, and integration.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A localization denominator vanished for the supplied torus weights.
    /// Recoverable: callers resample weights from the deterministic stream.
    #[error("weights not generic: {0}")]
    NonGenericWeights(String),

    /// A weight that must be invertible is zero.
    #[error("singular weight: {0}")]
    SingularWeight(String),

    #[error("unsupported genus {0}: native integration covers genus <= 1; supply a Hodge table for higher genus")]
    UnsupportedGenus(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("graph cap exceeded: enumeration would produce more than {cap} graphs")]
    GraphCapExceeded { cap: u64 },

    #[error("missing Hodge integrals; supply table records for:\n{}", format_keys(.0))]
    MissingHodgeIntegrals(Vec<HodgeKey>),

    #[error("Hodge table: {0}")]
    HodgeTable(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn format_keys(keys: &[HodgeKey]) -> String {
    keys.iter()
        .map(|k| format!("  {k}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;
