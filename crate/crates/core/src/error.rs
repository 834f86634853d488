use thiserror::Error;

/// Errors surfaced by queries, protocols and file loading.
#[derive(Debug, Error)]
pub enum Error {
    /// A query or operation received arguments outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A cut query asked for more mass than is available to the right of the
    /// starting point.
    #[error("infeasible cut: requested {requested}, only {available} available")]
    InfeasibleCut {
        requested: String,
        available: String,
    },

    /// A subcake query ran without the measure knowledge it relies on. This
    /// signals a protocol bug, not a user error.
    #[error("missing cached measure for player {player} at {point}")]
    CacheMiss { player: usize, point: String },

    /// A partition whose elementary intervals do not each lie inside exactly
    /// one piece.
    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    /// The algorithm does not support this player count.
    #[error("{algorithm} does not support {players} player(s)")]
    Capability { algorithm: String, players: usize },

    /// An enumeration guard tripped before an instance could blow up.
    #[error("enumeration cap exceeded: {0}")]
    ResourceCap(String),

    /// Rejected input data (bad rational, mass != 1, duplicate names, ...).
    #[error("invalid input: {0}")]
    Schema(String),

    /// An internal invariant was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
