use thiserror::Error;

/// Errors produced while building or querying terrain maps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a terrain needs at least 2 vertices")]
    TooShort,
    #[error("terrain is not strictly x-monotone after vertex {0}")]
    NonMonotone(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("x = {0} lies outside the terrain")]
    OutOfRange(f64),
    #[error("viewpoint {0} is not a vertex of the terrain")]
    ViewpointOutOfRange(usize),
    #[error("viewpoint {0} appears more than once")]
    DuplicateViewpoint(usize),
    #[error("{m} viewpoints on a terrain with {n} vertices (need m < n)")]
    TooManyViewpoints { m: usize, n: usize },
    #[error("at least one viewpoint is required")]
    NoViewpoints,
    #[error("order k = {k} must satisfy 1 <= k <= m = {m}")]
    InvalidK { k: usize, m: usize },
    #[error("inconsistent event list: {0}")]
    InconsistentEventList(String),
    #[error("instance construction failed: {0}")]
    ConstructionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
