use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("Jaffe series not converged after {terms} terms (achieved eps = {achieved:e})")]
    Truncation { terms: usize, achieved: f64 },
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("ill-conditioned coefficient extraction: {0}")]
    IllConditioned(String),
    #[error("no geodesic solution: {0}")]
    NoSolution(String),
    #[error("solver failed for l = {l}, omega = {omega}: {source}")]
    Mode {
        l: usize,
        omega: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("off-grid lookup: {0}")]
    OffGrid(String),
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("version mismatch: file has format {found}, this build reads {expected}")]
    VersionMismatch { found: String, expected: String },
    #[error("checksum failure: {0}")]
    Checksum(String),
    #[error("table audit failed: {0}")]
    Audit(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
