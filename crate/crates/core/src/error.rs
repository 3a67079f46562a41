//! Error types for the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not hyperbolic (|trace| = {abs_trace})")]
    NonHyperbolic { abs_trace: f64 },

    #[error("matrix has non-positive determinant {det}")]
    BadDeterminant { det: f64 },

    #[error("point ({x}, {y}) does not lie on the geodesic (offset {offset})")]
    NotOnGeodesic { x: f64, y: f64, offset: f64 },

    #[error("geodesics are tangential or share their support; no transversal angle")]
    Tangential,

    #[error("degenerate polygon: angle sum {angle_sum} admits no hyperbolic realization")]
    DegeneratePolygon { angle_sum: f64 },

    #[error("invalid word: {0}")]
    BadWord(String),

    #[error("invalid pants graph: {0}")]
    BadPantsGraph(String),

    #[error("invalid Fenchel-Nielsen data: {0}")]
    BadFenchelNielsen(String),

    #[error("relator check failed: residual {residual} exceeds tolerance {tolerance}")]
    RelatorCheckFailed { residual: f64, tolerance: f64 },

    #[error("curve class is trivial or non-hyperbolic: {0}")]
    TrivialClass(String),

    #[error("curve is not simple: {0}")]
    NotSimple(String),

    #[error("point lies outside the collar (signed distance {r}, width {width})")]
    OutsideCollar { r: f64, width: f64 },

    #[error("partner curves intersect (pair {i}, {j} with {count} crossings)")]
    PartnersIntersect { i: usize, j: usize, count: usize },

    #[error("cutoff {cutoff} is below the systole {systole}")]
    CutoffTooSmall { cutoff: f64, systole: f64 },

    #[error("cutoff mismatch: {a} vs {b}")]
    CutoffMismatch { a: f64, b: f64 },

    #[error("ambiguous clustering: centers {c1} and {c2} are within 2*epsilon = {two_eps}")]
    AmbiguousClustering { c1: f64, c2: f64, two_eps: f64 },

    #[error("clustering failed: {0}")]
    ClusterFailure(String),

    #[error("target out of range: {0}")]
    OutOfRange(String),

    #[error("no geodesic arc with the requested boundary angles")]
    NoSuchArc,

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("numeric overflow: {0}")]
    NumericOverflow(String),

    #[error("{0}")]
    Invalid(String),
}
