use thiserror::Error;

/// Errors produced by the geometry operations in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    /// The exponent p of an lp metric must satisfy p >= 1. The payload
    /// carries the triangle-inequality counterexample: under the invalid
    /// exponent, the distance from (1,0) to (0,1) is `direct`, while the
    /// detour through the origin only costs `via_origin`.
    #[error(
        "invalid lp exponent p = {p}: distance from (1,0) to (0,1) would be {direct}, \
         but the path through the origin has length {via_origin}"
    )]
    InvalidExponent {
        p: f64,
        direct: f64,
        via_origin: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinates must be finite")]
    NonFiniteCoordinate,

    #[error("points need at least 2 coordinates, got {0}")]
    DimensionTooSmall(usize),

    #[error("matrix is singular (|det| = {det:e} below threshold)")]
    SingularMatrix { det: f64 },

    #[error("normal vector has (near-)zero length")]
    ZeroNormal,

    #[error("points coincide")]
    CoincidentPoints,

    #[error("anchor points are collinear")]
    CollinearAnchors,

    #[error("no point realizes the requested distances (residual {residual:e})")]
    InconsistentDistances { residual: f64 },

    #[error("anchor simplex is degenerate (affinely dependent points)")]
    DegenerateSimplex,

    #[error(
        "source and target points are not congruent: pair ({i},{j}) has \
         distances {source_dist} vs {target_dist}"
    )]
    NonCongruent {
        i: usize,
        j: usize,
        source_dist: f64,
        target_dist: f64,
    },

    #[error("map is not an isometry: matrix deviates from orthogonality by {deviation:e}")]
    NotAnIsometry { deviation: f64 },

    #[error("operation requires dimension {expected}, map has dimension {found}")]
    UnsupportedDimension { expected: usize, found: usize },

    #[error("point {index} is not on the taxicab unit circle (distance {distance})")]
    NotOnUnitCircle { index: usize, distance: f64 },

    #[error("points are not in counterclockwise order")]
    NotCounterclockwise,

    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(f64),

    #[error("distance sum {sum} must strictly exceed the focal distance {focal_dist}")]
    SumTooSmall { sum: f64, focal_dist: f64 },

    #[error("distance gap {gap} must lie strictly between 0 and the focal distance {focal_dist}")]
    InvalidGap { gap: f64, focal_dist: f64 },

    #[error(
        "locus degenerates to a two-dimensional region on the cell \
         [{x_min}, {x_max}] x [{y_min}, {y_max}]"
    )]
    DegenerateLocus {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },

    #[error("need at least {needed} sample points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("mirrors are identical; the composition is the identity")]
    IdenticalMirrors,

    #[error("point lies outside the open unit disk (norm {0})")]
    PointOutsideDisk(f64),

    #[error("arc is not orthogonal to the unit circle: |center|^2 - radius^2 - 1 = {residual:e}")]
    NotOrthogonalToBoundary { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
