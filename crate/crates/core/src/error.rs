use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report.
///
/// Messages name the geometric condition that failed so that front ends
/// can show them verbatim.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("pole order {0} < 2: residue undefined")]
    PoleOrderTooSmall(u32),

    #[error("pole order {order} < 3: {what} requires a higher-order pole")]
    NotHigherOrder { order: u32, what: &'static str },

    #[error("zero on contour: a zero of q lies on the circle of radius {radius} (shrink the radius)")]
    ZeroOnContour { radius: f64 },

    #[error("zeros inside contour: {count} zero(s) of q inside radius {radius} (shrink the radius)")]
    ZerosInsideContour { count: usize, radius: f64 },

    #[error("zero at pole: q does not have a pole at the chart origin")]
    ZeroAtPole,

    #[error("insufficient expansion order: {0}")]
    InsufficientExpansion(String),

    #[error("local parameter count {got} != n - 2 = {expected}")]
    LocalParamCount { got: usize, expected: usize },

    #[error("started at singularity: {0}")]
    StartedAtSingularity(String),

    #[error("singular point on arc at t = {t}")]
    SingularOnArc { t: f64 },

    #[error("zeros inside disk: {count} zero(s) within radius {radius}, not a sink neighborhood")]
    NotSinkNeighborhood { count: usize, radius: f64 },

    #[error("tangency count {found} != n - 2 = {expected} (radius too large or root finding failed)")]
    TangencyCount { found: usize, expected: usize },

    #[error("non-generic: saddle connection between zeros #{from} and #{to}")]
    SaddleConnection { from: usize, to: usize },

    #[error("decomposition incomplete: {0}")]
    DecompositionIncomplete(String),

    #[error("w = 0 is the pole of the collapsing model")]
    CollapsingAtPole,

    #[error("empty pole order list")]
    EmptyOrders,

    #[error("valence {0} < 3: no metric expansion")]
    ValenceTooSmall(usize),

    #[error("inconsistent lengths: {0}")]
    InconsistentLengths(String),

    #[error("negative measure {0}")]
    NegativeMeasure(f64),

    #[error("measure mismatch: boundary measure {tree} in T0 vs translation length {leaf_space}")]
    MeasureMismatch { tree: f64, leaf_space: f64 },

    #[error("marked data missing: {0}")]
    MarkedDataMissing(String),

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("nonzero mean {0:e} in boundary data: decay requires mean-zero data")]
    NonzeroMean(f64),

    #[error("i_max = {0} < 4: too few exhaustion steps to observe a plateau")]
    ExhaustionTooShort(usize),

    #[error("degenerate arc: {0}")]
    DegenerateArc(String),

    #[error("dimension mismatch: shear vector has {got} entries, skeleton has {expected} strips")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("shear outside trust region at strip {strip}: |s| = {value} > {limit}")]
    OutsideTrustRegion { strip: usize, value: f64, limit: f64 },

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}
