use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A user-supplied callable returned NaN or an infinity.
    #[error("{context} returned a non-finite value ({value})")]
    NonFinite { context: String, value: f64 },

    /// An inner evaluation failed for a specific Monte Carlo draw; the index
    /// identifies the offending replication under the run's seed path.
    #[error("evaluation failed at sample {index}: {source}")]
    AtSample {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    /// Two step functions that must share a partition do not.
    #[error("step functions have different partitions ({left} vs {right} cells)")]
    PartitionMismatch { left: usize, right: usize },

    /// The surface-measure marginal is only a density for dimension >= 3.
    #[error("surface-measure marginal needs dimension >= 3, got n = {n}")]
    SurfaceMarginalDimension { n: usize },

    /// Tensorized quadrature would be too large; the Monte Carlo section
    /// mean handles this case.
    #[error("tensor quadrature budget exceeded (arity {arity} > {max}); use the Monte Carlo section mean")]
    TensorBudget { arity: usize, max: usize },

    /// The Gaussian limit treats evaluation points as independent
    /// coordinates, which requires them to be distinct.
    #[error("coincident evaluation points; the Gaussian limit needs distinct points, use the Monte Carlo section mean")]
    CoincidentPoints,

    /// A statistic was asked of an empty sample set.
    #[error("empty sample set")]
    EmptySamples,

    /// A statistic needs more data than it was given.
    #[error("not enough samples for {what}: have {have}, need {need}")]
    TooFewSamples {
        what: &'static str,
        have: usize,
        need: usize,
    },

    /// Log-log fitting needs strictly positive abscissae and values.
    #[error("log-log fit needs positive values, got {value} at point {index}")]
    NonPositiveFitData { index: usize, value: f64 },

    /// The evaluation point must lie strictly inside or outside the boundary.
    #[error("evaluation point at distance {distance} from the origin is not {expected} the sphere of radius {radius}")]
    PointNotWhereExpected {
        distance: f64,
        radius: f64,
        expected: &'static str,
    },

    /// Every replication hit the time horizon before reaching the radius.
    #[error("all {replications} replications were censored at the horizon; no passage moments available")]
    AllCensored { replications: u64 },

    /// A precondition on an argument was violated.
    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn non_finite(context: impl Into<String>, value: f64) -> Self {
        Error::NonFinite {
            context: context.into(),
            value,
        }
    }

    pub(crate) fn at_sample(index: u64, source: Error) -> Self {
        Error::AtSample {
            index,
            source: Box::new(source),
        }
    }
}
