use thiserror::Error;

/// Errors raised by the geometry, duality and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("vertex {0} is not an extreme point of the input")]
    RedundantVertex(usize),

    #[error("dimension {0} is not supported (expected 1..=4 internally, 2..=4 for inputs)")]
    UnsupportedDimension(usize),

    #[error("the origin is not an interior point of the polytope")]
    OriginNotInterior,

    #[error("halfspace does not meet the polytope")]
    EmptyIntersection,

    #[error("linear map is singular (|det| = {0:e})")]
    SingularMatrix(f64),

    #[error("point is not a vertex of the polytope")]
    NotAVertex,

    #[error("point is not in the relative interior of the facet")]
    PointNotInRelativeInterior,

    #[error("Santalo iteration did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("operation requires a centrally symmetric polytope")]
    SymmetryRequired,

    #[error("unknown generator '{0}' (expected cube, cross or hexagon)")]
    UnknownGenerator(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("body is not sandwiched between B2 and sqrt(n)*B2 (radial range [{min_radial}, {max_radial}])")]
    NotInJohnSandwich { min_radial: f64, max_radial: f64 },
}

impl Error {
    /// Short machine-readable name of the violated invariant, printed by the CLI.
    pub fn invariant_name(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "full-dimensional",
            Error::RedundantVertex(_) => "irredundant-vertices",
            Error::UnsupportedDimension(_) => "supported-dimension",
            Error::OriginNotInterior => "origin-interior",
            Error::EmptyIntersection => "non-empty-intersection",
            Error::SingularMatrix(_) => "invertible-map",
            Error::NotAVertex => "is-vertex",
            Error::PointNotInRelativeInterior => "relative-interior",
            Error::ConvergenceFailure { .. } => "santalo-convergence",
            Error::SymmetryRequired => "central-symmetry",
            Error::UnknownGenerator(_) => "known-generator",
            Error::BadParameter(_) => "parameter-range",
            Error::NotInJohnSandwich { .. } => "john-sandwich",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
