use thiserror::Error;

/// Errors raised by the numerical engine.
///
/// Complex points are reported as `(re, im)` pairs in `f64` regardless of the
/// scalar type used for the computation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singularity hit at ({0}, {1})")]
    Singularity(f64, f64),

    #[error("path passes within clearance {clearance:e} of singular point ({re}, {im})")]
    ClearanceViolation { re: f64, im: f64, clearance: f64 },

    #[error("quadrature did not converge at refinement limit (estimated error {estimate:e})")]
    QuadratureFailed { estimate: f64 },

    #[error("matrix is not complex orthogonal (residual {residual:e})")]
    NonOrthogonal { residual: f64 },

    #[error("degenerate lattice: periods are real-proportional")]
    DegenerateLattice,

    #[error("unsupported invariants: {0}")]
    UnsupportedInvariants(String),

    #[error("degenerate Weierstrass denominator dPhi1 - i dPhi2 vanishes identically")]
    DegenerateDenominator,

    #[error("non-integral growth exponent {slope} at ({re}, {im}); essential singularity or branch point")]
    NonIntegralOrder { slope: f64, re: f64, im: f64 },

    #[error("singularity at ({re}, {im}) is not isolated: residue varies with radius by {spread:e}")]
    NonIsolated { re: f64, im: f64, spread: f64 },

    #[error("no grid point reachable from the basepoint")]
    Unreachable,

    #[error("no valid points to check")]
    EmptyValidSet,

    #[error("grid step {step:e} exceeds the bound {bound:e} for finite differences")]
    GridTooCoarse { step: f64, bound: f64 },

    #[error("surface has no normals attached")]
    MissingNormals,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn pt<T: crate::Real>(z: crate::Cx<T>) -> (f64, f64) {
    (z.re.as_f64(), z.im.as_f64())
}
