use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("minimizer converged to a saddle: transversal Hessian eigenvalue {min_eigenvalue:.3e} < 0 at |z| = {norm:.6}")]
    SaddleConverged { min_eigenvalue: f64, norm: f64 },

    #[error("transversal Hessian is degenerate (smallest eigenvalue {min_eigenvalue:.3e}); the vacuum has flat non-orbit directions")]
    DegenerateVacuum { min_eigenvalue: f64 },

    #[error("minimizer did not converge after {iterations} iterations (gradient norm {gradient_norm:.3e})")]
    NonConvergence {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("Yukawa endomorphism is not odd: diagonal-block residual {residual:.3e}")]
    BlockStructureViolation { residual: f64 },

    #[error("lemma hypothesis failed ({clause}): {detail}")]
    LemmaViolation { clause: &'static str, detail: String },

    #[error("Dirac potential is not a multiplication operator: off-site leakage {leakage:.3e}")]
    NotMultiplicationOperator { leakage: f64 },

    #[error("operator is not anti-Hermitian (i*op not Hermitian): residual {residual:.3e}")]
    NonHermitian { residual: f64 },

    #[error("matrix is not unitary: residual {residual:.3e}")]
    NonUnitary { residual: f64 },

    #[error("lattice operators require euclidean signature")]
    SignatureMismatch,

    #[error("{location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(context: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            found,
        }
    }
}
