use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is outside the supported range 2 <= p < 2^31")]
    PrimeOutOfRange(u64),
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("cannot parse coefficient `{input}`: {reason}")]
    Coefficient { input: String, reason: String },
    #[error("unbound placeholder `{0}`")]
    UnboundPlaceholder(String),
    #[error("incompatible operands: {0}")]
    Mismatch(String),
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("grading mismatch: {0}")]
    Grading(String),
    #[error("every affine chart is degenerate for the Cartier operator")]
    DegenerateChart,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid singularity data: {0}")]
    Singularity(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),
    #[error("Frobenius image is not contained in the kernel span: {0}")]
    ImageNotInKernel(String),
    #[error("cannot parse curve file: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a failed
    /// computation. The CLI maps these to exit code 2.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::ImageNotInKernel(_) | Error::InconsistentCounts(_)
        )
    }
}
