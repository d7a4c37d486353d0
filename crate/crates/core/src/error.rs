use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("modulus {0} must be odd")]
    EvenModulus(u64),

    #[error("gcd({value}, {modulus}) > 1")]
    NotCoprime { value: i64, modulus: u64 },

    #[error("modulus {0} mixes a power of two with an odd part; no exact evaluation")]
    MixedModulus(u64),

    /// A brute-force or summation budget would be exceeded.
    #[error("{what} = {value} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        value: u64,
        budget: u64,
    },

    /// No closed form covers this local factor.
    #[error("no closed form for modulus {prime}^{exponent}: {reason}")]
    NoClosedForm { prime: u64, exponent: u32, reason: String },

    #[error("numeric evaluation {value} is {residue:e} away from an integer")]
    NumericResidue { value: f64, residue: f64 },

    #[error("constant {name}: methods disagree by {difference:e}")]
    ConstantMismatch { name: &'static str, difference: f64 },

    #[error("unsupported asymptotic case (k, n) = ({k}, {n})")]
    UnsupportedCase { k: u32, n: i64 },

    #[error("b-file line {line}: {message}")]
    BFile { line: usize, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Refusals are well-formed requests that this engine declines to answer
    /// exactly (budget or missing closed form), as opposed to malformed input.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::NoClosedForm { .. }
                | Error::NumericResidue { .. }
                | Error::MixedModulus(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
