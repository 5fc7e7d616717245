use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::Complex;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{function}: argument {at} is within {distance:e} of a pole")]
    Pole {
        function: &'static str,
        at: Complex,
        distance: f64,
    },
    #[error("{function}: argument out of domain: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },
    #[error("modulus {modulus} outside the supported range 1..={max}")]
    ModulusRange { modulus: u64, max: u64 },
    #[error("no character mod {modulus} matches the pinned values")]
    NoMatchingCharacter { modulus: u32 },
    #[error("{} characters mod {modulus} match the pinned values", candidates.len())]
    AmbiguousCharacter {
        modulus: u32,
        /// Generator exponent vectors of (at most eight) matching characters.
        candidates: Vec<Vec<u32>>,
    },
    #[error("s = {s} lies outside the validity strip of term {term}: {strip}")]
    StripViolation {
        term: String,
        s: Complex,
        strip: String,
    },
    #[error("{0} terms have no pointwise evaluator")]
    UnsupportedPrimitive(&'static str),
    #[error("kernel expression invalid: {0}")]
    InvalidKernel(String),
    #[error("quadrature did not converge: error estimate {error:e} after {levels} levels")]
    NonConvergence { error: f64, levels: u32 },
    #[error("series terms failed to fall below 1e-16 of the largest term within {terms} terms")]
    SeriesTruncation { terms: usize },
    #[error("series {label} needs {required} coefficients but only {available} are available")]
    InsufficientCoefficients {
        label: String,
        required: usize,
        available: usize,
    },
    #[error("integrand diverges at the lower limit for s = {s}: {detail}")]
    ConvergenceRegion { s: Complex, detail: String },
    #[error("series {0} has a constant term and no closed-form L-function")]
    UnsupportedSeries(String),
    #[error("size {requested} exceeds the limit {max}")]
    Size { requested: usize, max: usize },
    #[error("sample plan produced no points")]
    EmptyRange,
    #[error("fit needs at least {needed} distinct real sample points, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("degenerate fit: real sample points span {span:e}")]
    DegenerateFit { span: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown case id {0:?}")]
    UnknownCase(String),
    #[error("at s = {s}: {source}")]
    AtPoint { s: Complex, source: Box<Error> },
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn at(self, s: Complex) -> Self {
        match self {
            e @ Error::AtPoint { .. } => e,
            e => Error::AtPoint {
                s,
                source: Box::new(e),
            },
        }
    }
}
