use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} cap exceeded: {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("polyhedron is empty")]
    Empty,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("instance is not {0}")]
    WrongClass(&'static str),

    #[error("MIR undefined for integral rhs")]
    MirIntegralRhs,

    #[error("GMIC undefined: {0}")]
    Gmic(String),

    #[error("CG cut undefined: {0}")]
    ChvatalGomory(String),

    #[error("function fails {condition}: u = {u:?}, v = {v:?}")]
    NotSubadditive {
        condition: String,
        u: Vec<String>,
        v: Vec<String>,
    },

    #[error("sparsifier precondition fails: lambda^2 = {lambda_sq} but 16 lambda*^2 = {bound_sq}")]
    SparsifierPrecondition { lambda_sq: f64, bound_sq: f64 },

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("invalid field `{field}`: {msg}")]
    Field { field: String, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
