use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("packet needs a set of size at least 2, got {0}")]
    PacketTooSmall(usize),

    #[error("polygon equations need 3 <= N <= 31, got {0}")]
    PolygonTooSmall(usize),

    #[error("no transcribed reference pipeline for N = {0}")]
    NoReference(usize),

    #[error("routing failed before {context}: stuck at {state}")]
    Routing { context: String, state: String },

    #[error("malformed program: {0}")]
    MalformedProgram(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: String, got: String },

    #[error("carrier mismatch: {0}")]
    Carrier(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("domain violation at {0}")]
    Domain(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("fixed-point condition fails: T({u},...,{u}) = {image:?}")]
    FixedPoint { u: u32, image: Vec<u32> },

    #[error("trigon maps do not commute at {0}")]
    NotCommuting(u32),

    #[error("wrong parity: {0}")]
    Parity(String),

    #[error("map depends on the argument it must ignore: {0}")]
    Hypothesis(String),

    #[error("search space estimate {estimate:.3e} exceeds node budget {budget}")]
    Budget { estimate: f64, budget: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}
