use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("alphabet size {0} is outside 2..=255")]
    AlphabetSize(u32),
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("sequence {symbols:?} is not admissible for a={a}, m={m}")]
    NotAdmissible { symbols: Vec<u8>, a: u32, m: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("invalid chain parameters: {0}")]
    InvalidChain(String),
    #[error("chain g={g}, r={r}, d={d} is not of the form g=2a+1, d=a+2, r=1")]
    NotRhoOne { g: u32, r: u32, d: u32 },
    #[error("component id does not fit the chain: {0}")]
    MalformedId(String),
    #[error("configuration is not a limit linear series: {0}")]
    InvalidConfiguration(String),
    #[error("(g, r, d) = ({g}, {r}, {d}) is out of modeled range")]
    OutOfModeledRange { g: u32, r: u32, d: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("a={a} exceeds the enumeration guard a <= {max}; pass an explicit override")]
    GuardExceeded { a: u32, max: u32 },
    #[error("a must be at least 1")]
    ZeroParameter,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("formula undefined at (g, r, d) = ({g}, {r}, {d})")]
    FormulaUndefined { g: i64, r: i64, d: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GonalityError {
    #[error("divisors live on different components ({0} vs {1})")]
    MixedComponents(String, String),
    #[error("degree {0} is outside 1..=5")]
    DegreeOutOfRange(u32),
    #[error("circuit reconstruction disagrees with the Brill-Noether graph: {0}")]
    Inconsistent(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}
