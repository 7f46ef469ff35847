use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidProbability(f64),
    InvalidParameter(&'static str),
    InvalidConfig(&'static str),
    PoolTooSmall { needed: usize, got: usize },
    EmptyInput,
    NoMembers,
    NonFiniteScore { id: String },
    EmptyRecallWindow { min: f64, max: f64 },
    Misaligned(String),
    InfiniteCloseness { symbol: usize },
    InvalidWorld(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidProbability(p) => write!(f, "probability {p} outside [0, 1]"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::PoolTooSmall { needed, got } => {
                write!(f, "pool has {got} elements, audit size needs {needed}")
            }
            Error::EmptyInput => f.write_str("no score records"),
            Error::NoMembers => f.write_str("score records contain no members"),
            Error::NonFiniteScore { id } => write!(f, "record {id:?} has a non-finite score"),
            Error::EmptyRecallWindow { min, max } => {
                write!(f, "no threshold has recall inside [{min}, {max}]")
            }
            Error::Misaligned(detail) => write!(f, "baseline and attack records disagree: {detail}"),
            Error::InfiniteCloseness { symbol } => {
                write!(f, "symbol {symbol} has data mass but zero generator mass")
            }
            Error::InvalidWorld(msg) => write!(f, "invalid world: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
