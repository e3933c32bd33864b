use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("element {element} is outside the ground set 1..={n}")]
    InvalidSubset { element: u32, n: u32 },
    #[error("{op} supports n <= {max}, got n = {n}")]
    TooLarge { op: &'static str, n: u32, max: u32 },
    #[error("point ({alpha}, {beta}) lies outside the balance triangle")]
    InvalidPoint { alpha: f64, beta: f64 },
    #[error("x = {x} lies outside [0, {upper}]")]
    Domain { x: f64, upper: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("contract violated: {0}")]
    Contract(String),
}
