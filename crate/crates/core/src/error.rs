use thiserror::Error;

/// Errors produced by the exact-arithmetic and curve machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cyclotomic level {0}")]
    InvalidLevel(u64),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid motive parameters n={n}, a={a}: need n >= 1 and n/2 < a <= n")]
    InvalidParams { n: u32, a: u32 },

    #[error("{0} is not prime")]
    InvalidPrime(u64),

    #[error("field of size {p}^{r} exceeds the enumeration bound {bound}")]
    FieldTooLarge { p: u64, r: u32, bound: u64 },

    #[error("enumeration of {required} items exceeds the bound {bound}")]
    EnumerationTooLarge { required: u128, bound: u64 },

    #[error("no multiplicative character of order {order} on a field of size {size}")]
    OrderUnavailable { order: u64, size: u64 },

    #[error("characters live on different fields")]
    FieldMismatch,

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("bad reduction at p={p}: {reason}")]
    BadReduction { p: u64, reason: String },

    #[error("prime {p} is ramified for modulus {modulus}")]
    RamifiedPrime { p: u64, modulus: u64 },

    #[error("Frobenius is not diagonal: order of q={q} is {ord}")]
    NotSplit { q: u64, ord: u64 },

    #[error("index ({i},{j}) out of range")]
    IndexOutOfRange { i: u32, j: u32 },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid component ({d},{dprime})")]
    InvalidComponent { d: u32, dprime: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors caused by configured resource bounds rather than bad input.
    pub fn is_resource_bound(&self) -> bool {
        matches!(
            self,
            Error::FieldTooLarge { .. } | Error::EnumerationTooLarge { .. }
        )
    }
}
