use crate::field::DEFAULT_FIELD_BOUND;

/// Default cap on monomials enumerated by the invariant-class search.
pub const DEFAULT_MONOMIAL_BOUND: u64 = 10_000_000;

/// Resource bounds for enumerations. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest finite field (number of elements) that may be built.
    pub field_bound: u64,
    /// Largest number of monomials the invariant search may visit.
    pub monomial_bound: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            field_bound: DEFAULT_FIELD_BOUND,
            monomial_bound: DEFAULT_MONOMIAL_BOUND,
        }
    }
}

impl Limits {
    pub fn with_field_bound(mut self, bound: u64) -> Self {
        self.field_bound = bound;
        self
    }
}
