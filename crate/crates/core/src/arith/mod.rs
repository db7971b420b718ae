pub mod cyclotomic;
pub mod newton;
pub mod ntheory;
pub mod poly;

pub use cyclotomic::{multiset_eq, CyclotomicNumber};
pub use newton::charpoly_from_power_sums;
pub use poly::{EulerFactor, ExactPolynomial};
