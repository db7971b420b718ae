//! Exact Frobenius data, Euler factors and motive L-factors for the
//! superelliptic curves `y^e = gamma x^f + delta` over `Q`.
//!
//! Everything is computed exactly: cyclotomic numbers carry rational
//! coefficients in a fixed power basis, and every number that could be checked
//! two ways is checked two ways.

pub mod arith;
pub mod curve;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod hecke;
pub mod limits;
pub mod lseries;
pub mod matrix;
pub mod motive;
pub mod zeta;

pub use arith::{charpoly_from_power_sums, CyclotomicNumber, EulerFactor, ExactPolynomial};
pub use curve::{Component, HodgeLabel, Unit, WeilCurve};
pub use error::{Error, Result};
pub use field::{FieldSpec, MultChar};
pub use frobenius::{cycle_values, FrobeniusData};
pub use hecke::{
    hecke_euler_factor, primes_above, verify_grouping_identity, verify_main_theorem,
    GroupingReport, MainTheoremReport, PrimeAbove,
};
pub use limits::Limits;
pub use matrix::{DenseMatrix, GeneralizedPermutationMatrix};
pub use motive::{
    hodge_numbers, invariant_classes, motive_euler_factor, motive_frobenius_oracle, MonomialClass,
    MotiveParams,
};
pub use zeta::{verify_zeta_factorization, zeta_numerator, ZetaNumerator, ZetaReport};
