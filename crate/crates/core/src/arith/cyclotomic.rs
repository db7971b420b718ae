//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! An element is stored as its canonical residue modulo the cyclotomic
//! polynomial `Phi_N`: a vector of exactly `phi(N)` rational coefficients on
//! the power basis `1, z, ..., z^(phi(N)-1)`. Canonical forms make equality a
//! coefficient comparison. Binary operations between different levels coerce
//! both operands to the lcm of the levels.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ntheory::{euler_phi, gcd, lcm};
use crate::error::{Error, Result};

/// Integer coefficients of `Phi_n`, low degree first (monic, length `phi(n)+1`).
pub fn cyclotomic_polynomial(n: u32) -> Arc<[i64]> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<[i64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().expect("cyclotomic cache poisoned").get(&n) {
        return p.clone();
    }
    let poly: Arc<[i64]> = compute_cyclotomic(n).into();
    cache
        .write()
        .expect("cyclotomic cache poisoned")
        .insert(n, poly.clone());
    poly
}

fn compute_cyclotomic(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num: Vec<i128> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d != 0 {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        num = exact_div_monic(&num, &den);
    }
    num.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

fn exact_div_monic(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj as i128;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element of Q(zeta_N) in canonical form.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    level: u32,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CyclotomicNumber {
    /// Canonical representative of `sum raw[k] * z^k` in Q(zeta_level).
    pub fn reduce(level: u64, raw: &[BigRational]) -> Result<Self> {
        if level == 0 || level > u32::MAX as u64 {
            return Err(Error::InvalidLevel(level));
        }
        Ok(Self::reduce_unchecked(level as u32, raw.to_vec()))
    }

    fn reduce_unchecked(level: u32, raw: Vec<BigRational>) -> Self {
        let n = level as usize;
        let phi = euler_phi(level as u64) as usize;
        let mut folded = if raw.len() <= n {
            let mut v = raw;
            v.resize(n, BigRational::zero());
            v
        } else {
            let mut v = vec![BigRational::zero(); n];
            for (k, c) in raw.into_iter().enumerate() {
                if !c.is_zero() {
                    v[k % n] += c;
                }
            }
            v
        };
        let phi_poly = cyclotomic_polynomial(level);
        for i in (phi..n).rev() {
            if folded[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut folded[i]);
            for (j, &pj) in phi_poly[..phi].iter().enumerate() {
                if pj != 0 {
                    folded[i - phi + j] -= &c * rat(pj);
                }
            }
        }
        folded.truncate(phi);
        CyclotomicNumber {
            level,
            coeffs: folded,
        }
    }

    /// Reduce a vector of integer multiplicities indexed by exponent of zeta.
    pub fn from_exponent_counts(level: u32, counts: &[i64]) -> Self {
        let raw = counts.iter().map(|&c| rat(c)).collect();
        Self::reduce_unchecked(level.max(1), raw)
    }

    pub fn zero(level: u32) -> Self {
        let level = level.max(1);
        CyclotomicNumber {
            level,
            coeffs: vec![BigRational::zero(); euler_phi(level as u64) as usize],
        }
    }

    pub fn one(level: u32) -> Self {
        Self::from_rational(level, BigRational::one())
    }

    pub fn from_int(level: u32, n: i64) -> Self {
        Self::from_rational(level, rat(n))
    }

    pub fn from_bigint(level: u32, n: BigInt) -> Self {
        Self::from_rational(level, BigRational::from_integer(n))
    }

    pub fn from_rational(level: u32, q: BigRational) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = q;
        z
    }

    /// The root of unity `zeta_level^k` (any integer `k`).
    pub fn root_of_unity(level: u32, k: i64) -> Self {
        let level = level.max(1);
        let n = level as i64;
        let e = k.rem_euclid(n) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        Self::reduce_unchecked(level, raw)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Canonical coefficients on the power basis (length `phi(level)`).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Apply the automorphism `zeta -> zeta^k` (k coprime to the level).
    pub fn galois(&self, k: i64) -> Self {
        let n = self.level as i64;
        debug_assert_eq!(gcd(k.rem_euclid(n) as u64, n as u64), 1);
        let mut raw = vec![BigRational::zero(); self.level as usize];
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(e as i64 * k).rem_euclid(n) as usize] += c;
            }
        }
        Self::reduce_unchecked(self.level, raw)
    }

    /// Complex conjugation, `zeta -> zeta^-1`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// `|x|^2 = x * conj(x)`, again an element of the same field.
    pub fn norm_sq(&self) -> Self {
        self * &self.conjugate()
    }

    /// Numeric value under `zeta_N -> exp(2 pi i / N)`. Display only.
    pub fn embed(&self) -> Complex64 {
        let n = self.level as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex64::from_polar(1.0, theta) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Coerce into Q(zeta_m) for a multiple `m` of the current level.
    pub fn lift(&self, m: u32) -> Result<Self> {
        if m == 0 || m % self.level != 0 {
            return Err(Error::InvalidLevel(m as u64));
        }
        if m == self.level {
            return Ok(self.clone());
        }
        let step = (m / self.level) as usize;
        let mut raw = vec![BigRational::zero(); m as usize];
        for (e, c) in self.coeffs.iter().enumerate() {
            raw[e * step] = c.clone();
        }
        Ok(Self::reduce_unchecked(m, raw))
    }

    /// Express this element in Q(zeta_m) for a divisor `m` of the level,
    /// or `None` when it does not lie in that subfield.
    pub fn restrict(&self, m: u32) -> Option<Self> {
        if m == 0 || self.level % m != 0 {
            return None;
        }
        if m == self.level {
            return Some(self.clone());
        }
        let phi_m = euler_phi(m as u64) as usize;
        let phi_n = self.coeffs.len();
        let step = (self.level / m) as i64;
        // Columns: images of zeta_m^k in Q(zeta_N); solve columns * y = self.
        let cols: Vec<Self> = (0..phi_m)
            .map(|k| Self::root_of_unity(self.level, k as i64 * step))
            .collect();
        let mut rows: Vec<Vec<BigRational>> = (0..phi_n)
            .map(|r| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let solution = solve_consistent(&mut rows, phi_m)?;
        Some(CyclotomicNumber {
            level: m,
            coeffs: solution,
        })
    }

    /// Smallest level that still contains this element, among divisors of the current level.
    pub fn minimal_level(&self) -> Self {
        for m in crate::arith::ntheory::divisors(self.level as u64) {
            if let Some(r) = self.restrict(m as u32) {
                return r;
            }
        }
        self.clone()
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::one(self.level);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Bring two numbers to their common level.
    pub fn coerce_pair(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm(a.level as u64, b.level as u64) as u32;
        (
            a.lift(m).expect("lcm is a multiple"),
            b.lift(m).expect("lcm is a multiple"),
        )
    }

    fn mul_same_level(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut raw = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Self::reduce_unchecked(self.level, raw)
    }

    fn zip_same_level(
        &self,
        other: &Self,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Self {
        CyclotomicNumber {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn binary(&self, other: &Self, f: impl Fn(&Self, &Self) -> Self) -> Self {
        if self.level == other.level {
            f(self, other)
        } else {
            let (a, b) = Self::coerce_pair(self, other);
            f(&a, &b)
        }
    }
}

/// Gaussian elimination on an augmented system with `unknowns` columns.
/// Returns the unique solution, or `None` when inconsistent.
fn solve_consistent(rows: &mut [Vec<BigRational>], unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(unknowns);
    for col in 0..unknowns {
        let Some(sel) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, sel);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); unknowns];
    for (r, &col) in pivots.iter().enumerate() {
        sol[col] = rows[r][unknowns].clone();
    }
    Some(sol)
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = Self::coerce_pair(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CyclotomicNumber {}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.binary(rhs, |a, b| a.zip_same_level(b, |x, y| x + y))
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.binary(rhs, |a, b| a.zip_same_level(b, |x, y| x - y))
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.binary(rhs, |a, b| a.mul_same_level(b))
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

impl AddAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn add_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.level == rhs.level {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn sub_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.level == rhs.level {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn mul_assign(&mut self, rhs: &CyclotomicNumber) {
        *self = &*self * rhs;
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return f.write_str(&fmt_rational(&q));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let monomial = match k {
                0 => String::new(),
                1 => format!("z{}", self.level),
                _ => format!("z{}^{}", self.level, k),
            };
            if k == 0 {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&monomial)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), monomial)?;
            }
        }
        Ok(())
    }
}

/// Multiset equality of two lists of cyclotomic numbers (levels may differ).
pub fn multiset_eq(a: &[CyclotomicNumber], b: &[CyclotomicNumber]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let level = a
        .iter()
        .chain(b)
        .fold(1u64, |acc, x| lcm(acc, x.level() as u64)) as u32;
    let key = |xs: &[CyclotomicNumber]| {
        let mut v: Vec<Vec<BigRational>> = xs
            .iter()
            .map(|x| x.lift(level).expect("common level").coeffs)
            .collect();
        v.sort();
        v
    };
    key(a) == key(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(level: u32, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(level, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(&*cyclotomic_polynomial(1), &[-1, 1]);
        assert_eq!(&*cyclotomic_polynomial(3), &[1, 1, 1]);
        assert_eq!(&*cyclotomic_polynomial(4), &[1, 0, 1]);
        assert_eq!(&*cyclotomic_polynomial(6), &[1, -1, 1]);
        assert_eq!(&*cyclotomic_polynomial(18), &[1, 0, 0, -1, 0, 0, 1]);
    }

    #[test]
    fn reduce_examples() {
        // zeta_4^2 = -1
        assert_eq!(z(4, 2), CyclotomicNumber::from_int(4, -1));
        // 1 + zeta_3 + zeta_3^2 = 0
        let raw = vec![rat(1), rat(1), rat(1)];
        assert!(CyclotomicNumber::reduce(3, &raw).unwrap().is_zero());
        // zeta_5^7 = zeta_5^2
        let mut raw = vec![BigRational::zero(); 8];
        raw[7] = rat(1);
        assert_eq!(CyclotomicNumber::reduce(5, &raw).unwrap(), z(5, 2));
        assert_eq!(
            CyclotomicNumber::reduce(0, &raw),
            Err(Error::InvalidLevel(0))
        );
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(z(5, 1).conjugate(), z(5, 4));
        assert_eq!(
            CyclotomicNumber::from_int(7, 3).conjugate(),
            CyclotomicNumber::from_int(7, 3)
        );
        let x = &CyclotomicNumber::one(8) + &z(8, 1);
        assert_eq!(x.conjugate(), &CyclotomicNumber::one(8) + &z(8, 7));
    }

    #[test]
    fn embedding_examples() {
        let i = z(4, 1).embed();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let w = z(6, 1).embed();
        assert!((w - Complex64::new(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-12);
        let one = CyclotomicNumber::one(9).embed();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cross_level_equality_and_restriction() {
        // zeta_6 = -zeta_3^2
        assert_eq!(z(6, 1), -z(3, 2));
        let x = &z(5, 1) + &CyclotomicNumber::from_int(5, 3);
        let lifted = x.lift(15).unwrap();
        assert_eq!(lifted.level(), 15);
        assert_eq!(lifted.restrict(5).unwrap().coeffs(), x.coeffs());
        assert!(z(15, 1).restrict(5).is_none());
        assert_eq!(z(10, 2).minimal_level().level(), 5);
    }

    #[test]
    fn gauss_sum_norm() {
        // g = sum_{t} (t/7) zeta_7^t has g^2 = -7
        let mut raw = vec![BigRational::zero(); 7];
        for t in 1..7i64 {
            let legendre = if [1, 2, 4].contains(&t) { 1 } else { -1 };
            raw[t as usize] = rat(legendre);
        }
        let g = CyclotomicNumber::reduce(7, &raw).unwrap();
        assert_eq!(g.pow(2), CyclotomicNumber::from_int(7, -7));
        assert_eq!(g.norm_sq(), CyclotomicNumber::from_int(7, 7));
    }

    #[test]
    fn display() {
        assert_eq!(CyclotomicNumber::from_int(5, -3).to_string(), "-3");
        let x = &CyclotomicNumber::from_int(5, 2) - &z(5, 2);
        assert_eq!(x.to_string(), "2 - z5^2");
    }
}
