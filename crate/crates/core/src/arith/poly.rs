//! Dense univariate polynomials with cyclotomic coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::cyclotomic::{fmt_rational, CyclotomicNumber};
use super::ntheory::lcm;
use crate::error::Result;

/// Polynomial over Q(zeta_level), low degree first, no trailing zeros.
#[derive(Clone, Debug)]
pub struct ExactPolynomial {
    level: u32,
    coeffs: Vec<CyclotomicNumber>,
}

impl ExactPolynomial {
    pub fn new(level: u32, coeffs: Vec<CyclotomicNumber>) -> Self {
        let level = coeffs
            .iter()
            .fold(level.max(1) as u64, |acc, c| lcm(acc, c.level() as u64))
            as u32;
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.lift(level).expect("level is a common multiple"))
            .collect();
        let mut p = ExactPolynomial { level, coeffs };
        p.trim();
        p
    }

    pub fn zero(level: u32) -> Self {
        ExactPolynomial {
            level: level.max(1),
            coeffs: Vec::new(),
        }
    }

    pub fn one(level: u32) -> Self {
        Self::constant(CyclotomicNumber::one(level))
    }

    pub fn constant(c: CyclotomicNumber) -> Self {
        Self::new(c.level(), vec![c])
    }

    /// `c * X^k`.
    pub fn monomial(c: CyclotomicNumber, k: usize) -> Self {
        let level = c.level();
        let mut coeffs = vec![CyclotomicNumber::zero(level); k];
        coeffs.push(c);
        Self::new(level, coeffs)
    }

    /// `1 - c * X^k`, the shape of every Euler-factor piece.
    pub fn one_minus(c: &CyclotomicNumber, k: usize) -> Self {
        let level = c.level();
        let mut coeffs = vec![CyclotomicNumber::zero(level); k + 1];
        coeffs[0] = CyclotomicNumber::one(level);
        coeffs[k] = coeffs[k].clone() - c;
        Self::new(level, coeffs)
    }

    /// `X^k - c`.
    pub fn power_minus(c: &CyclotomicNumber, k: usize) -> Self {
        let level = c.level();
        let mut coeffs = vec![CyclotomicNumber::zero(level); k + 1];
        coeffs[k] = CyclotomicNumber::one(level);
        coeffs[0] = coeffs[0].clone() - c;
        Self::new(level, coeffs)
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            1,
            coeffs
                .iter()
                .map(|&c| CyclotomicNumber::from_int(1, c))
                .collect(),
        )
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(
            1,
            coeffs
                .iter()
                .map(|c| CyclotomicNumber::from_bigint(1, c.clone()))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Degree, with the zero polynomial at -1.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    /// Coefficient of `X^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> CyclotomicNumber {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CyclotomicNumber::zero(self.level))
    }

    pub fn lift(&self, level: u32) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.lift(level))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactPolynomial { level, coeffs })
    }

    /// Integer coefficients, if every coefficient is a rational integer.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.as_integer()).collect()
    }

    /// Rational coefficients, if every coefficient is rational.
    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }

    /// The same polynomial stored at level 1 when all coefficients are rational.
    pub fn rationalized(&self) -> Self {
        match self.rational_coeffs() {
            Some(qs) => ExactPolynomial {
                level: 1,
                coeffs: qs
                    .into_iter()
                    .map(|q| CyclotomicNumber::from_rational(1, q))
                    .collect(),
            },
            None => self.clone(),
        }
    }

    /// `X^deg * P(1/X)` for the given formal degree (must be at least the degree).
    pub fn reversed(&self, deg: usize) -> Self {
        assert!(self.degree() <= deg as i64);
        let mut coeffs = vec![CyclotomicNumber::zero(self.level); deg + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[deg - k] = c.clone();
        }
        Self::new(self.level, coeffs)
    }

    /// `P(X^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![CyclotomicNumber::zero(self.level); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(self.level, coeffs)
    }

    /// `P(c * X)`.
    pub fn substitute_scaled(&self, c: &CyclotomicNumber) -> Self {
        let mut power = CyclotomicNumber::one(c.level());
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &power);
            power = &power * c;
        }
        Self::new(self.level, coeffs)
    }

    pub fn conjugate(&self) -> Self {
        ExactPolynomial {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c.conjugate()).collect(),
        }
    }

    pub fn eval(&self, x: &CyclotomicNumber) -> CyclotomicNumber {
        let mut acc = CyclotomicNumber::zero(self.level);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn product<'a>(level: u32, factors: impl IntoIterator<Item = &'a ExactPolynomial>) -> Self {
        factors
            .into_iter()
            .fold(Self::one(level), |acc, f| &acc * f)
    }

    /// Render in descending powers of `var`, e.g. `T^2 + 4T + 7`.
    pub fn display_descending(&self, var: &str) -> String {
        let terms: Vec<(usize, &CyclotomicNumber)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        render_terms(&terms, var)
    }

    /// Render in ascending powers of `var`, e.g. `1 + 4X + 7X^2`.
    pub fn display_ascending(&self, var: &str) -> String {
        let terms: Vec<(usize, &CyclotomicNumber)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        render_terms(&terms, var)
    }
}

fn render_terms(terms: &[(usize, &CyclotomicNumber)], var: &str) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (k, c)) in terms.iter().enumerate() {
        let power = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        match c.as_rational() {
            Some(q) => {
                let neg = q.is_negative();
                let mag = q.abs();
                if idx == 0 {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                if *k == 0 || !mag.is_one() {
                    out.push_str(&fmt_rational(&mag));
                }
                out.push_str(&power);
            }
            None => {
                if idx > 0 {
                    out.push_str(" + ");
                }
                out.push('(');
                out.push_str(&c.to_string());
                out.push(')');
                out.push_str(&power);
            }
        }
    }
    out
}

impl PartialEq for ExactPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

impl Eq for ExactPolynomial {}

impl<'a> std::ops::Mul<&'a ExactPolynomial> for &'a ExactPolynomial {
    type Output = ExactPolynomial;
    fn mul(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        let level = lcm(self.level as u64, rhs.level as u64) as u32;
        if self.is_zero() || rhs.is_zero() {
            return ExactPolynomial::zero(level);
        }
        let a = self.lift(level).expect("common level");
        let b = rhs.lift(level).expect("common level");
        let mut coeffs = vec![CyclotomicNumber::zero(level); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    coeffs[i + j] += &(x * y);
                }
            }
        }
        ExactPolynomial::new(level, coeffs)
    }
}

impl<'a> std::ops::Add<&'a ExactPolynomial> for &'a ExactPolynomial {
    type Output = ExactPolynomial;
    fn add(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        let level = lcm(self.level as u64, rhs.level as u64) as u32;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        ExactPolynomial::new(level, coeffs)
    }
}

impl<'a> std::ops::Sub<&'a ExactPolynomial> for &'a ExactPolynomial {
    type Output = ExactPolynomial;
    fn sub(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        let level = lcm(self.level as u64, rhs.level as u64) as u32;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        ExactPolynomial::new(level, coeffs)
    }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_descending("T"))
    }
}

/// A local factor `prod (1 - alpha X)` in `X = q^-s`, stored ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFactor {
    pub q: u64,
    pub poly: ExactPolynomial,
}

impl EulerFactor {
    pub fn new(q: u64, poly: ExactPolynomial) -> Self {
        EulerFactor { q, poly }
    }

    pub fn degree(&self) -> i64 {
        self.poly.degree()
    }

    /// Product of two factors over the same `q`.
    pub fn mul(&self, other: &EulerFactor) -> EulerFactor {
        debug_assert_eq!(self.q, other.q);
        EulerFactor::new(self.q, &self.poly * &other.poly)
    }
}

impl fmt::Display for EulerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.display_ascending("X"))
    }
}
