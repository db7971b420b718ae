//! Dirichlet coefficients of an incomplete Euler product `prod_p 1/P_p(p^-s)`.

use std::collections::BTreeMap;

use crate::arith::{CyclotomicNumber, EulerFactor};
use crate::error::{Error, Result};

/// Coefficients of `1/P(X)` up to `X^k`. `P` must have constant term 1.
pub fn inverse_series(factor: &EulerFactor, k: usize) -> Result<Vec<CyclotomicNumber>> {
    let poly = &factor.poly;
    let level = poly.level();
    if !poly.coeff(0).is_one() {
        return Err(Error::InconsistentInput(format!(
            "Euler factor {factor} does not have constant term 1"
        )));
    }
    let mut inv = vec![CyclotomicNumber::one(level)];
    for m in 1..=k {
        let mut acc = CyclotomicNumber::zero(level);
        for j in 1..=m.min(poly.degree().max(0) as usize) {
            acc -= &(&poly.coeff(j) * &inv[m - j]);
        }
        inv.push(acc);
    }
    Ok(inv)
}

/// `a_1, ..., a_terms` of `prod over the given primes of 1/P_p(p^-s)`. Factors are
/// keyed by `p` and must be in `X = p^-s`; integers divisible by any other
/// prime get coefficient 0.
pub fn dirichlet_coefficients(
    factors: &BTreeMap<u64, EulerFactor>,
    terms: usize,
) -> Result<Vec<CyclotomicNumber>> {
    let level = factors.values().fold(1u64, |acc, f| {
        crate::arith::ntheory::lcm(acc, f.poly.level() as u64)
    }) as u32;
    let mut local: BTreeMap<u64, Vec<CyclotomicNumber>> = BTreeMap::new();
    for (&p, f) in factors {
        if f.q != p {
            return Err(Error::InconsistentInput(format!(
                "factor for p = {p} is over q = {}",
                f.q
            )));
        }
        let mut k = 0usize;
        let mut pk = 1u64;
        while pk.saturating_mul(p) <= terms as u64 {
            pk *= p;
            k += 1;
        }
        local.insert(p, inverse_series(f, k)?);
    }
    let mut out = vec![CyclotomicNumber::zero(level); terms];
    if terms == 0 {
        return Ok(out);
    }
    out[0] = CyclotomicNumber::one(level);
    for n in 2..=terms as u64 {
        let mut m = n;
        let mut value = CyclotomicNumber::one(level);
        for p in crate::arith::ntheory::prime_factors(n) {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            match local.get(&p) {
                Some(series) => value = &value * &series[k],
                None => {
                    value = CyclotomicNumber::zero(level);
                    break;
                }
            }
        }
        out[n as usize - 1] = value;
    }
    Ok(out)
}
