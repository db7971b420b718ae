//! Newton identities between power sums and elementary symmetric functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::ExactPolynomial;
use crate::error::{Error, Result};

/// Elementary symmetric functions `e_0..e_k` from power sums `s_1..s_k`.
/// Fails if a division in `k e_k = sum (-1)^(i-1) e_(k-i) s_i` is inexact.
pub fn elementary_from_power_sums(s: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut e = vec![BigInt::one()];
    for k in 1..=s.len() {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::InconsistentInput(format!(
                "power sums give non-integral e_{k} = {acc}/{k}"
            )));
        }
        e.push(quot);
    }
    Ok(e)
}

/// Power sums `s_1..s_count` of the roots of a monic integer polynomial
/// (coefficients low degree first).
pub fn power_sums(monic: &[BigInt], count: usize) -> Vec<BigInt> {
    let deg = monic.len() - 1;
    // e_k = (-1)^k * coefficient of T^(deg-k)
    let e: Vec<BigInt> = (0..=deg)
        .map(|k| {
            let c = monic[deg - k].clone();
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for k in 1..=count {
        // s_k = sum_{i=1}^{k-1} (-1)^(i-1) e_i s_(k-i) + (-1)^(k-1) k e_k
        let mut acc = BigInt::zero();
        for i in 1..k.min(deg + 1) {
            let term = &e[i] * &s[k - i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= deg {
            let term = &e[k] * BigInt::from(k);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s.push(acc);
    }
    s
}

/// The monic degree-2g integer polynomial with power sums `s_1..s_g` whose
/// coefficients satisfy `c_(2g-k) = q^(g-k) c_k`.
pub fn charpoly_from_power_sums(q: u64, g: usize, s: &[BigInt]) -> Result<ExactPolynomial> {
    if s.len() != g {
        return Err(Error::InconsistentInput(format!(
            "expected {g} power sums, got {}",
            s.len()
        )));
    }
    let e = elementary_from_power_sums(s)?;
    let q = BigInt::from(q);
    let mut full = vec![BigInt::zero(); 2 * g + 1];
    full[..=g].clone_from_slice(&e);
    for k in 0..g {
        full[2 * g - k] = &e[k] * num_traits::pow(q.clone(), g - k);
    }
    // coefficient of T^(2g-k) is (-1)^k e_k
    let ascending: Vec<BigInt> = (0..=2 * g)
        .map(|deg| {
            let k = 2 * g - deg;
            if k % 2 == 1 {
                -full[k].clone()
            } else {
                full[k].clone()
            }
        })
        .collect();
    Ok(ExactPolynomial::from_bigints(&ascending))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        let p = charpoly_from_power_sums(3, 1, &big(&[0])).unwrap();
        assert_eq!(p.to_string(), "T^2 + 3");
        let p = charpoly_from_power_sums(5, 1, &big(&[2])).unwrap();
        assert_eq!(p.to_string(), "T^2 - 2T + 5");
        let p = charpoly_from_power_sums(3, 2, &big(&[0, -12])).unwrap();
        assert_eq!(p.to_string(), "T^4 + 6T^2 + 9");
    }

    #[test]
    fn inexact_division_is_reported() {
        assert!(matches!(
            charpoly_from_power_sums(3, 2, &big(&[1, 0])),
            Err(Error::InconsistentInput(_))
        ));
    }

    #[test]
    fn power_sums_roundtrip() {
        // (T^2+3)^2 = T^4 + 6T^2 + 9
        let s = power_sums(&big(&[9, 0, 6, 0, 1]), 2);
        assert_eq!(s, big(&[0, -12]));
    }
}
