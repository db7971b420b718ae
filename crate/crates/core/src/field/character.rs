//! Multiplicative characters and Jacobi sums.

use std::sync::Arc;

use super::table::ResidueTable;
use super::FieldSpec;
use crate::arith::ntheory::{gcd, lcm};
use crate::arith::CyclotomicNumber;
use crate::error::{Error, Result};

/// The character `x -> zeta_n^(power * dlog x)`, zero at zero.
#[derive(Clone, Debug)]
pub struct MultChar {
    field: Arc<FieldSpec>,
    modulus: u64,
    power: u64,
}

impl MultChar {
    /// The order-`n` character sending the field generator to `zeta_n`.
    pub fn new(field: Arc<FieldSpec>, n: u64) -> Result<Self> {
        if n == 0 || (field.size() - 1) % n != 0 {
            return Err(Error::OrderUnavailable {
                order: n,
                size: field.size(),
            });
        }
        Ok(MultChar {
            field,
            modulus: n,
            power: 1 % n,
        })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Level of the cyclotomic field holding the values.
    pub fn value_level(&self) -> u64 {
        self.modulus
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn order(&self) -> u64 {
        self.modulus / gcd(self.power, self.modulus)
    }

    pub fn is_trivial(&self) -> bool {
        self.power == 0
    }

    /// `chi^k`.
    pub fn pow(&self, k: i64) -> MultChar {
        let n = self.modulus as i64;
        MultChar {
            field: self.field.clone(),
            modulus: self.modulus,
            power: ((self.power as i64 % n) * k.rem_euclid(n)).rem_euclid(n) as u64,
        }
    }

    /// Exponent `k` with `chi(x) = zeta_n^k`, or `None` at zero.
    pub fn exponent(&self, x: u64) -> Option<u64> {
        let k = self.field.dlog(x)?;
        Some((k % self.modulus) * self.power % self.modulus)
    }

    pub fn value(&self, x: u64) -> CyclotomicNumber {
        match self.exponent(x) {
            Some(k) => CyclotomicNumber::root_of_unity(self.modulus as u32, k as i64),
            None => CyclotomicNumber::zero(self.modulus as u32),
        }
    }
}

/// Counts `C[a][b] = #{t : dlog t = a mod n1, dlog(1-t) = b mod n2}`, from
/// which every `J(chi^u, psi^v)` follows for the canonical characters `chi`, `psi`
/// of orders `n1`, `n2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiCounts {
    n1: u64,
    n2: u64,
    counts: Vec<u64>,
}

impl JacobiCounts {
    pub fn compute(field: &FieldSpec, n1: u64, n2: u64) -> Result<Self> {
        let m = lcm(n1, n2);
        let table = ResidueTable::build(field, m as u32)?;
        Self::from_table(field, &table, n1, n2)
    }

    /// Reuse a residue table whose modulus is a multiple of both orders.
    pub fn from_table(field: &FieldSpec, table: &ResidueTable, n1: u64, n2: u64) -> Result<Self> {
        let m = table.modulus() as u64;
        if m % n1 != 0 || m % n2 != 0 {
            return Err(Error::InconsistentInput(format!(
                "residue table modulus {m} is not a multiple of {n1} and {n2}"
            )));
        }
        let p = field.p();
        let pairs = table.pair_counts(field, p - 1, 1)?;
        let width = m as usize + 1;
        let mut counts = vec![0u64; (n1 * n2) as usize];
        for a in 0..m as usize {
            for b in 0..m as usize {
                let c = pairs[a * width + b];
                if c != 0 {
                    counts[(a as u64 % n1 * n2 + b as u64 % n2) as usize] += c;
                }
            }
        }
        Ok(JacobiCounts { n1, n2, counts })
    }

    pub fn orders(&self) -> (u64, u64) {
        (self.n1, self.n2)
    }

    /// `J(chi^u, psi^v) = sum_{t != 0,1} chi^u(t) psi^v(1-t)` at level `lcm(n1, n2)`.
    pub fn sum(&self, u: i64, v: i64) -> CyclotomicNumber {
        let level = lcm(self.n1, self.n2);
        let (s1, s2) = ((level / self.n1) as i64, (level / self.n2) as i64);
        let mut exps = vec![0i64; level as usize];
        for a in 0..self.n1 {
            for b in 0..self.n2 {
                let c = self.counts[(a * self.n2 + b) as usize];
                if c != 0 {
                    let k = (u * a as i64 * s1 + v * b as i64 * s2).rem_euclid(level as i64);
                    exps[k as usize] += c as i64;
                }
            }
        }
        CyclotomicNumber::from_exponent_counts(level as u32, &exps)
    }
}

/// `J(chi, psi)` for nontrivial characters on the same field.
/// When `chi psi` is trivial the value is `-chi(-1)`.
pub fn jacobi_sum(chi: &MultChar, psi: &MultChar) -> Result<CyclotomicNumber> {
    if chi.field() != psi.field() {
        return Err(Error::FieldMismatch);
    }
    if chi.is_trivial() || psi.is_trivial() {
        return Err(Error::InvalidCharacter(
            "trivial character in Jacobi sum".into(),
        ));
    }
    let (n1, n2) = (chi.value_level(), psi.value_level());
    let counts = JacobiCounts::compute(chi.field(), n1, n2)?;
    Ok(counts.sum(chi.power() as i64, psi.power() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64, r: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::build(p, r, 1 << 20).unwrap())
    }

    #[test]
    fn legendre_mod_5() {
        let chi = MultChar::new(field(5, 1), 2).unwrap();
        assert_eq!(chi.value(4), CyclotomicNumber::from_int(2, 1));
        assert_eq!(chi.value(2), CyclotomicNumber::from_int(2, -1));
        assert!(chi.value(0).is_zero());
        assert_eq!(
            jacobi_sum(&chi, &chi).unwrap(),
            CyclotomicNumber::from_int(1, -1)
        );
    }

    #[test]
    fn cubic_character_mod_7() {
        let f = field(7, 1);
        let chi = MultChar::new(f.clone(), 3).unwrap();
        assert_eq!(chi.value(3), CyclotomicNumber::root_of_unity(3, 1));
        let psi = MultChar::new(f, 2).unwrap();
        let j = jacobi_sum(&chi, &psi).unwrap();
        assert_eq!(j.level(), 6);
        assert_eq!(&j * &j.conjugate(), CyclotomicNumber::from_int(6, 7));
    }

    #[test]
    fn trivial_and_mismatched() {
        let f = field(7, 1);
        let triv = MultChar::new(f.clone(), 1).unwrap();
        assert!(triv.is_trivial());
        assert_eq!(triv.value(5), CyclotomicNumber::one(1));
        let chi = MultChar::new(f, 3).unwrap();
        assert!(matches!(
            jacobi_sum(&triv, &chi),
            Err(Error::InvalidCharacter(_))
        ));
        // chi * chi^2 is trivial: J = -chi(-1) = -1 since -1 is a cube
        assert_eq!(
            jacobi_sum(&chi, &chi.pow(2)).unwrap(),
            CyclotomicNumber::from_int(1, -1)
        );
        let other = MultChar::new(field(13, 1), 3).unwrap();
        assert_eq!(jacobi_sum(&chi, &other), Err(Error::FieldMismatch));
        assert!(MultChar::new(field(7, 1), 4).is_err());
    }

    #[test]
    fn orthogonality_and_multiplicativity() {
        let f = field(3, 4);
        for n in [2u64, 4, 5, 8, 10, 16, 20, 40, 80] {
            let chi = MultChar::new(f.clone(), n).unwrap();
            assert_eq!(chi.order(), n);
            let mut total = CyclotomicNumber::zero(n as u32);
            for x in 1..f.size() {
                total += &chi.value(x);
            }
            assert!(total.is_zero(), "order {n}");
            for (x, y) in [(3u64, 7u64), (10, 80), (44, 44)] {
                assert_eq!(chi.value(f.mul(x, y)), &chi.value(x) * &chi.value(y));
            }
        }
    }

    #[test]
    fn jacobi_matches_direct_sum() {
        let f = field(3, 4);
        let chi = MultChar::new(f.clone(), 5).unwrap();
        let psi = MultChar::new(f.clone(), 2).unwrap();
        for (u, v) in [(1, 1), (2, 1), (3, 1), (4, 1)] {
            let (cu, pv) = (chi.pow(u), psi.pow(v));
            let mut direct = CyclotomicNumber::zero(10);
            for t in 2..f.size() {
                let one_minus_t = f.add(1, f.neg(t));
                direct += &(&cu.value(t) * &pv.value(one_minus_t));
            }
            let j = jacobi_sum(&cu, &pv).unwrap();
            assert_eq!(j, direct);
            assert_eq!(j.norm_sq(), CyclotomicNumber::from_int(10, 81));
        }
    }
}
