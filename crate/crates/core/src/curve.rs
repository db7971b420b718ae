//! The curve `y^e = gamma x^f + delta` over Q and its isotypic components.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::ntheory::{divisors, euler_phi, gcd, primes_up_to};
use crate::arith::CyclotomicNumber;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilCurve {
    e: u32,
    f: u32,
    gamma: BigRational,
    delta: BigRational,
}

/// Hodge label of a differential `omega_{i,j}` on the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HodgeLabel {
    /// Type (1,0).
    Holomorphic,
    /// Type (0,1).
    Antiholomorphic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Automorphism {
    /// `psi_e : (x, y) -> (x, zeta_e y)`.
    E,
    /// `psi_f : (x, y) -> (zeta_f x, y)`.
    F,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DifferentialIndex {
    pub i: u32,
    pub j: u32,
    pub label: HodgeLabel,
}

impl WeilCurve {
    pub fn new(e: u32, f: u32, gamma: BigRational, delta: BigRational) -> Result<Self> {
        if e < 2 {
            return Err(Error::InvalidCurve(format!("need e >= 2, got e = {e}")));
        }
        if f <= e {
            return Err(Error::InvalidCurve(format!(
                "need f > e, got e = {e}, f = {f}"
            )));
        }
        if gcd(e as u64, f as u64) != 1 {
            return Err(Error::InvalidCurve(format!(
                "need gcd(e, f) = 1, got gcd({e}, {f}) = {}",
                gcd(e as u64, f as u64)
            )));
        }
        if gamma.is_zero() {
            return Err(Error::InvalidCurve("gamma must be nonzero".into()));
        }
        if delta.is_zero() {
            return Err(Error::InvalidCurve("delta must be nonzero".into()));
        }
        Ok(WeilCurve { e, f, gamma, delta })
    }

    /// Convenience constructor with integer coefficients.
    pub fn with_integers(e: u32, f: u32, gamma: i64, delta: i64) -> Result<Self> {
        Self::new(
            e,
            f,
            BigRational::from_integer(gamma.into()),
            BigRational::from_integer(delta.into()),
        )
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn gamma(&self) -> &BigRational {
        &self.gamma
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn genus(&self) -> u32 {
        (self.e - 1) * (self.f - 1) / 2
    }

    /// One component per pair of proper divisors `d | f`, `d' | e`, ordered by `(d, d')`.
    pub fn components(&self) -> Vec<Component> {
        let mut out = Vec::new();
        for d in divisors(self.f as u64) {
            if d == self.f as u64 {
                continue;
            }
            for dp in divisors(self.e as u64) {
                if dp == self.e as u64 {
                    continue;
                }
                out.push(Component::new(self.f, self.e, d as u32, dp as u32));
            }
        }
        out
    }

    pub fn component(&self, d: u32, dprime: u32) -> Result<Component> {
        if d == 0
            || dprime == 0
            || self.f % d != 0
            || self.e % dprime != 0
            || d == self.f
            || dprime == self.e
        {
            return Err(Error::InvalidComponent { d, dprime });
        }
        Ok(Component::new(self.f, self.e, d, dprime))
    }

    pub fn hodge_label(&self, i: u32, j: u32) -> HodgeLabel {
        let holomorphic = if self.f % 2 == 1 {
            i <= (self.f - 1) / 2
        } else {
            j <= (self.e - 1) / 2
        };
        if holomorphic {
            HodgeLabel::Holomorphic
        } else {
            HodgeLabel::Antiholomorphic
        }
    }

    /// All `(i, j)` with `1 <= i < f`, `1 <= j < e`, labelled, ordered by `(i, j)`.
    pub fn differential_indices(&self) -> Vec<DifferentialIndex> {
        let mut out = Vec::with_capacity(((self.e - 1) * (self.f - 1)) as usize);
        for i in 1..self.f {
            for j in 1..self.e {
                out.push(DifferentialIndex {
                    i,
                    j,
                    label: self.hodge_label(i, j),
                });
            }
        }
        out
    }

    fn check_index(&self, i: u32, j: u32) -> Result<()> {
        if i == 0 || i >= self.f || j == 0 || j >= self.e {
            return Err(Error::IndexOutOfRange { i, j });
        }
        Ok(())
    }

    /// Complex conjugation on indices, `(i, j) -> (f - i, e - j)`.
    pub fn conjugate_index(&self, i: u32, j: u32) -> Result<(u32, u32)> {
        self.check_index(i, j)?;
        Ok((self.f - i, self.e - j))
    }

    /// Eigenvalue of `psi_f` (`zeta_f^i`) or `psi_e` (`zeta_e^-j`) on `omega_{i,j}`.
    pub fn automorphism_eigenvalue(
        &self,
        which: Automorphism,
        i: u32,
        j: u32,
    ) -> Result<CyclotomicNumber> {
        self.check_index(i, j)?;
        Ok(match which {
            Automorphism::F => CyclotomicNumber::root_of_unity(self.f, i as i64),
            Automorphism::E => CyclotomicNumber::root_of_unity(self.e, -(j as i64)),
        })
    }

    /// Product of `e f` and the numerators and denominators of `gamma`, `delta`.
    fn bad_modulus(&self) -> BigInt {
        BigInt::from(self.e)
            * BigInt::from(self.f)
            * self.gamma.numer()
            * self.gamma.denom()
            * self.delta.numer()
            * self.delta.denom()
    }

    /// Sufficient criterion for good reduction: `p` divides none of `e`, `f`, or the
    /// numerators and denominators of `gamma` and `delta`.
    pub fn is_good_prime(&self, p: u64) -> bool {
        crate::arith::ntheory::is_prime(p) && !(self.bad_modulus() % BigInt::from(p)).is_zero()
    }

    pub fn good_primes(&self, bound: u64) -> Vec<u64> {
        primes_up_to(bound)
            .into_iter()
            .filter(|&p| self.is_good_prime(p))
            .collect()
    }

    /// `(gamma mod p, delta mod p)`, both nonzero, or a bad-reduction error.
    pub fn reduce(&self, p: u64) -> Result<(u64, u64)> {
        if !crate::arith::ntheory::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let pb = BigInt::from(p);
        let reason = |what: &str| Error::BadReduction {
            p,
            reason: what.to_string(),
        };
        if (BigInt::from(self.e) * BigInt::from(self.f) % &pb).is_zero() {
            return Err(reason("p divides e*f"));
        }
        let red = |q: &BigRational, name: &str| -> Result<u64> {
            let num = q.numer().mod_floor_u64(p);
            let den = q.denom().mod_floor_u64(p);
            if num == 0 {
                return Err(reason(&format!("p divides the numerator of {name}")));
            }
            if den == 0 {
                return Err(reason(&format!("p divides the denominator of {name}")));
            }
            let inv = crate::arith::ntheory::inv_mod(den, p).expect("p prime, den nonzero");
            Ok(((num as u128 * inv as u128) % p as u128) as u64)
        };
        Ok((red(&self.gamma, "gamma")?, red(&self.delta, "delta")?))
    }

    /// Search integer `x` with `|x| <= height` for a rational affine point.
    /// The curve always has its rational point at infinity; this diagnostic only
    /// reports whether an affine one was found as well.
    pub fn find_affine_rational_point(&self, height: u32) -> Option<(BigInt, BigRational)> {
        let mut xs = vec![0i64];
        for h in 1..=height as i64 {
            xs.push(h);
            xs.push(-h);
        }
        for x in xs {
            let xb = BigInt::from(x);
            let v = &self.gamma
                * BigRational::from_integer(num_traits::pow(xb.clone(), self.f as usize))
                + &self.delta;
            if let Some(y) = rational_root(&v, self.e) {
                return Some((xb, y));
            }
        }
        None
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let r = ((self % &pb) + &pb) % &pb;
        r.to_u64().expect("reduced below p")
    }
}

/// Rational `y` with `y^e = v`, if one exists.
fn rational_root(v: &BigRational, e: u32) -> Option<BigRational> {
    if v.is_zero() {
        return Some(BigRational::zero());
    }
    if v.is_negative() && e % 2 == 0 {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(e);
        (num_traits::pow(r.clone(), e as usize) == n.abs()).then_some(r)
    };
    let num = root(v.numer())?;
    let den = root(v.denom())?;
    let sign = if v.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    Some(BigRational::new(sign * num, den))
}

impl fmt::Display for WeilCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::arith::cyclotomic::fmt_rational;
        let coeff = if self.gamma.is_one() {
            String::new()
        } else if (-&self.gamma).is_one() {
            "-".to_string()
        } else {
            format!("{}*", fmt_rational(&self.gamma))
        };
        let sign = if self.delta.is_negative() { '-' } else { '+' };
        write!(
            f,
            "y^{} = {}x^{} {} {}",
            self.e,
            coeff,
            self.f,
            sign,
            fmt_rational(&self.delta.abs())
        )
    }
}

/// A unit `(u, v)` in `(Z/f_d)^x x (Z/e_d')^x`.
pub type Unit = (u32, u32);

/// The isotypic piece indexed by `(d, d')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub d: u32,
    pub dprime: u32,
    pub f_d: u32,
    pub e_dp: u32,
    units: Vec<Unit>,
}

impl Component {
    fn new(f: u32, e: u32, d: u32, dprime: u32) -> Self {
        let f_d = f / d;
        let e_dp = e / dprime;
        let mut units = Vec::new();
        for u in 1..f_d {
            if gcd(u as u64, f_d as u64) != 1 {
                continue;
            }
            for v in 1..e_dp {
                if gcd(v as u64, e_dp as u64) == 1 {
                    units.push((u, v));
                }
            }
        }
        Component {
            d,
            dprime,
            f_d,
            e_dp,
            units,
        }
    }

    /// `g_{d,d'} = phi(f_d) phi(e_d') / 2`.
    pub fn dim(&self) -> u32 {
        (euler_phi(self.f_d as u64) * euler_phi(self.e_dp as u64) / 2) as u32
    }

    /// Cyclotomic level `f_d e_d'` of the CM field.
    pub fn level(&self) -> u32 {
        self.f_d * self.e_dp
    }

    /// Units in lexicographic order.
    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    /// Differential indices `(i, j) = (u d, v d')`, in unit order.
    pub fn index_set(&self) -> Vec<(u32, u32)> {
        self.units
            .iter()
            .map(|&(u, v)| (u * self.d, v * self.dprime))
            .collect()
    }

    pub fn unit_of_index(&self, i: u32, j: u32) -> Option<Unit> {
        if i % self.d != 0 || j % self.dprime != 0 {
            return None;
        }
        let b = (i / self.d, j / self.dprime);
        self.units.binary_search(&b).ok().map(|_| b)
    }

    pub fn position(&self, b: Unit) -> Option<usize> {
        self.units.binary_search(&b).ok()
    }

    pub fn neg(&self, b: Unit) -> Unit {
        ((self.f_d - b.0) % self.f_d, (self.e_dp - b.1) % self.e_dp)
    }

    /// Multiply a unit by an integer `c` acting diagonally.
    pub fn scale(&self, c: u64, b: Unit) -> Unit {
        (
            ((b.0 as u64 * (c % self.f_d as u64)) % self.f_d as u64) as u32,
            ((b.1 as u64 * (c % self.e_dp as u64)) % self.e_dp as u64) as u32,
        )
    }

    /// CRT image of a unit in `(Z / f_d e_d')^x`.
    pub fn crt(&self, b: Unit) -> u64 {
        let (m1, m2) = (self.f_d as u64, self.e_dp as u64);
        let inv = crate::arith::ntheory::inv_mod(m1, m2).expect("coprime moduli");
        // x = u + m1 * k, with k = (v - u) / m1 mod m2
        let k = ((b.1 as u64 + m2 - b.0 as u64 % m2) % m2) * inv % m2;
        b.0 as u64 + m1 * k
    }

    pub fn from_crt(&self, x: u64) -> Unit {
        ((x % self.f_d as u64) as u32, (x % self.e_dp as u64) as u32)
    }
}
