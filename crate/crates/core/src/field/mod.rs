//! Finite fields F_{p^r} with deterministic normalization.
//!
//! Elements are encoded as integers `sum c_i p^i` with digits `c_i` the
//! coefficients of the residue polynomial. The modulus is the monic
//! irreducible of degree `r` whose lower coefficients have the smallest
//! encoding, and the generator is the smallest encoding of full order.

pub mod character;
pub mod count;
mod table;

use std::collections::HashMap;
use std::sync::OnceLock;

pub use character::{jacobi_sum, JacobiCounts, MultChar};
pub use count::count_affine_points;
pub use table::ResidueTable;

use crate::arith::ntheory::{checked_pow, is_prime, prime_factors};
use crate::error::{Error, Result};

/// Default cap on the number of field elements any enumeration may touch.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 26;

/// Fields up to this size get a full discrete-log table; larger ones use baby-step giant-step.
pub const DLOG_TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    r: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: u64,
    generator_rank: usize,
    gen_sparse: Vec<(usize, u64)>,
    barrett: Barrett,
    dlog_table: OnceLock<Vec<u32>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.generator == other.generator
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// `F_{p^r}` with the smallest generator.
    pub fn build(p: u64, r: u32, bound: u64) -> Result<Self> {
        Self::build_with_generator_rank(p, r, bound, 0)
    }

    /// Same field, but with the `rank`-th smallest generator (rank 0 is the default).
    pub fn build_with_generator_rank(p: u64, r: u32, bound: u64, rank: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if r == 0 {
            return Err(Error::InconsistentInput(
                "field degree must be positive".into(),
            ));
        }
        let too_large = Error::FieldTooLarge { p, r, bound };
        let q = checked_pow(p, r).ok_or(too_large.clone())?;
        if q > bound || q > u32::MAX as u64 {
            return Err(too_large);
        }
        let modulus = smallest_irreducible(p, r);
        let mut field = FieldSpec {
            p,
            r,
            q,
            modulus,
            generator: 0,
            generator_rank: rank,
            gen_sparse: Vec::new(),
            barrett: Barrett::new(p),
            dlog_table: OnceLock::new(),
        };
        let factors = prime_factors(q - 1);
        let mut seen = 0;
        for cand in 1..q {
            if factors.iter().all(|&l| field.pow(cand, (q - 1) / l) != 1) {
                if seen == rank {
                    field.generator = cand;
                    break;
                }
                seen += 1;
            }
        }
        if field.generator == 0 {
            return Err(Error::InconsistentInput(format!(
                "field of size {q} has fewer than {} generators",
                rank + 1
            )));
        }
        field.gen_sparse = field
            .decode(field.generator)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .collect();
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of elements.
    pub fn size(&self) -> u64 {
        self.q
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Encoding of the chosen multiplicative generator.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn generator_rank(&self) -> usize {
        self.generator_rank
    }

    pub fn decode(&self, x: u64) -> Vec<u64> {
        let mut digits = vec![0; self.r as usize];
        let mut x = x;
        for d in digits.iter_mut() {
            *d = x % self.p;
            x /= self.p;
        }
        digits
    }

    pub fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Encoding of the prime-field element `c mod p`.
    pub fn from_prime_field(&self, c: u64) -> u64 {
        c % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let s: Vec<u64> = self
            .decode(a)
            .iter()
            .map(|&u| (self.p - u) % self.p)
            .collect();
        self.encode(&s)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let x = self.decode(a);
        let y = self.decode(b);
        let mut out = vec![0u64; self.r as usize];
        self.mul_digits(&x, &y, &mut out);
        self.encode(&out)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow(a, self.q - 2))
    }

    /// `out = x * y mod modulus` on digit vectors of length `r`.
    fn mul_digits(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        let r = self.r as usize;
        let p = self.p;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        reduce_digits(&mut prod, &self.modulus, p);
        out.copy_from_slice(&prod[..r]);
    }

    /// Multiply `digits` in place by the generator; `scratch` has length `2r`.
    #[inline]
    fn step_generator(&self, digits: &mut [u64], scratch: &mut [u64]) {
        let r = self.r as usize;
        let p = self.p;
        let br = self.barrett;
        scratch.iter_mut().for_each(|s| *s = 0);
        for &(k, c) in &self.gen_sparse {
            for (i, &a) in digits.iter().enumerate() {
                scratch[i + k] = br.reduce(scratch[i + k] + a * c);
            }
        }
        for top in (r..2 * r - 1).rev() {
            let c = scratch[top];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus[..r].iter().enumerate() {
                let idx = top - r + j;
                scratch[idx] = br.reduce(scratch[idx] + (p - c) * m);
            }
        }
        digits.copy_from_slice(&scratch[..r]);
    }

    /// Discrete logarithm to the generator base; `None` for zero.
    pub fn dlog(&self, a: u64) -> Option<u64> {
        if a == 0 || a >= self.q {
            return None;
        }
        if self.q <= DLOG_TABLE_LIMIT {
            let table = self.dlog_table.get_or_init(|| {
                let mut t = vec![u32::MAX; self.q as usize];
                self.for_each_power(0, self.q - 1, |k, x| t[x as usize] = k as u32);
                t
            });
            return Some(table[a as usize] as u64);
        }
        Some(self.bsgs(a))
    }

    fn bsgs(&self, a: u64) -> u64 {
        let n = self.q - 1;
        let m = (n as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(m as usize);
        let mut x = 1u64;
        for j in 0..m {
            baby.entry(x).or_insert(j);
            x = self.mul(x, self.generator);
        }
        let giant = self
            .inv(self.pow(self.generator, m))
            .expect("generator is a unit");
        let mut y = a;
        for i in 0..=m {
            if let Some(&j) = baby.get(&y) {
                return (i * m + j) % n;
            }
            y = self.mul(y, giant);
        }
        unreachable!("every nonzero element is a power of the generator")
    }

    /// Call `visit(k, encoding(g^k))` for `k` in `start..end`, stepping by the generator.
    pub fn for_each_power(&self, start: u64, end: u64, mut visit: impl FnMut(u64, u64)) {
        if start >= end {
            return;
        }
        if self.r == 1 {
            let br = self.barrett;
            let g = self.generator;
            let mut x = self.pow(self.generator, start);
            for k in start..end {
                visit(k, x);
                x = br.reduce(x * g);
            }
            return;
        }
        let r = self.r as usize;
        let mut digits = self.decode(self.pow(self.generator, start));
        let mut scratch = vec![0u64; 2 * r];
        for k in start..end {
            visit(k, self.encode(&digits));
            self.step_generator(&mut digits, &mut scratch);
        }
    }
}

/// Division-free reduction modulo a fixed `p`, valid for inputs below 2^64.
#[derive(Debug, Clone, Copy)]
struct Barrett {
    p: u64,
    m: u64,
}

impl Barrett {
    fn new(p: u64) -> Self {
        Barrett {
            p,
            m: (u64::MAX / p) + u64::from(u64::MAX % p == p - 1),
        }
    }

    #[inline(always)]
    fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

/// Reduce `prod` (low first) modulo the monic `modulus` in place.
fn reduce_digits(prod: &mut [u64], modulus: &[u64], p: u64) {
    let r = modulus.len() - 1;
    for top in (r..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (j, &m) in modulus[..r].iter().enumerate() {
            if m != 0 {
                let idx = top - r + j;
                prod[idx] = (prod[idx] + (p - c) * m) % p;
            }
        }
    }
}

/// Smallest monic irreducible of degree `r` over F_p, by encoding of its lower coefficients.
fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
    let r = r as usize;
    let count = checked_pow(p, r as u32).expect("caller checked the size");
    for code in 0..count {
        let mut f = Vec::with_capacity(r + 1);
        let mut c = code;
        for _ in 0..r {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    if prod.len() >= f.len() {
        reduce_digits(&mut prod, f, p);
        prod.truncate(f.len() - 1);
    }
    trim(prod)
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = crate::arith::ntheory::inv_mod(b[db], p).expect("nonzero leading coefficient");
    let mut r = trim(a.to_vec());
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        for (j, &bj) in b.iter().enumerate() {
            let idx = top - db + j;
            r[idx] = (r[idx] + (p - c) * bj) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    if r == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 0..r / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(f, &trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}
