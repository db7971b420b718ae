//! Tables of discrete logarithms reduced modulo a small integer.
//!
//! `table[x] = dlog(x) mod m` for every nonzero encoding `x`, one byte per
//! element when `m < 255`. Built by stepping through powers of the
//! generator, in parallel chunks.

use std::sync::atomic::{AtomicU32, AtomicU8, Ordering};

use rayon::prelude::*;

use super::FieldSpec;
use crate::error::{Error, Result};

/// Largest modulus for which [`ResidueTable::pair_counts`] is available.
pub const MAX_PAIR_MODULUS: u32 = 1 << 12;

const CHUNK: u64 = 1 << 16;

#[derive(Debug)]
enum Store {
    Narrow(Vec<u8>),
    Wide(Vec<u32>),
}

#[derive(Debug)]
pub struct ResidueTable {
    modulus: u32,
    store: Store,
}

impl ResidueTable {
    pub fn build(field: &FieldSpec, modulus: u32) -> Result<Self> {
        let q = field.size();
        if modulus == 0 || (q - 1) % modulus as u64 != 0 {
            return Err(Error::OrderUnavailable {
                order: modulus as u64,
                size: q,
            });
        }
        let chunks: Vec<(u64, u64)> = (0..q - 1)
            .step_by(CHUNK as usize)
            .map(|s| (s, (s + CHUNK).min(q - 1)))
            .collect();
        let m = modulus as u64;
        let store = if modulus < u8::MAX as u32 {
            let cells: Vec<AtomicU8> = (0..q).map(|_| AtomicU8::new(u8::MAX)).collect();
            chunks.par_iter().for_each(|&(s, e)| {
                let mut res = s % m;
                field.for_each_power(s, e, |_, x| {
                    cells[x as usize].store(res as u8, Ordering::Relaxed);
                    res += 1;
                    if res == m {
                        res = 0;
                    }
                });
            });
            Store::Narrow(cells.into_iter().map(AtomicU8::into_inner).collect())
        } else {
            let cells: Vec<AtomicU32> = (0..q).map(|_| AtomicU32::new(u32::MAX)).collect();
            chunks.par_iter().for_each(|&(s, e)| {
                let mut res = s % m;
                field.for_each_power(s, e, |_, x| {
                    cells[x as usize].store(res as u32, Ordering::Relaxed);
                    res += 1;
                    if res == m {
                        res = 0;
                    }
                });
            });
            Store::Wide(cells.into_iter().map(AtomicU32::into_inner).collect())
        };
        Ok(ResidueTable { modulus, store })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Narrow(v) => v.len(),
            Store::Wide(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `dlog(x) mod m`, or `None` for zero.
    #[inline]
    pub fn get(&self, x: u64) -> Option<u32> {
        let v = self.raw(x as usize);
        (v != self.modulus).then_some(v)
    }

    /// Residue with zero mapped to the sentinel value `m`.
    #[inline(always)]
    fn raw(&self, x: usize) -> u32 {
        match &self.store {
            Store::Narrow(v) => {
                let r = v[x];
                if r == u8::MAX {
                    self.modulus
                } else {
                    r as u32
                }
            }
            Store::Wide(v) => {
                let r = v[x];
                if r == u32::MAX {
                    self.modulus
                } else {
                    r
                }
            }
        }
    }

    /// Counts of `(res(t), res(alpha t + beta))` over all `t` in the field,
    /// with `alpha, beta` in the prime field. Returned as a row-major
    /// `(m+1) x (m+1)` matrix whose last row and column count zero elements.
    pub fn pair_counts(&self, field: &FieldSpec, alpha: u64, beta: u64) -> Result<Vec<u64>> {
        if self.modulus > MAX_PAIR_MODULUS {
            return Err(Error::EnumerationTooLarge {
                required: (self.modulus as u128 + 1).pow(2),
                bound: (MAX_PAIR_MODULUS as u64 + 1).pow(2),
            });
        }
        let p = field.p();
        let alpha = alpha % p;
        let beta = beta % p;
        let width = self.modulus as usize + 1;
        let blocks = field.size() / p;
        let r = field.r() as usize;
        // Powers p^i for the high digits.
        let pows: Vec<u64> = (0..r)
            .scan(1u64, |acc, _| {
                let v = *acc;
                *acc *= p;
                Some(v)
            })
            .collect();
        let chunk = (CHUNK / p).max(1);
        let ranges: Vec<(u64, u64)> = (0..blocks)
            .step_by(chunk as usize)
            .map(|s| (s, (s + chunk).min(blocks)))
            .collect();
        let counts = ranges
            .par_iter()
            .map(|&(s, e)| {
                let mut local = vec![0u64; width * width];
                for high in s..e {
                    // t = high * p + c0; s-digits above the constant are alpha * t_i.
                    let base_t = high * p;
                    let mut base_s = 0u64;
                    let mut h = high;
                    for pw in &pows[1..] {
                        base_s += (h % p) * alpha % p * pw;
                        h /= p;
                    }
                    let mut s0 = beta;
                    for c0 in 0..p {
                        let a = self.raw((base_t + c0) as usize) as usize;
                        let b = self.raw((base_s + s0) as usize) as usize;
                        local[a * width + b] += 1;
                        s0 += alpha;
                        if s0 >= p {
                            s0 -= p;
                        }
                    }
                }
                local
            })
            .reduce(
                || vec![0u64; width * width],
                |mut acc, x| {
                    acc.iter_mut().zip(x).for_each(|(a, b)| *a += b);
                    acc
                },
            );
        Ok(counts)
    }
}
