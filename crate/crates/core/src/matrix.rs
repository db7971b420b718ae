//! Dense and generalized-permutation matrices over cyclotomic fields.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{CyclotomicNumber, ExactPolynomial};

/// Square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    level: u32,
    entries: Vec<CyclotomicNumber>,
}

impl DenseMatrix {
    pub fn zero(n: usize, level: u32) -> Self {
        DenseMatrix {
            n,
            level,
            entries: vec![CyclotomicNumber::zero(level); n * n],
        }
    }

    pub fn identity(n: usize, level: u32) -> Self {
        let mut m = Self::zero(n, level);
        for i in 0..n {
            m.set(i, i, CyclotomicNumber::one(level));
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CyclotomicNumber) {
        let x = if x.level() == self.level {
            x
        } else {
            let level = crate::arith::ntheory::lcm(self.level as u64, x.level() as u64) as u32;
            if level != self.level {
                self.relevel(level);
            }
            x.lift(level).expect("common level")
        };
        self.entries[i * self.n + j] = x;
    }

    fn relevel(&mut self, level: u32) {
        for e in self.entries.iter_mut() {
            *e = e.lift(level).expect("common level");
        }
        self.level = level;
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let level = crate::arith::ntheory::lcm(self.level as u64, other.level as u64) as u32;
        let mut out = Self::zero(self.n, level);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * self.n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> CyclotomicNumber {
        let mut t = CyclotomicNumber::zero(self.level);
        for i in 0..self.n {
            t += self.get(i, i);
        }
        t
    }

    /// `det(T I - A)` by the Faddeev-LeVerrier recursion.
    pub fn charpoly(&self) -> ExactPolynomial {
        let n = self.n;
        let level = self.level;
        let mut coeffs = vec![CyclotomicNumber::zero(level); n + 1];
        coeffs[n] = CyclotomicNumber::one(level);
        let mut m = DenseMatrix::zero(n, level);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[n - k + 1];
            }
            m = next;
            let tr = self.mul(&m).trace();
            let scale = BigRational::new(BigInt::from(-1), BigInt::from(k as i64));
            coeffs[n - k] = tr.scale(&scale);
        }
        ExactPolynomial::new(level, coeffs)
    }
}

/// Matrix with exactly one nonzero entry per row and column: column `j`
/// holds `entries[j]` in row `rows[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedPermutationMatrix {
    rows: Vec<usize>,
    entries: Vec<CyclotomicNumber>,
}

impl GeneralizedPermutationMatrix {
    /// Panics unless `rows` is a permutation and every entry is nonzero.
    pub fn new(rows: Vec<usize>, entries: Vec<CyclotomicNumber>) -> Self {
        let n = rows.len();
        assert_eq!(entries.len(), n);
        let mut seen = vec![false; n];
        for &r in &rows {
            assert!(r < n && !seen[r], "not a permutation");
            seen[r] = true;
        }
        assert!(entries.iter().all(|e| !e.is_zero()), "zero entry");
        GeneralizedPermutationMatrix { rows, entries }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn entries(&self) -> &[CyclotomicNumber] {
        &self.entries
    }

    /// Cycles of the column-to-row map, each starting at its smallest index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cyc.push(j);
                j = self.rows[j];
            }
            out.push(cyc);
        }
        out
    }

    /// `(length, product of entries)` for every cycle.
    pub fn cycle_products(&self) -> Vec<(usize, CyclotomicNumber)> {
        self.cycles()
            .into_iter()
            .map(|c| {
                let level = self.entries[c[0]].level();
                let prod = c.iter().fold(CyclotomicNumber::one(level), |acc, &j| {
                    &acc * &self.entries[j]
                });
                (c.len(), prod)
            })
            .collect()
    }

    /// Characteristic polynomial from the cycle structure: `prod (T^len - product)`.
    pub fn charpoly_by_cycles(&self) -> ExactPolynomial {
        charpoly_gpm(&self.cycle_products())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let level = self.entries.iter().fold(1u64, |acc, e| {
            crate::arith::ntheory::lcm(acc, e.level() as u64)
        }) as u32;
        let mut m = DenseMatrix::zero(self.size(), level);
        for (j, (&r, e)) in self.rows.iter().zip(&self.entries).enumerate() {
            m.set(r, j, e.clone());
        }
        m
    }
}

/// `prod over cycles (T^len - z)`.
pub fn charpoly_gpm(cycles: &[(usize, CyclotomicNumber)]) -> ExactPolynomial {
    cycles
        .iter()
        .map(|(len, z)| ExactPolynomial::power_minus(z, *len))
        .fold(ExactPolynomial::one(1), |acc, f| &acc * &f)
}
