//! Frobenius on a component: the permutation `rho(b) = q^-1 b` of the unit
//! group and the cycle products `Z_b`, computed from Jacobi sums.
//!
//! Over `F_Q` with `Q = q^ord` (so that `f_d e_d'` divides `Q - 1`), with `chi`
//! of order `f_d` and `psi` of order `e_d'` sending the field generator to
//! `zeta_{f_d}` and `zeta_{e_d'}`:
//!
//! `Z_(u,v) = -chi^u(-delta/gamma) psi^v(delta) J(chi^u, psi^v)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::ntheory::{checked_pow, mult_order};
use crate::arith::{CyclotomicNumber, EulerFactor, ExactPolynomial};
use crate::curve::{Component, Unit, WeilCurve};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, JacobiCounts, ResidueTable};
use crate::limits::Limits;
use crate::matrix::{charpoly_gpm, GeneralizedPermutationMatrix};

/// Cycles of `rho(b) = q^-1 b`, each listed from its smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusPermutation {
    pub ord: u64,
    pub cycles: Vec<Vec<Unit>>,
}

impl FrobeniusPermutation {
    pub fn representatives(&self) -> Vec<Unit> {
        self.cycles.iter().map(|c| c[0]).collect()
    }
}

/// Multiplicative order of `q` modulo `f_d e_d'`.
pub fn frobenius_order(component: &Component, q: u64) -> Result<u64> {
    let level = component.level() as u64;
    mult_order(q % level, level).ok_or(Error::RamifiedPrime {
        p: q,
        modulus: level,
    })
}

pub fn frobenius_permutation(component: &Component, q: u64) -> Result<FrobeniusPermutation> {
    let ord = frobenius_order(component, q)?;
    let level = component.level() as u64;
    let qinv = crate::arith::ntheory::inv_mod(q % level, level).expect("q is a unit");
    let units = component.units();
    let mut seen = vec![false; units.len()];
    let mut cycles = Vec::new();
    for (start, &b0) in units.iter().enumerate() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::with_capacity(ord as usize);
        let mut b = b0;
        loop {
            let pos = component
                .position(b)
                .expect("units are closed under scaling");
            if seen[pos] {
                break;
            }
            seen[pos] = true;
            cyc.push(b);
            b = component.scale(qinv, b);
        }
        cycles.push(cyc);
    }
    Ok(FrobeniusPermutation { ord, cycles })
}

/// Frobenius data for one component over `F_q`, `q = p^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub component: Component,
    pub p: u64,
    pub r: u32,
    pub permutation: FrobeniusPermutation,
    /// `Z_b` keyed by cycle representative.
    pub zvalues: BTreeMap<Unit, CyclotomicNumber>,
}

impl FrobeniusData {
    pub fn q(&self) -> u64 {
        checked_pow(self.p, self.r).expect("validated at construction")
    }

    pub fn ord(&self) -> u64 {
        self.permutation.ord
    }

    pub fn cycles(&self) -> &[Vec<Unit>] {
        &self.permutation.cycles
    }

    /// Size of the field the Jacobi sums were taken over.
    pub fn extension_size(&self) -> u128 {
        (self.q() as u128).pow(self.ord() as u32)
    }

    /// Representative of the cycle containing `b`.
    pub fn representative(&self, b: Unit) -> Unit {
        self.permutation
            .cycles
            .iter()
            .find(|c| c.contains(&b))
            .map(|c| c[0])
            .expect("every unit lies on a cycle")
    }

    /// `Z` of the cycle containing `b`.
    pub fn z(&self, b: Unit) -> &CyclotomicNumber {
        &self.zvalues[&self.representative(b)]
    }

    /// `(cycle length, Z)` in cycle order.
    pub fn cycle_products(&self) -> Vec<(usize, CyclotomicNumber)> {
        self.permutation
            .cycles
            .iter()
            .map(|c| (c.len(), self.zvalues[&c[0]].clone()))
            .collect()
    }

    /// `prod (T^ord - Z_b)`.
    pub fn charpoly(&self) -> ExactPolynomial {
        charpoly_gpm(&self.cycle_products())
    }

    /// `prod (1 - Z_b X^ord)` in `X = q^-s`.
    pub fn abelian_euler_factor(&self) -> EulerFactor {
        let ord = self.ord() as usize;
        let poly = self
            .permutation
            .cycles
            .iter()
            .map(|c| ExactPolynomial::one_minus(&self.zvalues[&c[0]], ord))
            .fold(ExactPolynomial::one(1), |acc, f| &acc * &f);
        EulerFactor::new(self.q(), poly)
    }

    /// The diagonal Frobenius matrix, available when `q = 1 mod f_d e_d'`.
    pub fn entrywise_matrix(&self) -> Result<GeneralizedPermutationMatrix> {
        if self.ord() != 1 {
            return Err(Error::NotSplit {
                q: self.q(),
                ord: self.ord(),
            });
        }
        let units = self.component.units();
        let entries = units.iter().map(|b| self.zvalues[b].clone()).collect();
        Ok(GeneralizedPermutationMatrix::new(
            (0..units.len()).collect(),
            entries,
        ))
    }

    /// Rebuild from stored cycle values (e.g. a cache), re-checking every invariant.
    pub fn from_parts(
        component: Component,
        p: u64,
        r: u32,
        zvalues: BTreeMap<Unit, CyclotomicNumber>,
    ) -> Result<Self> {
        let q = checked_pow(p, r).ok_or_else(|| Error::InconsistentInput("q overflows".into()))?;
        let permutation = frobenius_permutation(&component, q)?;
        let reps = permutation.representatives();
        if zvalues.len() != reps.len() || reps.iter().any(|b| !zvalues.contains_key(b)) {
            return Err(Error::InconsistentInput(
                "stored cycle values do not match the cycle representatives".into(),
            ));
        }
        let data = FrobeniusData {
            component,
            p,
            r,
            permutation,
            zvalues,
        };
        data.check_invariants()?;
        Ok(data)
    }

    /// `|Z_b|^2 = q^ord` and `Z_{-b} = conj(Z_b)`.
    pub fn check_invariants(&self) -> Result<()> {
        let level = self.component.level();
        let norm = CyclotomicNumber::from_bigint(
            level,
            num_traits::pow(num_bigint::BigInt::from(self.q()), self.ord() as usize),
        );
        for (b, z) in &self.zvalues {
            if z.norm_sq() != norm {
                return Err(Error::InvariantViolation(format!(
                    "|Z_{b:?}|^2 = {} differs from q^ord = {}",
                    z.norm_sq(),
                    norm
                )));
            }
            let nb = self.component.neg(*b);
            if *self.z(nb) != z.conjugate() {
                return Err(Error::InvariantViolation(format!(
                    "Z_{nb:?} is not the conjugate of Z_{b:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Cycle values for `component` at `q = p^r`, with the default field normalization.
pub fn cycle_values(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    r: u32,
    limits: &Limits,
) -> Result<FrobeniusData> {
    cycle_values_with_generator(curve, component, p, r, limits, 0)
}

/// As [`cycle_values`], choosing the `rank`-th smallest generator of `F_Q`.
pub fn cycle_values_with_generator(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    r: u32,
    limits: &Limits,
    rank: usize,
) -> Result<FrobeniusData> {
    let (gamma, delta) = curve.reduce(p)?;
    if r == 0 {
        return Err(Error::InconsistentInput("r must be positive".into()));
    }
    let q = checked_pow(p, r).ok_or(Error::FieldTooLarge {
        p,
        r,
        bound: limits.field_bound,
    })?;
    let permutation = frobenius_permutation(component, q)?;
    let ord = permutation.ord as u32;
    let field = Arc::new(FieldSpec::build_with_generator_rank(
        p,
        r * ord,
        limits.field_bound,
        rank,
    )?);
    let (fd, edp) = (component.f_d as u64, component.e_dp as u64);
    let level = component.level();
    let table = ResidueTable::build(&field, level)?;
    let counts = JacobiCounts::from_table(&field, &table, fd, edp)?;

    // -delta/gamma and delta live in the prime field, whose encodings are themselves.
    let ratio =
        (p - delta) % p * crate::arith::ntheory::inv_mod(gamma, p).expect("gamma is a unit") % p;
    let res_ratio = table.get(ratio).expect("nonzero") as u64;
    let res_delta = table.get(delta).expect("nonzero") as u64;

    let mut zvalues = BTreeMap::new();
    for b in permutation.representatives() {
        let (u, v) = (b.0 as u64, b.1 as u64);
        // chi^u(ratio) psi^v(delta) = zeta_L^(u * res * e_d' + v * res * f_d)
        let k = (u * (res_ratio % fd) % fd * edp + v * (res_delta % edp) % edp * fd) as i64;
        let twist = CyclotomicNumber::root_of_unity(level, k);
        let j = counts.sum(u as i64, v as i64);
        zvalues.insert(b, -(&twist * &j));
    }
    let data = FrobeniusData {
        component: component.clone(),
        p,
        r,
        permutation,
        zvalues,
    };
    data.check_invariants()?;
    Ok(data)
}

/// `prod (1 - Z_b X^ord)` at `q = p`.
pub fn abelian_euler_factor(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    limits: &Limits,
) -> Result<EulerFactor> {
    Ok(cycle_values(curve, component, p, 1, limits)?.abelian_euler_factor())
}

/// Diagonal Frobenius matrix at `q = p`; errors unless `p = 1 mod f_d e_d'`.
pub fn entrywise_matrix(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    limits: &Limits,
) -> Result<GeneralizedPermutationMatrix> {
    let ord = frobenius_order(component, p)?;
    if ord != 1 {
        return Err(Error::NotSplit { q: p, ord });
    }
    cycle_values(curve, component, p, 1, limits)?.entrywise_matrix()
}
