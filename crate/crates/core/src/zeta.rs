//! Zeta numerators from point counts, and the check that the cycle products
//! of all components reproduce them.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::newton::{elementary_from_power_sums, power_sums};
use crate::arith::ntheory::checked_pow;
use crate::arith::{charpoly_from_power_sums, ExactPolynomial};
use crate::curve::{Component, WeilCurve};
use crate::error::{Error, Result};
use crate::field::{count_affine_points, FieldSpec};
use crate::frobenius::{cycle_values, FrobeniusData};
use crate::limits::Limits;

/// Projective count: the affine points plus the single point at infinity.
pub fn smooth_point_count(curve: &WeilCurve, field: &FieldSpec) -> Result<u64> {
    Ok(count_affine_points(curve, field)? + 1)
}

/// Degree-`2g` characteristic polynomial of Frobenius on `H^1` over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaNumerator {
    pub q: u64,
    pub poly: ExactPolynomial,
}

impl ZetaNumerator {
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.poly
            .integer_coeffs()
            .expect("zeta numerators are integral")
    }

    /// Numerical moduli of the roots, by Durand-Kerner iteration. Diagnostic only.
    pub fn root_moduli(&self) -> Vec<f64> {
        let coeffs: Vec<f64> = self
            .integer_coeffs()
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        polynomial_roots(&coeffs)
            .into_iter()
            .map(|z| z.norm())
            .collect()
    }
}

/// Complex roots of a monic real polynomial (coefficients low degree first).
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let scale = coeffs
        .iter()
        .map(|c| c.abs())
        .fold(1.0f64, f64::max)
        .powf(1.0 / n as f64);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * scale).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = horner(coeffs, roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * scale {
            break;
        }
    }
    // A root of multiplicity m only converges to about eps^(1/m). It is a simple
    // root of the (m-1)-th derivative, so the cluster centroid is polished there.
    let radius = 1e-3 * scale;
    let mut out = roots.clone();
    for (i, &z) in roots.iter().enumerate() {
        let cluster: Vec<Complex64> = roots
            .iter()
            .copied()
            .filter(|w| (w - z).norm() < radius)
            .collect();
        let mut x = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
        let d = derivative(coeffs, cluster.len() - 1);
        let dd = derivative(&d, 1);
        for _ in 0..50 {
            let slope = horner(&dd, x);
            if slope.norm() == 0.0 {
                break;
            }
            let step = horner(&d, x) / slope;
            x -= step;
            if step.norm() <= 1e-16 * scale {
                break;
            }
        }
        out[i] = x;
    }
    out
}

fn derivative(coeffs: &[f64], times: usize) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    for _ in 0..times {
        c = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &a)| a * k as f64)
            .collect();
    }
    c
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * z + c)
}

/// Projective counts `N_k` over `F_{q^k}`, `q = p^r`, for `k = 1..g`.
pub fn point_counts(curve: &WeilCurve, p: u64, r: u32, limits: &Limits) -> Result<Vec<u64>> {
    curve.reduce(p)?;
    let g = curve.genus();
    let top = r * g;
    match checked_pow(p, top) {
        Some(size) if size <= limits.field_bound => {}
        _ => {
            return Err(Error::FieldTooLarge {
                p,
                r: top,
                bound: limits.field_bound,
            })
        }
    }
    (1..=g)
        .into_par_iter()
        .map(|k| {
            let field = FieldSpec::build(p, r * k, limits.field_bound)?;
            smooth_point_count(curve, &field)
        })
        .collect()
}

/// Zeta numerator over `F_q` from the counts `N_1..N_g` and the functional equation.
pub fn zeta_from_counts(curve: &WeilCurve, q: u64, counts: &[u64]) -> Result<ZetaNumerator> {
    let g = curve.genus() as usize;
    if counts.len() != g {
        return Err(Error::InconsistentInput(format!(
            "expected {g} point counts, got {}",
            counts.len()
        )));
    }
    let mut s = Vec::with_capacity(g);
    for (k, &n) in counts.iter().enumerate() {
        let qk = BigInt::from(q).pow(k as u32 + 1);
        let trace = &qk + 1 - BigInt::from(n);
        // Hasse-Weil: trace^2 <= 4 g^2 q^k
        if &trace * &trace > BigInt::from(4 * g * g) * &qk {
            return Err(Error::InvariantViolation(format!(
                "count {n} over F_{{{q}^{}}} violates the Hasse-Weil bound",
                k + 1
            )));
        }
        s.push(trace);
    }
    let poly = charpoly_from_power_sums(q, g, &s)?;
    Ok(ZetaNumerator { q, poly })
}

/// Zeta numerator over `F_{p^r}` from counts over `F_{q^k}`, `k = 1..g`, and the
/// functional equation.
pub fn zeta_numerator(curve: &WeilCurve, p: u64, r: u32, limits: &Limits) -> Result<ZetaNumerator> {
    let q = checked_pow(p, r).ok_or(Error::FieldTooLarge {
        p,
        r,
        bound: limits.field_bound,
    })?;
    let counts = point_counts(curve, p, r, limits)?;
    zeta_from_counts(curve, q, &counts)
}

/// The degree-`2g` polynomial whose roots are the `r`-th powers of the roots of `zeta`.
pub fn power_transport(zeta: &ZetaNumerator, r: u32) -> Result<ZetaNumerator> {
    let coeffs = zeta.integer_coeffs();
    let deg = coeffs.len() - 1;
    let s = power_sums(&coeffs, deg * r as usize);
    let transported: Vec<BigInt> = (1..=deg).map(|k| s[k * r as usize - 1].clone()).collect();
    let e = elementary_from_power_sums(&transported)?;
    let ascending: Vec<BigInt> = (0..=deg)
        .map(|d| {
            let k = deg - d;
            if k % 2 == 1 {
                -e[k].clone()
            } else {
                e[k].clone()
            }
        })
        .collect();
    Ok(ZetaNumerator {
        q: checked_pow(zeta.q, r)
            .ok_or_else(|| Error::InconsistentInput("q^r overflows".into()))?,
        poly: ExactPolynomial::from_bigints(&ascending),
    })
}

/// Outcome of comparing the cycle-product factorization with the point-count oracle.
#[derive(Clone, Debug)]
pub struct ZetaReport {
    pub p: u64,
    pub oracle: ZetaNumerator,
    /// Per-component `prod (T^ord - Z_b)`, rationalized when possible.
    pub factors: Vec<(Component, ExactPolynomial)>,
    pub product: ExactPolynomial,
    pub passed: bool,
}

impl ZetaReport {
    /// Human-readable comparison, for mismatch reports.
    pub fn diff(&self) -> String {
        let mut out = format!(
            "point count: {}\ncycle products: {}\n",
            self.oracle.poly, self.product
        );
        for (c, f) in &self.factors {
            out.push_str(&format!("  component ({},{}): {}\n", c.d, c.dprime, f));
        }
        out
    }
}

/// Compare `prod_components prod_cycles (T^ord - Z_b)` with the zeta numerator at `p`.
pub fn verify_zeta_factorization(curve: &WeilCurve, p: u64, limits: &Limits) -> Result<ZetaReport> {
    let data: Vec<FrobeniusData> = curve
        .components()
        .iter()
        .map(|c| cycle_values(curve, c, p, 1, limits))
        .collect::<Result<_>>()?;
    verify_with_data(curve, p, &data, limits)
}

/// As [`verify_zeta_factorization`], reusing precomputed cycle values.
pub fn verify_with_data(
    curve: &WeilCurve,
    p: u64,
    data: &[FrobeniusData],
    limits: &Limits,
) -> Result<ZetaReport> {
    let oracle = zeta_numerator(curve, p, 1, limits)?;
    Ok(compare_factorization(p, oracle, data))
}

/// Compare precomputed cycle values with a precomputed zeta numerator.
pub fn compare_factorization(p: u64, oracle: ZetaNumerator, data: &[FrobeniusData]) -> ZetaReport {
    let factors: Vec<(Component, ExactPolynomial)> = data
        .iter()
        .map(|d| (d.component.clone(), d.charpoly().rationalized()))
        .collect();
    let product = factors
        .iter()
        .fold(ExactPolynomial::one(1), |acc, (_, f)| &acc * f)
        .rationalized();
    let passed = product == oracle.poly;
    ZetaReport {
        p,
        oracle,
        factors,
        product,
        passed,
    }
}
