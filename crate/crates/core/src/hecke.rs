//! The Hecke-character side. Primes of `K_{d,d'}` above `p` are the cosets of
//! `<p>` in the unit group, and `lambda` at such a prime is the diagonal
//! Frobenius eigenvalue over the residue field `F_{p^ord}`.

use crate::arith::ntheory::{gcd, mult_order};
use crate::arith::{CyclotomicNumber, EulerFactor, ExactPolynomial};
use crate::curve::{Component, Unit, WeilCurve};
use crate::error::{Error, Result};
use crate::frobenius::{cycle_values, FrobeniusData};
use crate::limits::Limits;
use crate::motive::{motive_factor_from_data, motive_frobenius_oracle, MotiveParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeAbove {
    pub component: (u32, u32),
    pub p: u64,
    /// The coset of `<p>`, sorted.
    pub coset: Vec<Unit>,
    pub degree: u64,
    pub representative: Unit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeValue {
    pub prime: PrimeAbove,
    /// `lambda^a conj(lambda)^(n-a)` at the prime.
    pub value: CyclotomicNumber,
}

/// Coset decomposition of the unit group by `<p>`, in order of smallest element.
pub fn primes_above(component: &Component, p: u64) -> Result<Vec<PrimeAbove>> {
    let level = component.level() as u64;
    if gcd(p, level) != 1 {
        return Err(Error::RamifiedPrime { p, modulus: level });
    }
    let degree = mult_order(p % level, level).expect("p is a unit");
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for &b in component.units() {
        if seen.contains(&b) {
            continue;
        }
        let mut coset = Vec::with_capacity(degree as usize);
        let mut x = b;
        for _ in 0..degree {
            seen.insert(x);
            coset.push(x);
            x = component.scale(p, x);
        }
        coset.sort_unstable();
        out.push(PrimeAbove {
            component: (component.d, component.dprime),
            p,
            representative: coset[0],
            coset,
            degree,
        });
    }
    Ok(out)
}

/// Values `W_b` over `F_{p^ord}`, where Frobenius is diagonal.
pub fn residue_field_values(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    limits: &Limits,
) -> Result<FrobeniusData> {
    let level = component.level() as u64;
    if gcd(p, level) != 1 {
        return Err(Error::RamifiedPrime { p, modulus: level });
    }
    let ord = mult_order(p % level, level).expect("p is a unit") as u32;
    let w = cycle_values(curve, component, p, ord, limits)?;
    debug_assert_eq!(w.ord(), 1);
    Ok(w)
}

fn value_from(w: &FrobeniusData, b: Unit, params: &MotiveParams) -> CyclotomicNumber {
    let nb = w.component.neg(b);
    &w.z(b).pow(params.a()) * &w.z(nb).pow(params.n() - params.a())
}

pub fn hecke_value(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    prime: &PrimeAbove,
    params: &MotiveParams,
    limits: &Limits,
) -> Result<HeckeValue> {
    let w = residue_field_values(curve, component, p, limits)?;
    Ok(HeckeValue {
        prime: prime.clone(),
        value: value_from(&w, prime.representative, params),
    })
}

/// `prod over primes (1 - value X^degree)` from precomputed residue-field values.
pub fn hecke_factor_from_values(
    w: &FrobeniusData,
    primes: &[PrimeAbove],
    params: &MotiveParams,
) -> EulerFactor {
    let poly = primes
        .iter()
        .map(|pr| {
            ExactPolynomial::one_minus(
                &value_from(w, pr.representative, params),
                pr.degree as usize,
            )
        })
        .fold(ExactPolynomial::one(1), |acc, f| &acc * &f);
    EulerFactor::new(w.p, poly)
}

pub fn hecke_euler_factor(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    params: &MotiveParams,
    limits: &Limits,
) -> Result<EulerFactor> {
    let primes = primes_above(component, p)?;
    let w = residue_field_values(curve, component, p, limits)?;
    Ok(hecke_factor_from_values(&w, &primes, params))
}

/// The three routes for one component.
#[derive(Clone, Debug)]
pub struct ComponentComparison {
    pub component: (u32, u32),
    pub motive: EulerFactor,
    pub hecke: EulerFactor,
    /// `det(1 - X F)` from the generic expansion of the Sigma-basis matrix.
    pub oracle: ExactPolynomial,
    pub agree: bool,
}

#[derive(Clone, Debug)]
pub struct MainTheoremReport {
    pub p: u64,
    pub params: MotiveParams,
    pub components: Vec<ComponentComparison>,
    pub product: EulerFactor,
    pub passed: bool,
}

impl MainTheoremReport {
    pub fn diff(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            if !c.agree {
                out.push_str(&format!(
                    "component ({},{}) at p = {}:\n  motive: {}\n  hecke:  {}\n  matrix: {}\n",
                    c.component.0,
                    c.component.1,
                    self.p,
                    c.motive,
                    c.hecke,
                    c.oracle.display_ascending("X")
                ));
            }
        }
        out
    }
}

pub fn verify_component(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    params: &MotiveParams,
    limits: &Limits,
) -> Result<ComponentComparison> {
    let data = cycle_values(curve, component, p, 1, limits)?;
    let w = residue_field_values(curve, component, p, limits)?;
    compare_routes(&data, &w, params)
}

/// The three routes from cycle values over `F_p` (`data`) and over the residue
/// field `F_{p^ord}` (`w`).
pub fn compare_routes(
    data: &FrobeniusData,
    w: &FrobeniusData,
    params: &MotiveParams,
) -> Result<ComponentComparison> {
    let component = &data.component;
    if w.component != *component || w.p != data.p || data.r != 1 || w.ord() != 1 {
        return Err(Error::InconsistentInput(
            "route comparison needs data over F_p and over the residue field".into(),
        ));
    }
    let motive = motive_factor_from_data(data, params);
    let oracle = motive_frobenius_oracle(data, params).reversed(2 * component.dim() as usize);
    let primes = primes_above(component, data.p)?;
    let hecke = hecke_factor_from_values(w, &primes, params);
    let agree = motive.poly == hecke.poly && motive.poly == oracle;
    Ok(ComponentComparison {
        component: (component.d, component.dprime),
        motive,
        hecke,
        oracle,
        agree,
    })
}

/// Motive factor, Hecke factor and matrix oracle per component, compared exactly.
pub fn verify_main_theorem(
    curve: &WeilCurve,
    p: u64,
    params: &MotiveParams,
    limits: &Limits,
) -> Result<MainTheoremReport> {
    let components = curve
        .components()
        .iter()
        .map(|c| verify_component(curve, c, p, params, limits))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_report(p, params, components))
}

/// Bundle per-component comparisons into a report.
pub fn assemble_report(
    p: u64,
    params: &MotiveParams,
    components: Vec<ComponentComparison>,
) -> MainTheoremReport {
    let product = components
        .iter()
        .fold(EulerFactor::new(p, ExactPolynomial::one(1)), |acc, c| {
            acc.mul(&c.motive)
        });
    let product = EulerFactor::new(p, product.poly.rationalized());
    let passed = components.iter().all(|c| c.agree);
    MainTheoremReport {
        p,
        params: *params,
        components,
        product,
        passed,
    }
}

/// Outcome of the regrouping check for a base of residue degree `r`.
#[derive(Clone, Debug)]
pub struct GroupingReport {
    pub component: (u32, u32),
    pub p: u64,
    pub r: u32,
    pub q: u64,
    pub ord_p: u64,
    pub ord_q: u64,
    /// `ord_p / ord_q = gcd(r, ord_p)`.
    pub m: u64,
    /// A unit `c` with `Z_b = W_{cb}^(r/m)` for every cycle representative `b`.
    /// `c` absorbs the mismatch between the canonical generators of the two fields.
    pub relabeling: Option<u64>,
    pub values_match: bool,
    /// `L_q(X^r) = prod over zeta in mu_r of L_p(zeta X)`.
    pub polynomial_identity: bool,
    /// `prod over eta in mu_k (1 - eta V X^o) = 1 - V^k X^(o k)` for every coset, `k = r/m`.
    pub root_grouping: bool,
    pub lhs: ExactPolynomial,
    pub rhs: ExactPolynomial,
    pub passed: bool,
}

/// Regrouping check for a synthetic base of residue degree `r`: motive data
/// over `F_q`, `q = p^r`, against Hecke data over `F_{p^ord_p}`.
pub fn verify_grouping_identity(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    r: u32,
    params: &MotiveParams,
    limits: &Limits,
) -> Result<GroupingReport> {
    if r == 0 {
        return Err(Error::InconsistentInput("r must be positive".into()));
    }
    let z = cycle_values(curve, component, p, r, limits)?;
    let w = residue_field_values(curve, component, p, limits)?;
    let primes = primes_above(component, p)?;
    let ord_p = primes[0].degree;
    let ord_q = z.ord();
    let m = gcd(r as u64, ord_p);
    if ord_p != m * ord_q {
        return Err(Error::InvariantViolation(format!(
            "ord_p = {ord_p} is not {m} * ord_q = {}",
            m * ord_q
        )));
    }
    let k = r / m as u32;

    let reps = z.permutation.representatives();
    let level = component.level() as u64;
    let relabeling = (1..level).filter(|&c| gcd(c, level) == 1).find(|&c| {
        reps.iter()
            .all(|&b| *z.z(b) == w.z(component.scale(c, b)).pow(k))
    });
    let values_match = relabeling.is_some();

    let lq = motive_factor_from_data(&z, params).poly;
    let lp = hecke_factor_from_values(&w, &primes, params).poly;
    let lhs = lq.substitute_power(r as usize);
    let rhs = (0..r as i64)
        .map(|t| lp.substitute_scaled(&CyclotomicNumber::root_of_unity(r, t)))
        .fold(ExactPolynomial::one(1), |acc, f| &acc * &f);
    let polynomial_identity = lhs == rhs;

    let root_grouping = primes.iter().all(|pr| {
        let v = value_from(&w, pr.representative, params);
        let o = pr.degree as usize;
        let grouped = (0..k as i64)
            .map(|t| ExactPolynomial::one_minus(&(&CyclotomicNumber::root_of_unity(k, t) * &v), o))
            .fold(ExactPolynomial::one(1), |acc, f| &acc * &f);
        grouped == ExactPolynomial::one_minus(&v.pow(k), o * k as usize)
    });

    Ok(GroupingReport {
        component: (component.d, component.dprime),
        p,
        r,
        q: z.q(),
        ord_p,
        ord_q,
        m,
        relabeling,
        values_match,
        polynomial_identity,
        root_grouping,
        lhs,
        rhs,
        passed: values_match && polynomial_identity && root_grouping,
    })
}
