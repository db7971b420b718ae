//! The motive cut out of `H^*(C^n)` by the group
//! `G = {(u, v) : sum eps_k u_k = 0 mod f, sum eps_k v_k = 0 mod e}`,
//! `eps_k = +1` for `k <= a` and `-1` otherwise, acting factorwise through
//! `psi_f^u_k psi_e^v_k`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::arith::{CyclotomicNumber, EulerFactor, ExactPolynomial};
use crate::curve::{Component, HodgeLabel, Unit, WeilCurve};
use crate::error::{Error, Result};
use crate::frobenius::{cycle_values, FrobeniusData};
use crate::limits::Limits;
use crate::matrix::GeneralizedPermutationMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MotiveParams {
    n: u32,
    a: u32,
}

impl MotiveParams {
    /// Requires `n >= 1` and `n/2 < a <= n`.
    pub fn new(n: u32, a: u32) -> Result<Self> {
        if n == 0 || a > n || 2 * a <= n {
            return Err(Error::InvalidParams { n, a });
        }
        Ok(MotiveParams { n, a })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// `eps_k` for `k` in `1..=n`.
    pub fn sign(&self, k: u32) -> i64 {
        if k <= self.a {
            1
        } else {
            -1
        }
    }
}

/// One tensor factor of a monomial class in `H^*(C)^{(x) n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// The unit class in `H^0`.
    Unit,
    /// The class of `omega_{i,j}` in `H^1`.
    Form(u32, u32),
    /// The fundamental class in `H^2`.
    Fund,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialClass {
    pub factors: Vec<Factor>,
}

impl MonomialClass {
    pub fn degree(&self) -> u32 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Unit => 0,
                Factor::Form(..) => 1,
                Factor::Fund => 2,
            })
            .sum()
    }

    pub fn hodge_type(&self, curve: &WeilCurve) -> (u32, u32) {
        self.factors.iter().fold((0, 0), |(p, q), f| match f {
            Factor::Unit => (p, q),
            Factor::Fund => (p + 1, q + 1),
            Factor::Form(i, j) => match curve.hodge_label(*i, *j) {
                HodgeLabel::Holomorphic => (p + 1, q),
                HodgeLabel::Antiholomorphic => (p, q + 1),
            },
        })
    }

    /// Every factor is `Unit` or `Fund`.
    pub fn is_algebraic_type(&self) -> bool {
        self.factors.iter().all(|f| !matches!(f, Factor::Form(..)))
    }
}

impl fmt::Display for MonomialClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x {
                Factor::Unit => "1".to_string(),
                Factor::Form(i, j) => format!("w({i},{j})"),
                Factor::Fund => "Omega".to_string(),
            })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

/// Which automorphism a generator acts through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorPart {
    F,
    E,
}

/// A generator of `G`: exponents `u_1..u_n` (for `psi_f`) or `v_1..v_n` (for `psi_e`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupGenerator {
    pub part: GeneratorPart,
    pub exponents: Vec<i64>,
}

/// `2(n-1)` generators: for each `k` in `2..=n`, `u_k = 1`, `u_1 = -eps_1 eps_k`,
/// once for the `f`-part and once for the `e`-part.
pub fn group_generators(curve: &WeilCurve, params: &MotiveParams) -> Vec<GroupGenerator> {
    let n = params.n as usize;
    let mut out = Vec::with_capacity(2 * n.saturating_sub(1));
    for (part, modulus) in [
        (GeneratorPart::F, curve.f() as i64),
        (GeneratorPart::E, curve.e() as i64),
    ] {
        for k in 2..=params.n {
            let mut exps = vec![0i64; n];
            exps[k as usize - 1] = 1;
            exps[0] = (-params.sign(1) * params.sign(k)).rem_euclid(modulus);
            out.push(GroupGenerator {
                part,
                exponents: exps,
            });
        }
    }
    out
}

/// Order of the subgroup of `(Z/f)^n x (Z/e)^n` generated by the generators,
/// by closure. Only for small cases.
pub fn generated_group_order(
    curve: &WeilCurve,
    params: &MotiveParams,
    gens: &[GroupGenerator],
) -> u64 {
    let n = params.n as usize;
    let (f, e) = (curve.f() as i64, curve.e() as i64);
    let mut seen = std::collections::HashSet::new();
    let start = vec![0i64; 2 * n];
    let mut stack = vec![start.clone()];
    seen.insert(start);
    while let Some(x) = stack.pop() {
        for g in gens {
            let mut y = x.clone();
            for k in 0..n {
                match g.part {
                    GeneratorPart::F => y[k] = (y[k] + g.exponents[k]).rem_euclid(f),
                    GeneratorPart::E => y[n + k] = (y[n + k] + g.exponents[k]).rem_euclid(e),
                }
            }
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.len() as u64
}

/// True when every generator satisfies the defining congruence of `G`.
pub fn generators_in_group(
    curve: &WeilCurve,
    params: &MotiveParams,
    gens: &[GroupGenerator],
) -> bool {
    gens.iter().all(|g| {
        let modulus = match g.part {
            GeneratorPart::F => curve.f() as i64,
            GeneratorPart::E => curve.e() as i64,
        };
        let s: i64 = g
            .exponents
            .iter()
            .enumerate()
            .map(|(k, u)| params.sign(k as u32 + 1) * u)
            .sum();
        s.rem_euclid(modulus) == 0
    })
}

/// Exponent `mu` (mod `f`) or `nu` (mod `e`) with weight `zeta_f^mu` or `zeta_e^nu`.
fn weight_exponent(curve: &WeilCurve, m: &[Factor], g: &GroupGenerator) -> i64 {
    let mut acc = 0i64;
    for (k, factor) in m.iter().enumerate() {
        if let Factor::Form(i, j) = factor {
            match g.part {
                GeneratorPart::F => acc += *i as i64 * g.exponents[k],
                GeneratorPart::E => acc -= *j as i64 * g.exponents[k],
            }
        }
    }
    match g.part {
        GeneratorPart::F => acc.rem_euclid(curve.f() as i64),
        GeneratorPart::E => acc.rem_euclid(curve.e() as i64),
    }
}

/// The scalar by which `g` acts on the monomial, a root of unity.
pub fn monomial_weight(
    curve: &WeilCurve,
    m: &MonomialClass,
    g: &GroupGenerator,
) -> CyclotomicNumber {
    let k = weight_exponent(curve, &m.factors, g);
    match g.part {
        GeneratorPart::F => CyclotomicNumber::root_of_unity(curve.f(), k),
        GeneratorPart::E => CyclotomicNumber::root_of_unity(curve.e(), k),
    }
}

/// Per-factor choices in enumeration order: unit, forms by `(i, j)`, fundamental class.
fn factor_choices(curve: &WeilCurve) -> Vec<Factor> {
    let mut v = vec![Factor::Unit];
    v.extend(
        curve
            .differential_indices()
            .into_iter()
            .map(|x| Factor::Form(x.i, x.j)),
    );
    v.push(Factor::Fund);
    v
}

/// All monomials fixed by every generator, by exhaustive enumeration of the
/// `(2g+2)^n` monomials in mixed-radix order.
pub fn invariant_classes(
    curve: &WeilCurve,
    params: &MotiveParams,
    limits: &Limits,
) -> Result<Vec<MonomialClass>> {
    let choices = factor_choices(curve);
    let base = choices.len() as u128;
    let total = base.pow(params.n);
    if total > limits.monomial_bound as u128 {
        return Err(Error::EnumerationTooLarge {
            required: total,
            bound: limits.monomial_bound,
        });
    }
    let gens = group_generators(curve, params);
    let n = params.n as usize;
    let prefix_len = n.min(2);
    let prefixes = base.pow(prefix_len as u32) as u64;
    let suffix = (total / prefixes as u128) as u64;
    let out: Vec<Vec<MonomialClass>> = (0..prefixes)
        .into_par_iter()
        .map(|prefix| {
            let mut found = Vec::new();
            let mut m = vec![Factor::Unit; n];
            for rest in 0..suffix {
                // most significant digit first: prefix digits, then the rest
                let mut code = prefix as u128 * suffix as u128 + rest as u128;
                for slot in m.iter_mut().rev() {
                    *slot = choices[(code % base) as usize];
                    code /= base;
                }
                if gens.iter().all(|g| weight_exponent(curve, &m, g) == 0) {
                    found.push(MonomialClass { factors: m.clone() });
                }
            }
            found
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// `Sigma_{i,j}`: `omega_{i,j}` in factors `1..=a`, `omega_{f-i,e-j}` in `a+1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaClass {
    pub component: (u32, u32),
    pub index: (u32, u32),
    pub monomial: MonomialClass,
}

impl SigmaClass {
    pub fn hodge_type(&self, curve: &WeilCurve) -> (u32, u32) {
        self.monomial.hodge_type(curve)
    }
}

pub fn sigma_class(
    curve: &WeilCurve,
    component: &Component,
    params: &MotiveParams,
    i: u32,
    j: u32,
) -> SigmaClass {
    let (ci, cj) = (curve.f() - i, curve.e() - j);
    let factors = (1..=params.n)
        .map(|k| {
            if k <= params.a {
                Factor::Form(i, j)
            } else {
                Factor::Form(ci, cj)
            }
        })
        .collect();
    SigmaClass {
        component: (component.d, component.dprime),
        index: (i, j),
        monomial: MonomialClass { factors },
    }
}

/// The basis `{Sigma_{i,j} : (i,j) in I_{d,d'}}` in unit order.
pub fn sigma_basis(
    curve: &WeilCurve,
    component: &Component,
    params: &MotiveParams,
) -> Vec<SigmaClass> {
    component
        .index_set()
        .into_iter()
        .map(|(i, j)| sigma_class(curve, component, params, i, j))
        .collect()
}

/// How the enumerated invariants split up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPartition {
    /// Count of square-free fundamental-class monomials by degree `p` (number of `Omega` factors).
    pub algebraic_by_degree: Vec<u64>,
    /// Count of Sigma classes found per component `(d, d')`.
    pub sigma_by_component: BTreeMap<(u32, u32), u64>,
}

/// Check that `classes` is exactly the square-free fundamental monomials plus
/// all Sigma classes, and report the split.
pub fn partition_invariants(
    curve: &WeilCurve,
    params: &MotiveParams,
    classes: &[MonomialClass],
) -> Result<InvariantPartition> {
    let mut expected: BTreeMap<MonomialClass, Option<(u32, u32)>> = BTreeMap::new();
    let n = params.n as usize;
    for mask in 0u64..(1 << n) {
        let factors = (0..n)
            .map(|k| {
                if mask >> (n - 1 - k) & 1 == 1 {
                    Factor::Fund
                } else {
                    Factor::Unit
                }
            })
            .collect();
        expected.insert(MonomialClass { factors }, None);
    }
    for comp in curve.components() {
        for s in sigma_basis(curve, &comp, params) {
            expected.insert(s.monomial, Some(s.component));
        }
    }
    let got: std::collections::BTreeSet<&MonomialClass> = classes.iter().collect();
    if got.len() != classes.len() {
        return Err(Error::InvariantViolation(
            "duplicate invariant classes".into(),
        ));
    }
    if let Some(extra) = classes.iter().find(|c| !expected.contains_key(c)) {
        return Err(Error::InvariantViolation(format!(
            "unexpected invariant class {extra}"
        )));
    }
    if let Some((missing, _)) = expected.iter().find(|(c, _)| !got.contains(c)) {
        return Err(Error::InvariantViolation(format!(
            "missing invariant class {missing}"
        )));
    }
    let mut algebraic_by_degree = vec![0u64; n + 1];
    let mut sigma_by_component = BTreeMap::new();
    for c in classes {
        match expected[c] {
            None => algebraic_by_degree[c.degree() as usize / 2] += 1,
            Some(k) => *sigma_by_component.entry(k).or_insert(0) += 1,
        }
    }
    Ok(InvariantPartition {
        algebraic_by_degree,
        sigma_by_component,
    })
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Predicted Hodge numbers of the invariant part: `h^{p,p} = C(n,p)`,
/// `h^{a,n-a} = h^{n-a,a} = g`.
pub fn hodge_numbers(curve: &WeilCurve, params: &MotiveParams) -> BTreeMap<(u32, u32), u64> {
    let mut h = BTreeMap::new();
    for p in 0..=params.n {
        *h.entry((p, p)).or_insert(0) += binomial(params.n as u64, p as u64);
    }
    let g = curve.genus() as u64;
    let (a, b) = (params.a, params.n - params.a);
    *h.entry((a, b)).or_insert(0) += g;
    *h.entry((b, a)).or_insert(0) += g;
    h
}

/// `h^{a,n-a}` of the piece belonging to one component, i.e. `g_{d,d'}`.
pub fn component_hodge_number(component: &Component) -> u64 {
    component.dim() as u64
}

/// Hodge numbers read off a list of classes.
pub fn hodge_numbers_of(curve: &WeilCurve, classes: &[MonomialClass]) -> BTreeMap<(u32, u32), u64> {
    let mut h = BTreeMap::new();
    for c in classes {
        *h.entry(c.hodge_type(curve)).or_insert(0) += 1;
    }
    h
}

/// `prod over cycles (1 - Z_b^a Z_{-b}^{n-a} X^ord)`.
pub fn motive_factor_from_data(data: &FrobeniusData, params: &MotiveParams) -> EulerFactor {
    let ord = data.ord() as usize;
    let poly = data
        .cycles()
        .iter()
        .map(|c| {
            let b = c[0];
            let w = cycle_weight(data, params, b);
            ExactPolynomial::one_minus(&w, ord)
        })
        .fold(ExactPolynomial::one(1), |acc, f| &acc * &f);
    EulerFactor::new(data.q(), poly)
}

/// `Z_b^a Z_{-b}^{n-a}`.
fn cycle_weight(data: &FrobeniusData, params: &MotiveParams, b: Unit) -> CyclotomicNumber {
    let nb = data.component.neg(b);
    &data.z(b).pow(params.a) * &data.z(nb).pow(params.n - params.a)
}

pub fn motive_euler_factor(
    curve: &WeilCurve,
    component: &Component,
    p: u64,
    params: &MotiveParams,
    limits: &Limits,
) -> Result<EulerFactor> {
    let data = cycle_values(curve, component, p, 1, limits)?;
    Ok(motive_factor_from_data(&data, params))
}

/// The Frobenius matrix on the Sigma basis: column `t` carries
/// `entry_t^a entry_{-t}^{n-a}` in row `rho^-1(t)`, where `entry` is `Z_b` on
/// each cycle representative and 1 elsewhere.
pub fn motive_frobenius_matrix(
    data: &FrobeniusData,
    params: &MotiveParams,
) -> GeneralizedPermutationMatrix {
    let comp = &data.component;
    let units = comp.units();
    let level = comp.level();
    let reps: BTreeMap<Unit, &CyclotomicNumber> =
        data.zvalues.iter().map(|(b, z)| (*b, z)).collect();
    let entry = |t: Unit| -> CyclotomicNumber {
        reps.get(&t)
            .map(|z| (*z).clone())
            .unwrap_or_else(|| CyclotomicNumber::one(level))
    };
    // rho(t) = q^-1 t, so rho^-1(t) = q t
    let q = data.q();
    let mut rows = Vec::with_capacity(units.len());
    let mut entries = Vec::with_capacity(units.len());
    for &t in units {
        let row = comp
            .position(comp.scale(q, t))
            .expect("units closed under scaling");
        rows.push(row);
        let value = &entry(t).pow(params.a) * &entry(comp.neg(t)).pow(params.n - params.a);
        entries.push(value);
    }
    GeneralizedPermutationMatrix::new(rows, entries)
}

/// Characteristic polynomial of [`motive_frobenius_matrix`] by generic expansion.
pub fn motive_frobenius_oracle(data: &FrobeniusData, params: &MotiveParams) -> ExactPolynomial {
    motive_frobenius_matrix(data, params).to_dense().charpoly()
}

/// Product over all components of the motive factor at `p`.
pub fn full_motive_factor(
    curve: &WeilCurve,
    p: u64,
    params: &MotiveParams,
    limits: &Limits,
) -> Result<EulerFactor> {
    let mut acc = EulerFactor::new(p, ExactPolynomial::one(1));
    for comp in curve.components() {
        acc = acc.mul(&motive_euler_factor(curve, &comp, p, params, limits)?);
    }
    Ok(acc)
}
