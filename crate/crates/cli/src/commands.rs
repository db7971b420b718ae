use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use weilmotive::curve::HodgeLabel;
use weilmotive::frobenius::{cycle_values, frobenius_order};
use weilmotive::hecke::{assemble_report, compare_routes, MainTheoremReport};
use weilmotive::lseries::dirichlet_coefficients;
use weilmotive::motive::{
    hodge_numbers_of, motive_factor_from_data, partition_invariants, sigma_basis,
};
use weilmotive::zeta::{compare_factorization, point_counts, zeta_from_counts, ZetaReport};
use weilmotive::{
    hodge_numbers, invariant_classes, verify_grouping_identity, Component, Error, EulerFactor,
    ExactPolynomial, FrobeniusData, Limits, MotiveParams, Result, Unit, WeilCurve, ZetaNumerator,
};

use crate::args::{ComponentSelect, CurveArgs, ParamArgs, PrimeSelect};
use crate::cache::{self, Cache, Kind};
use crate::output::{cyclo_from_json, cyclo_json, int_from_json, int_json, poly_json};

/// What a command produced: the human table, the JSON results, and whether
/// every check it ran passed.
pub struct Outcome {
    pub table: String,
    pub results: Vec<Value>,
    pub extra: Map<String, Value>,
    pub verified: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            table: String::new(),
            results: Vec::new(),
            extra: Map::new(),
            verified: true,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.table.push_str(s.as_ref());
        self.table.push('\n');
    }
}

pub struct Ctx {
    pub curve: WeilCurve,
    pub limits: Limits,
    pub cache: Cache,
}

pub fn build_curve(args: &CurveArgs) -> Result<WeilCurve> {
    WeilCurve::new(args.e, args.f, args.gamma.clone(), args.delta.clone())
}

fn unit_json(b: Unit) -> Value {
    json!([b.0, b.1])
}

fn unit_str(b: Unit) -> String {
    format!("({},{})", b.0, b.1)
}

fn comp_json(c: &Component) -> Value {
    json!([c.d, c.dprime])
}

fn comp_str(c: &Component) -> String {
    format!("({},{})", c.d, c.dprime)
}

fn encode_frobenius(data: &FrobeniusData) -> Value {
    json!({
        "level": data.component.level(),
        "values": data
            .zvalues
            .iter()
            .map(|(b, z)| json!({ "b": unit_json(*b), "z": cyclo_json(z) }))
            .collect::<Vec<_>>(),
    })
}

fn decode_frobenius(component: &Component, p: u64, r: u32, v: &Value) -> Option<FrobeniusData> {
    let mut zvalues = BTreeMap::new();
    for item in v.get("values")?.as_array()? {
        let b = item.get("b")?.as_array()?;
        let b: Unit = (b.first()?.as_u64()? as u32, b.get(1)?.as_u64()? as u32);
        zvalues.insert(b, cyclo_from_json(item.get("z")?)?);
    }
    // from_parts re-derives the cycles and re-checks norms and conjugate pairing
    FrobeniusData::from_parts(component.clone(), p, r, zvalues).ok()
}

impl Ctx {
    pub fn frobenius(&self, component: &Component, p: u64, r: u32) -> Result<FrobeniusData> {
        let key = cache::key(
            &self.curve,
            p,
            r,
            Kind::Jacobi,
            Some((component.d, component.dprime)),
        );
        self.cache.get_or_compute(
            key,
            |v| decode_frobenius(component, p, r, v),
            encode_frobenius,
            || cycle_values(&self.curve, component, p, r, &self.limits),
        )
    }

    /// Cycle values over the residue field `F_{p^ord}`.
    pub fn residue(&self, component: &Component, p: u64) -> Result<FrobeniusData> {
        let ord = frobenius_order(component, p)? as u32;
        self.frobenius(component, p, ord)
    }

    pub fn counts(&self, p: u64) -> Result<Vec<u64>> {
        let key = cache::key(&self.curve, p, 1, Kind::Count, None);
        let g = self.curve.genus() as usize;
        self.cache.get_or_compute(
            key,
            |v| {
                let c: Vec<u64> = v
                    .get("counts")?
                    .as_array()?
                    .iter()
                    .map(Value::as_u64)
                    .collect::<Option<_>>()?;
                (c.len() == g).then_some(c)
            },
            |c| json!({ "counts": c }),
            || point_counts(&self.curve, p, 1, &self.limits),
        )
    }

    pub fn zeta(&self, p: u64) -> Result<ZetaNumerator> {
        let key = cache::key(&self.curve, p, 1, Kind::Zeta, None);
        let g = self.curve.genus() as i64;
        self.cache.get_or_compute(
            key,
            |v| {
                let coeffs: Vec<num_bigint::BigInt> = v
                    .get("coeffs")?
                    .as_array()?
                    .iter()
                    .map(int_from_json)
                    .collect::<Option<_>>()?;
                let poly = ExactPolynomial::from_bigints(&coeffs);
                (poly.degree() == 2 * g && poly.coeff(2 * g as usize).is_one())
                    .then_some(ZetaNumerator { q: p, poly })
            },
            |z| json!({ "coeffs": z.integer_coeffs().iter().map(int_json).collect::<Vec<_>>() }),
            || zeta_from_counts(&self.curve, p, &self.counts(p)?),
        )
    }

    fn components(&self, select: &ComponentSelect) -> Result<Vec<Component>> {
        match (select.d, select.dprime) {
            (Some(d), Some(dp)) => Ok(vec![self.curve.component(d, dp)?]),
            _ => Ok(self.curve.components()),
        }
    }

    fn check_prime(&self, p: u64) -> Result<()> {
        self.curve.reduce(p).map(|_| ())
    }
}

fn rationalized(f: EulerFactor) -> EulerFactor {
    EulerFactor::new(f.q, f.poly.rationalized())
}

fn params(args: &ParamArgs) -> Result<MotiveParams> {
    MotiveParams::new(args.n, args.a)
}

pub fn curve_info(ctx: &Ctx) -> Result<Outcome> {
    let c = &ctx.curve;
    let mut out = Outcome::new();
    out.line(format!("curve: {c}"));
    out.line(format!("genus: {}", c.genus()));
    let comps = c.components();
    out.line(format!("components: {}", comps.len()));
    for comp in &comps {
        out.line(format!(
            "  {}: f/d = {}, e/d' = {}, dimension {}",
            comp_str(comp),
            comp.f_d,
            comp.e_dp,
            comp.dim()
        ));
        out.results.push(json!({
            "component": comp_json(comp),
            "f_d": comp.f_d,
            "e_dp": comp.e_dp,
            "dim": comp.dim(),
            "level": comp.level(),
        }));
    }
    let good = c.good_primes(50);
    out.line(format!(
        "good primes up to 50: {}",
        good.iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    ));
    out.extra.insert("good_primes".into(), json!(good));
    let dims: u32 = comps.iter().map(Component::dim).sum();
    out.verified = dims == c.genus();
    Ok(out)
}

pub fn decompose(ctx: &Ctx) -> Result<Outcome> {
    let c = &ctx.curve;
    let mut out = Outcome::new();
    out.line(format!("curve: {c}, genus {}", c.genus()));
    let mut total = 0;
    for comp in c.components() {
        out.line(format!(
            "component {}: dimension {}, CM by Q(zeta_{}, zeta_{})",
            comp_str(&comp),
            comp.dim(),
            comp.f_d,
            comp.e_dp
        ));
        let mut indices = Vec::new();
        let mut holomorphic = 0;
        for (i, j) in comp.index_set() {
            let b = comp.unit_of_index(i, j).expect("index in component");
            let label = c.hodge_label(i, j);
            let name = match label {
                HodgeLabel::Holomorphic => {
                    holomorphic += 1;
                    "holomorphic"
                }
                HodgeLabel::Antiholomorphic => "antiholomorphic",
            };
            out.line(format!("  w({i},{j})  unit {}  {name}", unit_str(b)));
            indices.push(json!({ "i": i, "j": j, "unit": unit_json(b), "type": name }));
        }
        total += holomorphic;
        out.verified &= holomorphic == comp.dim();
        out.results.push(json!({
            "component": comp_json(&comp),
            "f_d": comp.f_d,
            "e_dp": comp.e_dp,
            "dim": comp.dim(),
            "level": comp.level(),
            "indices": indices,
        }));
    }
    out.verified &= total == c.genus();
    Ok(out)
}

pub fn frobenius(ctx: &Ctx, p: u64, r: u32, select: &ComponentSelect) -> Result<Outcome> {
    ctx.check_prime(p)?;
    let mut out = Outcome::new();
    for comp in ctx.components(select)? {
        let data = ctx.frobenius(&comp, p, r)?;
        out.line(format!(
            "component {} over F_{}: Frobenius order {}, {} cycle(s)",
            comp_str(&comp),
            data.q(),
            data.ord(),
            data.cycles().len()
        ));
        for cyc in data.cycles() {
            let labels: Vec<String> = cyc.iter().map(|b| unit_str(*b)).collect();
            out.line(format!("  [{}]  Z = {}", labels.join(" "), data.z(cyc[0])));
        }
        out.line(format!("  charpoly: {}", data.charpoly()));
        out.results.push(json!({
            "component": comp_json(&comp),
            "p": p,
            "r": r,
            "q": data.q(),
            "ord": data.ord(),
            "cycles": data
                .cycles()
                .iter()
                .map(|c| c.iter().map(|b| unit_json(*b)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "values": data
                .zvalues
                .iter()
                .map(|(b, z)| json!({ "b": unit_json(*b), "z": cyclo_json(z) }))
                .collect::<Vec<_>>(),
            "charpoly": poly_json(&data.charpoly()),
        }));
    }
    Ok(out)
}

fn zeta_check(ctx: &Ctx, p: u64, zeta: ZetaNumerator) -> Result<ZetaReport> {
    let data = ctx
        .curve
        .components()
        .iter()
        .map(|c| ctx.frobenius(c, p, 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(compare_factorization(p, zeta, &data))
}

pub fn zeta(ctx: &Ctx, p: u64, check: bool) -> Result<Outcome> {
    ctx.check_prime(p)?;
    let z = ctx.zeta(p)?;
    let mut out = Outcome::new();
    out.line(format!("zeta numerator at p = {p}: {}", z.poly));
    out.results
        .push(json!({ "p": p, "zeta": poly_json(&z.poly) }));
    if check {
        let report = zeta_check(ctx, p, z)?;
        for (comp, f) in &report.factors {
            out.line(format!("  {}: {}", comp_str(comp), f));
            out.results
                .push(json!({ "component": comp_json(comp), "p": p, "factor": poly_json(f) }));
        }
        if report.passed {
            out.line("PASS: product of cycle factors equals the point-count numerator");
        } else {
            out.line("FAIL");
            out.table.push_str(&report.diff());
        }
        out.verified = report.passed;
    }
    Ok(out)
}

pub fn euler_factor(ctx: &Ctx, p: u64, select: &ComponentSelect) -> Result<Outcome> {
    ctx.check_prime(p)?;
    let mut out = Outcome::new();
    for comp in ctx.components(select)? {
        let f = rationalized(ctx.frobenius(&comp, p, 1)?.abelian_euler_factor());
        out.line(format!("component {} at p = {p}: {f}", comp_str(&comp)));
        out.results
            .push(json!({ "component": comp_json(&comp), "p": p, "factor": poly_json(&f.poly) }));
    }
    Ok(out)
}

pub fn motive_factor(
    ctx: &Ctx,
    p: u64,
    args: &ParamArgs,
    select: &ComponentSelect,
) -> Result<Outcome> {
    let params = params(args)?;
    ctx.check_prime(p)?;
    let mut out = Outcome::new();
    let comps = ctx.components(select)?;
    let mut product = EulerFactor::new(p, ExactPolynomial::one(1));
    for comp in &comps {
        let f = rationalized(motive_factor_from_data(
            &ctx.frobenius(comp, p, 1)?,
            &params,
        ));
        out.line(format!(
            "component {} at p = {p}, n = {}, a = {}: {f}",
            comp_str(comp),
            params.n(),
            params.a()
        ));
        out.results
            .push(json!({ "component": comp_json(comp), "p": p, "factor": poly_json(&f.poly) }));
        product = product.mul(&f);
    }
    if select.d.is_none() && comps.len() > 1 {
        let product = EulerFactor::new(p, product.poly.rationalized());
        out.line(format!("product: {product}"));
        out.extra.insert("product".into(), poly_json(&product.poly));
    }
    Ok(out)
}

pub fn invariants(ctx: &Ctx, args: &ParamArgs) -> Result<Outcome> {
    let params = params(args)?;
    let c = &ctx.curve;
    let classes = invariant_classes(c, &params, &ctx.limits)?;
    let mut out = Outcome::new();
    let n = params.n();
    let expected = (1u64 << n) + 2 * c.genus() as u64;
    out.line(format!(
        "n = {n}, a = {}: {} invariant classes (2^n + 2g = {expected})",
        params.a(),
        classes.len()
    ));
    let mut owner = BTreeMap::new();
    for comp in c.components() {
        for s in sigma_basis(c, &comp, &params) {
            owner.insert(s.monomial, comp_json(&comp));
        }
    }
    match partition_invariants(c, &params, &classes) {
        Ok(part) => {
            out.line(format!(
                "algebraic classes by degree: {}",
                part.algebraic_by_degree
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            for ((d, dp), k) in &part.sigma_by_component {
                out.line(format!("sigma classes in ({d},{dp}): {k}"));
            }
            out.extra.insert(
                "algebraic_by_degree".into(),
                json!(part.algebraic_by_degree),
            );
        }
        Err(Error::InvariantViolation(msg)) => {
            out.line(format!("partition mismatch: {msg}"));
            out.verified = false;
        }
        Err(e) => return Err(e),
    }
    let found = hodge_numbers_of(c, &classes);
    let predicted = hodge_numbers(c, &params);
    let hodge_line: Vec<String> = found
        .iter()
        .map(|((p, q), h)| format!("h^{{{p},{q}}} = {h}"))
        .collect();
    out.line(format!("hodge numbers: {}", hodge_line.join(", ")));
    out.extra.insert(
        "hodge_numbers".into(),
        json!(found
            .iter()
            .map(|((p, q), h)| json!([p, q, h]))
            .collect::<Vec<_>>()),
    );
    if found != predicted {
        out.line("hodge numbers differ from the prediction");
        out.verified = false;
    }
    out.verified &= classes.len() as u64 == expected;
    for m in &classes {
        let (hp, hq) = m.hodge_type(c);
        out.line(format!("  {m}  ({hp},{hq})"));
        out.results.push(json!({
            "monomial": m.to_string(),
            "hodge": [hp, hq],
            "component": owner.get(m).cloned().unwrap_or(Value::Null),
        }));
    }
    out.line(if out.verified { "PASS" } else { "FAIL" });
    Ok(out)
}

struct PrimeVerdict {
    zeta: ZetaReport,
    main: MainTheoremReport,
}

fn verify_prime(ctx: &Ctx, p: u64, params: &MotiveParams) -> Result<PrimeVerdict> {
    ctx.check_prime(p)?;
    let zeta = zeta_check(ctx, p, ctx.zeta(p)?)?;
    let comps = ctx
        .curve
        .components()
        .iter()
        .map(|c| compare_routes(&ctx.frobenius(c, p, 1)?, &ctx.residue(c, p)?, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrimeVerdict {
        zeta,
        main: assemble_report(p, params, comps),
    })
}

pub fn verify(ctx: &Ctx, primes: &PrimeSelect, args: &ParamArgs) -> Result<Outcome> {
    let params = params(args)?;
    let list = match (primes.p, primes.pmax) {
        (Some(p), _) => vec![p],
        (None, Some(pmax)) => ctx.curve.good_primes(pmax),
        (None, None) => unreachable!("clap requires one of --p, --pmax"),
    };
    let single = primes.p.is_some();
    let verdicts: Vec<(u64, Result<PrimeVerdict>)> = list
        .par_iter()
        .map(|&p| (p, verify_prime(ctx, p, &params)))
        .collect();
    let mut out = Outcome::new();
    out.line(format!(
        "curve: {}, n = {}, a = {}",
        ctx.curve,
        params.n(),
        params.a()
    ));
    let mut statuses = Vec::new();
    for (p, verdict) in verdicts {
        let v = match verdict {
            Ok(v) => v,
            Err(e) if e.is_resource_bound() && !single => {
                out.line(format!("p = {p}: SKIPPED ({e})"));
                statuses.push(json!({ "p": p, "status": "skipped", "reason": e.to_string() }));
                continue;
            }
            Err(e) => return Err(e),
        };
        let passed = v.zeta.passed && v.main.passed;
        out.verified &= passed;
        out.line(format!("p = {p}: {}", if passed { "PASS" } else { "FAIL" }));
        out.line(format!(
            "  zeta: {} ({})",
            v.zeta.oracle.poly,
            if v.zeta.passed {
                "equals the product of cycle factors"
            } else {
                "MISMATCH"
            }
        ));
        if !v.zeta.passed {
            out.table.push_str(&v.zeta.diff());
        }
        for c in &v.main.components {
            out.line(format!(
                "  ({},{}): {}  [{}]",
                c.component.0,
                c.component.1,
                c.motive,
                if c.agree {
                    "motive = hecke = matrix"
                } else {
                    "routes disagree"
                }
            ));
            out.results.push(json!({
                "component": [c.component.0, c.component.1],
                "p": p,
                "factor": poly_json(&c.motive.poly),
                "hecke": poly_json(&c.hecke.poly),
                "matrix": poly_json(&c.oracle),
                "agree": c.agree,
            }));
        }
        if !v.main.passed {
            out.table.push_str(&v.main.diff());
        }
        if v.main.components.len() > 1 {
            out.line(format!("  product: {}", v.main.product));
        }
        statuses.push(json!({
            "p": p,
            "status": if passed { "pass" } else { "fail" },
            "zeta": poly_json(&v.zeta.oracle.poly),
            "zeta_matches": v.zeta.passed,
            "product": poly_json(&v.main.product.poly),
        }));
    }
    out.extra.insert("primes".into(), Value::Array(statuses));
    Ok(out)
}

pub fn grouping_check(
    ctx: &Ctx,
    p: u64,
    r: u32,
    args: &ParamArgs,
    select: &ComponentSelect,
) -> Result<Outcome> {
    let params = params(args)?;
    ctx.check_prime(p)?;
    let mut out = Outcome::new();
    for comp in ctx.components(select)? {
        let g = verify_grouping_identity(&ctx.curve, &comp, p, r, &params, &ctx.limits)?;
        out.verified &= g.passed;
        out.line(format!(
            "component {}: q = {}, ord_p = {}, ord_q = {}, m = {}: {}",
            comp_str(&comp),
            g.q,
            g.ord_p,
            g.ord_q,
            g.m,
            if g.passed { "PASS" } else { "FAIL" }
        ));
        out.line(format!(
            "  cycle values = W^(r/m): {}{}",
            g.values_match,
            g.relabeling
                .map(|c| format!(" (labels scaled by {c})"))
                .unwrap_or_default()
        ));
        out.line(format!(
            "  L_q(X^r) = prod L_p(zeta X): {}",
            g.polynomial_identity
        ));
        out.line(format!("  root grouping: {}", g.root_grouping));
        out.line(format!("  L_q(X^r) = {}", g.lhs.display_ascending("X")));
        out.results.push(json!({
            "component": comp_json(&comp),
            "p": p,
            "r": r,
            "q": g.q,
            "ord_p": g.ord_p,
            "ord_q": g.ord_q,
            "m": g.m,
            "relabeling": g.relabeling,
            "values_match": g.values_match,
            "polynomial_identity": g.polynomial_identity,
            "root_grouping": g.root_grouping,
            "factor": poly_json(&g.lhs),
            "passed": g.passed,
        }));
    }
    Ok(out)
}

pub fn lseries(ctx: &Ctx, args: &ParamArgs, pmax: u64, terms: usize) -> Result<Outcome> {
    let params = params(args)?;
    let primes = ctx.curve.good_primes(pmax);
    let factors: Vec<(u64, EulerFactor)> = primes
        .par_iter()
        .map(|&p| {
            let mut acc = EulerFactor::new(p, ExactPolynomial::one(1));
            for comp in ctx.curve.components() {
                acc = acc.mul(&motive_factor_from_data(
                    &ctx.frobenius(&comp, p, 1)?,
                    &params,
                ));
            }
            Ok((p, EulerFactor::new(p, acc.poly.rationalized())))
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::new();
    out.line(format!(
        "incomplete L-function of the motive, n = {}, a = {}, good primes up to {pmax}",
        params.n(),
        params.a()
    ));
    let mut factor_json = Vec::new();
    for (p, f) in &factors {
        out.line(format!("  p = {p}: {f}"));
        factor_json.push(json!({ "p": p, "factor": poly_json(&f.poly) }));
    }
    let map: BTreeMap<u64, EulerFactor> = factors.into_iter().collect();
    let coeffs = dirichlet_coefficients(&map, terms)?;
    for (k, a) in coeffs.iter().enumerate() {
        let a = a.minimal_level();
        out.line(format!("a_{} = {a}", k + 1));
        out.results
            .push(json!({ "n": k + 1, "coeff": cyclo_json(&a) }));
    }
    out.extra
        .insert("factors".into(), Value::Array(factor_json));
    Ok(out)
}

/// Exit status for an error: 3 for resource bounds, 1 for failed internal
/// checks, 2 for everything caused by the input.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource_bound() {
        3
    } else if matches!(e, Error::InvariantViolation(_)) {
        1
    } else {
        2
    }
}
