use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use super::claims::{all_c, subfield_c, Bound, Claim, Expect};
use super::table1::{table1_prediction, SKIPPED_ROWS};
use crate::analysis::c_uniformity;
use crate::error::{Error, Result};
use crate::funcexpr::{dickson_nonsingular, eval_linearized, parse, tabulate, FuncExpr};
use crate::gfpn::{Elem, FieldCtx};

/// Names accepted by [`CatalogEntry::build`].
pub const ENTRY_NAMES: &[&str] = &[
    "trace_switch",
    "lin_trace",
    "thm41",
    "thm42",
    "table1",
    "fixture",
    "claim",
];

/// A switched form `F + Σ u_i f_i`, kept so the switching criterion can
/// cross-check PcN claims.
#[derive(Debug, Clone)]
pub struct SwitchForm {
    pub base: FuncExpr,
    /// `(u, f, m)` with `f` valued in `F_{p^m}`.
    pub terms: Vec<(Elem, FuncExpr, u32)>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Value,
    pub field: Arc<FieldCtx>,
    pub function: FuncExpr,
    pub claims: Vec<Claim>,
    pub switch: Option<SwitchForm>,
    /// The construction mentions an unpinned primitive element.
    pub g_dependent: bool,
    pub notes: Vec<String>,
    pub skipped: Vec<String>,
}

fn violated(msg: impl Into<String>) -> Error {
    Error::HypothesisViolated(msg.into())
}

fn manifest_err(name: &str, e: serde_json::Error) -> Error {
    Error::Manifest(format!("{name} params: {e}"))
}

fn one() -> u32 {
    1
}

fn elems(field: &FieldCtx, lits: &[String]) -> Result<Vec<Elem>> {
    lits.iter().map(|s| field.parse_elem(s)).collect()
}

fn konst(c: Elem) -> FuncExpr {
    FuncExpr::constant(c)
}

fn scaled(c: Elem, e: FuncExpr) -> FuncExpr {
    if c == Elem::ONE {
        e
    } else {
        FuncExpr::mul(vec![konst(c), e])
    }
}

fn check_divides(field: &FieldCtx, m: u32) -> Result<()> {
    if m == 0 || !field.degree().is_multiple_of(m) {
        return Err(Error::NotADivisor { m, n: field.degree() });
    }
    Ok(())
}

fn require_permutation(field: &FieldCtx, coeffs: &[Elem], t: u32, what: &str) -> Result<()> {
    if coeffs.is_empty() || !dickson_nonsingular(coeffs, t, field)? {
        return Err(violated(format!(
            "{what} is not a permutation (singular Dickson matrix)"
        )));
    }
    Ok(())
}

fn contains_g(src: &str) -> bool {
    src.split(|c: char| !c.is_ascii_alphanumeric() && c != '_')
        .any(|w| w == "g")
}

impl CatalogEntry {
    fn new(name: &str, params: Value, field: &Arc<FieldCtx>, function: FuncExpr) -> CatalogEntry {
        CatalogEntry {
            name: name.to_string(),
            params,
            field: field.clone(),
            function,
            claims: Vec::new(),
            switch: None,
            g_dependent: false,
            notes: Vec::new(),
            skipped: Vec::new(),
        }
    }

    /// Builds an entry from its manifest form. An `expect` object inside
    /// `params` adds claims to any entry.
    pub fn build(name: &str, field: &Arc<FieldCtx>, params: &Value) -> Result<CatalogEntry> {
        let mut core = match params {
            Value::Null => Value::Object(Default::default()),
            Value::Object(_) => params.clone(),
            _ => return Err(Error::Manifest(format!("{name} params must be an object"))),
        };
        let expect: Expect = match core.as_object_mut().and_then(|o| o.remove("expect")) {
            Some(v) => serde_json::from_value(v).map_err(|e| manifest_err(name, e))?,
            None => Expect::default(),
        };
        let mut entry = match name {
            "trace_switch" => {
                let p: TraceSwitchParams = serde_json::from_value(core).map_err(|e| manifest_err(name, e))?;
                let mut e = entry_trace_switch(field, &p.f, field.parse_elem(&p.u)?, field.parse_elem(&p.v)?, p.t)?;
                e.g_dependent = [&p.f, &p.u, &p.v].iter().any(|s| contains_g(s));
                e
            }
            "lin_trace" => {
                let p: LinTraceParams = serde_json::from_value(core).map_err(|e| manifest_err(name, e))?;
                entry_lin_trace(
                    field,
                    &elems(field, &p.l1)?,
                    &elems(field, &p.l2)?,
                    field.parse_elem(&p.gamma)?,
                    p.t,
                )?
            }
            "thm41" => {
                let p: Thm41Params = serde_json::from_value(core).map_err(|e| manifest_err(name, e))?;
                entry_thm41(field, &p.resolve(field)?)?
            }
            "thm42" => {
                let p: Thm42Params = serde_json::from_value(core).map_err(|e| manifest_err(name, e))?;
                let terms = p
                    .terms
                    .iter()
                    .map(|t| Ok((t.k, t.s, field.parse_elem(&t.delta)?)))
                    .collect::<Result<Vec<_>>>()?;
                entry_thm42(field, &elems(field, &p.l)?, p.t, field.parse_elem(&p.u)?, p.m, &terms)?
            }
            "table1" => {
                let p: Table1Params = serde_json::from_value(core).map_err(|e| manifest_err(name, e))?;
                entry_table1(field, &p.row, p.k)?
            }
            "fixture" => {
                let p: FixtureParams = serde_json::from_value(core).map_err(|e| manifest_err(name, e))?;
                entry_fixture(field, &p.name, p.i)?
            }
            "claim" => {
                let p: ClaimParams = serde_json::from_value(core).map_err(|e| manifest_err(name, e))?;
                let mut e = CatalogEntry::new("claim", Value::Null, field, parse(&p.function, field)?);
                e.g_dependent = contains_g(&p.function);
                e
            }
            other => {
                return Err(Error::Manifest(format!(
                    "unknown entry {other:?}; expected one of {ENTRY_NAMES:?}"
                )))
            }
        };
        entry.params = params.clone();
        let extra = expect.claims(field)?;
        if entry.name == "claim" && extra.is_empty() {
            return Err(Error::Manifest("claim entry needs a non-empty expect object".into()));
        }
        entry.claims.extend(extra);
        Ok(entry)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceSwitchParams {
    f: String,
    u: String,
    v: String,
    #[serde(default = "one")]
    t: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinTraceParams {
    l1: Vec<String>,
    l2: Vec<String>,
    gamma: String,
    #[serde(default = "one")]
    t: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm41Params {
    variant: String,
    #[serde(rename = "L")]
    l: Vec<String>,
    /// H0: degree of `q` over `F_p`.
    #[serde(default)]
    ell: Option<u32>,
    #[serde(default)]
    u: Option<String>,
    #[serde(default)]
    k: Option<u32>,
    #[serde(default)]
    ks: Vec<u32>,
    #[serde(default)]
    gs: Vec<u32>,
    #[serde(default)]
    deltas: Vec<String>,
    #[serde(default)]
    m: Option<u32>,
    #[serde(default)]
    alphas: Vec<String>,
}

impl Thm41Params {
    fn resolve(&self, field: &FieldCtx) -> Result<Thm41> {
        let l = elems(field, &self.l)?;
        let missing = |what: &str| Error::Manifest(format!("thm41 {} needs {what}", self.variant));
        let factors = |ks: Vec<u32>| -> Result<Vec<GoldFactor>> {
            let gs = if self.gs.is_empty() {
                vec![1; ks.len()]
            } else {
                self.gs.clone()
            };
            let deltas = if self.deltas.is_empty() {
                vec![Elem::ZERO; ks.len()]
            } else {
                elems(field, &self.deltas)?
            };
            let alphas = if self.alphas.is_empty() {
                vec![Elem::ONE; ks.len()]
            } else {
                elems(field, &self.alphas)?
            };
            if gs.len() != ks.len() || deltas.len() != ks.len() || alphas.len() != ks.len() {
                return Err(Error::Manifest(
                    "thm41: ks, gs, deltas and alphas differ in length".into(),
                ));
            }
            Ok((0..ks.len())
                .map(|i| GoldFactor {
                    k: ks[i],
                    g: gs[i],
                    delta: deltas[i],
                    alpha: alphas[i],
                })
                .collect())
        };
        Ok(match self.variant.as_str() {
            "H0" => Thm41::H0 {
                l,
                ell: self.ell.ok_or_else(|| missing("ell"))?,
                u: field.parse_elem(self.u.as_deref().ok_or_else(|| missing("u"))?)?,
            },
            "Hk" => Thm41::Hk {
                l,
                k: self.k.ok_or_else(|| missing("k"))?,
            },
            "Hprod" => Thm41::Hprod {
                l,
                factors: factors(self.ks.clone())?,
            },
            "G" => Thm41::G {
                l,
                m: self.m.ok_or_else(|| missing("m"))?,
                factors: factors(self.ks.clone())?,
            },
            other => {
                return Err(Error::Manifest(format!(
                    "thm41 variant {other:?}; expected H0, Hk, Hprod or G"
                )))
            }
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm42Params {
    #[serde(rename = "L")]
    l: Vec<String>,
    #[serde(default = "one")]
    t: u32,
    u: String,
    m: u32,
    terms: Vec<Thm42Term>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm42Term {
    k: u64,
    s: u64,
    #[serde(default = "zero_literal")]
    delta: String,
}

fn zero_literal() -> String {
    "0".into()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Table1Params {
    row: String,
    #[serde(default)]
    k: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureParams {
    name: String,
    #[serde(default)]
    i: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimParams {
    function: String,
}

/// `F + u Tr_{q^n/q}(v F)` with `q = p^t`. Claims PcN at every
/// `c ∈ F_q \ {1}` where `F` is PcN.
pub fn entry_trace_switch(field: &Arc<FieldCtx>, f_src: &str, u: Elem, v: Elem, t: u32) -> Result<CatalogEntry> {
    check_divides(field, t)?;
    let n = field.degree() / t;
    if n <= 2 {
        return Err(violated(format!("extension degree over F_q is {n}; needs n > 2")));
    }
    let tr = field.rel_trace(field.neg(field.mul(u, v)), t)?;
    if tr == Elem::ONE {
        return Err(violated("Tr(-uv) = 1"));
    }
    let base = parse(f_src, field)?;
    let table = tabulate(&base, field)?;
    let cs: Vec<Elem> = subfield_c(field, t)?
        .into_iter()
        .filter(|&c| c_uniformity(&table, c) == 1)
        .collect();
    if cs.is_empty() {
        return Err(violated(format!(
            "F is PcN at no c in F_{}^{} other than 1",
            field.characteristic(),
            t
        )));
    }
    let term = FuncExpr::mul(vec![konst(v), base.clone()]).trace_to(t);
    let function = FuncExpr::add(vec![base.clone(), scaled(u, term.clone())]);
    let mut e = CatalogEntry::new("trace_switch", Value::Null, field, function);
    e.claims
        .push(Claim::per_c("c in F_q \\ {1} where F is PcN", cs, Bound::Eq(1)));
    e.switch = Some(SwitchForm {
        base,
        terms: vec![(u, term, t)],
    });
    Ok(e)
}

/// `L1(x) + L1(γ) Tr_{q^n/q}(L2(x))` with `q`-linearized `L1, L2` over
/// `F_q = F_{p^t}`. Claims PcN for all `c != 1`.
pub fn entry_lin_trace(field: &Arc<FieldCtx>, l1: &[Elem], l2: &[Elem], gamma: Elem, t: u32) -> Result<CatalogEntry> {
    check_divides(field, t)?;
    let n = field.degree() / t;
    if n <= 2 {
        return Err(violated(format!("extension degree over F_q is {n}; needs n > 2")));
    }
    if let Some(&a) = l1.iter().chain(l2).find(|&&a| !field.in_subfield(a, t)) {
        return Err(violated(format!("coefficient {} is not in F_q", field.label(a))));
    }
    require_permutation(field, l1, t, "L1")?;
    require_permutation(field, l2, t, "L2")?;
    if gamma.is_zero() || !field.rel_trace(gamma, t)?.is_zero() {
        return Err(violated("gamma must be nonzero with Tr(gamma) = 0"));
    }
    let base = FuncExpr::linearized(l1.to_vec(), t);
    let u = eval_linearized(field, l1, t, gamma);
    let term = FuncExpr::linearized(l2.to_vec(), t).trace_to(t);
    let function = FuncExpr::add(vec![base.clone(), scaled(u, term.clone())]);
    let mut e = CatalogEntry::new("lin_trace", Value::Null, field, function);
    e.claims.push(Claim::per_c("all c != 1", all_c(field), Bound::Eq(1)));
    e.switch = Some(SwitchForm {
        base,
        terms: vec![(u, term, t)],
    });
    Ok(e)
}

/// One factor `(α Tr(x^{2^k+1} + δ))^g` of the product switches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldFactor {
    pub k: u32,
    pub g: u32,
    pub delta: Elem,
    pub alpha: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Thm41 {
    /// `L(x) + u Tr_{q^n/q}(x)`, `q = p^ell`, `L` q-linearized.
    H0 { l: Vec<Elem>, ell: u32, u: Elem },
    /// `L(x) + Tr(x^{2^k+1})` over `F_{2^n}`.
    Hk { l: Vec<Elem>, k: u32 },
    /// `L(x) + Π (Tr(x^{2^{k_i}+1} + δ_i))^{g_i}`; `alpha` must be 1.
    Hprod { l: Vec<Elem>, factors: Vec<GoldFactor> },
    /// `L(x) + Π (α_i Tr_{2^n/2^m}(x^{2^{k_i}+1} + δ_i))^{g_i}`.
    G {
        l: Vec<Elem>,
        m: u32,
        factors: Vec<GoldFactor>,
    },
}

fn binary_gates(field: &FieldCtx, l: &[Elem]) -> Result<()> {
    if field.characteristic() != 2 {
        return Err(violated("needs characteristic 2"));
    }
    if field.degree() < 3 {
        return Err(violated("needs n >= 3"));
    }
    require_permutation(field, l, 1, "L")?;
    if eval_linearized(field, l, 1, Elem::ONE) != Elem::ONE {
        return Err(violated("L(1) != 1"));
    }
    Ok(())
}

fn factor_gates(field: &FieldCtx, factors: &[GoldFactor]) -> Result<()> {
    let n = field.degree();
    if factors.is_empty() {
        return Err(violated("needs at least one factor"));
    }
    if factors.iter().any(|f| f.k < 1 || f.k >= n) {
        return Err(violated(format!("each k_i must lie in 1..={}", n - 1)));
    }
    if factors.windows(2).any(|w| w[0].k >= w[1].k) {
        return Err(violated("k_i must be strictly increasing"));
    }
    if factors.iter().any(|f| f.g == 0) {
        return Err(violated("each g_i must be >= 1"));
    }
    Ok(())
}

fn gold_product(factors: &[GoldFactor], m: u32) -> FuncExpr {
    FuncExpr::mul(
        factors
            .iter()
            .map(|f| {
                let inner = FuncExpr::add(vec![FuncExpr::var().pow((1u64 << f.k) + 1), konst(f.delta)]);
                scaled(f.alpha, inner.trace_to(m)).pow(f.g as u64)
            })
            .collect(),
    )
}

pub fn entry_thm41(field: &Arc<FieldCtx>, variant: &Thm41) -> Result<CatalogEntry> {
    let p = field.characteristic();
    let apcn_claims = |e: &mut CatalogEntry| {
        e.claims
            .push(Claim::per_c("all c != 1", all_c(field), Bound::AtMost(2)));
        e.claims.push(Claim::per_c("c = 0", vec![Elem::ZERO], Bound::Eq(1)));
    };
    match variant {
        Thm41::H0 { l, ell, u } => {
            let ell = *ell;
            if ell < 2 {
                return Err(violated("H0 needs ell >= 2"));
            }
            check_divides(field, ell)?;
            let n = field.degree() / ell;
            if !n.is_multiple_of(p) {
                return Err(violated(format!("H0 needs p | n, got n = {n}")));
            }
            if u.is_zero() || !field.in_subfield(*u, ell) {
                return Err(violated("H0 needs u in F_q*"));
            }
            require_permutation(field, l, ell, "L")?;
            if !field.in_subfield(eval_linearized(field, l, ell, Elem::ONE), ell) {
                return Err(violated("L does not map F_q into itself (L(1) not in F_q)"));
            }
            let base = FuncExpr::linearized(l.clone(), ell);
            let term = FuncExpr::var().trace_to(ell);
            let function = FuncExpr::add(vec![base.clone(), scaled(*u, term.clone())]);
            let mut e = CatalogEntry::new("thm41", Value::Null, field, function);
            e.claims.push(Claim::per_c("all c != 1", all_c(field), Bound::Eq(1)));
            e.switch = Some(SwitchForm {
                base,
                terms: vec![(*u, term, ell)],
            });
            Ok(e)
        }
        Thm41::Hk { l, k } => {
            binary_gates(field, l)?;
            let factor = GoldFactor {
                k: *k,
                g: 1,
                delta: Elem::ZERO,
                alpha: Elem::ONE,
            };
            factor_gates(field, std::slice::from_ref(&factor))?;
            let base = FuncExpr::linearized(l.clone(), 1);
            let term = FuncExpr::var().pow((1u64 << k) + 1).trace_to(1);
            let mut e = CatalogEntry::new(
                "thm41",
                Value::Null,
                field,
                FuncExpr::add(vec![base.clone(), term.clone()]),
            );
            apcn_claims(&mut e);
            e.switch = Some(SwitchForm {
                base,
                terms: vec![(Elem::ONE, term, 1)],
            });
            Ok(e)
        }
        Thm41::Hprod { l, factors } => {
            binary_gates(field, l)?;
            factor_gates(field, factors)?;
            if factors.iter().any(|f| f.alpha != Elem::ONE) {
                return Err(violated("Hprod takes no alphas; use variant G"));
            }
            let base = FuncExpr::linearized(l.clone(), 1);
            let term = gold_product(factors, 1);
            let mut e = CatalogEntry::new(
                "thm41",
                Value::Null,
                field,
                FuncExpr::add(vec![base.clone(), term.clone()]),
            );
            apcn_claims(&mut e);
            e.switch = Some(SwitchForm {
                base,
                terms: vec![(Elem::ONE, term, 1)],
            });
            Ok(e)
        }
        Thm41::G { l, m, factors } => {
            binary_gates(field, l)?;
            check_divides(field, *m)?;
            factor_gates(field, factors)?;
            if factors
                .iter()
                .any(|f| f.alpha.is_zero() || !field.in_subfield(f.alpha, *m))
            {
                return Err(violated(format!("each alpha_i must lie in F_2^{m}*")));
            }
            let base = FuncExpr::linearized(l.clone(), 1);
            let term = gold_product(factors, *m);
            let mut e = CatalogEntry::new(
                "thm41",
                Value::Null,
                field,
                FuncExpr::add(vec![base.clone(), term.clone()]),
            );
            apcn_claims(&mut e);
            e.switch = Some(SwitchForm {
                base,
                terms: vec![(Elem::ONE, term, *m)],
            });
            Ok(e)
        }
    }
}

/// `L(x) + u Σ (Tr_{p^N/p^m}(x)^{k_i} + δ_i)^{s_i}`. Claims PcN for every
/// `c ∈ F_{p^m} \ {1}`.
pub fn entry_thm42(
    field: &Arc<FieldCtx>,
    l: &[Elem],
    t: u32,
    u: Elem,
    m: u32,
    terms: &[(u64, u64, Elem)],
) -> Result<CatalogEntry> {
    let p = field.characteristic();
    if m == 0 || !field.degree().is_multiple_of(m) {
        return Err(violated(format!("m = {m} does not divide N = {}", field.degree())));
    }
    if !(field.degree() / m).is_multiple_of(p) {
        return Err(violated(format!("p does not divide N/m = {}", field.degree() / m)));
    }
    if u.is_zero() || !field.in_subfield(u, m) {
        return Err(violated("u must lie in F_{p^m}*"));
    }
    if terms.is_empty() {
        return Err(violated("needs at least one term"));
    }
    let top = field.order() as u64 - 1;
    for &(k, s, delta) in terms {
        if !(1..=top).contains(&k) || !(1..=top).contains(&s) {
            return Err(violated(format!("k_i, s_i must lie in 1..={top}")));
        }
        if !field.in_subfield(delta, m) {
            return Err(violated("delta_i must lie in F_{p^m}"));
        }
    }
    require_permutation(field, l, t, "L")?;
    let sub = field.subfield(m)?;
    if sub
        .elements
        .iter()
        .any(|&x| !field.in_subfield(eval_linearized(field, l, t, x), m))
    {
        return Err(violated("L does not map F_{p^m} into itself"));
    }
    let base = FuncExpr::linearized(l.to_vec(), t);
    let sum = FuncExpr::add(
        terms
            .iter()
            .map(|&(k, s, delta)| FuncExpr::add(vec![FuncExpr::var().trace_to(m).pow(k), konst(delta)]).pow(s))
            .collect(),
    );
    let function = FuncExpr::add(vec![base.clone(), scaled(u, sum.clone())]);
    let mut e = CatalogEntry::new("thm42", Value::Null, field, function);
    e.claims.push(Claim::per_c(
        format!("c in F_{p}^{m} \\ {{1}}"),
        subfield_c(field, m)?,
        Bound::Eq(1),
    ));
    e.switch = Some(SwitchForm {
        base,
        terms: vec![(u, sum, m)],
    });
    Ok(e)
}

pub fn entry_table1(field: &Arc<FieldCtx>, row: &str, k: Option<u32>) -> Result<CatalogEntry> {
    let pr = table1_prediction(field, row, k)?;
    let mut e = CatalogEntry::new("table1", Value::Null, field, FuncExpr::var().pow(pr.exponent));
    e.claims = pr.claims(row);
    e.skipped = SKIPPED_ROWS.iter().map(|s| s.to_string()).collect();
    Ok(e)
}

/// Regression fixtures for the odd-characteristic example list. `i` selects
/// the `g^i` variant where the list gives two.
pub fn entry_fixture(field: &Arc<FieldCtx>, name: &str, i: u32) -> Result<CatalogEntry> {
    let p = field.characteristic();
    let n = field.degree();
    let wrong_field = || violated(format!("fixture {name} is not listed for {p}^{n}"));
    let all = all_c(field);
    let at = |c: Elem, v: u32| Claim::per_c(format!("c = {}", field.label(c)), vec![c], Bound::Eq(v));
    let max = |b: Bound| Claim::max_over("c != 1", all.clone(), b);
    let minus_one = field.from_int(-1);
    if i > 1 {
        return Err(violated("i must be 0 or 1"));
    }
    let with_i = |head: &str| {
        if i == 0 {
            format!("{head}x)")
        } else {
            format!("{head}g^{i}*x)")
        }
    };
    let (src, claims, walsh) = match (name, p) {
        ("p3_1", 3) => {
            let src = "x^10 + Tr[1](g^2*x^10)".to_string();
            match n {
                5 => {
                    let rest: Vec<Elem> = all.iter().copied().filter(|&c| c != minus_one).collect();
                    (
                        src,
                        vec![
                            at(Elem::ONE, 1),
                            at(minus_one, 2),
                            Claim::max_over("c != 1, -1", rest, Bound::Between(6, 8)),
                        ],
                        6,
                    )
                }
                6 => (src, vec![at(Elem::ONE, 3), max(Bound::Between(6, 11))], 8),
                _ => return Err(wrong_field()),
            }
        }
        ("p3_2", 3) if (4..=6).contains(&n) => (
            with_i("x^6 + g*Tr[1]("),
            vec![at(Elem::ONE, 1), Claim::per_c("all c != 1", all.clone(), Bound::Eq(4))],
            6,
        ),
        ("p3_3", 3) => {
            let range = match n {
                4 => Bound::Between(4, 8),
                5 => Bound::Between(6, 10),
                _ => return Err(wrong_field()),
            };
            (
                "x^14 + g^2*Tr[1](g*x)".to_string(),
                vec![at(Elem::ONE, 1), max(range)],
                6,
            )
        }
        ("p3_4", 3) if (4..=6).contains(&n) => (
            "x^2 + g*Tr[1](x)".to_string(),
            vec![at(Elem::ONE, 1), Claim::per_c("all c != 1", all.clone(), Bound::Eq(4))],
            6,
        ),
        ("p5_1", 5) => {
            let src = with_i("x^63 + g^2*Tr[1](");
            match n {
                2 => (src, vec![at(Elem::ONE, 2), max(Bound::Eq(5))], 8),
                4 => (src, vec![at(Elem::ONE, 2), max(Bound::Between(7, 11))], 9),
                _ => return Err(wrong_field()),
            }
        }
        ("p5_2", 5) => {
            let src = "x^3 + g*Tr[1](x)".to_string();
            match n {
                2 => (src, vec![at(Elem::ONE, 2), max(Bound::Eq(5))], 8),
                3 => (src, vec![at(Elem::ONE, 2), max(Bound::OneOf(vec![5, 7]))], 9),
                4 => (src, vec![at(Elem::ONE, 2), max(Bound::OneOf(vec![8, 9]))], 9),
                _ => return Err(wrong_field()),
            }
        }
        ("p3_1" | "p3_2" | "p3_3" | "p3_4" | "p5_1" | "p5_2", _) => return Err(wrong_field()),
        _ => return Err(Error::Manifest(format!("unknown fixture {name:?}"))),
    };
    let mut e = CatalogEntry::new("fixture", Value::Null, field, parse(&src, field)?);
    e.claims = claims;
    e.claims.push(Claim::WalshValues(walsh));
    e.g_dependent = true;
    e.notes.push(format!("fixture {name}: {src}"));
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfpn::build_field;
    use serde_json::json;

    #[test]
    fn trace_switch_gates() {
        let f = build_field(3, 3, None).unwrap();
        let (u, v) = (f.gen_pow(2), f.gen_pow(1));
        let e = entry_trace_switch(&f, "x^5", u, v, 1).unwrap();
        assert_eq!(e.function.to_source(&f), "x^5 + g^2 * Tr[1](g^1 * x^5)");
        assert!(matches!(&e.claims[0], Claim::PerC { cs, .. } if cs == &vec![Elem::ZERO, f.from_int(-1)]));
        // v with Tr(-uv) = 1
        let bad = f
            .elements()
            .find(|&v| f.rel_trace(f.neg(f.mul(u, v)), 1).unwrap() == Elem::ONE)
            .unwrap();
        assert!(matches!(
            entry_trace_switch(&f, "x^5", u, bad, 1),
            Err(Error::HypothesisViolated(_))
        ));
        let small = build_field(2, 2, None).unwrap();
        assert!(matches!(
            entry_trace_switch(&small, "x", Elem::ONE, Elem::ZERO, 1),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn lin_trace_gates() {
        let f = build_field(2, 6, None).unwrap();
        let traceless = f
            .nonzero_elements()
            .find(|&g| f.rel_trace(g, 1).unwrap().is_zero())
            .unwrap();
        assert!(entry_lin_trace(&f, &[Elem::ZERO, Elem::ONE], &[Elem::ONE], traceless, 1).is_ok());
        let traced = f
            .nonzero_elements()
            .find(|&g| f.rel_trace(g, 1).unwrap() == Elem::ONE)
            .unwrap();
        assert!(matches!(
            entry_lin_trace(&f, &[Elem::ONE], &[Elem::ONE], traced, 1),
            Err(Error::HypothesisViolated(_))
        ));
        // coefficient outside F_2
        assert!(matches!(
            entry_lin_trace(&f, &[f.gen_pow(1)], &[Elem::ONE], traceless, 1),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn thm41_gates() {
        let f = build_field(2, 4, None).unwrap();
        let h0 = Thm41::H0 {
            l: vec![Elem::ONE],
            ell: 2,
            u: f.gen_pow(5),
        };
        assert!(entry_thm41(&f, &h0).is_ok());
        let not_fq = Thm41::H0 {
            l: vec![Elem::ONE],
            ell: 2,
            u: f.gen_pow(1),
        };
        assert!(matches!(entry_thm41(&f, &not_fq), Err(Error::HypothesisViolated(_))));
        let odd = build_field(3, 4, None).unwrap();
        let p_not_dividing = Thm41::H0 {
            l: vec![Elem::ONE],
            ell: 2,
            u: Elem::ONE,
        };
        assert!(matches!(
            entry_thm41(&odd, &p_not_dividing),
            Err(Error::HypothesisViolated(_))
        ));
        let bad_l1 = Thm41::Hk {
            l: vec![f.gen_pow(3)],
            k: 1,
        };
        assert!(matches!(entry_thm41(&f, &bad_l1), Err(Error::HypothesisViolated(_))));
        let bad_k = Thm41::Hk {
            l: vec![Elem::ONE],
            k: 4,
        };
        assert!(matches!(entry_thm41(&f, &bad_k), Err(Error::HypothesisViolated(_))));
        assert!(matches!(
            entry_thm41(
                &odd,
                &Thm41::Hk {
                    l: vec![Elem::ONE],
                    k: 1
                }
            ),
            Err(Error::HypothesisViolated(_))
        ));
        let hk = entry_thm41(
            &f,
            &Thm41::Hk {
                l: vec![Elem::ONE],
                k: 1,
            },
        )
        .unwrap();
        assert_eq!(hk.function.to_source(&f), "L{1}(x) + Tr[1](x^3)");
    }

    #[test]
    fn thm42_gates() {
        let f = build_field(2, 4, None).unwrap();
        assert!(entry_thm42(&f, &[Elem::ONE], 1, Elem::ONE, 1, &[(1, 1, Elem::ZERO)]).is_ok());
        assert!(matches!(
            entry_thm42(&f, &[Elem::ONE], 1, Elem::ONE, 3, &[(1, 1, Elem::ZERO)]),
            Err(Error::HypothesisViolated(_))
        ));
        let g = build_field(2, 6, None).unwrap();
        // 6/3 = 2 is fine, 6/2 = 3 is odd
        assert!(entry_thm42(&g, &[Elem::ONE], 1, Elem::ONE, 3, &[(1, 1, Elem::ZERO)]).is_ok());
        assert!(matches!(
            entry_thm42(&g, &[Elem::ONE], 1, Elem::ONE, 2, &[(1, 1, Elem::ZERO)]),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn build_from_params() {
        let f = build_field(3, 3, None).unwrap();
        let e = CatalogEntry::build(
            "trace_switch",
            &f,
            &json!({"f": "x^5", "u": "g^2", "v": "g", "expect": {"permutation": true, "at": {"1": 4}}}),
        )
        .unwrap();
        assert_eq!(e.claims.len(), 3);
        assert!(matches!(
            CatalogEntry::build("nope", &f, &json!({})),
            Err(Error::Manifest(_))
        ));
        assert!(matches!(
            CatalogEntry::build("table1", &f, &json!({"rows": "square"})),
            Err(Error::Manifest(_))
        ));
        assert!(matches!(
            CatalogEntry::build("claim", &f, &json!({"function": "x"})),
            Err(Error::Manifest(_))
        ));
        let t = CatalogEntry::build("table1", &f, &json!({"row": "square"})).unwrap();
        assert_eq!(t.skipped.len(), SKIPPED_ROWS.len());
        let h = CatalogEntry::build(
            "thm41",
            &build_field(2, 5, None).unwrap(),
            &json!({"variant": "Hprod", "L": ["1"], "ks": [1, 2]}),
        )
        .unwrap();
        assert_eq!(h.claims.len(), 2);
    }

    #[test]
    fn g_detection() {
        assert!(contains_g("x^5 + g^2*x"));
        assert!(contains_g("g*x"));
        assert!(!contains_g("x^3 + Tr[1](x)"));
    }
}
