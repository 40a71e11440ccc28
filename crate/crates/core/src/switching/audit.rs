use std::collections::BTreeMap;

use serde::Serialize;

use super::criterion::EpsilonSet;
use super::spec::{combine, SwitchTerm};
use crate::analysis::{admissible, c_ddt_row, c_derivative, c_uniformity};
use crate::error::{Error, Result};
use crate::funcexpr::FuncTable;
use crate::gfpn::{Elem, FieldCtx};

/// `A_{a,ε} = {x : f(x + a) - c f(x) = ε}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AaEpsilonSet {
    pub a: Elem,
    pub epsilon: Elem,
    pub members: Vec<Elem>,
}

/// Partition of the domain by the value of `f(x + a) - c f(x)`, including the
/// `ε = 0` cell, ascending by `ε`.
pub fn aa_epsilon_partition(f: &FuncTable, a: Elem, c: Elem, m: u32) -> Result<Vec<AaEpsilonSet>> {
    let field = f.field();
    if !f.image_in_subfield(m) {
        return Err(Error::ImageNotInSubfield(format!(
            "f is not valued in the degree-{m} subfield"
        )));
    }
    let mut cells: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    for (x, e) in field.elements().zip(c_derivative(f, a, c)) {
        cells.entry(e).or_default().push(x);
    }
    Ok(cells
        .into_iter()
        .map(|(epsilon, members)| AaEpsilonSet { a, epsilon, members })
        .collect())
}

/// Bounds on the switched uniformity when the base is PcN at `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub c_in_subfield: bool,
    pub measured: u32,
    /// `q^2`, or `q` when `c ∈ F_q`.
    pub remark_bound: u64,
    pub remark_holds: bool,
    /// `q^2 - 1`, or `q - 1` when `c ∈ F_q`.
    pub corollary_bound: u64,
    pub corollary_holds: bool,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.remark_holds && self.corollary_holds
    }
}

/// Compares a measured uniformity of `F + u f`, `f` valued in `F_{p^m}` and
/// `F` PcN at `c`, with both published bounds.
pub fn delta_bound_check(field: &FieldCtx, c: Elem, m: u32, measured: u32) -> Result<BoundCheck> {
    field.subfield(m)?;
    let q = (field.characteristic() as u64).pow(m);
    let inside = field.in_subfield(c, m);
    let remark_bound = if inside { q } else { q * q };
    let corollary_bound = remark_bound - 1;
    Ok(BoundCheck {
        c_in_subfield: inside,
        measured,
        remark_bound,
        remark_holds: measured as u64 <= remark_bound,
        corollary_bound,
        corollary_holds: measured as u64 <= corollary_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub name: String,
    pub applicable: bool,
    pub holds: bool,
    pub detail: String,
}

impl ClauseResult {
    fn skipped(name: &str, why: &str) -> ClauseResult {
        ClauseResult {
            name: name.into(),
            applicable: false,
            holds: true,
            detail: why.into(),
        }
    }

    fn checked(name: &str, holds: bool, detail: String) -> ClauseResult {
        ClauseResult {
            name: name.into(),
            applicable: true,
            holds,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub c: Elem,
    pub delta: u32,
    pub h_uniformity: u32,
    /// Least `(a, b)` attaining the switched uniformity, when it exceeds `delta`.
    pub point: Option<(Elem, Elem)>,
    pub solution_set: Vec<Elem>,
    pub clauses: Vec<ClauseResult>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }
}

/// Additive and bijective, checked on the polynomial basis.
fn is_linear_permutation(t: &FuncTable) -> bool {
    let f = t.field();
    let p = f.characteristic();
    t.is_permutation()
        && t.at(Elem::ZERO).is_zero()
        && (0..f.degree()).all(|i| {
            let w = f.elem((p as u64).pow(i)).unwrap();
            f.elements().all(|x| t.at(f.add(x, w)) == f.add(t.at(x), t.at(w)))
        })
}

/// Audits the structure of a maximal solution set of the switched function
/// against the necessary conditions derived from the generalized criterion.
///
/// Clauses:
/// * `pairwise_differences`: every ordered pair satisfies
///   `cD_aF(x_i) - cD_aF(x_j) = -Σ u_t ε_t` with `ε_t = cD_a f_t(x_i) - cD_a f_t(x_j)`
///   lying in `{α - cβ}`.
/// * `not_one_cell`: the solutions do not all share one `A_{a,ε}` cell vector.
/// * `distinct_cells`: when `F` is PcN, the solutions lie in pairwise distinct cells.
/// * `gamma_pairs` / `gamma_pairs_flipped`: for a single term, linear
///   permutation `F` and a solution set at least as large as `q^2 - 1`
///   (`q - 1` for `c ∈ F_q`), every `γ ∈ F_q^*` has a pair with
///   `(1 - c)F(x_i - x_j)` equal to `u(c - 1)γ`, respectively `u(1 - c)γ`.
pub fn witness_structure_audit(base: &FuncTable, terms: &[SwitchTerm], c: Elem, delta: u32) -> Result<AuditReport> {
    let f = base.field();
    let base_u = c_uniformity(base, c);
    if base_u > delta {
        return Err(Error::HypothesisViolated(format!(
            "base uniformity {base_u} at c = {} exceeds delta = {delta}",
            f.label(c)
        )));
    }
    let h = combine(base, terms);
    let h_u = c_uniformity(&h, c);
    let mut report = AuditReport {
        c,
        delta,
        h_uniformity: h_u,
        point: None,
        solution_set: Vec::new(),
        clauses: Vec::new(),
    };
    if h_u <= delta {
        report.clauses.push(ClauseResult::skipped(
            "all",
            "switched uniformity does not exceed delta",
        ));
        return Ok(report);
    }

    let (a, b) = f
        .elements()
        .filter(|&a| admissible(c, a))
        .find_map(|a| {
            let row = c_ddt_row(&h, c, a);
            row.iter()
                .position(|&k| k == h_u)
                .map(|b| (a, Elem::from_raw(b as u32)))
        })
        .expect("uniformity is attained");
    let d_h = c_derivative(&h, a, c);
    let xs: Vec<Elem> = f.elements().filter(|x| d_h[x.index() as usize] == b).collect();
    let d_f = c_derivative(base, a, c);
    let d_terms: Vec<Vec<Elem>> = terms.iter().map(|t| c_derivative(&t.f, a, c)).collect();
    let eps_sets: Vec<EpsilonSet> = terms
        .iter()
        .map(|t| EpsilonSet::new(f, c, t.m))
        .collect::<Result<_>>()?;
    let at = |v: &[Elem], x: Elem| v[x.index() as usize];

    let mut bad_pairs = Vec::new();
    for &xi in &xs {
        for &xj in &xs {
            if xi == xj {
                continue;
            }
            let eps: Vec<Elem> = d_terms.iter().map(|d| f.sub(at(d, xi), at(d, xj))).collect();
            let in_sets = eps.iter().zip(&eps_sets).all(|(&e, s)| e.is_zero() || s.contains(e));
            let s = terms
                .iter()
                .zip(&eps)
                .fold(Elem::ZERO, |acc, (t, &e)| f.add(acc, f.mul(t.u, e)));
            if !in_sets || f.sub(at(&d_f, xi), at(&d_f, xj)) != f.neg(s) {
                bad_pairs.push((f.label(xi), f.label(xj)));
            }
        }
    }
    report.clauses.push(ClauseResult::checked(
        "pairwise_differences",
        bad_pairs.is_empty(),
        if bad_pairs.is_empty() {
            format!("{} ordered pairs", xs.len() * (xs.len() - 1))
        } else {
            format!("violations: {bad_pairs:?}")
        },
    ));

    let cell = |x: Elem| d_terms.iter().map(|d| at(d, x)).collect::<Vec<_>>();
    let cells: Vec<Vec<Elem>> = xs.iter().map(|&x| cell(x)).collect();
    let distinct: std::collections::BTreeSet<&Vec<Elem>> = cells.iter().collect();
    report.clauses.push(ClauseResult::checked(
        "not_one_cell",
        distinct.len() > 1,
        format!("{} distinct cells", distinct.len()),
    ));
    if base_u == 1 {
        report.clauses.push(ClauseResult::checked(
            "distinct_cells",
            distinct.len() == xs.len(),
            format!("{} solutions in {} cells", xs.len(), distinct.len()),
        ));
    } else {
        report
            .clauses
            .push(ClauseResult::skipped("distinct_cells", "base is not PcN"));
    }

    let gamma = gamma_clauses(f, base, terms, c, &xs);
    report.clauses.extend(gamma);
    report.point = Some((a, b));
    report.solution_set = xs;
    Ok(report)
}

fn gamma_clauses(f: &FieldCtx, base: &FuncTable, terms: &[SwitchTerm], c: Elem, xs: &[Elem]) -> Vec<ClauseResult> {
    let names = ["gamma_pairs", "gamma_pairs_flipped"];
    let skip = |why: &str| names.iter().map(|n| ClauseResult::skipped(n, why)).collect();
    if terms.len() != 1 {
        return skip("needs exactly one switching term");
    }
    if c == Elem::ONE || !is_linear_permutation(base) {
        return skip("needs a linear permutation base and c != 1");
    }
    let t = &terms[0];
    let q = (f.characteristic() as usize).pow(t.m);
    let extremal = if f.in_subfield(c, t.m) { q - 1 } else { q * q - 1 };
    if xs.len() < extremal.max(2) {
        return skip(&format!(
            "solution set of size {} is below the extremal size {extremal}",
            xs.len()
        ));
    }
    let one_minus_c = f.sub(Elem::ONE, c);
    let lhs: std::collections::BTreeSet<Elem> = xs
        .iter()
        .flat_map(|&xi| xs.iter().filter(move |&&xj| xj != xi).map(move |&xj| (xi, xj)))
        .map(|(xi, xj)| f.mul(one_minus_c, base.at(f.sub(xi, xj))))
        .collect();
    let gammas = f
        .subfield(t.m)
        .unwrap()
        .elements
        .into_iter()
        .filter(|g| !g.is_zero())
        .collect::<Vec<_>>();
    let check = |sign: Elem| {
        let missing: Vec<String> = gammas
            .iter()
            .filter(|&&g| !lhs.contains(&f.mul(f.mul(t.u, sign), g)))
            .map(|&g| f.label(g))
            .collect();
        (
            missing.is_empty(),
            if missing.is_empty() {
                format!("all {} values of gamma", gammas.len())
            } else {
                format!("no pair for gamma in {missing:?}")
            },
        )
    };
    let (printed, d1) = check(f.sub(c, Elem::ONE));
    let (flipped, d2) = check(one_minus_c);
    vec![
        ClauseResult::checked(names[0], printed, d1),
        ClauseResult::checked(names[1], flipped, d2),
    ]
}
