use std::collections::BTreeSet;

use rayon::prelude::*;

use super::spec::SwitchTerm;
use crate::analysis::{admissible, c_derivative, c_uniformity};
use crate::error::{Error, Result};
use crate::funcexpr::FuncTable;
use crate::gfpn::{Elem, FieldCtx};

/// `{α - cβ : α, β ∈ F_{p^m}} \ {0}`, ascending by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonSet {
    pub c: Elem,
    pub m: u32,
    pub elements: Vec<Elem>,
}

impl EpsilonSet {
    pub fn new(field: &FieldCtx, c: Elem, m: u32) -> Result<EpsilonSet> {
        let sub = field.subfield(m)?;
        let mut set = BTreeSet::new();
        for &alpha in &sub.elements {
            for &beta in &sub.elements {
                let e = field.sub(alpha, field.mul(c, beta));
                if !e.is_zero() {
                    set.insert(e);
                }
            }
        }
        Ok(EpsilonSet {
            c,
            m,
            elements: set.into_iter().collect(),
        })
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Certificate that a switched function is not PcN: `x != y` with
/// `cD_a f_i(x) - cD_a f_i(y) = ε_i` and `cD_a F(x) - cD_a F(y) = -Σ u_i ε_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchWitness {
    pub a: Elem,
    pub x: Elem,
    pub y: Elem,
    pub epsilon: Vec<Elem>,
}

/// Candidate ε-vectors above this count fall back to pair enumeration.
const PRODUCT_CAP: usize = 1 << 12;

/// Searches for a witness that `F + Σ u_i f_i` is not PcN at `c`, given `F`
/// PcN at `c`. Returns the least `(a, x, y)` by index with `x < y`.
///
/// For each `a`, the c-derivative of `F` is a bijection, so for every `x` and
/// every admissible ε-vector the partner `y` is found by inverting it; only
/// the `f_i` conditions are then checked.
pub fn pcn_switch_criterion(base: &FuncTable, terms: &[SwitchTerm], c: Elem) -> Result<Option<SwitchWitness>> {
    let f = base.field();
    if c_uniformity(base, c) != 1 {
        return Err(Error::BaseNotPcN(format!(
            "base function is not PcN at c = {}",
            f.label(c)
        )));
    }
    if terms.is_empty() {
        return Ok(None);
    }
    let eps_sets: Vec<Vec<Elem>> = terms
        .iter()
        .map(|t| {
            let mut v = vec![Elem::ZERO];
            v.extend(EpsilonSet::new(f, c, t.m)?.elements);
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let product: usize = eps_sets
        .iter()
        .map(Vec::len)
        .fold(1usize, |acc, n| acc.saturating_mul(n));
    let vectors = if product <= PRODUCT_CAP {
        Some(epsilon_vectors(&eps_sets))
    } else {
        None
    };

    let found = f
        .elements()
        .filter(|&a| admissible(c, a))
        .collect::<Vec<_>>()
        .into_par_iter()
        .find_map_first(|a| search_row(base, terms, c, a, vectors.as_deref(), &eps_sets));
    Ok(found)
}

/// Every nonzero vector in the product of the given sets, each with `Σ u_i ε_i`
/// precomputed later by the caller.
fn epsilon_vectors(sets: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
    for s in sets {
        out = out
            .into_iter()
            .flat_map(|v| s.iter().map(move |&e| [v.clone(), vec![e]].concat()))
            .collect();
    }
    out.retain(|v| v.iter().any(|e| !e.is_zero()));
    out
}

fn search_row(
    base: &FuncTable,
    terms: &[SwitchTerm],
    c: Elem,
    a: Elem,
    vectors: Option<&[Vec<Elem>]>,
    eps_sets: &[Vec<Elem>],
) -> Option<SwitchWitness> {
    let f = base.field();
    let d_f = c_derivative(base, a, c);
    let d_terms: Vec<Vec<Elem>> = terms.iter().map(|t| c_derivative(&t.f, a, c)).collect();
    let at = |v: &[Elem], x: Elem| v[x.index() as usize];
    let matches =
        |x: Elem, y: Elem, eps: &[Elem]| d_terms.iter().zip(eps).all(|(d, &e)| f.sub(at(d, x), at(d, y)) == e);

    match vectors {
        Some(vectors) => {
            let mut inv = vec![Elem::ZERO; f.size()];
            for x in f.elements() {
                inv[at(&d_f, x).index() as usize] = x;
            }
            let shifts: Vec<Elem> = vectors
                .iter()
                .map(|eps| {
                    terms
                        .iter()
                        .zip(eps)
                        .fold(Elem::ZERO, |acc, (t, &e)| f.add(acc, f.mul(t.u, e)))
                })
                .collect();
            for x in f.elements() {
                let best = vectors
                    .iter()
                    .zip(&shifts)
                    .filter(|(_, s)| !s.is_zero())
                    .filter_map(|(eps, &s)| {
                        let y = inv[f.add(at(&d_f, x), s).index() as usize];
                        (y > x && matches(x, y, eps)).then_some((y, eps))
                    })
                    .min_by_key(|(y, _)| *y);
                if let Some((y, eps)) = best {
                    return Some(SwitchWitness {
                        a,
                        x,
                        y,
                        epsilon: eps.clone(),
                    });
                }
            }
            None
        }
        None => {
            for x in f.elements() {
                for y in f.elements().skip(x.index() as usize + 1) {
                    let eps: Vec<Elem> = d_terms.iter().map(|d| f.sub(at(d, x), at(d, y))).collect();
                    if eps.iter().all(|e| e.is_zero()) || !eps.iter().zip(eps_sets).all(|(e, s)| s.contains(e)) {
                        continue;
                    }
                    let s = terms
                        .iter()
                        .zip(&eps)
                        .fold(Elem::ZERO, |acc, (t, &e)| f.add(acc, f.mul(t.u, e)));
                    if f.sub(at(&d_f, x), at(&d_f, y)) == f.neg(s) {
                        return Some(SwitchWitness { a, x, y, epsilon: eps });
                    }
                }
            }
            None
        }
    }
}

/// Re-evaluates both defining equalities of a witness from the tables, and
/// that the switched function really collides at `(x, y)`.
pub fn verify_witness(base: &FuncTable, terms: &[SwitchTerm], c: Elem, w: &SwitchWitness) -> bool {
    let f = base.field();
    if w.x == w.y || w.epsilon.len() != terms.len() || w.epsilon.iter().all(|e| e.is_zero()) {
        return false;
    }
    let deriv = |t: &FuncTable, x: Elem| f.sub(t.at(f.add(x, w.a)), f.mul(c, t.at(x)));
    let terms_ok = terms
        .iter()
        .zip(&w.epsilon)
        .all(|(t, &e)| f.sub(deriv(&t.f, w.x), deriv(&t.f, w.y)) == e);
    let s = terms
        .iter()
        .zip(&w.epsilon)
        .fold(Elem::ZERO, |acc, (t, &e)| f.add(acc, f.mul(t.u, e)));
    let base_ok = f.sub(deriv(base, w.x), deriv(base, w.y)) == f.neg(s);
    let h = |x: Elem| {
        terms
            .iter()
            .fold(deriv(base, x), |acc, t| f.add(acc, f.mul(t.u, deriv(&t.f, x))))
    };
    terms_ok && base_ok && h(w.x) == h(w.y) && admissible(c, w.a)
}
