use std::sync::Arc;

use rayon::prelude::*;

use super::ast::FuncExpr;
use crate::error::{Error, Result};
use crate::gfpn::{Elem, FieldCtx};

/// Dense evaluation table of an `(N, N)`-function: `values[x] = F(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncTable {
    field: Arc<FieldCtx>,
    values: Vec<Elem>,
}

const PAR_THRESHOLD: usize = 1 << 12;

fn map_values(field: &FieldCtx, src: Vec<Elem>, f: impl Fn(Elem) -> Elem + Sync) -> Vec<Elem> {
    let mut v = src;
    if field.size() >= PAR_THRESHOLD {
        v.par_iter_mut().for_each(|x| *x = f(*x));
    } else {
        v.iter_mut().for_each(|x| *x = f(*x));
    }
    v
}

impl FuncTable {
    pub fn new(field: Arc<FieldCtx>, values: Vec<Elem>) -> Result<FuncTable> {
        if values.len() != field.size() {
            return Err(Error::ElementOutOfRange(values.len() as u64));
        }
        if let Some(bad) = values.iter().find(|v| v.index() >= field.order()) {
            return Err(Error::ElementOutOfRange(bad.index() as u64));
        }
        Ok(FuncTable { field, values })
    }

    pub fn from_fn(field: &Arc<FieldCtx>, f: impl Fn(Elem) -> Elem) -> FuncTable {
        let values = field.elements().map(f).collect();
        FuncTable {
            field: field.clone(),
            values,
        }
    }

    pub fn identity(field: &Arc<FieldCtx>) -> FuncTable {
        Self::from_fn(field, |x| x)
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: Elem) -> Elem {
        self.values[x.index() as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True iff the table is a bijection of the field.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        for v in &self.values {
            let slot = &mut seen[v.index() as usize];
            if *slot {
                return false;
            }
            *slot = true;
        }
        true
    }

    /// Whether every value lies in the degree-`m` subfield.
    pub fn image_in_subfield(&self, m: u32) -> bool {
        self.values.iter().all(|&v| self.field.in_subfield(v, m))
    }

    /// Pointwise `self + scale · other`.
    pub fn add_scaled(&self, scale: Elem, other: &FuncTable) -> FuncTable {
        let f = &self.field;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f.add(a, f.mul(scale, b)))
            .collect();
        FuncTable {
            field: f.clone(),
            values,
        }
    }

    pub fn map(&self, g: impl Fn(Elem) -> Elem + Sync) -> FuncTable {
        FuncTable {
            field: self.field.clone(),
            values: map_values(&self.field, self.values.clone(), g),
        }
    }

    /// `x -> F(x + e)`.
    pub fn shifted(&self, e: Elem) -> FuncTable {
        let f = &self.field;
        let values = f.elements().map(|x| self.at(f.add(x, e))).collect();
        FuncTable {
            field: f.clone(),
            values,
        }
    }
}

/// Evaluates the tree at every field element.
pub fn tabulate(expr: &FuncExpr, field: &Arc<FieldCtx>) -> Result<FuncTable> {
    let values = eval_all(expr, field)?;
    Ok(FuncTable {
        field: field.clone(),
        values,
    })
}

fn eval_all(expr: &FuncExpr, f: &FieldCtx) -> Result<Vec<Elem>> {
    Ok(match expr {
        FuncExpr::Var => f.elements().collect(),
        FuncExpr::Const(c) => vec![*c; f.size()],
        FuncExpr::Pow(base, e) => map_values(f, eval_all(base, f)?, |v| f.pow_u(v, *e)),
        FuncExpr::Neg(inner) => map_values(f, eval_all(inner, f)?, |v| f.neg(v)),
        FuncExpr::Mul(items) | FuncExpr::Add(items) | FuncExpr::Sub(items) => {
            let mut acc = eval_all(&items[0], f)?;
            for item in &items[1..] {
                let rhs = eval_all(item, f)?;
                for (a, b) in acc.iter_mut().zip(rhs) {
                    *a = match expr {
                        FuncExpr::Mul(_) => f.mul(*a, b),
                        FuncExpr::Add(_) => f.add(*a, b),
                        _ => f.sub(*a, b),
                    };
                }
            }
            acc
        }
        FuncExpr::TraceTo(m, inner) => {
            f.rel_trace(Elem::ZERO, *m)?;
            map_values(f, eval_all(inner, f)?, |v| f.rel_trace(v, *m).unwrap_or_default())
        }
        FuncExpr::Linearized { coeffs, t, arg } => {
            check_linearized(coeffs, *t, f)?;
            map_values(f, eval_all(arg, f)?, |v| eval_linearized(f, coeffs, *t, v))
        }
    })
}

pub(crate) fn check_linearized(coeffs: &[Elem], t: u32, f: &FieldCtx) -> Result<()> {
    if t == 0 || !f.degree().is_multiple_of(t) {
        return Err(Error::NotADivisor { m: t, n: f.degree() });
    }
    if coeffs.len() as u32 > f.degree() / t {
        return Err(Error::HypothesisViolated(format!(
            "{} coefficients given but a p^{t}-linearized polynomial has at most {}",
            coeffs.len(),
            f.degree() / t
        )));
    }
    Ok(())
}

/// `Σ coeffs[i] x^{p^{t i}}`.
#[inline]
pub fn eval_linearized(f: &FieldCtx, coeffs: &[Elem], t: u32, x: Elem) -> Elem {
    coeffs.iter().enumerate().fold(Elem::ZERO, |acc, (i, &a)| {
        f.add(acc, f.mul(a, f.frobenius(x, t * i as u32)))
    })
}

/// Evaluates the tree at a single point by walking the AST.
pub fn evaluate(expr: &FuncExpr, f: &FieldCtx, x: Elem) -> Result<Elem> {
    Ok(match expr {
        FuncExpr::Var => x,
        FuncExpr::Const(c) => *c,
        FuncExpr::Pow(base, e) => f.pow_u(evaluate(base, f, x)?, *e),
        FuncExpr::Neg(inner) => f.neg(evaluate(inner, f, x)?),
        FuncExpr::Mul(items) => items
            .iter()
            .try_fold(Elem::ONE, |acc, it| Ok::<_, Error>(f.mul(acc, evaluate(it, f, x)?)))?,
        FuncExpr::Add(items) => items
            .iter()
            .try_fold(Elem::ZERO, |acc, it| Ok::<_, Error>(f.add(acc, evaluate(it, f, x)?)))?,
        FuncExpr::Sub(items) => {
            let first = evaluate(&items[0], f, x)?;
            items[1..]
                .iter()
                .try_fold(first, |acc, it| Ok::<_, Error>(f.sub(acc, evaluate(it, f, x)?)))?
        }
        FuncExpr::TraceTo(m, inner) => f.rel_trace(evaluate(inner, f, x)?, *m)?,
        FuncExpr::Linearized { coeffs, t, arg } => {
            check_linearized(coeffs, *t, f)?;
            eval_linearized(f, coeffs, *t, evaluate(arg, f, x)?)
        }
    })
}
