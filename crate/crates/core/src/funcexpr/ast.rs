use std::fmt;

use crate::gfpn::{Elem, FieldCtx};

/// Syntax tree of a univariate function over `F_{p^N}`.
///
/// `Add`, `Sub` and `Mul` are n-ary with at least two operands; `Sub` is
/// `items[0] - items[1] - ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FuncExpr {
    Var,
    Const(Elem),
    /// Exponent already reduced into `[0, p^N - 1]`.
    Pow(Box<FuncExpr>, u64),
    Neg(Box<FuncExpr>),
    Mul(Vec<FuncExpr>),
    Add(Vec<FuncExpr>),
    Sub(Vec<FuncExpr>),
    /// Relative trace `Tr_{p^N/p^m}` of the argument.
    TraceTo(u32, Box<FuncExpr>),
    /// `Σ coeffs[i] · arg^{q^i}` with `q = p^t`.
    Linearized {
        coeffs: Vec<Elem>,
        t: u32,
        arg: Box<FuncExpr>,
    },
}

impl FuncExpr {
    pub fn var() -> FuncExpr {
        FuncExpr::Var
    }

    pub fn constant(c: Elem) -> FuncExpr {
        FuncExpr::Const(c)
    }

    pub fn pow(self, e: u64) -> FuncExpr {
        FuncExpr::Pow(Box::new(self), e)
    }

    pub fn trace_to(self, m: u32) -> FuncExpr {
        FuncExpr::TraceTo(m, Box::new(self))
    }

    pub fn neg(self) -> FuncExpr {
        FuncExpr::Neg(Box::new(self))
    }

    pub fn add(items: Vec<FuncExpr>) -> FuncExpr {
        Self::nary(items, FuncExpr::Add)
    }

    pub fn sub(items: Vec<FuncExpr>) -> FuncExpr {
        Self::nary(items, FuncExpr::Sub)
    }

    pub fn mul(items: Vec<FuncExpr>) -> FuncExpr {
        Self::nary(items, FuncExpr::Mul)
    }

    fn nary(mut items: Vec<FuncExpr>, make: fn(Vec<FuncExpr>) -> FuncExpr) -> FuncExpr {
        assert!(!items.is_empty(), "n-ary node needs at least one operand");
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            make(items)
        }
    }

    /// `Σ coeffs[i] x^{p^{t i}}` applied to `x` itself.
    pub fn linearized(coeffs: Vec<Elem>, t: u32) -> FuncExpr {
        FuncExpr::Linearized {
            coeffs,
            t,
            arg: Box::new(FuncExpr::Var),
        }
    }

    /// Source text that parses back to this tree over `field`.
    pub fn display<'a>(&'a self, field: &'a FieldCtx) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, field }
    }

    pub fn to_source(&self, field: &FieldCtx) -> String {
        self.display(field).to_string()
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a FuncExpr,
    field: &'a FieldCtx,
}

pub(crate) fn const_literal(field: &FieldCtx, c: Elem) -> String {
    if c.index() < field.characteristic() {
        c.index().to_string()
    } else {
        field.label(c)
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.field)
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &FuncExpr, field: &FieldCtx, paren: bool) -> fmt::Result {
    if paren {
        f.write_str("(")?;
        write_expr(f, e, field)?;
        f.write_str(")")
    } else {
        write_expr(f, e, field)
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, items: &[FuncExpr], sep: &str, field: &FieldCtx, mul: bool) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        let paren = matches!(item, FuncExpr::Add(_) | FuncExpr::Sub(_)) || (mul && matches!(item, FuncExpr::Mul(_)));
        write_child(f, item, field, paren)?;
    }
    Ok(())
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &FuncExpr, field: &FieldCtx) -> fmt::Result {
    match e {
        FuncExpr::Var => f.write_str("x"),
        FuncExpr::Const(c) => f.write_str(&const_literal(field, *c)),
        FuncExpr::Pow(base, k) => {
            let bare = matches!(
                **base,
                FuncExpr::Var | FuncExpr::TraceTo(..) | FuncExpr::Linearized { .. }
            );
            write_child(f, base, field, !bare)?;
            write!(f, "^{k}")
        }
        FuncExpr::Neg(inner) => {
            f.write_str("-")?;
            let paren = matches!(**inner, FuncExpr::Add(_) | FuncExpr::Sub(_) | FuncExpr::Mul(_));
            write_child(f, inner, field, paren)
        }
        FuncExpr::Mul(items) => write_joined(f, items, " * ", field, true),
        FuncExpr::Add(items) => write_joined(f, items, " + ", field, false),
        FuncExpr::Sub(items) => write_joined(f, items, " - ", field, false),
        FuncExpr::TraceTo(m, inner) => {
            write!(f, "Tr[{m}](")?;
            write_expr(f, inner, field)?;
            f.write_str(")")
        }
        FuncExpr::Linearized { coeffs, t, arg } => {
            f.write_str("L{")?;
            for (i, c) in coeffs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&const_literal(field, *c))?;
            }
            if *t != 1 {
                write!(f, "; {t}")?;
            }
            f.write_str("}(")?;
            write_expr(f, arg, field)?;
            f.write_str(")")
        }
    }
}
