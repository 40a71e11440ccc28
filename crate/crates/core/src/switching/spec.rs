use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcexpr::{parse, tabulate, FuncTable};
use crate::gfpn::{Elem, FieldCtx};

/// Serialized form: `{"base": "...", "terms": [{"u": "g^k", "f": "...", "m": 1}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchSpec {
    pub base: String,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub u: String,
    pub f: String,
    /// Degree of the subfield containing the image of `f`.
    pub m: u32,
}

/// A tabulated switching term `u · f` with `f` valued in `F_{p^m}`.
#[derive(Debug, Clone)]
pub struct SwitchTerm {
    pub u: Elem,
    pub f: FuncTable,
    pub m: u32,
}

impl SwitchTerm {
    pub fn new(u: Elem, f: FuncTable, m: u32) -> Result<SwitchTerm> {
        let field = f.field().clone();
        if m == 0 || !field.degree().is_multiple_of(m) {
            return Err(Error::NotADivisor { m, n: field.degree() });
        }
        if u.is_zero() {
            return Err(Error::ZeroSwitchCoefficient);
        }
        if let Some(x) = field.elements().find(|&x| !field.in_subfield(f.at(x), m)) {
            return Err(Error::ImageNotInSubfield(format!(
                "f({}) = {} is not in the degree-{m} subfield",
                field.label(x),
                field.label(f.at(x))
            )));
        }
        Ok(SwitchTerm { u, f, m })
    }
}

/// `H = F + Σ u_i f_i` together with its parts.
#[derive(Debug, Clone)]
pub struct BuiltSwitch {
    pub h: FuncTable,
    pub base: FuncTable,
    pub terms: Vec<SwitchTerm>,
}

pub fn combine(base: &FuncTable, terms: &[SwitchTerm]) -> FuncTable {
    terms.iter().fold(base.clone(), |acc, t| acc.add_scaled(t.u, &t.f))
}

pub fn build_switch(spec: &SwitchSpec, field: &Arc<FieldCtx>) -> Result<BuiltSwitch> {
    let base = tabulate(&parse(&spec.base, field)?, field)?;
    let terms = spec
        .terms
        .iter()
        .map(|t| {
            let u = field.parse_elem(&t.u)?;
            let f = tabulate(&parse(&t.f, field)?, field)?;
            SwitchTerm::new(u, f, t.m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BuiltSwitch {
        h: combine(&base, &terms),
        base,
        terms,
    })
}
