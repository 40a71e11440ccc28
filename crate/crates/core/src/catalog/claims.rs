use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gfpn::{Elem, FieldCtx};

/// Predicate on one measured uniformity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Eq(u32),
    AtMost(u32),
    Between(u32, u32),
    OneOf(Vec<u32>),
}

impl Bound {
    pub fn holds(&self, v: u32) -> bool {
        match self {
            Bound::Eq(k) => v == *k,
            Bound::AtMost(k) => v <= *k,
            Bound::Between(lo, hi) => (*lo..=*hi).contains(&v),
            Bound::OneOf(ks) => ks.contains(&v),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Bound::Eq(k) => format!("= {k}"),
            Bound::AtMost(k) => format!("<= {k}"),
            Bound::Between(lo, hi) => format!("in [{lo}, {hi}]"),
            Bound::OneOf(ks) => format!("in {ks:?}"),
        }
    }
}

/// A checkable statement about a constructed function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    /// The bound holds at each listed `c`. Restricted by the verification range.
    PerC {
        label: String,
        cs: Vec<Elem>,
        bound: Bound,
    },
    /// The bound holds for the maximum over the listed `c`.
    MaxOver {
        label: String,
        cs: Vec<Elem>,
        bound: Bound,
    },
    /// The set of `c != 1` with uniformity 1 is exactly this set.
    PcnSet(Vec<Elem>),
    Permutation(bool),
    /// Number of distinct complex Walsh values.
    WalshValues(usize),
    BoomerangUniformity(u32),
    /// Characteristic 2 only.
    Nonlinearity(u64),
}

impl Claim {
    pub fn per_c(label: impl Into<String>, cs: Vec<Elem>, bound: Bound) -> Claim {
        Claim::PerC {
            label: label.into(),
            cs,
            bound,
        }
    }

    pub fn max_over(label: impl Into<String>, cs: Vec<Elem>, bound: Bound) -> Claim {
        Claim::MaxOver {
            label: label.into(),
            cs,
            bound,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Claim::PerC { label, bound, .. } => format!("uniformity {} for {label}", bound.describe()),
            Claim::MaxOver { label, bound, .. } => format!("max uniformity over {label} {}", bound.describe()),
            Claim::PcnSet(_) => "PcN set over c != 1".into(),
            Claim::Permutation(true) => "permutation".into(),
            Claim::Permutation(false) => "not a permutation".into(),
            Claim::WalshValues(k) => format!("{k}-valued Walsh spectrum"),
            Claim::BoomerangUniformity(k) => format!("boomerang uniformity {k}"),
            Claim::Nonlinearity(k) => format!("nonlinearity {k}"),
        }
    }
}

/// Every `c != 1` of the field.
pub fn all_c(field: &FieldCtx) -> Vec<Elem> {
    field.elements().filter(|&c| c != Elem::ONE).collect()
}

/// `F_{p^m} \ {1}` inside the field.
pub fn subfield_c(field: &FieldCtx, m: u32) -> Result<Vec<Elem>> {
    Ok(field
        .subfield(m)?
        .elements
        .into_iter()
        .filter(|&c| c != Elem::ONE)
        .collect())
}

/// Extra claims attachable to any manifest entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<bool>,
    /// Exact uniformity at individual `c` literals.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub at: BTreeMap<String, u32>,
    /// Exact uniformity at every `c != 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_most: Option<u32>,
    /// Range for the maximum over `c != 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_between: Option<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_in: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pcn_set: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walsh_values: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boomerang: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinearity: Option<u64>,
}

impl Expect {
    pub fn claims(&self, field: &FieldCtx) -> Result<Vec<Claim>> {
        let mut out = Vec::new();
        if let Some(b) = self.permutation {
            out.push(Claim::Permutation(b));
        }
        for (lit, &k) in &self.at {
            let c = field.parse_elem(lit)?;
            out.push(Claim::per_c(format!("c = {lit}"), vec![c], Bound::Eq(k)));
        }
        if let Some(k) = self.all {
            out.push(Claim::per_c("all c != 1", all_c(field), Bound::Eq(k)));
        }
        if let Some(k) = self.at_most {
            out.push(Claim::per_c("all c != 1", all_c(field), Bound::AtMost(k)));
        }
        if let Some((lo, hi)) = self.max_between {
            out.push(Claim::max_over("c != 1", all_c(field), Bound::Between(lo, hi)));
        }
        if let Some(ks) = &self.max_in {
            out.push(Claim::max_over("c != 1", all_c(field), Bound::OneOf(ks.clone())));
        }
        if let Some(set) = &self.pcn_set {
            let mut cs = set.iter().map(|s| field.parse_elem(s)).collect::<Result<Vec<_>>>()?;
            cs.sort();
            cs.dedup();
            out.push(Claim::PcnSet(cs));
        }
        if let Some(k) = self.walsh_values {
            out.push(Claim::WalshValues(k));
        }
        if let Some(k) = self.boomerang {
            out.push(Claim::BoomerangUniformity(k));
        }
        if let Some(k) = self.nonlinearity {
            out.push(Claim::Nonlinearity(k));
        }
        Ok(out)
    }
}
