use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::claims::{Bound, Claim};
use super::entries::CatalogEntry;
use crate::analysis::{bct, c_uniformity, nonlinearity, walsh};
use crate::error::{Error, Result};
use crate::funcexpr::tabulate;
use crate::gfpn::{Elem, FieldCtx};
use crate::switching::{pcn_switch_criterion, SwitchTerm};

/// Which `c` per-c claims are checked at. Max-over claims always use their own set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CRangeRepr", into = "CRangeRepr")]
pub enum CRange {
    #[default]
    All,
    Subfield(u32),
    List(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CRangeRepr {
    Keyword(String),
    Subfield { subfield: u32 },
    List(Vec<String>),
}

impl TryFrom<CRangeRepr> for CRange {
    type Error = String;

    fn try_from(r: CRangeRepr) -> std::result::Result<CRange, String> {
        match r {
            CRangeRepr::Keyword(k) if k == "all" => Ok(CRange::All),
            CRangeRepr::Keyword(k) => Err(format!("unknown c_range {k:?}")),
            CRangeRepr::Subfield { subfield } => Ok(CRange::Subfield(subfield)),
            CRangeRepr::List(v) => Ok(CRange::List(v)),
        }
    }
}

impl From<CRange> for CRangeRepr {
    fn from(r: CRange) -> CRangeRepr {
        match r {
            CRange::All => CRangeRepr::Keyword("all".into()),
            CRange::Subfield(m) => CRangeRepr::Subfield { subfield: m },
            CRange::List(v) => CRangeRepr::List(v),
        }
    }
}

impl CRange {
    fn resolve(&self, field: &FieldCtx) -> Result<Option<BTreeSet<Elem>>> {
        Ok(match self {
            CRange::All => None,
            CRange::Subfield(m) => Some(field.subfield(*m)?.elements.into_iter().collect()),
            CRange::List(v) => Some(v.iter().map(|s| field.parse_elem(s)).collect::<Result<_>>()?),
        })
    }

    fn describe(&self) -> String {
        match self {
            CRange::All => "all".into(),
            CRange::Subfield(m) => format!("subfield {m}"),
            CRange::List(v) => v.join(","),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasuredC {
    pub c: String,
    pub coeffs: String,
    pub uniformity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub claim: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub claim: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured: Option<u64>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entry: String,
    pub field: String,
    pub generator: String,
    pub params: Value,
    pub function: String,
    pub c_range: String,
    pub measured: Vec<MeasuredC>,
    pub checks: Vec<CheckOutcome>,
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// At most this many `c` values get the switching-criterion cross-check.
const CROSS_CHECK_MAX_C: usize = 16;

/// Alternative primitive elements tried when a `g`-dependent entry fails.
const ALT_GENERATORS: usize = 8;

fn evenly_spaced<T: Copy>(v: &[T], k: usize) -> Vec<T> {
    if v.len() <= k {
        return v.to_vec();
    }
    (0..k).map(|i| v[i * v.len() / k]).collect()
}

/// Tabulates the entry, measures every `c` its claims mention and evaluates
/// each claim. A failing entry built on an unpinned primitive element is
/// rebuilt with other primitive elements and the outcome noted.
pub fn verify(entry: &CatalogEntry, range: &CRange) -> Result<VerificationReport> {
    let mut report = verify_once(entry, range)?;
    if !report.passed() && entry.g_dependent {
        report.notes.push(retry_with_other_generators(entry, range));
    }
    Ok(report)
}

fn retry_with_other_generators(entry: &CatalogEntry, range: &CRange) -> String {
    let f = &entry.field;
    let candidates: Vec<Elem> = f
        .nonzero_elements()
        .filter(|&h| h != f.generator() && f.is_primitive(h))
        .take(ALT_GENERATORS)
        .collect();
    for &h in &candidates {
        let Ok(alt) = f.with_generator(h) else { continue };
        let alt = Arc::new(alt);
        let Ok(rebuilt) = CatalogEntry::build(&entry.name, &alt, &entry.params) else {
            continue;
        };
        if verify_once(&rebuilt, range).map(|r| r.passed()).unwrap_or(false) {
            return format!(
                "fails with the default primitive element but passes with g = {} (coefficients {})",
                f.label(h),
                f.coeff_string(h)
            );
        }
    }
    format!(
        "also fails for the {} alternative primitive elements tried",
        candidates.len()
    )
}

fn verify_once(entry: &CatalogEntry, range: &CRange) -> Result<VerificationReport> {
    let f = &entry.field;
    let table = tabulate(&entry.function, f)?;
    let in_range = range.resolve(f)?;
    let keep = |c: &Elem| in_range.as_ref().is_none_or(|s| s.contains(c));

    let mut needed = BTreeSet::new();
    for claim in &entry.claims {
        match claim {
            Claim::PerC { cs, .. } => needed.extend(cs.iter().copied().filter(keep)),
            Claim::MaxOver { cs, .. } => needed.extend(cs.iter().copied()),
            Claim::PcnSet(_) => needed.extend(f.elements().filter(|&c| c != Elem::ONE)),
            _ => {}
        }
    }
    let needed: Vec<Elem> = needed.into_iter().collect();
    let values: Vec<u32> = needed.par_iter().map(|&c| c_uniformity(&table, c)).collect();
    let measured: BTreeMap<Elem, u32> = needed.iter().copied().zip(values).collect();

    let mut checks = Vec::new();
    let mut counterexamples = Vec::new();
    for claim in &entry.claims {
        let name = claim.describe();
        let (pass, detail) = match claim {
            Claim::PerC { cs, bound, .. } => {
                let checked: Vec<Elem> = cs.iter().copied().filter(keep).collect();
                let bad: Vec<Elem> = checked.iter().copied().filter(|c| !bound.holds(measured[c])).collect();
                for &c in &bad {
                    counterexamples.push(Counterexample {
                        claim: name.clone(),
                        c: Some(f.label(c)),
                        measured: Some(measured[&c] as u64),
                        detail: format!(
                            "uniformity {} at c = {} (coefficients {})",
                            measured[&c],
                            f.label(c),
                            f.coeff_string(c)
                        ),
                    });
                }
                (
                    bad.is_empty(),
                    Some(format!(
                        "{} of {} c checked hold",
                        checked.len() - bad.len(),
                        checked.len()
                    )),
                )
            }
            Claim::MaxOver { cs, bound, .. } => match cs.iter().max_by_key(|&c| (measured[c], std::cmp::Reverse(*c))) {
                None => (true, Some("empty set".into())),
                Some(&arg) => {
                    let max = measured[&arg];
                    let ok = bound.holds(max);
                    if !ok {
                        counterexamples.push(Counterexample {
                            claim: name.clone(),
                            c: Some(f.label(arg)),
                            measured: Some(max as u64),
                            detail: format!("maximum {max} attained at c = {}", f.label(arg)),
                        });
                    }
                    (ok, Some(format!("maximum {max} at c = {}", f.label(arg))))
                }
            },
            Claim::PcnSet(want) => {
                let got: Vec<Elem> = measured
                    .iter()
                    .filter(|&(&c, &u)| u == 1 && c != Elem::ONE)
                    .map(|(&c, _)| c)
                    .collect();
                let want: BTreeSet<Elem> = want.iter().copied().collect();
                let got_set: BTreeSet<Elem> = got.iter().copied().collect();
                for &c in want.symmetric_difference(&got_set) {
                    counterexamples.push(Counterexample {
                        claim: name.clone(),
                        c: Some(f.label(c)),
                        measured: Some(measured[&c] as u64),
                        detail: format!("uniformity {} at c = {}", measured[&c], f.label(c)),
                    });
                }
                let labels: Vec<String> = got.iter().map(|&c| f.label(c)).collect();
                (want == got_set, Some(format!("measured {{{}}}", labels.join(", "))))
            }
            Claim::Permutation(want) => {
                let got = table.is_permutation();
                if got != *want {
                    counterexamples.push(Counterexample {
                        claim: name.clone(),
                        c: None,
                        measured: None,
                        detail: format!("is_permutation = {got}"),
                    });
                }
                (got == *want, None)
            }
            Claim::WalshValues(k) => {
                let w = walsh(&table);
                let got = w.distinct_values();
                if got != *k {
                    counterexamples.push(Counterexample {
                        claim: name.clone(),
                        c: None,
                        measured: Some(got as u64),
                        detail: format!("{got} distinct Walsh values"),
                    });
                }
                (
                    got == *k,
                    Some(format!(
                        "{got} distinct values, {} distinct magnitudes",
                        w.distinct_magnitudes()
                    )),
                )
            }
            Claim::BoomerangUniformity(k) => {
                let got = bct(&table).boomerang_uniformity;
                if got != *k {
                    counterexamples.push(Counterexample {
                        claim: name.clone(),
                        c: None,
                        measured: Some(got as u64),
                        detail: format!("boomerang uniformity {got}"),
                    });
                }
                (got == *k, None)
            }
            Claim::Nonlinearity(k) => match nonlinearity(&table) {
                Ok(got) => {
                    if got != *k {
                        counterexamples.push(Counterexample {
                            claim: name.clone(),
                            c: None,
                            measured: Some(got),
                            detail: format!("nonlinearity {got}"),
                        });
                    }
                    (got == *k, None)
                }
                Err(e) => {
                    counterexamples.push(Counterexample {
                        claim: name.clone(),
                        c: None,
                        measured: None,
                        detail: e.to_string(),
                    });
                    (false, Some(e.to_string()))
                }
            },
        };
        checks.push(CheckOutcome {
            claim: name,
            pass,
            detail,
        });
    }

    if let Some(cross) = cross_check(entry, &measured, &keep)? {
        if !cross.pass {
            counterexamples.push(Counterexample {
                claim: cross.claim.clone(),
                c: None,
                measured: None,
                detail: cross.detail.clone().unwrap_or_default(),
            });
        }
        checks.push(cross);
    }

    let verdict = if checks.iter().all(|c| c.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let mut notes = entry.notes.clone();
    if entry.g_dependent {
        notes.push(format!(
            "depends on the primitive element: g has coefficients {} under modulus {}",
            f.coeff_string(f.generator()),
            f.spec_string()
        ));
    }
    Ok(VerificationReport {
        entry: entry.name.clone(),
        field: f.spec_string(),
        generator: f.coeff_string(f.generator()),
        params: entry.params.clone(),
        function: entry.function.to_source(f),
        c_range: range.describe(),
        measured: measured
            .iter()
            .map(|(&c, &u)| MeasuredC {
                c: f.label(c),
                coeffs: f.coeff_string(c),
                uniformity: u,
            })
            .collect(),
        checks,
        verdict,
        counterexamples,
        notes,
        skipped: entry.skipped.clone(),
    })
}

/// Runs the switching criterion at PcN-claimed `c` values where the base is
/// PcN and compares with the direct count.
fn cross_check(
    entry: &CatalogEntry,
    measured: &BTreeMap<Elem, u32>,
    keep: &dyn Fn(&Elem) -> bool,
) -> Result<Option<CheckOutcome>> {
    let Some(sw) = &entry.switch else { return Ok(None) };
    let f = &entry.field;
    let mut pcn_cs: BTreeSet<Elem> = BTreeSet::new();
    for claim in &entry.claims {
        if let Claim::PerC {
            cs,
            bound: Bound::Eq(1),
            ..
        } = claim
        {
            pcn_cs.extend(cs.iter().copied().filter(|c| keep(c) && *c != Elem::ONE));
        }
    }
    if pcn_cs.is_empty() {
        return Ok(None);
    }
    let base = tabulate(&sw.base, f)?;
    let terms = sw
        .terms
        .iter()
        .map(|(u, e, m)| SwitchTerm::new(*u, tabulate(e, f)?, *m))
        .collect::<Result<Vec<_>>>()?;
    let cs: Vec<Elem> = pcn_cs.into_iter().filter(|&c| c_uniformity(&base, c) == 1).collect();
    let sample = evenly_spaced(&cs, CROSS_CHECK_MAX_C);
    let outcomes: Vec<(Elem, bool, bool)> = sample
        .par_iter()
        .map(|&c| {
            let w = pcn_switch_criterion(&base, &terms, c)?;
            Ok((c, w.is_some(), measured[&c] >= 2))
        })
        .collect::<Result<_>>()?;
    let disagree: Vec<String> = outcomes
        .iter()
        .filter(|(_, w, m)| w != m)
        .map(|(c, ..)| f.label(*c))
        .collect();
    let witnesses = outcomes.iter().filter(|(_, w, _)| *w).count();
    let detail = if disagree.is_empty() {
        format!(
            "criterion agrees with direct counts at {} of {} c (witnesses found at {witnesses})",
            sample.len(),
            cs.len()
        )
    } else {
        format!("criterion disagrees with direct counts at c = {}", disagree.join(", "))
    };
    Ok(Some(CheckOutcome {
        claim: "switching criterion agrees with direct count".into(),
        pass: disagree.is_empty(),
        detail: Some(detail),
    }))
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestItem {
    pub entry: String,
    pub field: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub c_range: CRange,
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestItem>> {
    serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))
}

/// Builds and verifies one manifest item.
pub fn run_item(item: &ManifestItem) -> Result<VerificationReport> {
    let field = Arc::new(FieldCtx::from_spec(&item.field)?);
    let entry = CatalogEntry::build(&item.entry, &field, &item.params)?;
    verify(&entry, &item.c_range)
}

/// Runs items in parallel; results come back in input order.
pub fn run_manifest(items: &[ManifestItem]) -> Vec<Result<VerificationReport>> {
    items.par_iter().map(run_item).collect()
}
