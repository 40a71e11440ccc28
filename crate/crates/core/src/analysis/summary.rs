use serde::Serialize;

use super::bct::bct;
use super::cddt::uniformities;
use super::walsh::{nonlinearity_of, walsh};
use crate::funcexpr::FuncTable;
use crate::gfpn::Elem;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CUniformity {
    pub c: String,
    pub uniformity: u32,
}

/// One-record overview of a function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub field: String,
    pub permutation: bool,
    /// Uniformity at `c = 1`.
    pub differential_uniformity: u32,
    pub boomerang_uniformity: u32,
    /// Characteristic 2 only.
    pub nonlinearity: Option<u64>,
    pub c_uniformity: Vec<CUniformity>,
    pub pcn_c_set: Vec<String>,
    /// Distinct magnitudes rounded to `1e-6`, over all `a` and all `b != 0`.
    pub walsh_distinct_magnitudes: usize,
    /// Distinct complex Walsh values over the same points.
    pub walsh_distinct_values: usize,
    pub walsh_max_magnitude: f64,
}

pub fn spectrum_summary(table: &FuncTable) -> SpectrumSummary {
    let f = table.field();
    let us = uniformities(table);
    let w = walsh(table);
    let label = |c: Elem| f.label(c);
    SpectrumSummary {
        field: f.spec_string(),
        permutation: table.is_permutation(),
        differential_uniformity: us[Elem::ONE.index() as usize],
        boomerang_uniformity: bct(table).boomerang_uniformity,
        nonlinearity: (f.characteristic() == 2).then(|| nonlinearity_of(&w)),
        c_uniformity: f
            .elements()
            .map(|c| CUniformity {
                c: label(c),
                uniformity: us[c.index() as usize],
            })
            .collect(),
        pcn_c_set: f
            .elements()
            .filter(|c| us[c.index() as usize] == 1)
            .map(label)
            .collect(),
        walsh_distinct_magnitudes: w.distinct_magnitudes(),
        walsh_distinct_values: w.distinct_values(),
        walsh_max_magnitude: (w.max_magnitude() * 1e6).round() / 1e6,
    }
}
