use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{bct, nonlinearity, uniformities};
use crate::error::{Error, Result};
use crate::funcexpr::{parse_with_params, tabulate};
use crate::gfpn::{Elem, FieldCtx};
use std::sync::Arc;

/// Default limit on the number of grid points.
pub const DEFAULT_GRID_CAP: usize = 1 << 12;

/// One named parameter and the values it ranges over, in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridAxis {
    pub name: String,
    pub values: Vec<Elem>,
}

/// Parses `name=domain;filter;...` axes joined by `&`.
///
/// Domains: `all`, `nonzero`, `sub<m>` (the degree-`m` subfield), or a
/// literal list `{g^3,0,-1}`. Filters: `tr<m>==lit`, `tr<m>!=lit` (relative
/// trace to the degree-`m` subfield), `nonzero`.
pub fn parse_grid(spec: &str, field: &FieldCtx) -> Result<Vec<GridAxis>> {
    let bad = |msg: &str| Error::Syntax {
        pos: 0,
        msg: format!("grid {spec:?}: {msg}"),
    };
    let mut axes = Vec::new();
    for part in spec.split('&') {
        let mut pieces = part.split(';').map(str::trim);
        let head = pieces.next().unwrap_or_default();
        let (name, domain) = head.split_once('=').ok_or_else(|| bad("expected name=domain"))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || name == "x" || name == "g"
        {
            return Err(bad("parameter names are identifiers other than x and g"));
        }
        let domain = domain.trim();
        let mut values: Vec<Elem> = match domain {
            "all" => field.elements().collect(),
            "nonzero" => field.nonzero_elements().collect(),
            d if d.starts_with("sub") => {
                let m: u32 = d[3..].parse().map_err(|_| bad("sub<m> needs a degree"))?;
                field.subfield(m)?.elements
            }
            d if d.starts_with('{') && d.ends_with('}') => {
                let mut v = d[1..d.len() - 1]
                    .split(',')
                    .map(|s| field.parse_elem(s))
                    .collect::<Result<Vec<_>>>()?;
                v.sort();
                v.dedup();
                v
            }
            _ => return Err(bad("unknown domain")),
        };
        for filter in pieces.filter(|s| !s.is_empty()) {
            if filter == "nonzero" {
                values.retain(|v| !v.is_zero());
                continue;
            }
            let rest = filter.strip_prefix("tr").ok_or_else(|| bad("unknown filter"))?;
            let (m, lit, equal) = if let Some((m, lit)) = rest.split_once("!=") {
                (m, lit, false)
            } else if let Some((m, lit)) = rest.split_once("==") {
                (m, lit, true)
            } else {
                return Err(bad("filters compare with == or !="));
            };
            let m: u32 = m.trim().parse().map_err(|_| bad("tr<m> needs a degree"))?;
            let target = field.parse_elem(lit)?;
            let traces = values
                .iter()
                .map(|&v| field.rel_trace(v, m))
                .collect::<Result<Vec<_>>>()?;
            values = values
                .into_iter()
                .zip(traces)
                .filter(|&(_, t)| (t == target) == equal)
                .map(|(v, _)| v)
                .collect();
        }
        if axes.iter().any(|a: &GridAxis| a.name == name) {
            return Err(bad("repeated parameter"));
        }
        axes.push(GridAxis {
            name: name.to_string(),
            values,
        });
    }
    if axes.len() > 2 {
        return Err(bad("at most two parameters"));
    }
    Ok(axes)
}

/// Cartesian product of the axes, first axis outermost.
pub fn grid_points(axes: &[GridAxis], cap: usize) -> Result<Vec<Vec<Elem>>> {
    let size = axes
        .iter()
        .map(|a| a.values.len())
        .fold(1usize, |acc, n| acc.saturating_mul(n));
    if size > cap {
        return Err(Error::GridTooLarge { size, cap });
    }
    let mut points: Vec<Vec<Elem>> = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| axis.values.iter().map(move |&v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    /// `(name, label, coefficients)` per parameter.
    pub params: Vec<(String, String, String)>,
    pub function: String,
    pub permutation: bool,
    /// Uniformity at `c = 1`.
    pub differential_uniformity: u32,
    /// Maximum over `c != 1`.
    pub max_c_uniformity: u32,
    /// Number of `c != 1` with uniformity 1.
    pub pcn_count: usize,
    pub boomerang_uniformity: u32,
    pub nonlinearity: Option<u64>,
    /// Uniformity at every `c`, by element index.
    pub per_c: Vec<u32>,
}

/// Evaluates `source` at every grid point, in grid order.
pub fn scan(field: &Arc<FieldCtx>, source: &str, axes: &[GridAxis], cap: usize) -> Result<Vec<ScanRow>> {
    let points = grid_points(axes, cap)?;
    points
        .par_iter()
        .map(|point| scan_point(field, source, axes, point))
        .collect()
}

fn scan_point(field: &Arc<FieldCtx>, source: &str, axes: &[GridAxis], point: &[Elem]) -> Result<ScanRow> {
    let bindings: Vec<(&str, Elem)> = axes.iter().zip(point).map(|(a, &v)| (a.name.as_str(), v)).collect();
    let expr = parse_with_params(source, field, &bindings)?;
    let table = tabulate(&expr, field)?;
    let per_c = uniformities(&table);
    let rest = || {
        field
            .elements()
            .filter(|&c| c != Elem::ONE)
            .map(|c| per_c[c.index() as usize])
    };
    Ok(ScanRow {
        params: bindings
            .iter()
            .map(|&(n, v)| (n.to_string(), field.label(v), field.coeff_string(v)))
            .collect(),
        function: expr.to_source(field),
        permutation: table.is_permutation(),
        differential_uniformity: per_c[1],
        max_c_uniformity: rest().max().unwrap_or(0),
        pcn_count: rest().filter(|&u| u == 1).count(),
        boomerang_uniformity: bct(&table).boomerang_uniformity,
        nonlinearity: nonlinearity(&table).ok(),
        per_c,
    })
}

/// CSV header for rows over the given axes.
pub fn csv_header(axes: &[GridAxis]) -> String {
    let mut cols: Vec<String> = Vec::new();
    for a in axes {
        cols.push(a.name.clone());
        cols.push(format!("{}_coeffs", a.name));
    }
    cols.extend(
        [
            "function",
            "permutation",
            "du",
            "max_cdu",
            "pcn_count",
            "bu",
            "nl",
            "per_c",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    cols.join(",")
}

impl ScanRow {
    pub fn csv_line(&self) -> String {
        let mut cols: Vec<String> = Vec::new();
        for (_, label, coeffs) in &self.params {
            cols.push(label.clone());
            cols.push(csv_quote(coeffs));
        }
        cols.push(csv_quote(&self.function));
        cols.push(self.permutation.to_string());
        cols.push(self.differential_uniformity.to_string());
        cols.push(self.max_c_uniformity.to_string());
        cols.push(self.pcn_count.to_string());
        cols.push(self.boomerang_uniformity.to_string());
        cols.push(self.nonlinearity.map(|v| v.to_string()).unwrap_or_default());
        cols.push(self.per_c.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(" "));
        cols.join(",")
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
