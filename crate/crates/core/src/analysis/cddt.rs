use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::funcexpr::FuncTable;
use crate::gfpn::{Elem, FieldCtx};

/// Summary of the c-difference distribution table of one function at one `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CDiffReport {
    pub c: Elem,
    /// Maximum count over admissible rows.
    pub uniformity: u32,
    /// `row_max[a]` is `max_b count(a, b)`, for every `a` (the excluded row
    /// `a = 0` at `c = 1` is still listed).
    pub row_max: Vec<u32>,
    /// `count -> number of (a, b)` over admissible rows.
    pub distribution: BTreeMap<u32, u64>,
    /// Admissible `(a, b)` attaining the uniformity, row-major by index.
    pub witnesses: Option<Vec<(Elem, Elem)>>,
}

/// Row `a` takes part in the maximum unless `c = 1` and `a = 0`.
#[inline]
pub fn admissible(c: Elem, a: Elem) -> bool {
    !(c == Elem::ONE && a.is_zero())
}

fn scaled(table: &FuncTable, c: Elem) -> Vec<Elem> {
    let f = table.field();
    table.values().iter().map(|&v| f.mul(c, v)).collect()
}

fn fill_row(f: &FieldCtx, vals: &[Elem], cf: &[Elem], a: Elem, counts: &mut [u32]) {
    counts.fill(0);
    for x in f.elements() {
        let b = f.sub(vals[f.add(x, a).index() as usize], cf[x.index() as usize]);
        counts[b.index() as usize] += 1;
    }
}

/// Values of the c-derivative `x -> F(x + a) - c F(x)`.
pub fn c_derivative(table: &FuncTable, a: Elem, c: Elem) -> Vec<Elem> {
    let f = table.field();
    f.elements()
        .map(|x| f.sub(table.at(f.add(x, a)), f.mul(c, table.at(x))))
        .collect()
}

/// Row `a` of the c-DDT: `counts[b]` solutions of `F(x + a) - cF(x) = b`.
pub fn c_ddt_row(table: &FuncTable, c: Elem, a: Elem) -> Vec<u32> {
    let f = table.field();
    let mut counts = vec![0; f.size()];
    fill_row(f, table.values(), &scaled(table, c), a, &mut counts);
    counts
}

/// The full c-DDT as `q` rows of `q` counts.
pub fn c_ddt_table(table: &FuncTable, c: Elem) -> Vec<Vec<u32>> {
    let f = table.field();
    let cf = scaled(table, c);
    f.elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| {
            let mut counts = vec![0; f.size()];
            fill_row(f, table.values(), &cf, a, &mut counts);
            counts
        })
        .collect()
}

struct RowSummary {
    max: u32,
    hist: BTreeMap<u32, u64>,
    argmax: Vec<Elem>,
}

pub fn c_ddt(table: &FuncTable, c: Elem, collect_witnesses: bool) -> CDiffReport {
    let f = table.field();
    let cf = scaled(table, c);
    let rows: Vec<RowSummary> = f
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map_init(
            || vec![0u32; f.size()],
            |counts, a| {
                fill_row(f, table.values(), &cf, a, counts);
                let max = counts.iter().copied().max().unwrap_or(0);
                let mut hist = BTreeMap::new();
                for &k in counts.iter() {
                    *hist.entry(k).or_insert(0) += 1;
                }
                let argmax = if collect_witnesses {
                    counts
                        .iter()
                        .enumerate()
                        .filter(|(_, &k)| k == max)
                        .map(|(b, _)| Elem::from_raw(b as u32))
                        .collect()
                } else {
                    Vec::new()
                };
                RowSummary { max, hist, argmax }
            },
        )
        .collect();

    let uniformity = f
        .elements()
        .zip(&rows)
        .filter(|(a, _)| admissible(c, *a))
        .map(|(_, r)| r.max)
        .max()
        .unwrap_or(0);
    let mut distribution = BTreeMap::new();
    let mut witnesses = Vec::new();
    for (a, row) in f.elements().zip(&rows) {
        if !admissible(c, a) {
            continue;
        }
        for (&k, &n) in &row.hist {
            *distribution.entry(k).or_insert(0) += n;
        }
        if collect_witnesses && row.max == uniformity {
            witnesses.extend(row.argmax.iter().map(|&b| (a, b)));
        }
    }
    CDiffReport {
        c,
        uniformity,
        row_max: rows.iter().map(|r| r.max).collect(),
        distribution,
        witnesses: collect_witnesses.then_some(witnesses),
    }
}

/// c-differential uniformity without building the table.
pub fn c_uniformity(table: &FuncTable, c: Elem) -> u32 {
    let f = table.field();
    let cf = scaled(table, c);
    f.elements()
        .filter(|&a| admissible(c, a))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map_init(
            || vec![0u32; f.size()],
            |counts, a| {
                fill_row(f, table.values(), &cf, a, counts);
                counts.iter().copied().max().unwrap_or(0)
            },
        )
        .max()
        .unwrap_or(0)
}

/// `c_uniformity` for every `c`, indexed by `c.index()`.
pub fn uniformities(table: &FuncTable) -> Vec<u32> {
    let f = table.field();
    f.elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|c| c_uniformity(table, c))
        .collect()
}

/// Every `c` at which the function is perfect c-nonlinear, in index order.
/// In odd characteristic this includes `c = 1` for planar functions.
pub fn pcn_c_set(table: &FuncTable) -> Vec<Elem> {
    let f = table.field();
    uniformities(table)
        .iter()
        .zip(f.elements())
        .filter(|(&u, _)| u == 1)
        .map(|(_, c)| c)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::{parse, tabulate};
    use crate::gfpn::build_field;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn table(src: &str, f: &Arc<FieldCtx>) -> FuncTable {
        tabulate(&parse(src, f).unwrap(), f).unwrap()
    }

    fn naive_counts(t: &FuncTable, c: Elem) -> Vec<Vec<u32>> {
        let f = t.field();
        let mut out = vec![vec![0; f.size()]; f.size()];
        for a in f.elements() {
            for b in f.elements() {
                for x in f.elements() {
                    if f.sub(t.at(f.add(x, a)), f.mul(c, t.at(x))) == b {
                        out[a.index() as usize][b.index() as usize] += 1;
                    }
                }
            }
        }
        out
    }

    fn random_table(f: &Arc<FieldCtx>, rng: &mut impl Rng) -> FuncTable {
        let values = f
            .elements()
            .map(|_| f.elem(rng.gen_range(0..f.order()) as u64).unwrap())
            .collect();
        FuncTable::new(f.clone(), values).unwrap()
    }

    #[test]
    fn streaming_and_full_agree_with_naive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (p, n) in [(2, 3), (2, 4), (3, 2), (5, 1)] {
            let f = build_field(p, n, None).unwrap();
            for _ in 0..3 {
                let t = random_table(&f, &mut rng);
                for c in f.elements() {
                    let naive = naive_counts(&t, c);
                    assert_eq!(c_ddt_table(&t, c), naive);
                    let expected = f
                        .elements()
                        .filter(|&a| admissible(c, a))
                        .map(|a| *naive[a.index() as usize].iter().max().unwrap())
                        .max()
                        .unwrap();
                    let report = c_ddt(&t, c, true);
                    assert_eq!(report.uniformity, expected);
                    assert_eq!(c_uniformity(&t, c), expected);
                    for (a, b) in report.witnesses.unwrap() {
                        assert_eq!(naive[a.index() as usize][b.index() as usize], expected);
                    }
                    let cells: u64 = report.distribution.values().sum();
                    let rows = if c == Elem::ONE { f.size() - 1 } else { f.size() };
                    assert_eq!(cells, (rows * f.size()) as u64);
                }
            }
        }
    }

    #[test]
    fn linear_and_constant_cases() {
        let f = build_field(2, 5, None).unwrap();
        let id = FuncTable::identity(&f);
        let konst = FuncTable::from_fn(&f, |_| f.gen_pow(3));
        for c in f.elements() {
            if c == Elem::ONE {
                assert_eq!(c_uniformity(&id, c), 32);
                continue;
            }
            assert_eq!(c_uniformity(&id, c), 1);
            assert_eq!(c_uniformity(&konst, c), 32);
        }
        assert_eq!(pcn_c_set(&id).len(), 31);
    }

    #[test]
    fn gold_five_over_f64() {
        let f = build_field(2, 6, Some(&[1, 1, 0, 1, 1, 0, 1])).unwrap();
        let t = table("x^5", &f);
        let us = uniformities(&t);
        let pcn = [Elem::ZERO, f.gen_pow(21), f.gen_pow(42)];
        for c in f.elements() {
            let expected = if c == Elem::ONE {
                4
            } else if pcn.contains(&c) {
                1
            } else {
                5
            };
            assert_eq!(us[c.index() as usize], expected, "c = {}", f.label(c));
        }
        assert_eq!(pcn_c_set(&t), pcn.to_vec());
    }

    #[test]
    fn squares_are_apcn_in_odd_characteristic() {
        for (p, n) in [(3, 3), (5, 2), (7, 2)] {
            let f = build_field(p, n, None).unwrap();
            let t = table("x^2", &f);
            for c in f.elements() {
                let expected = if c == Elem::ONE { 1 } else { 2 };
                assert_eq!(c_uniformity(&t, c), expected);
            }
            assert_eq!(pcn_c_set(&t), vec![Elem::ONE]);
        }
    }

    #[test]
    fn inverse_over_f16() {
        let f = build_field(2, 4, None).unwrap();
        let t = table("x^14", &f);
        assert_eq!(c_uniformity(&t, Elem::ZERO), 1);
        for c in f.nonzero_elements().filter(|&c| c != Elem::ONE) {
            let ic = f.inv(c).unwrap();
            let expected = if f.abs_trace_value(c) == 1 && f.abs_trace_value(ic) == 1 {
                2
            } else {
                3
            };
            assert_eq!(c_uniformity(&t, c), expected);
        }
    }

    #[test]
    fn c_derivative_matches_row() {
        let f = build_field(3, 3, None).unwrap();
        let t = table("x^5 + g*x^2", &f);
        let c = f.gen_pow(4);
        let a = f.gen_pow(9);
        let d = c_derivative(&t, a, c);
        let row = c_ddt_row(&t, c, a);
        let mut counts = vec![0; f.size()];
        for v in d {
            counts[v.index() as usize] += 1;
        }
        assert_eq!(counts, row);
    }
}
