use rayon::prelude::*;

use crate::funcexpr::FuncTable;
use crate::gfpn::Elem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BctReport {
    /// Maximum over `a, b != 0` of the number of pairs `(x, y)` with
    /// `F(x) - F(y) = b` and `F(x + a) - F(y + a) = b`.
    pub boomerang_uniformity: u32,
    /// Least `(a, b)` by index attaining the maximum.
    pub argmax: Option<(Elem, Elem)>,
}

/// Row `a` of the boomerang table.
///
/// Subtracting the two equations shows a pair solves the system exactly when
/// `F(x) - F(y) = b` and both points share the derivative value
/// `F(x + a) - F(x)`, so pairs are enumerated inside derivative classes.
pub fn bct_row(table: &FuncTable, a: Elem) -> Vec<u32> {
    let f = table.field();
    let q = f.size();
    let deriv: Vec<u32> = f
        .elements()
        .map(|x| f.sub(table.at(f.add(x, a)), table.at(x)).index())
        .collect();
    // counting sort of the domain by derivative value
    let mut start = vec![0usize; q + 1];
    for &d in &deriv {
        start[d as usize + 1] += 1;
    }
    for i in 0..q {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut order = vec![Elem::ZERO; q];
    for x in f.elements() {
        let d = deriv[x.index() as usize] as usize;
        order[fill[d]] = x;
        fill[d] += 1;
    }
    let mut row = vec![0u32; q];
    for d in 0..q {
        let class = &order[start[d]..start[d + 1]];
        for &x in class {
            for &y in class {
                let b = f.sub(table.at(x), table.at(y));
                if !b.is_zero() {
                    row[b.index() as usize] += 1;
                }
            }
        }
    }
    row
}

pub fn bct(table: &FuncTable) -> BctReport {
    let f = table.field();
    let best = f
        .nonzero_elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| {
            let row = bct_row(table, a);
            let (b, &k) = row
                .iter()
                .enumerate()
                .skip(1)
                .fold((0, &0), |acc, (b, k)| if k > acc.1 { (b, k) } else { acc });
            (k, a, Elem::from_raw(b as u32))
        })
        .collect::<Vec<_>>();
    let mut out = BctReport {
        boomerang_uniformity: 0,
        argmax: None,
    };
    for (k, a, b) in best {
        if k > out.boomerang_uniformity {
            out = BctReport {
                boomerang_uniformity: k,
                argmax: Some((a, b)),
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::{parse, tabulate};
    use crate::gfpn::{build_field, FieldCtx};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn quadruple_loop(t: &FuncTable) -> u32 {
        let f = t.field();
        let mut best = 0;
        for a in f.nonzero_elements() {
            for b in f.nonzero_elements() {
                let mut n = 0;
                for x in f.elements() {
                    for y in f.elements() {
                        if f.sub(t.at(x), t.at(y)) == b && f.sub(t.at(f.add(x, a)), t.at(f.add(y, a))) == b {
                            n += 1;
                        }
                    }
                }
                best = best.max(n);
            }
        }
        best
    }

    /// For a permutation, `y` is forced to `F^{-1}(F(x) - b)`.
    fn inverse_formula(t: &FuncTable) -> u32 {
        let f = t.field();
        let mut inv = vec![Elem::ZERO; f.size()];
        for x in f.elements() {
            inv[t.at(x).index() as usize] = x;
        }
        let finv = |v: Elem| inv[v.index() as usize];
        let mut best = 0;
        for a in f.nonzero_elements() {
            for b in f.nonzero_elements() {
                let n = f
                    .elements()
                    .filter(|&x| f.sub(finv(f.sub(t.at(f.add(x, a)), b)), finv(f.sub(t.at(x), b))) == a)
                    .count();
                best = best.max(n as u32);
            }
        }
        best
    }

    fn random_perm(f: &Arc<FieldCtx>, rng: &mut impl Rng) -> FuncTable {
        let mut v: Vec<Elem> = f.elements().collect();
        v.shuffle(rng);
        FuncTable::new(f.clone(), v).unwrap()
    }

    #[test]
    fn cube_over_f16_matches_quadruple_loop() {
        let f = build_field(2, 4, None).unwrap();
        let t = tabulate(&parse("x^3", &f).unwrap(), &f).unwrap();
        assert_eq!(bct(&t).boomerang_uniformity, quadruple_loop(&t));
    }

    #[test]
    fn random_functions_match_oracles() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for (p, n) in [(2, 3), (3, 2), (2, 4), (5, 1)] {
            let f = build_field(p, n, None).unwrap();
            for _ in 0..4 {
                let t = random_perm(&f, &mut rng);
                let r = bct(&t);
                assert_eq!(r.boomerang_uniformity, quadruple_loop(&t));
                assert_eq!(r.boomerang_uniformity, inverse_formula(&t));
                let (a, b) = r.argmax.unwrap();
                assert_eq!(bct_row(&t, a)[b.index() as usize], r.boomerang_uniformity);
                let values = f
                    .elements()
                    .map(|_| f.elem(rng.gen_range(0..f.order()) as u64).unwrap())
                    .collect();
                let g = FuncTable::new(f.clone(), values).unwrap();
                assert_eq!(bct(&g).boomerang_uniformity, quadruple_loop(&g));
            }
        }
    }

    #[test]
    fn examples() {
        let f = build_field(2, 6, Some(&[1, 1, 0, 1, 1, 0, 1])).unwrap();
        let t = tabulate(&parse("x^5", &f).unwrap(), &f).unwrap();
        assert_eq!(bct(&t).boomerang_uniformity, 4);
        let g = build_field(3, 3, None).unwrap();
        let lin = tabulate(&parse("L{g^2, 1}(x)", &g).unwrap(), &g).unwrap();
        assert!(lin.is_permutation());
        assert_eq!(bct(&lin).boomerang_uniformity, 27);
        let zero = FuncTable::from_fn(&g, |_| Elem::ZERO);
        assert_eq!(
            bct(&zero),
            BctReport {
                boomerang_uniformity: 0,
                argmax: None
            }
        );
    }
}
