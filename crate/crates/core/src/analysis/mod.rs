//! Exhaustive statistics of tabulated functions: c-differential tables,
//! boomerang uniformity, Walsh spectra and a combined summary.

mod bct;
mod cddt;
mod summary;
mod walsh;

pub use bct::{bct, bct_row, BctReport};
pub use cddt::{
    admissible, c_ddt, c_ddt_row, c_ddt_table, c_derivative, c_uniformity, pcn_c_set, uniformities, CDiffReport,
};
pub use summary::{spectrum_summary, CUniformity, SpectrumSummary};
pub use walsh::{nonlinearity, walsh, walsh_naive, WalshSpectrum};

#[cfg(test)]
mod props {
    use super::*;
    use crate::funcexpr::FuncTable;
    use crate::gfpn::{build_field, Elem, FieldCtx};
    use proptest::prelude::*;
    use std::sync::Arc;

    const FIELDS: &[(u32, u32)] = &[(2, 3), (2, 4), (3, 2), (5, 2), (3, 3), (7, 1)];

    fn field_and_table() -> impl Strategy<Value = (Arc<FieldCtx>, FuncTable, u32, u32, u32)> {
        prop::sample::select(FIELDS).prop_flat_map(|(p, n)| {
            let f = build_field(p, n, None).unwrap();
            let q = f.order();
            (prop::collection::vec(0..q, q as usize), 0..q, 0..q, 0..q).prop_map(move |(vals, c, d, e)| {
                let t =
                    FuncTable::new(f.clone(), vals.into_iter().map(|v| f.elem(v as u64).unwrap()).collect()).unwrap();
                (f.clone(), t, c, d, e)
            })
        })
    }

    fn bijective_derivatives(t: &FuncTable, c: Elem) -> bool {
        let f = t.field();
        f.elements().filter(|&a| admissible(c, a)).all(|a| {
            let mut seen = vec![false; f.size()];
            f.elements().all(|x| {
                let v = f.sub(t.at(f.add(x, a)), f.mul(c, t.at(x)));
                !std::mem::replace(&mut seen[v.index() as usize], true)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn row_sums_equal_field_size((f, t, c, _, _) in field_and_table()) {
            let c = f.elem(c as u64).unwrap();
            for row in c_ddt_table(&t, c) {
                prop_assert_eq!(row.iter().sum::<u32>() as usize, f.size());
            }
        }

        #[test]
        fn zero_c_is_max_preimage((f, t, _, _, _) in field_and_table()) {
            let mut pre = vec![0u32; f.size()];
            for v in t.values() {
                pre[v.index() as usize] += 1;
            }
            let u = c_uniformity(&t, Elem::ZERO);
            prop_assert_eq!(u, *pre.iter().max().unwrap());
            prop_assert_eq!(u == 1, t.is_permutation());
        }

        #[test]
        fn pcn_iff_derivatives_bijective((f, t, c, _, _) in field_and_table()) {
            let c = f.elem(c as u64).unwrap();
            prop_assert_eq!(c_uniformity(&t, c) == 1, bijective_derivatives(&t, c));
        }

        #[test]
        fn translation_and_constant_invariance((f, t, c, d, e) in field_and_table()) {
            let c = f.elem(c as u64).unwrap();
            let d = f.elem(d as u64).unwrap();
            let e = f.elem(e as u64).unwrap();
            let u = c_uniformity(&t, c);
            prop_assert_eq!(c_uniformity(&t.map(|v| f.add(v, d)), c), u);
            prop_assert_eq!(c_uniformity(&t.shifted(e), c), u);
        }

        #[test]
        fn streaming_equals_report((f, t, c, _, _) in field_and_table()) {
            let c = f.elem(c as u64).unwrap();
            prop_assert_eq!(c_uniformity(&t, c), c_ddt(&t, c, false).uniformity);
        }

        #[test]
        fn boomerang_dominates_differential_for_permutations(
            n in 2u32..6,
            seed in any::<u64>(),
        ) {
            use rand::{seq::SliceRandom, SeedableRng};
            // the swap (x, y) = (x + a, x) needs -1 = 1, so only characteristic 2
            let f = build_field(2, n, None).unwrap();
            let mut v: Vec<Elem> = f.elements().collect();
            v.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let t = FuncTable::new(f.clone(), v).unwrap();
            prop_assert!(bct(&t).boomerang_uniformity >= c_uniformity(&t, Elem::ONE));
        }

        #[test]
        fn parseval((f, t, _, _, _) in field_and_table()) {
            let err = walsh(&t).parseval_error();
            if f.characteristic() == 2 {
                prop_assert_eq!(err, 0.0);
            } else {
                prop_assert!(err < 1e-6);
            }
        }
    }
}
