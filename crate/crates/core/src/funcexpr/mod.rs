//! Symbolic `(N, N)`-functions: parsing, pretty-printing, dense tabulation and
//! permutation tests for linearized polynomials.
//!
//! `Tr[m](...)` always names the target subfield degree, so the absolute trace
//! over `F_{2^4}` is `Tr[1](x)` and `Tr_{2^6/2^2}` is `Tr[2](x)`.

mod ast;
mod eval;
mod linearized;
mod parser;

pub use ast::{ExprDisplay, FuncExpr};
pub use eval::{eval_linearized, evaluate, tabulate, FuncTable};
pub use linearized::{dickson_nonsingular, DicksonMatrix};
pub use parser::{parse, parse_with_params, reduce_exponent};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::gfpn::{build_field, gcd, Elem};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn parses_trace_switch_example() {
        let f = build_field(3, 3, None).unwrap();
        let e = parse("x^5 + g^2*Tr[1](g*x^5)", &f).unwrap();
        let g = f.generator();
        let x5 = FuncExpr::Var.pow(5);
        let expected = FuncExpr::add(vec![
            x5.clone(),
            FuncExpr::mul(vec![
                FuncExpr::Const(f.mul(g, g)),
                FuncExpr::mul(vec![FuncExpr::Const(g), x5]).trace_to(1),
            ]),
        ]);
        assert_eq!(e, expected);
        assert_eq!(parse("x", &f).unwrap(), FuncExpr::Var);
    }

    #[test]
    fn parses_h2() {
        let f = build_field(2, 4, None).unwrap();
        let e = parse("x + Tr[1](x)", &f).unwrap();
        assert_eq!(e, FuncExpr::add(vec![FuncExpr::Var, FuncExpr::Var.trace_to(1)]));
        let t = tabulate(&e, &f).unwrap();
        for x in f.elements() {
            assert_eq!(t.at(x), f.add(x, f.rel_trace(x, 1).unwrap()));
        }
    }

    #[test]
    fn parse_errors() {
        let f = build_field(2, 4, None).unwrap();
        assert!(matches!(parse("x +", &f), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("y + x", &f), Err(Error::UnknownSymbol { pos: 0, .. })));
        assert!(matches!(
            parse("x ^ 99999999999999999999999", &f),
            Err(Error::ExponentOutOfRange(_))
        ));
        assert!(matches!(parse("Tr[3](x)", &f), Err(Error::Syntax { .. })));
        assert!(matches!(parse("L{1,1,1,1,1}(x)", &f), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(x", &f), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x $ 1", &f), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn mixed_additive_runs_nest_left() {
        let f = build_field(3, 2, None).unwrap();
        let e = parse("x + 1 - x^2 - 2", &f).unwrap();
        let expected = FuncExpr::sub(vec![
            FuncExpr::add(vec![FuncExpr::Var, FuncExpr::Const(Elem::ONE)]),
            FuncExpr::Var.pow(2),
            FuncExpr::Const(f.from_int(2)),
        ]);
        assert_eq!(e, expected);
        let v = evaluate(&e, &f, f.generator()).unwrap();
        let g = f.generator();
        let direct = f.sub(f.sub(f.add(g, Elem::ONE), f.mul(g, g)), f.from_int(2));
        assert_eq!(v, direct);
    }

    #[test]
    fn params_bind_as_constants() {
        let f = build_field(2, 6, None).unwrap();
        let v = f.gen_pow(11);
        let e = parse_with_params("x^5 + Tr[2](v*x^5)", &f, &[("v", v)]).unwrap();
        assert_eq!(e, parse("x^5 + Tr[2](g^11*x^5)", &f).unwrap());
    }

    #[test]
    fn exponent_reduction_convention() {
        assert_eq!(reduce_exponent(0, 16), 0);
        assert_eq!(reduce_exponent(15, 16), 15);
        assert_eq!(reduce_exponent(16, 16), 1);
        assert_eq!(reduce_exponent(30, 16), 15);
        let f = build_field(2, 4, None).unwrap();
        let t = tabulate(&parse("x^0", &f).unwrap(), &f).unwrap();
        assert!(t.values().iter().all(|&v| v == Elem::ONE));
        let t = tabulate(&parse("x^15", &f).unwrap(), &f).unwrap();
        assert_eq!(t.at(Elem::ZERO), Elem::ZERO);
    }

    #[test]
    fn tabulate_examples() {
        let f = build_field(2, 6, None).unwrap();
        let zero = tabulate(&FuncExpr::Const(Elem::ZERO), &f).unwrap();
        assert!(zero.values().iter().all(|v| v.is_zero()));
        assert!(!zero.is_permutation());
        let inv = tabulate(&parse("x^62", &f).unwrap(), &f).unwrap();
        assert_eq!(inv.at(Elem::ZERO), Elem::ZERO);
        for x in f.nonzero_elements() {
            assert_eq!(inv.at(x), f.inv(x).unwrap());
        }
        assert_eq!(gcd(5, 63), 1);
        assert!(tabulate(&parse("x^5", &f).unwrap(), &f).unwrap().is_permutation());
        assert!(FuncTable::identity(&f).is_permutation());
    }

    #[test]
    fn coprime_monomials_permute() {
        for (p, n) in [(2, 4), (3, 3), (5, 2), (2, 5)] {
            let f = build_field(p, n, None).unwrap();
            let qm1 = f.order() as u64 - 1;
            for d in 1..qm1 {
                let t = tabulate(&FuncExpr::Var.pow(d), &f).unwrap();
                assert_eq!(t.is_permutation(), gcd(d, qm1) == 1, "d = {d}");
            }
        }
    }

    #[test]
    fn tabulate_matches_pointwise_evaluation() {
        let f = build_field(3, 3, None).unwrap();
        let e = parse("x^5 + g^2*Tr[1](g*x^5) - L{1, g; 1}(x^2) * -x", &f).unwrap();
        let t = tabulate(&e, &f).unwrap();
        for x in f.elements() {
            assert_eq!(t.at(x), evaluate(&e, &f, x).unwrap());
        }
    }

    #[test]
    fn linearized_tables_are_additive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, n, t) in [(2, 6, 1), (2, 6, 2), (3, 4, 2), (5, 2, 1)] {
            let f = build_field(p, n, None).unwrap();
            let coeffs: Vec<Elem> = (0..n / t)
                .map(|_| f.elem(rng.gen_range(0..f.order()) as u64).unwrap())
                .collect();
            let table = tabulate(&FuncExpr::linearized(coeffs, t), &f).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(table.at(f.add(x, y)), f.add(table.at(x), table.at(y)));
                }
            }
        }
    }

    #[test]
    fn dickson_examples() {
        let f = build_field(2, 4, None).unwrap();
        assert!(dickson_nonsingular(&[Elem::ONE], 1, &f).unwrap());
        // x^q - x vanishes on F_q
        assert!(!dickson_nonsingular(&[f.neg(Elem::ONE), Elem::ONE], 1, &f).unwrap());
        assert!(!dickson_nonsingular(&[f.neg(Elem::ONE), Elem::ONE], 2, &f).unwrap());
        assert!(matches!(
            dickson_nonsingular(&[Elem::ONE], 3, &f),
            Err(Error::NotADivisor { .. })
        ));
        let m = DicksonMatrix::new(&[f.gen_pow(1), f.gen_pow(2), f.gen_pow(3)], 1, &f).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.entries[i][j], f.frobenius(m.entries[0][(j + 4 - i) % 4], i as u32));
            }
        }
    }

    #[test]
    fn dickson_agrees_with_bijectivity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (p, n, t) in [
            (2, 4, 1),
            (2, 6, 2),
            (2, 6, 3),
            (3, 3, 1),
            (3, 4, 2),
            (5, 2, 1),
            (2, 8, 2),
        ] {
            let f = build_field(p, n, None).unwrap();
            let (mut yes, mut no) = (0, 0);
            for _ in 0..200 {
                let len = rng.gen_range(1..=n / t);
                let coeffs: Vec<Elem> = (0..len)
                    .map(|_| {
                        // bias towards sparse/prime-field coefficients so both outcomes occur
                        if rng.gen_bool(0.5) {
                            f.from_int(rng.gen_range(0..p as i64))
                        } else {
                            f.elem(rng.gen_range(0..f.order()) as u64).unwrap()
                        }
                    })
                    .collect();
                let bij = tabulate(&FuncExpr::linearized(coeffs.clone(), t), &f)
                    .unwrap()
                    .is_permutation();
                assert_eq!(
                    dickson_nonsingular(&coeffs, t, &f).unwrap(),
                    bij,
                    "{coeffs:?} over {}",
                    f.spec_string()
                );
                if bij {
                    yes += 1
                } else {
                    no += 1
                }
            }
            assert!(yes > 0 && no > 0);
        }
    }

    #[test]
    fn norm_criterion_for_binomials() {
        // x^{q^r} - a x over F_{q^n} permutes iff N_{q^n/q^d}(a) != 1 with d = gcd(n, r)
        for (p, big_n, t) in [(2, 6, 1), (2, 6, 2), (3, 4, 1), (3, 4, 2), (2, 4, 1), (5, 2, 1)] {
            let f = build_field(p, big_n, None).unwrap();
            let n = big_n / t;
            for r in 1..n {
                let d = gcd(n as u64, r as u64) as u32;
                for a in f.elements() {
                    let mut coeffs = vec![Elem::ZERO; r as usize + 1];
                    coeffs[0] = f.neg(a);
                    coeffs[r as usize] = Elem::ONE;
                    let bij = tabulate(&FuncExpr::linearized(coeffs.clone(), t), &f)
                        .unwrap()
                        .is_permutation();
                    let norm_ok = f.rel_norm(a, t * d).unwrap() != Elem::ONE;
                    assert_eq!(bij, norm_ok);
                    assert_eq!(dickson_nonsingular(&coeffs, t, &f).unwrap(), bij);
                }
            }
        }
    }

    fn arb_expr(p: u32, n: u32) -> impl Strategy<Value = FuncExpr> {
        let order = p.pow(n);
        let divisors: Vec<u32> = (1..=n).filter(|m| n.is_multiple_of(*m)).collect();
        let leaf = prop_oneof![
            Just(FuncExpr::Var),
            (0..order).prop_map(|i| FuncExpr::Const(Elem::from_raw(i))),
        ];
        leaf.prop_recursive(4, 24, 3, move |inner| {
            let divs = divisors.clone();
            let divs2 = divisors.clone();
            prop_oneof![
                (inner.clone(), 0..order as u64).prop_map(|(b, e)| b.pow(e)),
                inner.clone().prop_map(FuncExpr::neg),
                prop::collection::vec(inner.clone(), 2..4).prop_map(FuncExpr::Mul),
                prop::collection::vec(inner.clone(), 2..4).prop_map(FuncExpr::Add),
                prop::collection::vec(inner.clone(), 2..4).prop_map(FuncExpr::Sub),
                (prop::sample::select(divs), inner.clone()).prop_map(|(m, e)| e.trace_to(m)),
                (
                    prop::sample::select(divs2),
                    prop::collection::vec(0..order, 1..4),
                    inner
                )
                    .prop_map(move |(t, cs, arg)| {
                        let k = ((n / t) as usize).min(cs.len());
                        FuncExpr::Linearized {
                            coeffs: cs[..k].iter().map(|&i| Elem::from_raw(i)).collect(),
                            t,
                            arg: Box::new(arg),
                        }
                    }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip_f16(e in arb_expr(2, 4)) {
            let f = build_field(2, 4, None).unwrap();
            let src = e.to_source(&f);
            prop_assert_eq!(parse(&src, &f).unwrap(), e, "{}", src);
        }

        #[test]
        fn print_parse_round_trip_f27(e in arb_expr(3, 3)) {
            let f = build_field(3, 3, None).unwrap();
            let src = e.to_source(&f);
            prop_assert_eq!(parse(&src, &f).unwrap(), e, "{}", src);
        }
    }
}
