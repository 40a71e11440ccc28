use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gfpn::{gcd, Elem, FieldCtx};

use super::claims::{Bound, Claim};

/// Rows of the monomial table with an implemented evaluator.
pub const TABLE1_ROWS: &[&str] = &[
    "square",
    "pow_3k_half",
    "inverse_c0",
    "inverse_binary",
    "inverse_odd",
    "gold_sub",
    "gold_out",
    "pk_plus_1",
];

/// Table rows with no evaluator. Listed in reports so coverage is explicit.
pub const SKIPPED_ROWS: &[&str] = &[
    "(p^k+1)/2, p>2, c=-1: p^((n,k))+1",
    "(p^n+1)/2, p>2, c!=+-1: <= 4",
    "(p^n+1)/2, p>2, c!=+-1, eta((1-c)/(1+c))=1, p^n=1 mod 4: <= 2",
    "(2p^n-1)/3, p^n=2 mod 3: <= 3",
    "(p^n+3)/2, p>3, c=-1, p^n=3 mod 4: <= 3",
    "(p^n+3)/2, p>3, c=-1, p^n=1 mod 4: <= 4",
    "(p^n-3)/2, p>2, c=-1: <= 4",
    "(3^n+3)/2, c=-1, n even: 2",
    "(3^n-3)/2, c=-1, n=0 mod 4: 6",
    "(3^n-3)/2, c=-1, n!=0 mod 4: 4",
    "(3^n-3)/2, c=0: 2",
    "(3^n+1)/4 * ((3^k+1)/4)^-1, c=-1, n,k odd, (n,k)=1: 1",
    "(5^n-1)/2 + ((5^k+1)/2)^-1, c=-1, n,k odd, (n,k)=1: 1",
    "(p^n+1)/2 * (p^k+1)^-1, d even, c=-1, p^n=3 mod 4: <= 6",
    "(p^n+1)/2 * (p^k+1)^-1, d odd, c=-1, p^n=3 mod 4: <= 3",
    "(p^n+1)/4 + (p^n-1)/2, c=-1, p^n=7 mod 8: <= 3",
    "(p^n-1)/2 + p^k+1, c=-1, n/(n,k) odd, p^n=3 mod 4: <= 3",
    "(p^n-1)/2 + p^k+1, c=-1, n/(n,k) odd, p^n=1 mod 4: <= 6",
    "(p^l+1)/2, c=-1, 2-adic conditions on l and n: 1",
    "(p^l+1)/2, c=-1, (l,2n)=1, p=1 mod 4 or p=3 mod 8: (p+1)/2",
    "(5^l+1)/2, c=-1, (l,2n)=1: 3",
    "(3^l+1)/2, c=-1, (l,2n)=1: 2",
    "p^4+(p-2)p^2+p(p-1)+1, c=-1, n=5: 1",
    "(p^5+1)/(p+1), c=-1, n=5: 1",
    "(p-1)p^6+p^5+(p-2)p^3+(p-1)p^2+p, c=-1, n=7: 1",
    "(p^7+1)/(p+1), c=-1, n=7: 1",
    "(p^n+7)/2, p=3, c=-1, n odd: <= 2",
    "(3^((n+1)/2)-1)/2, c=-1, n=1 mod 4: <= 2",
    "(3^((n+1)/2)-1)/2 + (3^n-1)/2, c=-1, n=3 mod 4: <= 2",
    "(3^(n+1)-1)/8, c=-1, n=1 mod 4: <= 2",
    "(3^(n+1)-1)/8 + (3^n-1)/2, c=-1, n=3 mod 4: <= 2",
    "(3^((n+1)/4)-1)(3^((n+1)/2)+1), c=-1, n=3 mod 4: <= 4",
    "(3^n+1)/4 + (3^n-1)/2, c=-1, n odd: <= 4",
    "d^-1 mod p^n-1 where x^d is PcN: PcN at c^d",
    "2^j and 2^j(2^k+1), p=2: PcN under subfield and 2-adic conditions",
    "odd 2(p^k+1)^-1 mod p^n-1, c=-1: 1",
    "(p^n+1)/2 * ((p^k+1)/2)^-1, c=-1, v2(k)=v2(n), p^n=1 mod 4: 1",
    "x^10 - u x^6 - u^2 x^2, p=3: >= 2",
    "L(x)(sum L(x)^((p^n-1)i/l) + u): <= 2",
    "(x^(p^k)-x)^((q-1)/2+1) + a1 x + a2 x^(p^k) + a3 x^(p^2k), p=3, c=-1: <= 2",
    "f(x)(Tr(x)+1) + f(x+gamma)Tr(x), p=2: 1",
    "L(x) + L(gamma) Tr(x)^(q-1): 1",
    "u phi(x) + g(Tr(x)^q) - g(Tr(x)): 1",
    "u(x^q-x) + g(Tr(x)), p does not divide n: 1",
];

/// Exponent of the row's monomial and its predicted uniformity at each `c`
/// the row speaks about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPrediction {
    pub exponent: u64,
    pub predicted: Vec<(Elem, u32)>,
}

impl RowPrediction {
    /// One claim per predicted value.
    pub fn claims(&self, row: &str) -> Vec<Claim> {
        let mut by_value: BTreeMap<u32, Vec<Elem>> = BTreeMap::new();
        for &(c, v) in &self.predicted {
            by_value.entry(v).or_default().push(c);
        }
        by_value
            .into_iter()
            .map(|(v, cs)| Claim::per_c(format!("{} c predicted {v} by row {row}", cs.len()), cs, Bound::Eq(v)))
            .collect()
    }
}

fn violated(msg: String) -> Error {
    Error::HypothesisViolated(msg)
}

fn need_k(k: Option<u32>, row: &str) -> Result<u32> {
    match k {
        Some(k) if k >= 1 => Ok(k),
        _ => Err(violated(format!("row {row} needs a parameter k >= 1"))),
    }
}

fn is_square(f: &FieldCtx, x: Elem) -> bool {
    x.is_zero() || f.quadratic_character(x) == Ok(1)
}

pub fn table1_prediction(f: &FieldCtx, row: &str, k: Option<u32>) -> Result<RowPrediction> {
    let p = f.characteristic() as u64;
    let n = f.degree() as u64;
    let q = f.order() as u64;
    let not_one = || f.elements().filter(|&c| c != Elem::ONE);
    let minus_one = f.from_int(-1);
    let pred = |exponent: u64, predicted: Vec<(Elem, u32)>| Ok(RowPrediction { exponent, predicted });
    match row {
        "square" => {
            if p == 2 {
                return Err(violated("row square needs p > 2".into()));
            }
            pred(2, not_one().map(|c| (c, 2)).collect())
        }
        "pow_3k_half" => {
            let k = need_k(k, row)? as u64;
            if p != 3 {
                return Err(violated("row pow_3k_half needs p = 3".into()));
            }
            if (2 * n / gcd(k, 2 * n)).is_multiple_of(2) {
                return Err(violated(format!("2n/(k,2n) = {} is even", 2 * n / gcd(k, 2 * n))));
            }
            pred(3u64.pow(k as u32).div_ceil(2), vec![(minus_one, 1)])
        }
        "inverse_c0" => pred(q - 2, vec![(Elem::ZERO, 1)]),
        "inverse_binary" => {
            if p != 2 {
                return Err(violated("row inverse_binary needs p = 2".into()));
            }
            let predicted = not_one()
                .filter(|c| !c.is_zero())
                .map(|c| {
                    let inv = f.inv(c).expect("nonzero");
                    let apcn = f.abs_trace_value(c) == 1 && f.abs_trace_value(inv) == 1;
                    (c, if apcn { 2 } else { 3 })
                })
                .collect();
            pred(q - 2, predicted)
        }
        "inverse_odd" => {
            if p == 2 {
                return Err(violated("row inverse_odd needs p > 2".into()));
            }
            let four = f.from_int(4);
            let quarter = f.inv(four)?;
            let predicted = not_one()
                .filter(|c| !c.is_zero())
                .map(|c| {
                    let a = f.sub(f.mul(c, c), f.mul(four, c));
                    let b = f.sub(Elem::ONE, f.mul(four, c));
                    let apcn = (!is_square(f, a) && !is_square(f, b)) || c == four || c == quarter;
                    (c, if apcn { 2 } else { 3 })
                })
                .collect();
            pred(q - 2, predicted)
        }
        "gold_sub" | "gold_out" => {
            let k = need_k(k, row)? as u64;
            if p != 2 {
                return Err(violated(format!("row {row} needs p = 2")));
            }
            let e = gcd(n, k);
            let d = (1u64 << k) + 1;
            if row == "gold_sub" {
                if n / e < 3 {
                    return Err(violated(format!("n/(n,k) = {} < 3", n / e)));
                }
                let v = ((1u64 << gcd(2 * k, n)) - 1) / ((1u64 << e) - 1);
                pred(
                    d,
                    not_one()
                        .filter(|&c| f.in_subfield(c, e as u32))
                        .map(|c| (c, v as u32))
                        .collect(),
                )
            } else {
                let v = (1u64 << e) + 1;
                pred(
                    d,
                    f.elements()
                        .filter(|&c| !f.in_subfield(c, e as u32))
                        .map(|c| (c, v as u32))
                        .collect(),
                )
            }
        }
        "pk_plus_1" => {
            let k = need_k(k, row)?;
            let e = gcd(n, k as u64) as u32;
            let d = p.pow(k) + 1;
            let v = gcd(d, q - 1) as u32;
            pred(d, not_one().filter(|&c| f.in_subfield(c, e)).map(|c| (c, v)).collect())
        }
        _ => Err(Error::UnknownRow(row.to_string())),
    }
}
