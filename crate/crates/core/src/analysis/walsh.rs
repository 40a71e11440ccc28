use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcexpr::FuncTable;
use crate::gfpn::{Elem, FieldCtx};

/// Walsh coefficients as exact residue counts.
///
/// For every `a` and every `b != 0`, `counts(a, b)[j]` is the number of `x`
/// with `Tr(bF(x)) - Tr(ax) = j (mod p)`, where `Tr` is the absolute trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    p: u32,
    q: usize,
    counts: Vec<u32>,
}

/// Absolute traces of all elements.
fn trace_table(f: &FieldCtx) -> Vec<u32> {
    f.elements().map(|x| f.abs_trace_value(x)).collect()
}

/// `a -> (Tr(a w^i))_i` packed base `p`, where `w^i` runs over the
/// polynomial basis. This identifies `a` with the linear functional `x -> Tr(ax)`
/// in the digit coordinates of `x`.
fn functional_index(f: &FieldCtx, tr: &[u32]) -> Vec<usize> {
    let p = f.characteristic() as usize;
    f.elements()
        .map(|a| {
            let mut idx = 0;
            let mut basis = 1usize;
            for _ in 0..f.degree() {
                let t = tr[f.mul(a, Elem::from_raw(basis as u32)).index() as usize] as usize;
                idx += t * basis;
                basis *= p;
            }
            idx
        })
        .collect()
}

/// Histogram transform over `F_p^N`: on entry `t[x * p + j] = [h(x) = j]`, on
/// exit `t[l * p + j] = #{x : h(x) - <l, x> = j}`.
fn residue_transform(t: &mut [u32], p: usize, n: u32) {
    let q = t.len() / p;
    let mut block = vec![0u32; p * p];
    let mut stride = 1;
    for _ in 0..n {
        for base in 0..q {
            if (base / stride) % p != 0 {
                continue;
            }
            for d in 0..p {
                let at = (base + d * stride) * p;
                block[d * p..(d + 1) * p].copy_from_slice(&t[at..at + p]);
            }
            for l in 0..p {
                let at = (base + l * stride) * p;
                for j in 0..p {
                    t[at + j] = (0..p).map(|d| block[d * p + (j + l * d) % p]).sum();
                }
            }
        }
        stride *= p;
    }
}

impl WalshSpectrum {
    fn slot(&self, a: Elem, b: Elem) -> usize {
        assert!(!b.is_zero(), "Walsh coefficients are indexed by b != 0");
        ((b.index() as usize - 1) * self.q + a.index() as usize) * self.p as usize
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn counts(&self, a: Elem, b: Elem) -> &[u32] {
        let s = self.slot(a, b);
        &self.counts[s..s + self.p as usize]
    }

    /// `N_0 - N_1`, only defined in characteristic 2.
    pub fn signed(&self, a: Elem, b: Elem) -> Option<i64> {
        (self.p == 2).then(|| {
            let c = self.counts(a, b);
            c[0] as i64 - c[1] as i64
        })
    }

    pub fn magnitude(&self, a: Elem, b: Elem) -> f64 {
        magnitude_of(self.counts(a, b))
    }

    /// Squared magnitude, exact when `p = 2`.
    pub fn magnitude_sq(&self, a: Elem, b: Elem) -> f64 {
        let c = self.counts(a, b);
        if self.p == 2 {
            let w = c[0] as i64 - c[1] as i64;
            return (w * w) as f64;
        }
        let m = magnitude_of(c);
        m * m
    }

    fn points(&self) -> impl Iterator<Item = &[u32]> {
        self.counts.chunks(self.p as usize)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.points().map(magnitude_of).fold(0.0, f64::max)
    }

    /// Distinct magnitudes after rounding to `1e-6`, keyed in micro-units.
    pub fn magnitude_distribution(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for c in self.points() {
            *out.entry((magnitude_of(c) * 1e6).round() as i64).or_insert(0) += 1;
        }
        out
    }

    pub fn distinct_magnitudes(&self) -> usize {
        self.magnitude_distribution().len()
    }

    /// Distinct complex values. The only integer relation among the `p`-th
    /// roots of unity is that they sum to zero, so two count vectors give the
    /// same value iff they agree after subtracting their minima.
    pub fn distinct_values(&self) -> usize {
        let set: BTreeSet<Vec<u32>> = self
            .points()
            .map(|c| {
                let m = *c.iter().min().unwrap();
                c.iter().map(|k| k - m).collect()
            })
            .collect();
        set.len()
    }

    /// Largest relative deviation of `Σ_a |W(a, b)|^2` from `q^2` over `b != 0`.
    pub fn parseval_error(&self) -> f64 {
        let q2 = (self.q * self.q) as f64;
        (1..self.q)
            .map(|b| {
                let b = Elem::from_raw(b as u32);
                let s: f64 = (0..self.q)
                    .map(|a| self.magnitude_sq(Elem::from_raw(a as u32), b))
                    .sum();
                ((s - q2) / q2).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn magnitude_of(c: &[u32]) -> f64 {
    let p = c.len();
    if p == 2 {
        return (c[0] as f64 - c[1] as f64).abs();
    }
    let (mut re, mut im) = (0.0, 0.0);
    for (j, &n) in c.iter().enumerate() {
        let t = TAU * j as f64 / p as f64;
        re += n as f64 * t.cos();
        im += n as f64 * t.sin();
    }
    re.hypot(im)
}

/// Residue counts for all `(a, b)`, `b != 0`, by a digit-wise transform
/// costing `N p^{N+2}` per `b`.
pub fn walsh(table: &FuncTable) -> WalshSpectrum {
    let f = table.field();
    let p = f.characteristic() as usize;
    let q = f.size();
    let tr = trace_table(f);
    let lam = functional_index(f, &tr);
    let rows: Vec<Vec<u32>> = f
        .nonzero_elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|b| {
            let mut t = vec![0u32; q * p];
            for x in f.elements() {
                let h = tr[f.mul(b, table.at(x)).index() as usize] as usize;
                t[x.index() as usize * p + h] = 1;
            }
            residue_transform(&mut t, p, f.degree());
            let mut row = vec![0u32; q * p];
            for a in 0..q {
                row[a * p..(a + 1) * p].copy_from_slice(&t[lam[a] * p..(lam[a] + 1) * p]);
            }
            row
        })
        .collect();
    WalshSpectrum {
        p: p as u32,
        q,
        counts: rows.concat(),
    }
}

/// Direct evaluation of every coefficient, `O(p^{3N})`.
pub fn walsh_naive(table: &FuncTable) -> WalshSpectrum {
    let f = table.field();
    let p = f.characteristic();
    let q = f.size();
    let tr = trace_table(f);
    let mut counts = Vec::with_capacity((q - 1) * q * p as usize);
    for b in f.nonzero_elements() {
        for a in f.elements() {
            let mut c = vec![0u32; p as usize];
            for x in f.elements() {
                let u = tr[f.mul(b, table.at(x)).index() as usize];
                let v = tr[f.mul(a, x).index() as usize];
                c[((u + p - v) % p) as usize] += 1;
            }
            counts.extend(c);
        }
    }
    WalshSpectrum { p, q, counts }
}

/// `2^{N-1} - max|W| / 2` over all `a` and `b != 0`.
pub fn nonlinearity(table: &FuncTable) -> Result<u64> {
    let f = table.field();
    if f.characteristic() != 2 {
        return Err(Error::OddCharacteristic);
    }
    Ok(nonlinearity_of(&walsh(table)))
}

pub(crate) fn nonlinearity_of(w: &WalshSpectrum) -> u64 {
    let max = w
        .points()
        .map(|c| (c[0] as i64 - c[1] as i64).unsigned_abs())
        .max()
        .unwrap_or(0);
    (w.q as u64 - max) / 2
}
