use super::eval::check_linearized;
use crate::error::Result;
use crate::gfpn::{Elem, FieldCtx};

/// Dickson matrix of `L(x) = Σ a_i x^{q^i}` over `F_{q^n}`, `q = p^t`:
/// entry `(i, j)` is `a_{(j - i) mod n}^{q^i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DicksonMatrix {
    pub entries: Vec<Vec<Elem>>,
}

impl DicksonMatrix {
    pub fn new(coeffs: &[Elem], t: u32, field: &FieldCtx) -> Result<DicksonMatrix> {
        check_linearized(coeffs, t, field)?;
        let n = (field.degree() / t) as usize;
        let a = |k: usize| coeffs.get(k).copied().unwrap_or(Elem::ZERO);
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| field.frobenius(a((j + n - i) % n), t * i as u32))
                    .collect()
            })
            .collect();
        Ok(DicksonMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Determinant by Gaussian elimination with first-nonzero pivoting.
    pub fn determinant(&self, f: &FieldCtx) -> Elem {
        let n = self.dim();
        let mut m = self.entries.clone();
        let mut det = Elem::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Elem::ZERO;
            };
            if piv != col {
                m.swap(piv, col);
                det = f.neg(det);
            }
            let pivot = m[col][col];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("pivot is nonzero");
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = f.mul(m[r][col], inv);
                for c in col..n {
                    let v = f.mul(factor, m[col][c]);
                    m[r][c] = f.sub(m[r][c], v);
                }
            }
        }
        det
    }
}

/// Whether `Σ coeffs[i] x^{p^{t i}}` permutes `F_{p^N}`, decided by its Dickson
/// determinant.
pub fn dickson_nonsingular(coeffs: &[Elem], t: u32, field: &FieldCtx) -> Result<bool> {
    Ok(!DicksonMatrix::new(coeffs, t, field)?.determinant(field).is_zero())
}
