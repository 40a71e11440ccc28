//! Exact arithmetic in `F_{p^N}`.
//!
//! One prime-characteristic tower serves every `(q, n)` pairing: a base field
//! `F_q` with `q = p^t` is a [`SubfieldView`] of degree `t`, never a separate
//! context. Multiplication goes through log/antilog tables, odd-characteristic
//! addition through Zech logarithms, and characteristic 2 addition is XOR on
//! the packed coefficient vector.

mod field;
mod moduli;

pub use field::{
    build_field, gcd, is_prime, prime_factors, two_valuation, Elem, FieldCtx, SubfieldView, MAX_FIELD_ORDER,
};
