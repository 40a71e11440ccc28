//! Exhaustive c-differential analysis of functions over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`gfpn`] — arithmetic in `F_{p^N}` with subfield traces and norms;
//! * [`funcexpr`] — a small expression language for `(N, N)`-functions, dense
//!   tabulation, and linearized-polynomial permutation tests;
//! * [`analysis`] — c-difference distribution tables, boomerang and Walsh
//!   statistics;
//! * [`switching`] — switched functions `F + Σ u_i f_i` and the criteria that
//!   decide when switching keeps or raises c-differential uniformity;
//! * [`catalog`] — generators and brute-force verifiers for known families.

pub mod analysis;
pub mod catalog;
pub mod error;
pub mod funcexpr;
pub mod gfpn;
pub mod switching;

pub use error::{Error, Result};
pub use gfpn::{build_field, Elem, FieldCtx};
