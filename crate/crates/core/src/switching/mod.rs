//! Switched functions `H = F + Σ u_i f_i` with subfield-valued `f_i`, the
//! PcN switching criterion with witness extraction, and audits of the
//! solution-set structure when the switched uniformity grows.

mod audit;
mod criterion;
mod spec;

pub use audit::{
    aa_epsilon_partition, delta_bound_check, witness_structure_audit, AaEpsilonSet, AuditReport, BoundCheck,
    ClauseResult,
};
pub use criterion::{pcn_switch_criterion, verify_witness, EpsilonSet, SwitchWitness};
pub use spec::{build_switch, combine, BuiltSwitch, SwitchSpec, SwitchTerm, TermSpec};
