//! The `q → 0` limit after `λ_{α^∨} ↦ sτ`: exact rational functions in the
//! multiplicative symbols, the limiting classes `K_w` and their checks.

pub mod classes;
pub mod kscalar;
pub mod puiseux;

pub use classes::{
    k_class, k_class_parabolic, k_parabolic_check, k_recursion_check, k_table, k_table_billey, k_table_parabolic,
    limit_weight_table_check, KParabolicReport, KRecursionInstance, KTable, TileKind, WeightTableEntry,
};
pub use kscalar::KScalar;
pub use puiseux::{limit, limit_pq, limit_q0, tau_substitute, PQLimit, PuiseuxScalar, TauSubstitution};

#[cfg(test)]
mod tests;
