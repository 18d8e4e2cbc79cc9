//! Type A diagrammatics: sub-wiring diagrams, generic pipe dreams with levels,
//! and polynomial representatives of elliptic classes.

pub mod pipes;
pub mod poly;
pub mod weight;
pub mod wiring;

pub use pipes::{
    enumerate_grid, enumerate_subwords, filtered_subwords, poly_symbols, subwiring_poly_weight, trace, u0_data,
    GenericPipeDream, Tile, Trace, U0Data, MAX_GRID,
};
pub use poly::{loc, loc_map, poly_recursion_check, polynomial_rep, polynomial_rep_parabolic, PolyRecursionReport};
pub use weight::{Atom, WeightExpr, PQ};
pub use wiring::{parse_perm, Crossing, Perm, SubWiring};

#[cfg(test)]
mod tests;
