//! Equivariant elliptic Schubert calculus: elliptic classes via twisted group
//! algebras, Billey-type formulas, generic pipe dreams, K-theory limits and
//! dual bases.

pub mod duality;
pub mod error;
pub mod harness;
pub mod ktheory;
pub mod roots;
pub mod theta;
pub mod schubert;
pub mod twisted;
pub mod typea;

pub use error::{Error, Result};
