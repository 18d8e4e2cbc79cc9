//! Root data, Weyl groups, reduced words, Bruhat order and parabolic subgroups.

pub mod datum;
pub mod parabolic;
pub mod weyl;
pub mod words;

pub use datum::{DatumKind, Root, RootDatum};
pub use parabolic::Parabolic;
pub use weyl::{parse_word, Elem, WeylGroup, Word, DEFAULT_GROUP_BOUND};
pub use words::{beta_coroots, beta_sequence, gamma_roots, gamma_sequence, mask_to_subset, subword_product};
