//! Decision procedures for self-similar groups of finite type over a finite
//! alphabet, defined by a pattern group of depth `d`.

pub mod classify;
pub mod criteria;
pub mod error;
pub mod pattern;
pub mod perm;
pub mod permgroup;
pub mod tree;

pub use error::{Error, Result};
pub use pattern::{PatternGraph, PatternGroup, RestrictionTower};
pub use perm::Permutation;
pub use permgroup::{Fingerprint, PermutationGroup};
pub use tree::{Alphabet, LeafNumbering, TreeAutomorphism, Vertex};
