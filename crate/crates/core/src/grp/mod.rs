//! Permutation group kernel.

pub mod aut;
pub mod group;
pub mod parse;
pub mod perm;
pub mod thompson;

pub use aut::{automorphism_group, AutomorphismGroup};
pub use group::{Elem, FiniteGroup, Quotient, Subgroup};
pub use perm::Perm;
pub use thompson::{j_less, thompson_j, Thompson};
