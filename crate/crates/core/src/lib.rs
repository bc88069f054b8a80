//! Fusion systems, transporter systems, localities and rigid automorphisms
//! of small permutation groups.

pub mod error;
pub mod grp;

pub use error::{Error, Result};
pub mod abelian;
pub mod fusion;
pub mod translink;
pub mod locality;
pub mod cohom;
pub mod rigid;
pub mod kappa;
pub mod report;
