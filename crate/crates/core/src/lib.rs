//! Combinatorial model of the moduli space of stable genus-0 tropical curves
//! with n markings, as a cone complex of stable trees, together with
//! verification tools for its automorphism group and related counts.

pub mod automorphism;
pub mod complex;
pub mod counting;
pub mod enumeration;
pub mod error;
pub mod exec;
pub mod genus2;
pub mod group;
pub mod perm;
pub mod report;
pub mod tree;
pub mod verdict;

pub use error::{Error, Result};
pub use exec::Execution;
pub use verdict::Verdict;
