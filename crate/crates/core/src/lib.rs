//! Exact construction and verification of bicrossproduct multiplier Hopf
//! algebras built from matched pairs of groups.

pub mod bicross;
pub mod catalog;
pub mod error;
pub mod export;
pub mod group;
pub mod input;
pub mod matched_pair;
pub mod matrix;
pub mod mhopf;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use group::{Elem, FiniteTable, Group, GroupKind};
pub use scalar::Scalar;
