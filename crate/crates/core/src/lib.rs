//! Degree combinatorics of finite loop spaces.
//!
//! The crate catalogs simple rational and p-adic reflection groups, decides
//! whether a degree multiset is realized by a product of such groups at
//! every prime, works with the rational cones spanned by degree vectors
//! using exact arithmetic, and searches for multisets that are realizable at
//! every prime but not over the rationals.

pub mod catalog;
pub mod decompose;
pub mod degvec;
pub mod error;
pub mod papercheck;
pub mod primecover;
pub mod ratcone;
pub mod search;

pub use catalog::{Catalog, Family, GroupEntry};
pub use degvec::{DegreeMultiset, DegreeVector};
pub use error::{Error, Result};
pub use primecover::{PrimeCondition, Regime};
