//! Finite inverse semigroups and their strong Morita theory.
//!
//! Everything is finite and exhaustive: semigroups are multiplication
//! tables, bimodules are action and inner-product tables, groupoids are
//! arrow lists. Claims that theory guarantees are still checked on every
//! instance, and a failure surfaces as a [`Violation`].

pub mod bimodule;
pub mod category;
pub mod constructions;
pub mod context_file;
pub mod dsu;
pub mod enlargement;
pub mod error;
pub mod germ;
pub mod groupoid;
pub mod iso;
pub mod karoubi;
pub mod poset;
pub mod report;
pub mod search;
pub mod semigroup;
pub mod structure;
pub mod tensor;

pub use error::Violation;
pub use semigroup::{Group, InverseSemigroup, SpecError, ValidationError};
