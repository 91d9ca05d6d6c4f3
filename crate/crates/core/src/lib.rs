//! Exact computations with finite-dimensional non-associative algebras given
//! by structure constants: identity checking, Cayley-Dickson and Zorn
//! constructions, and derivation-type operator spaces.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod catalog;
pub mod cayley_dickson;
pub mod derivations;
pub mod error;
pub mod field;
pub mod format;
pub mod linalg;
pub mod options;
pub mod report;

pub use algebra::{Algebra, Element, Identity, IdentityReport, Side};
pub use cayley_dickson::{InvolutiveAlgebra, QuadraticAlgebra, QuadraticForm};
pub use error::{Error, Result};
pub use field::{Field, FieldDescriptor, FieldElement, Poly2};
pub use linalg::{Matrix, Subspace};
pub use options::Options;
pub use report::{Check, Provenance, SuiteReport};
