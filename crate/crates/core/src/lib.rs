//! Computational algebra for symplectic groups over finite fields: inner
//! twists of matrix representations, huge-image detection in `GSp_n`,
//! projective fields of definition, Gauss-period subfields, and residual-field
//! matching for mock compatible systems over cyclotomic integer rings.
//!
//! Everything is exact arithmetic at desk scale; brute-force oracles back each
//! structural claim on small instances.

pub mod ffield;
pub mod linalg;
pub mod modpoly;
pub mod symplectic;

pub use ffield::{FFElem, FieldError, FiniteField, GaloisAuto};
pub use symplectic::{Mat, SympError, Transvection};
