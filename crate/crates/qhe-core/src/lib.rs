//! Exact computational workbench for finite-dimensional quiver algebras and
//! finite windows of their band-category envelopes.
//!
//! The crate builds a quiver algebra from a presentation, equips it with a
//! validated two-sided ideal filtration, constructs finite level windows of
//! the associated banded category and of its trivial extension, and
//! machine-certifies structural claims about them: quasi-heredity in two
//! opposite orders, symmetry of trace forms, recovery of the input algebra as
//! an idempotent subquotient, Borel-type subalgebras and the triangular
//! decomposition. All arithmetic is exact (arbitrary-precision rationals or a
//! prime field) and every certificate is deterministic.

pub mod algebra;
pub mod borel;
pub mod cert;
pub mod envelope;
pub mod filtration;
pub mod form;
pub mod linalg;
pub mod module;
pub mod presentation;
pub mod qh;
pub mod quiver;
pub mod report;
pub mod scalar;
pub mod tilde;
pub mod trivext;

pub use scalar::{FieldSpec, Scalar};
