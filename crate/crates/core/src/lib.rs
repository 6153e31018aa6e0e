//! Exact finite-precision arithmetic in Galois extensions of `Q_p` and an
//! explicit construction of local fundamental classes as 2-cocycles, with a
//! linear-algebra cohomology oracle for verification.

pub mod arith;
pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod finite_field;
pub mod galois;
pub mod lfc;
pub mod linalg;
pub mod local_field;

pub use error::{Error, Result};
