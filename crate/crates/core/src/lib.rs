//! First Dirichlet eigenvalues of weighted radial problems, Bessel constants,
//! sharp Hardy constants and spectral type classification of rotationally
//! symmetric surfaces.

// `!(x > 0.0)` is the house idiom: it rejects NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod hardy;
pub mod numerics;
pub mod special;
pub mod sturm;
pub mod surface;

pub use error::{Error, Result};
