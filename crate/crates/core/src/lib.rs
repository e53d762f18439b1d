//! Exact coresets for least-mean-squares problems.
//!
//! A Caratheodory set replaces `n` weighted points in `R^d` by at most
//! `d + 1` of them with the same weighted mean. Applied to the outer
//! products `a_i a_iᵀ` of the rows of `A`, it yields a small matrix `S` with
//! `SᵀS = AᵀA`, so any solver that only depends on the Gram matrix gives the
//! same answer on `S` as on `A`.
//!
//! ```
//! use caratheodory::covariance::{caratheodory_matrix, relative_gram_error};
//! use caratheodory::datasets::synthetic;
//!
//! let (a, _) = synthetic::<f64>(2_000, 4, 0.0, 1.0, 1).unwrap();
//! let s = caratheodory_matrix(&a, 2 * 16 + 2).unwrap();
//! assert!(s.matrix.rows() <= 17);
//! assert!(relative_gram_error(&s.matrix, &a) < 1e-12);
//! ```

// `!(x > y)` is used deliberately so NaN takes the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baseline;
pub mod caratheodory;
pub mod covariance;
pub mod datasets;
pub mod error;
pub mod linalg;
pub mod lms;
pub mod matrix;
pub mod pca;
pub mod real;
pub mod sparse;
pub mod weighted;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use real::{Precision, Real};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/caratheodory-sets.md")]
mod book_caratheodory_sets {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/sparse.md")]
mod book_sparse {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/covariance.md")]
mod book_covariance {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/lms.md")]
mod book_lms {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cross-validation.md")]
mod book_cross_validation {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/pca.md")]
mod book_pca {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/precision.md")]
mod book_precision {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/datasets.md")]
mod book_datasets {}
