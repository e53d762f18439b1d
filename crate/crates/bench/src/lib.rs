//! Benchmark and verification harness for the `caratheodory` crate.
//!
//! [`runner`] holds the size, grid and accuracy sweeps, [`verify`] the
//! invariant suite, and [`report`] the JSON and CSV output.

// `!(x > y)` is used deliberately so NaN takes the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod report;
pub mod runner;
pub mod verify;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/bench.md")]
mod book_bench {}
