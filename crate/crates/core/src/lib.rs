//! Core algorithms for benchmarking pool-based active learning on binary
//! tabular datasets.
//!
//! The crate bundles everything needed to run seeded active-learning trials
//! and analyze them: sparse dataset parsing and standardization, classical
//! learners trained from scratch (logistic regression, SMO-based SVMs,
//! random forest, LDA), a registry of query strategies, a beam-search
//! oracle that upper-bounds achievable accuracy, the trial protocol, and
//! the statistical machinery (AUBC, rankings, Friedman test, paired t).
//!
//! `no_std`-compatible with `alloc`; the default `std` feature only adds
//! `std::error::Error` impls and changes no behavior. All floating-point
//! transcendentals go through `libm` so results are identical with and
//! without `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bso;
pub mod dataset;
mod error;
pub mod learners;
pub mod linalg;
pub mod math;
pub mod protocol;
pub mod rng;
pub mod scaler;
pub mod stats;
pub mod strategies;

pub use error::CoreError;
