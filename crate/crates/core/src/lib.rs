//! Geographically weighted analysis: kernel-weighted neighbor selection,
//! geographically weighted regression with CV/AICc bandwidth selection,
//! and geographically weighted summary statistics.
//!
//! Layering follows the data flow: [`gw`] holds the shared primitives
//! (distances, neighbors, kernel weights), [`regression`] and
//! [`descriptive`] build on them, and [`io`] / [`cli`] drive them from
//! files.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod descriptive;
pub mod error;
pub mod gw;
pub mod io;
pub mod regression;

pub use error::{GwError, Result};
