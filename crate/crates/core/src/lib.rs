//! Coverage and altitude-handover analysis for cellular-connected UAVs
//! served by base stations with uniform linear antenna arrays.
//!
//! The [`analysis`] module evaluates the closed-form results through
//! adaptive quadrature; [`montecarlo`] simulates the same network directly
//! and serves as an independent check. [`cli`] reads experiment files
//! and drives sweeps that emit CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analysis;
pub mod antenna;
pub mod channel;
pub mod cli;
pub mod error;
pub mod mobility;
pub mod montecarlo;
pub mod numerics;

pub use error::{Error, Result};
