//! The finitized bead process.
//!
//! Particles sit on `p+q-1` parallel unit segments and interlace between
//! neighbouring lines. This crate samples the process exactly, evaluates its
//! determinantal correlation kernel, checks it against two independent
//! oracles (a discretised L-ensemble and brute-force lattice enumeration) and
//! computes the global and bulk scaling limits.

// `!(x > 0.0)` is how NaN gets rejected along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hexagon;
pub mod kernel;
pub mod lensemble;
pub mod model;
pub mod orthopoly;
pub mod sampler;
pub mod scaling;
pub mod stats;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use kernel::KernelContext;
pub use model::{BeadConfiguration, HexagonSpec};
