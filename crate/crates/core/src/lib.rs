//! Numerical toolkit for a two-species Lotka–Volterra competition model in which
//! each species occupies `[0, s_i(t)]` with a Stefan-type free boundary, in a
//! spatially heterogeneous, time-periodic environment with advection.

// Negated float comparisons reject NaN on purpose; kernels index several arrays in lockstep.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::too_many_arguments
)]

pub mod cli;
pub mod coeffs;
pub mod config;
pub mod eigen;
pub mod error;
pub mod halfline;
pub mod linalg;
pub mod periodic_ode;
pub mod scenarios;
pub mod semiwave;
pub mod single_fb;
pub mod system_fb;

pub use error::{FbError, Result};
