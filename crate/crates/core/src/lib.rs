//! Probe response of a quantum dot coupled to a pair of Majorana modes under
//! a strong pump: steady state, linear susceptibility, group index, a
//! time-domain cross-check and a parameter-sweep harness.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod figures;
pub mod ode;
pub mod oracle;
pub mod params;
pub mod response;
pub mod steady;
pub mod sweep;

pub use error::{Error, Result};
pub use params::{majorana_splitting, GroupIndexScale, ModelParams, ProbeGrid};
pub use steady::{solve_population_inversion, steady_state, SteadyState};
