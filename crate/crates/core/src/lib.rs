//! Uplink capacity bounds for in-band full-duplex cellular networks.
//!
//! The analytic pipeline runs
//! [`interference::gamma_fit`] → [`cinr::cinr_distribution`] →
//! [`powercontrol::solve_cutoff`] → [`capacity`], and [`mcsim`] provides a
//! Poisson-field Monte Carlo counterpart for every analytic quantity.

pub mod capacity;
pub mod cinr;
pub mod cli;
pub mod error;
pub mod interference;
pub mod mcsim;
pub mod model;
pub mod numeric;
pub mod powercontrol;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{derived_geometry, GammaParams, Geometry, NetworkConfig};
