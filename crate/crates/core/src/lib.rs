//! Simulation and planning toolkit for massively distributed antenna systems
//! fed by optical fiber fronthauls.
//!
//! The crate models three fronthaul schemes (baseband-, IF- and RF-over-fiber)
//! end to end: optical link impairments, per-node power consumption under a
//! total budget, wireless throughput for ultra-dense and cell-free
//! deployments, and mixed digital/true-time-delay beamforming.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beamform;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod optics;
pub mod power;
pub mod units;
pub mod wireless;

pub use error::{Error, Result};
pub use geometry::{NetworkLayout, Point2D, Scenario};
pub use optics::{FiberParams, Scheme, SchemeConfig};
pub use power::{PowerBreakdown, PowerParams};
