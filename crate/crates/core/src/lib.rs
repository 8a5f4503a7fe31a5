//! Models of how much routing gain motion prediction can buy in mobile ad
//! hoc networks, with Monte Carlo simulators that check them.
//!
//! - [`mobility`]: random-direction and field-guided node motion
//! - [`entropy`]: relative-velocity motion entropy and curl maps
//! - [`topology`]: topology bit-strings and their compressibility
//! - [`analytic`]: route-update bounds, route formation, gains, flash routes
//! - [`montecarlo`]: the evolving random graph simulated trial by trial
//! - [`experiment`]: named scenarios that write figure-ready CSV
//!
//! Runnable walkthroughs of each capability live in `examples/`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod mobility;
pub mod montecarlo;
pub mod report;
pub mod topology;
pub mod vec2;

pub use error::{Error, Result};
pub use report::GainReport;
pub use vec2::Vec2;
