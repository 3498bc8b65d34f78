//! Certified a-priori bounds for steady Navier-Stokes flow past a box-shaped
//! obstacle in the channel `(-L, L)^3` with a do-nothing outlet.
//!
//! The pipeline is [`geometry`] -> [`sobolev`] -> [`inflow`] ->
//! [`wellposedness`] -> [`forces`]; [`oracle`] checks the closed forms
//! numerically and [`cli`] is the command-line front end.

pub mod cli;
pub mod config;
pub mod error;
pub mod forces;
pub mod geometry;
pub mod inflow;
pub mod oracle;
pub mod report;
pub mod sobolev;
pub mod wellposedness;

pub use error::{Error, Result};
pub use geometry::ChannelGeometry;
pub use inflow::InflowDatum;
pub use wellposedness::{certify, Certificate, FluidParams, Status};
