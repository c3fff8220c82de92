//! Simulation and analysis toolkit for a Josephson traveling-wave
//! parametric amplifier operating by four-wave mixing.
//!
//! (Crate-level documentation is completed alongside the top-level modules.)

pub mod calibration;
pub mod cli;
pub mod cme;
pub mod compression;
pub mod config;
pub mod constants;
pub mod device;
pub mod error;
pub mod io;
pub mod ode;
pub mod optim;
pub mod plot;
pub mod reduction;
pub mod response;
pub mod units;

pub use error::{Error, Result};
