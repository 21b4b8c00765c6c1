//! Reduced-order model for supercritical coolant flow in straight
//! regenerative cooling channels.
//!
//! The crate has two halves that meet in [`channel::predict_channel`]:
//!
//! - a 1-D marching solver ([`channel`]) that advances bulk pressure and
//!   total enthalpy station by station, using Darcy-Weisbach friction with
//!   the Churchill friction factor and a tabulated equation of state
//!   ([`fluidprops`]);
//! - a from-scratch feedforward network ([`neural`]) that maps the bulk state
//!   and channel geometry at a station to the maximum hot-gas-side wall
//!   temperature.
//!
//! [`datapipe`] holds the dataset schema, statistics, importance weights,
//! random hyperparameter search and evaluation metrics. [`oracle`] produces
//! synthetic labelled channels so that the whole workflow runs without an
//! external CFD campaign. [`cli`] backs the `coolchan` binary.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod channel;
pub mod cli;
pub mod datapipe;
pub mod error;
pub mod fluidprops;
pub mod io_util;
pub mod neural;
pub mod oracle;

pub use error::{Error, ErrorCategory, Result};
