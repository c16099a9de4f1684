//! Command-line front end and JSON service for the `ovaltrack` crate.

pub mod cli;
pub mod ops;
pub mod service;
pub mod wire;
