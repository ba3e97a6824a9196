//! Library surface of the batch runner, exposed for the binary and the
//! integration tests.

pub mod config;
pub mod registry;
pub mod report;
pub mod rng;
pub mod runner;
