pub mod arith;
pub mod asymptotics;
pub mod charsums;
pub mod cli;
pub mod constants;
pub mod counting;
pub mod error;
pub mod fixed;
pub mod oeis;
pub mod report;
pub mod selftest;

pub use error::{Error, Result};
