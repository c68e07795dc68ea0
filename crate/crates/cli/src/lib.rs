//! Fuzz harness, JSON file formats and the `rootcont` command line on top
//! of [`rootcont_core`].

pub mod harness;
pub mod io;

pub use harness::{estimate_empirical_delta, fuzz_theorem, FuzzConfig, FuzzReport, HarnessError, Theorem};
