//! Config parsing and experiment plumbing for the `dqgan` binary.

pub mod config;
pub mod experiment;

/// Formats a float with 12 significant digits, the precision used in every
/// emitted CSV.
pub fn fmt12(value: f64) -> String {
    format!("{value:.11e}")
}
