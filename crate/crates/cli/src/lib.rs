//! Sweep, validation and single-point front end for `ndsread`.

pub mod config;
pub mod curves;
pub mod error;
pub mod gain;
pub mod output;
pub mod point;
pub mod validate;

pub use config::{Format, PartialConfig, Scenario, SweepConfig};
pub use curves::{curves_table, sustained_crossover, Curve};
pub use error::{CliError, Result};
pub use gain::{gain_table, GainGrid};
pub use output::{fmt_float, Table};
pub use point::{evaluate_point, PointRequest, StateKind};
pub use validate::{run_validation, ValidateOptions, ValidationReport};
