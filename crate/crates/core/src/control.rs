use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracy and budget knobs for series evaluation.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    /// Largest tolerated residual probability mass outside the enumerated terms.
    pub tail_tolerance: f64,
    /// Upper limit on the number of environment terms enumerated.
    pub max_terms: usize,
    /// Bracket width at which the search for the Chernoff exponent stops.
    pub s_tolerance: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            tail_tolerance: 1e-12,
            max_terms: 5_000_000,
            s_tolerance: 1e-10,
        }
    }
}

impl SeriesControl {
    pub fn new(tail_tolerance: f64, max_terms: usize, s_tolerance: f64) -> Result<Self> {
        let ctl = Self {
            tail_tolerance,
            max_terms,
            s_tolerance,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tolerance > 0.0 && self.s_tolerance > 0.0 && self.max_terms > 0) {
            return Err(Error::Domain(format!(
                "series controls must be strictly positive: {self:?}"
            )));
        }
        Ok(())
    }
}
