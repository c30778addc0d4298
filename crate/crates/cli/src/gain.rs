//! Number-state over coherent-state exponent gain on a reflectance grid.

use ndsread::transmitters::gain;
use ndsread::ChannelPair;
use rayon::prelude::*;

use crate::config::linear_grid;
use crate::error::Result;
use crate::output::{Column, Semantics, Table};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GainGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
}

impl Default for GainGrid {
    fn default() -> Self {
        Self {
            r_min: 0.4,
            r_max: 0.99,
            steps: 60,
        }
    }
}

/// Rows `(r0, r1, gain)` for every grid pair with `r0 <= r1`, ordered by `r0`
/// then `r1`.
pub fn gain_table(g: &GainGrid) -> Result<Table> {
    let axis = linear_grid(g.r_min, g.r_max, g.steps)?;
    let pairs: Vec<(f64, f64)> = axis
        .iter()
        .enumerate()
        .flat_map(|(i, &r0)| axis[i..].iter().map(move |&r1| (r0, r1)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(r0, r1)| {
            let c = ChannelPair::reading(r0, r1)?;
            Ok(vec![Some(r0), Some(r1), Some(gain(&c))])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: vec![
            Column {
                name: "r0",
                semantics: Semantics::Input,
            },
            Column {
                name: "r1",
                semantics: Semantics::Input,
            },
            Column {
                name: "gain",
                semantics: Semantics::Ratio,
            },
        ],
        rows,
    })
}
