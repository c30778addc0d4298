//! Error-probability curves versus signal energy for the standard probes.

use clap::ValueEnum;
use ndsread::transmitters::{
    coherent_pe, epr_chernoff, epr_pe_lower, fock_chernoff, fock_error_probability, EprInput,
};
use ndsread::{universal_pe_lower_bound, ChannelPair};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SweepConfig;
use crate::error::Result;
use crate::output::{Column, Semantics, Table};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Curve {
    /// Floor over all probes of the given mean energy.
    UniversalLb,
    /// Coherent-state error probability.
    CoherentPe,
    /// Number-state error probability (integer energies only).
    FockPe,
    /// Classical Chernoff bound of the number-state counts (integer energies,
    /// interior reflectances only).
    FockChernoff,
    /// Fidelity lower bound for `M` two-mode squeezed vacua.
    EprFidLb,
    /// Chernoff upper bound for `M` two-mode squeezed vacua.
    EprChernoff,
}

impl Curve {
    pub const ALL: [Curve; 6] = [
        Curve::UniversalLb,
        Curve::CoherentPe,
        Curve::FockPe,
        Curve::FockChernoff,
        Curve::EprFidLb,
        Curve::EprChernoff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Curve::UniversalLb => "universal_lb",
            Curve::CoherentPe => "coherent_pe",
            Curve::FockPe => "fock_pe",
            Curve::FockChernoff => "fock_chernoff",
            Curve::EprFidLb => "epr_fid_lb",
            Curve::EprChernoff => "epr_chernoff",
        }
    }

    pub fn semantics(self) -> Semantics {
        match self {
            Curve::UniversalLb | Curve::EprFidLb => Semantics::Lower,
            Curve::CoherentPe | Curve::FockPe => Semantics::Exact,
            Curve::FockChernoff | Curve::EprChernoff => Semantics::Upper,
        }
    }

    /// Value at energy `ns`, or `None` where the curve is not defined.
    pub fn evaluate(self, ns: f64, c: &ChannelPair, modes: usize) -> Result<Option<f64>> {
        let photons = (ns.fract() == 0.0).then_some(ns as u64);
        let interior = !(c.is_target_detection() || c.is_ideal_memory());
        Ok(match self {
            Curve::UniversalLb => Some(universal_pe_lower_bound(ns, c)?),
            Curve::CoherentPe => Some(coherent_pe(ns, c)?),
            Curve::FockPe => match photons {
                Some(n) => Some(fock_error_probability(n, c)?),
                None => None,
            },
            Curve::FockChernoff => match photons {
                Some(n) if interior => Some(fock_chernoff(n, c)?.bound),
                _ => None,
            },
            Curve::EprFidLb => Some(epr_pe_lower(&EprInput::new(modes, ns)?, c)?),
            Curve::EprChernoff => Some(epr_chernoff(&EprInput::new(modes, ns)?, c)?.bound),
        })
    }
}

/// One row per grid energy, in grid order; points are evaluated in parallel.
pub fn curves_table(cfg: &SweepConfig) -> Result<Table> {
    let c = cfg.channel()?;
    let mut columns = vec![Column {
        name: "ns",
        semantics: Semantics::Input,
    }];
    columns.extend(cfg.outputs.iter().map(|k| Column {
        name: k.name(),
        semantics: k.semantics(),
    }));
    let rows = cfg
        .ns_grid
        .par_iter()
        .map(|&ns| {
            let mut row = vec![Some(ns)];
            for k in &cfg.outputs {
                row.push(k.evaluate(ns, &c, cfg.modes)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { columns, rows })
}

/// Smallest grid energy from which `below` stays strictly under `above` for
/// the rest of the grid, skipping rows where either is omitted.
pub fn sustained_crossover(t: &Table, below: Curve, above: Curve) -> Option<f64> {
    let (b, a) = (t.column(below.name())?, t.column(above.name())?);
    let mut start = None;
    for row in &t.rows {
        let (Some(x), Some(y)) = (row[b], row[a]) else {
            continue;
        };
        if x < y {
            start.get_or_insert(row[0]?);
        } else {
            start = None;
        }
    }
    start
}
