//! Exact series for number-diagonal-signal probes.
//!
//! Both output states are block diagonal over the environment occupation `k`,
//! so every quantity reduces to a sum over the terms produced by
//! [`env_terms`].

mod blocks;
mod product;
mod reduce;
mod report;
mod terms;

pub use blocks::{BlockMatrix2x2, MeasurementBlock};
pub use product::{product_combine, ProductSeries};
pub use reduce::ChernoffPoint;
pub use report::{analyze, analyze_series, bound_bracket, DiscriminationReport, TruncationErrors};
pub use terms::{env_terms, EnvSeries, EnvTerm};

use crate::channel::{ChannelPair, Hypothesis};
use crate::control::SeriesControl;
use crate::error::{Error, Result};
use crate::signal::{Certified, SignalDistribution};

fn exact(value: f64) -> Certified {
    Certified { value, error: 0.0 }
}

/// Minimum error probability at equal priors (the priors stored in `c` are ignored).
pub fn helstrom_pe(
    d: &SignalDistribution,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<Certified> {
    if c.is_degenerate() {
        return Ok(exact(0.5));
    }
    let factors = terms::factor_series(d, c, ctl)?;
    combined(factors, ctl).map(|s| s.helstrom_pe())
}

/// Minimum error probability with the priors stored in `c`.
pub fn helstrom_pe_priors(
    d: &SignalDistribution,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<Certified> {
    let prior0 = c.prior(Hypothesis::Zero);
    if c.is_degenerate() {
        return Ok(exact(prior0.min(1.0 - prior0)));
    }
    let factors = terms::factor_series(d, c, ctl)?;
    combined(factors, ctl).map(|s| s.helstrom_pe_priors(prior0))
}

/// Output fidelity `(Σ_k |I_k|)²`.
pub fn nds_fidelity(
    d: &SignalDistribution,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<Certified> {
    if c.is_degenerate() {
        return Ok(exact(1.0));
    }
    Ok(ProductSeries::new(terms::factor_series(d, c, ctl)?).fidelity())
}

/// `Q(s) = Tr[ρ0^s ρ1^(1-s)]`.
pub fn nds_q_of_s(
    d: &SignalDistribution,
    c: &ChannelPair,
    s: f64,
    ctl: &SeriesControl,
) -> Result<Certified> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    if c.is_degenerate() {
        return Ok(exact(1.0));
    }
    Ok(ProductSeries::new(terms::factor_series(d, c, ctl)?).q_of_s(s))
}

/// `(min_s Q(s), argmin)`; identical channels report `(1, 0)`.
pub fn nds_chernoff(
    d: &SignalDistribution,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<ChernoffPoint> {
    if c.is_degenerate() {
        return Ok(ChernoffPoint {
            q: 1.0,
            s: 0.0,
            error: 0.0,
        });
    }
    Ok(ProductSeries::new(terms::factor_series(d, c, ctl)?).chernoff(ctl.s_tolerance))
}

/// Per-block spectral data of the optimal measurement, using the priors in `c`.
pub fn optimal_measurement_blocks(
    d: &SignalDistribution,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<Vec<MeasurementBlock>> {
    let factors = terms::factor_series(d, c, ctl)?;
    Ok(combined(factors, ctl)?.measurement_blocks(c.prior(Hypothesis::Zero)))
}

fn combined(mut factors: Vec<EnvSeries>, ctl: &SeriesControl) -> Result<EnvSeries> {
    if factors.len() == 1 {
        return Ok(factors.pop().expect("one factor"));
    }
    ProductSeries::new(factors).combined(ctl)
}
