//! One-call evaluation of every series quantity for a probe.

use serde::{Deserialize, Serialize};

use super::product::ProductSeries;
use super::reduce::ChernoffPoint;
use super::terms::{factor_series, EnvSeries};
use crate::bounds::{BoundBracket, BoundSource};
use crate::channel::{ChannelPair, Hypothesis};
use crate::control::SeriesControl;
use crate::error::Result;
use crate::numerics::half_one_minus_sqrt_one_minus;
use crate::signal::{Certified, SignalDistribution};

/// Bounds on `|reported - exact|` for each reported quantity.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TruncationErrors {
    pub pe: f64,
    pub fidelity: f64,
    pub q_of_s_star: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationReport {
    pub pe: f64,
    pub fidelity: f64,
    pub q_of_s_star: f64,
    pub s_star: f64,
    pub bracket: BoundBracket,
    pub truncation_error: TruncationErrors,
    /// Number of environment blocks the error probability was summed over.
    pub terms: usize,
}

/// Fidelity lower bound and Chernoff/fidelity upper bound on the error
/// probability with priors `(π0, π1)`.
pub fn bound_bracket(fidelity: f64, chernoff: ChernoffPoint, prior0: f64) -> Result<BoundBracket> {
    let pi1 = 1.0 - prior0;
    let lower = half_one_minus_sqrt_one_minus((4.0 * prior0 * pi1 * fidelity).min(1.0));
    let by_fidelity = (prior0 * pi1 * fidelity).sqrt();
    let by_chernoff = prior0.powf(chernoff.s) * pi1.powf(1.0 - chernoff.s) * chernoff.q;
    let (upper, source) = if by_chernoff < by_fidelity {
        (by_chernoff, BoundSource::Chernoff)
    } else {
        (by_fidelity, BoundSource::Fidelity)
    };
    BoundBracket::new(lower, upper, source)
}

impl DiscriminationReport {
    fn assemble(
        pe: Certified,
        fidelity: Certified,
        chernoff: ChernoffPoint,
        prior0: f64,
        terms: usize,
    ) -> Result<Self> {
        Ok(Self {
            pe: pe.value,
            fidelity: fidelity.value,
            q_of_s_star: chernoff.q,
            s_star: chernoff.s,
            bracket: bound_bracket(fidelity.value, chernoff, prior0)?,
            truncation_error: TruncationErrors {
                pe: pe.error,
                fidelity: fidelity.error,
                q_of_s_star: chernoff.error,
            },
            terms,
        })
    }

    /// Checks `F/4 <= (1 - sqrt(1 - F))/2 <= pe <= min(sqrt(F)/2, Q*/2)` at
    /// equal priors, or the prior-weighted analogue, allowing `slack` plus the
    /// reported truncation errors.
    pub fn check_sandwich(&self, prior0: f64, slack: f64) -> std::result::Result<(), String> {
        let pi1 = 1.0 - prior0;
        let f = self.fidelity;
        let e = &self.truncation_error;
        let quarter = prior0 * pi1 * f;
        let lower = self.bracket.lower;
        let upper = self.bracket.upper;
        let pe_slack = slack + e.pe + e.fidelity + e.q_of_s_star;
        let mut bad = Vec::new();
        if quarter > lower + slack {
            bad.push(format!("π0π1F = {quarter} exceeds fidelity bound {lower}"));
        }
        if self.pe < lower - pe_slack {
            bad.push(format!("pe = {} below lower bound {lower}", self.pe));
        }
        if self.pe > upper + pe_slack {
            bad.push(format!("pe = {} above upper bound {upper}", self.pe));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad.join("; "))
        }
    }
}

fn degenerate_report(c: &ChannelPair) -> Result<DiscriminationReport> {
    let prior0 = c.prior(Hypothesis::Zero);
    let pe = prior0.min(1.0 - prior0);
    let exact = |value| Certified { value, error: 0.0 };
    let chernoff = ChernoffPoint {
        q: 1.0,
        s: 0.0,
        error: 0.0,
    };
    let mut report = DiscriminationReport::assemble(exact(pe), exact(1.0), chernoff, prior0, 1)?;
    report.bracket = BoundBracket::new(pe, pe, BoundSource::Exact)?;
    Ok(report)
}

/// Error probability, fidelity, Chernoff bound and certificates for probe `d`.
///
/// Product-form probes use multiplicativity for the fidelity and `Q(s)`; the
/// error probability needs the combined block stream and is subject to
/// `ctl.max_terms`.
pub fn analyze(
    d: &SignalDistribution,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<DiscriminationReport> {
    ctl.validate()?;
    if c.is_degenerate() {
        return degenerate_report(c);
    }
    let prior0 = c.prior(Hypothesis::Zero);
    let mut factors = factor_series(d, c, ctl)?;
    if factors.len() == 1 {
        let s: EnvSeries = factors.pop().expect("one factor");
        return analyze_series(&s, prior0, ctl);
    }
    let product = ProductSeries::new(factors);
    let fidelity = product.fidelity();
    let chernoff = product.chernoff(ctl.s_tolerance);
    let combined = product.combined(ctl)?;
    let pe = combined.helstrom_pe_priors(prior0);
    DiscriminationReport::assemble(pe, fidelity, chernoff, prior0, combined.len())
}

/// [`analyze`] for an already enumerated series.
pub fn analyze_series(
    s: &EnvSeries,
    prior0: f64,
    ctl: &SeriesControl,
) -> Result<DiscriminationReport> {
    DiscriminationReport::assemble(
        s.helstrom_pe_priors(prior0),
        s.fidelity(),
        s.chernoff(ctl.s_tolerance),
        prior0,
        s.len(),
    )
}
