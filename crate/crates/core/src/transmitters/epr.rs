//! Two-mode squeezed vacuum probes: `M` pairs, each with thermal signal
//! marginal of mean `N = Ns / M`.

use serde::{Deserialize, Serialize};

use super::ChernoffEstimate;
use crate::channel::{ChannelPair, Hypothesis};
use crate::error::{Error, Result};
use crate::numerics::half_one_minus_sqrt_one_minus;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EprInput {
    pub pairs: usize,
    /// Total signal energy over all pairs.
    pub ns: f64,
}

impl EprInput {
    pub fn new(pairs: usize, ns: f64) -> Result<Self> {
        if pairs == 0 {
            return Err(Error::InvalidDistribution(
                "EPR probe needs at least one pair".into(),
            ));
        }
        if !(ns.is_finite() && ns >= 0.0) {
            return Err(Error::Domain(format!(
                "signal energy {ns} must be nonnegative"
            )));
        }
        Ok(Self { pairs, ns })
    }

    /// Energy per signal mode.
    pub fn per_mode(&self) -> f64 {
        self.ns / self.pairs as f64
    }
}

/// Single-pair `Q(s) = 1 / (C α^s - D β^s)`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EprCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub d: f64,
}

fn transmittances(c: &ChannelPair) -> (f64, f64) {
    (
        c.transmittance(Hypothesis::Zero),
        c.transmittance(Hypothesis::One),
    )
}

/// `α = (T0 N + 1)/(T1 N + 1)`, `β = T0/T1`, `C = [(1 - r0 r1) N + 1]² / (T0 N + 1)`, `D = T1 N`.
///
/// An ideal memory (`T1 = 0`) has no finite `β`; use [`epr_ideal_memory`].
pub fn epr_coeffs(e: &EprInput, c: &ChannelPair) -> Result<EprCoefficients> {
    c.require_zero_delta("the two-mode squeezed vacuum closed forms")?;
    let (t0, t1) = transmittances(c);
    if t1 == 0.0 {
        return Err(Error::UnsupportedRegime(
            "T1 = 0: use the ideal-memory form".into(),
        ));
    }
    let n = e.per_mode();
    let l = (1.0 - c.r_product()) * n + 1.0;
    let k = EprCoefficients {
        alpha: (t0 * n + 1.0) / (t1 * n + 1.0),
        beta: t0 / t1,
        c: l * l / (t0 * n + 1.0),
        d: t1 * n,
    };
    let distinct = c.reflectance(Hypothesis::Zero) < c.reflectance(Hypothesis::One);
    if distinct && n > 0.0 && !(1.0 < k.alpha && k.alpha < k.beta && k.c > k.d) {
        return Err(Error::Numerical(format!(
            "coefficient ordering violated: {k:?}"
        )));
    }
    Ok(k)
}

/// `C α^s - D β^s`, the reciprocal of the single-pair `Q(s)`; the `D` term is
/// absent when `T1 = 0`.
fn single_pair_denominator(n: f64, c: &ChannelPair, s: f64) -> f64 {
    let (t0, t1) = transmittances(c);
    let l = (1.0 - c.r_product()) * n + 1.0;
    let head = l * l / (t0 * n + 1.0).powf(1.0 - s) / (t1 * n + 1.0).powf(s);
    if t1 == 0.0 {
        return head;
    }
    head - t1 * n * (t0 / t1).powf(s)
}

/// `Q(s) = (C α^s - D β^s)^(-M)` for `M` pairs.
pub fn epr_q_of_s(e: &EprInput, c: &ChannelPair, s: f64) -> Result<f64> {
    c.require_zero_delta("the two-mode squeezed vacuum closed forms")?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    let g = single_pair_denominator(e.per_mode(), c, s);
    Ok(g.powf(-(e.pairs as f64)))
}

/// Chernoff bound `(C α^s* - D β^s*)^(-M) / 2`.
///
/// With `δ = β^D / α^C >= 1` the minimum sits at `s* = 0`; otherwise
/// `s* = ln(ln α^C / ln β^D) / ln(β/α)`, capped at 1.
pub fn epr_chernoff(e: &EprInput, c: &ChannelPair) -> Result<ChernoffEstimate> {
    c.require_zero_delta("the two-mode squeezed vacuum closed forms")?;
    if c.is_ideal_memory() {
        return epr_ideal_memory(e, c);
    }
    let k = epr_coeffs(e, c)?;
    let degenerate = c.is_degenerate() || e.ns == 0.0;
    let s = if degenerate {
        0.0
    } else {
        let ln_a = k.c * k.alpha.ln();
        let ln_b = k.d * k.beta.ln();
        if ln_b >= ln_a {
            0.0
        } else {
            ((ln_a / ln_b).ln() / (k.beta / k.alpha).ln()).min(1.0)
        }
    };
    let g = k.c * k.alpha.powf(s) - k.d * k.beta.powf(s);
    let log_q = -(e.pairs as f64) * g.ln();
    Ok(ChernoffEstimate {
        bound: 0.5 * log_q.exp(),
        exponent: if e.ns > 0.0 { -log_q / e.ns } else { 0.0 },
        s_star: Some(s),
    })
}

/// Ideal memory (`R1 = 1`): the minimum is at `s* = 1` and the bound is
/// `[(1 - r0) N + 1]^(-2M) / 2`.
pub fn epr_ideal_memory(e: &EprInput, c: &ChannelPair) -> Result<ChernoffEstimate> {
    c.require_zero_delta("the two-mode squeezed vacuum closed forms")?;
    if !c.is_ideal_memory() {
        return Err(Error::Domain("ideal-memory form needs R1 = 1".into()));
    }
    let l = (1.0 - c.r(Hypothesis::Zero)) * e.per_mode() + 1.0;
    let log_q = -2.0 * e.pairs as f64 * l.ln();
    Ok(ChernoffEstimate {
        bound: 0.5 * log_q.exp(),
        exponent: if e.ns > 0.0 { -log_q / e.ns } else { 0.0 },
        s_star: Some(1.0),
    })
}

/// Output fidelity `[(1 - μ) N + 1]^(-2M)`.
pub fn epr_fidelity(e: &EprInput, c: &ChannelPair) -> Result<f64> {
    c.require_zero_delta("the two-mode squeezed vacuum closed forms")?;
    let x = (1.0 - c.mu()) * e.per_mode() + 1.0;
    Ok(x.powf(-2.0 * e.pairs as f64))
}

/// Fidelity lower bound on the EPR error probability.
pub fn epr_pe_lower(e: &EprInput, c: &ChannelPair) -> Result<f64> {
    Ok(half_one_minus_sqrt_one_minus(epr_fidelity(e, c)?))
}

/// Large-`M` limit of the `M`-pair Bhattacharyya bound at fixed total energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BhattacharyyaLimit {
    pub value: f64,
    /// Largest pair count used in the extrapolation.
    pub pairs: u64,
    /// `|B_last - B_previous|`.
    pub change: f64,
}

/// `g(1/2) - 1` for one pair at energy `n`, arranged so the O(n) leading
/// behaviour is computed without cancellation.
fn bhattacharyya_excess(n: f64, c: &ChannelPair) -> f64 {
    let (t0, t1) = transmittances(c);
    let u = 1.0 - c.r_product();
    let l2 = (u * n + 1.0).powi(2);
    let root = ((t0 * n + 1.0) * (t1 * n + 1.0)).sqrt();
    // L⁴ - (1 + T0 n)(1 + T1 n), divided by n.
    let quartic = (4.0 * u - t0 - t1)
        + n * (6.0 * u * u - t0 * t1)
        + n * n * 4.0 * u.powi(3)
        + n.powi(3) * u.powi(4);
    n * (quartic / ((l2 + root) * root) - c.t_product())
}

/// `B(Ns) = (1/2) lim_{M→∞} [Q(1/2)|_{M=1, N=Ns/M}]^M`.
///
/// Evaluated by Richardson extrapolation of `M ln Q(1/2)` over `M = 2^j`,
/// stopping once successive estimates of `B` differ by less than `1e-10`.
pub fn epr_bhattacharyya_limit(ns: f64, c: &ChannelPair) -> Result<BhattacharyyaLimit> {
    c.require_zero_delta("the two-mode squeezed vacuum closed forms")?;
    if !(ns.is_finite() && ns >= 0.0) {
        return Err(Error::Domain(format!(
            "signal energy {ns} must be nonnegative"
        )));
    }
    if ns == 0.0 {
        return Ok(BhattacharyyaLimit {
            value: 0.5,
            pairs: 1,
            change: 0.0,
        });
    }
    const TOL: f64 = 1e-10;
    const MAX_LEVELS: u32 = 40;
    let mut prev_row: Vec<f64> = Vec::new();
    let mut prev_b = f64::NAN;
    let mut history = Vec::new();
    for j in 0..MAX_LEVELS {
        let m = 2f64.powi(j as i32);
        let n = ns / m;
        // M ln Q(1/2) with Q = 1/g
        let x = -m * bhattacharyya_excess(n, c).ln_1p();
        let mut row = vec![x];
        for (k, p) in prev_row.iter().enumerate() {
            let f = 2f64.powi(k as i32 + 1);
            let cur = row[k];
            row.push(cur + (cur - p) / (f - 1.0));
        }
        let b = 0.5 * row.last().expect("non-empty row").exp();
        history.push(b);
        let change = (b - prev_b).abs();
        if change < TOL {
            return Ok(BhattacharyyaLimit {
                value: b,
                pairs: 1u64 << j,
                change,
            });
        }
        prev_b = b;
        prev_row = row;
    }
    Err(Error::Numerical(format!(
        "Bhattacharyya extrapolation did not settle; last iterates {:?}",
        &history[history.len().saturating_sub(4)..]
    )))
}
