//! Bounds that depend only on the total signal photon-number distribution.
//!
//! These hold for every pure probe, entangled with an idler or not. The
//! overlap of the two natural purifications is a lower bound on the output
//! fidelity, and with `Δ = 0` convexity of `x ↦ μ^x` turns it into a bound that
//! needs only the mean signal energy.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelPair;
use crate::error::{Error, Result};
use crate::numerics::half_one_minus_sqrt_one_minus;
use crate::signal::{total_photon_distribution, Certified, SignalDistribution};

/// Where a bracket's upper end comes from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Fidelity,
    Chernoff,
    Exact,
}

/// `lower <= P_e <= upper`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundBracket {
    pub lower: f64,
    pub upper: f64,
    pub source: BoundSource,
}

impl BoundBracket {
    /// Builds a bracket, absorbing rounding-level inversions of `lower` and `upper`.
    pub fn new(lower: f64, upper: f64, source: BoundSource) -> Result<Self> {
        const SLACK: f64 = 1e-12;
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite bracket [{lower}, {upper}]"
            )));
        }
        if lower < -SLACK || upper > 0.5 + SLACK || lower > upper + SLACK {
            return Err(Error::Numerical(format!(
                "inconsistent bracket [{lower}, {upper}]"
            )));
        }
        let upper = upper.clamp(0.0, 0.5);
        let lower = lower.clamp(0.0, upper);
        Ok(Self {
            lower,
            upper,
            source,
        })
    }

    pub fn contains(&self, pe: f64, slack: f64) -> bool {
        pe >= self.lower - slack && pe <= self.upper + slack
    }
}

/// Squared overlap `O = |Σ_n p_n e^{inΔ} μ^n|²` of the two purifications,
/// a lower bound on the output fidelity for any probe with this photon statistics.
///
/// The error term bounds the effect of the undeclared tail: each omitted
/// amplitude has modulus at most one.
pub fn overlap_lower_bound(d: &SignalDistribution, c: &ChannelPair) -> Certified {
    let total = total_photon_distribution(d);
    let mu = c.mu();
    let delta = c.delta();
    let mut re = Vec::with_capacity(total.probs.len());
    let mut im = Vec::with_capacity(total.probs.len());
    for (n, &p) in total.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let z = C64::from_polar(p * mu.powi(n as i32), n as f64 * delta);
        re.push(z.re);
        im.push(z.im);
    }
    let s = C64::new(
        crate::numerics::canonical_sum(&mut re),
        crate::numerics::canonical_sum(&mut im),
    );
    let tail = total.tail_mass;
    let amp = s.norm();
    Certified {
        value: (amp * amp).min(1.0),
        error: 2.0 * amp * tail + tail * tail,
    }
}

/// Fidelity-based lower bound on the minimum error probability, `(1 - sqrt(1 - F)) / 2`.
pub fn pe_lower_from_fidelity(fidelity: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::Domain(format!("fidelity {fidelity} outside [0, 1]")));
    }
    Ok(half_one_minus_sqrt_one_minus(fidelity))
}

/// `μ^(2 Ns)`, the smallest output fidelity reachable at mean signal energy `Ns`.
pub fn minimum_fidelity(ns: f64, c: &ChannelPair) -> Result<f64> {
    c.require_zero_delta("the energy-constrained fidelity bound")?;
    if !(ns.is_finite() && ns >= 0.0) {
        return Err(Error::Domain(format!(
            "signal energy {ns} must be nonnegative"
        )));
    }
    if ns == 0.0 {
        return Ok(1.0);
    }
    Ok(c.mu_squared().powf(ns))
}

/// Error-probability floor for every probe of mean signal energy `Ns`:
/// `(1 - sqrt(1 - μ^(2 Ns))) / 2`.
pub fn universal_pe_lower_bound(ns: f64, c: &ChannelPair) -> Result<f64> {
    let f = minimum_fidelity(ns, c)?;
    Ok(half_one_minus_sqrt_one_minus(f))
}

/// Upper bound on a per-copy Chernoff exponent.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum ExponentBound {
    Finite(f64),
    /// The channels are perfectly distinguishable with one photon (`μ = 0`).
    Unbounded,
}

impl ExponentBound {
    pub fn as_f64(self) -> f64 {
        match self {
            ExponentBound::Finite(x) => x,
            ExponentBound::Unbounded => f64::INFINITY,
        }
    }
}

/// `-2 Ns ln μ`: no probe of per-copy energy `Ns` has a larger Chernoff exponent.
pub fn qcb_exponent_upper_bound(ns: f64, c: &ChannelPair) -> Result<ExponentBound> {
    c.require_zero_delta("the Chernoff exponent bound")?;
    if !(ns.is_finite() && ns >= 0.0) {
        return Err(Error::Domain(format!(
            "signal energy {ns} must be nonnegative"
        )));
    }
    let mu = c.mu();
    if ns == 0.0 {
        return Ok(ExponentBound::Finite(0.0));
    }
    if mu == 0.0 {
        return Ok(ExponentBound::Unbounded);
    }
    Ok(ExponentBound::Finite((-2.0 * ns * mu.ln()).max(0.0)))
}
