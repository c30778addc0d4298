//! Number-state probes: both outputs are diagonal in the same basis, so the
//! problem is classical discrimination of two binomial count distributions.

use serde::{Deserialize, Serialize};

use super::coherent::coherent_exponent;
use super::ChernoffEstimate;
use crate::channel::{ChannelPair, Hypothesis};
use crate::error::{Error, Result};
use crate::numerics::{binomial_row, canonical_sum};

/// `|N_1⟩ ⊗ ... ⊗ |N_M⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockInput {
    pub occupation: Vec<u32>,
}

impl FockInput {
    pub fn new(occupation: Vec<u32>) -> Result<Self> {
        if occupation.is_empty() {
            return Err(Error::InvalidDistribution(
                "number state needs at least one mode".into(),
            ));
        }
        Ok(Self { occupation })
    }

    /// Total photon number `Ns = Σ N_m`.
    pub fn ns(&self) -> u64 {
        self.occupation.iter().map(|&n| n as u64).sum()
    }
}

/// Distribution of the returned photon count `T`.
///
/// A sum of independent `Binomial(N_m, R_b)` counts is `Binomial(Ns, R_b)`,
/// so only the total photon number matters.
pub fn fock_count_distribution(f: &FockInput, c: &ChannelPair, b: Hypothesis) -> Vec<f64> {
    binomial_row(f.ns(), c.reflectance(b))
}

fn interior(c: &ChannelPair, what: &str) -> Result<()> {
    let (r0, r1) = (
        c.reflectance(Hypothesis::Zero),
        c.reflectance(Hypothesis::One),
    );
    if r0 > 0.0 && r1 < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} needs 0 < R0 and R1 < 1 (got R0 = {r0}, R1 = {r1}); use the boundary forms"
        )))
    }
}

/// Count threshold `T* = Ns ln(T0/T1) / ln(R1 T0 / (R0 T1))`; announce
/// hypothesis 1 iff `T >= T*`.
pub fn fock_threshold(ns: u64, c: &ChannelPair) -> Result<f64> {
    interior(c, "the count threshold")?;
    let (r0, r1) = (
        c.reflectance(Hypothesis::Zero),
        c.reflectance(Hypothesis::One),
    );
    let (t0, t1) = (1.0 - r0, 1.0 - r1);
    if r0 == r1 {
        return Err(Error::Domain(
            "the count threshold is undefined for identical channels".into(),
        ));
    }
    Ok(ns as f64 * (t0 / t1).ln() / ((r1 * t0) / (r0 * t1)).ln())
}

/// Minimum error probability of an `Ns`-photon number-state probe,
/// `(1/2)[P(T >= T* | 0) + P(T < T* | 1)]`.
pub fn fock_pe(ns: u64, c: &ChannelPair) -> Result<f64> {
    interior(c, "the number-state error probability")?;
    let (r0, r1) = (
        c.reflectance(Hypothesis::Zero),
        c.reflectance(Hypothesis::One),
    );
    if r0 == r1 {
        return Ok(0.5);
    }
    let threshold = fock_threshold(ns, c)?;
    let row0 = binomial_row(ns, r0);
    let row1 = binomial_row(ns, r1);
    let mut errors = Vec::with_capacity(row0.len());
    for (t, (p0, p1)) in row0.iter().zip(&row1).enumerate() {
        if t as f64 >= threshold {
            errors.push(*p0);
        } else {
            errors.push(*p1);
        }
    }
    Ok((0.5 * canonical_sum(&mut errors)).min(0.5))
}

/// Boundary cases: detection (`R0 = 0`) gives `T1^Ns / 2` and an ideal memory
/// (`R1 = 1`) gives `R0^Ns / 2`.
pub fn fock_special_pe(ns: u64, c: &ChannelPair) -> Result<f64> {
    let n = ns as f64;
    if c.is_target_detection() {
        Ok(0.5 * c.transmittance(Hypothesis::One).powf(n))
    } else if c.is_ideal_memory() {
        Ok(0.5 * c.reflectance(Hypothesis::Zero).powf(n))
    } else {
        Err(Error::Domain(
            "boundary number-state forms need R0 = 0 or R1 = 1".into(),
        ))
    }
}

/// Number-state error probability for any reflectances, choosing the boundary
/// form where it applies.
pub fn fock_error_probability(ns: u64, c: &ChannelPair) -> Result<f64> {
    if c.is_target_detection() || c.is_ideal_memory() {
        fock_special_pe(ns, c)
    } else {
        fock_pe(ns, c)
    }
}

fn fock_s_star(c: &ChannelPair) -> f64 {
    let (r0, r1) = (
        c.reflectance(Hypothesis::Zero),
        c.reflectance(Hypothesis::One),
    );
    let (t0, t1) = (1.0 - r0, 1.0 - r1);
    let s = (-r1 * (r0 / r1).ln() / (t1 * (t0 / t1).ln())).ln() / ((t0 * r1) / (t1 * r0)).ln();
    s.clamp(0.0, 1.0)
}

fn classical_exponent(c: &ChannelPair, s: f64) -> f64 {
    let (r0, r1) = (
        c.reflectance(Hypothesis::Zero),
        c.reflectance(Hypothesis::One),
    );
    let (t0, t1) = (1.0 - r0, 1.0 - r1);
    -(r0.powf(s) * r1.powf(1.0 - s) + t0.powf(s) * t1.powf(1.0 - s)).ln()
}

/// Classical Chernoff bound of the count statistics,
/// `(R0^s R1^(1-s) + T0^s T1^(1-s))^Ns / 2` at the optimal `s`.
pub fn fock_chernoff(ns: u64, c: &ChannelPair) -> Result<ChernoffEstimate> {
    interior(c, "the number-state Chernoff bound")?;
    if c.reflectance(Hypothesis::Zero) == c.reflectance(Hypothesis::One) {
        return Ok(ChernoffEstimate {
            bound: 0.5,
            exponent: 0.0,
            s_star: Some(0.0),
        });
    }
    let s = fock_s_star(c);
    let xi = classical_exponent(c, s).max(0.0);
    Ok(ChernoffEstimate {
        bound: 0.5 * (-xi * ns as f64).exp(),
        exponent: xi,
        s_star: Some(s),
    })
}

/// Per-photon error exponent of number-state probes, with the boundary cases
/// taken from the exact error probabilities (`-ln T1` for detection, `-ln R0`
/// for an ideal memory).
pub fn fock_exponent(c: &ChannelPair) -> f64 {
    let (r0, r1) = (
        c.reflectance(Hypothesis::Zero),
        c.reflectance(Hypothesis::One),
    );
    if c.is_ideal_memory() {
        return -r0.ln();
    }
    if c.is_target_detection() {
        return -(1.0 - r1).ln();
    }
    if r0 == r1 {
        return 0.0;
    }
    classical_exponent(c, fock_s_star(c)).max(0.0)
}

/// `G = ξ_Num / ξ_CS`, number-state over coherent-state Chernoff exponent.
///
/// On the diagonal `R0 = R1` both exponents vanish quadratically in `R1 - R0`
/// and `G` takes its limiting value `1 / (2 T0)`.
pub fn gain(c: &ChannelPair) -> f64 {
    let r0 = c.reflectance(Hypothesis::Zero);
    let r1 = c.reflectance(Hypothesis::One);
    if r0 == r1 {
        return 0.5 / (1.0 - r0);
    }
    fock_exponent(c) / coherent_exponent(c)
}
