//! The pair of beam-splitter hypotheses being discriminated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which channel is actually present.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    Zero,
    One,
}

impl Hypothesis {
    pub fn index(self) -> usize {
        match self {
            Hypothesis::Zero => 0,
            Hypothesis::One => 1,
        }
    }
}

/// Two lossy beam-splitter channels `E_b` with power reflectances `R_b`, phases `θ_b`
/// and prior probabilities `π_b`.
///
/// The environment port is in vacuum. A signal photon survives the channel (is
/// reflected back to the receiver) with probability `R_b` and leaks into the
/// environment with probability `T_b = 1 - R_b`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelPair {
    reflectance: [f64; 2],
    phase: [f64; 2],
    prior0: f64,
}

impl ChannelPair {
    /// Equal-prior pair with zero phases (quantum reading / target detection).
    pub fn reading(r0: f64, r1: f64) -> Result<Self> {
        Self::new(r0, r1, 0.0, 0.0, 0.5)
    }

    pub fn new(r0: f64, r1: f64, theta0: f64, theta1: f64, prior0: f64) -> Result<Self> {
        if !(r0.is_finite() && r1.is_finite())
            || !(0.0..=1.0).contains(&r0)
            || !(0.0..=1.0).contains(&r1)
        {
            return Err(Error::InvalidChannel(format!(
                "reflectances must lie in [0, 1], got R0={r0}, R1={r1}"
            )));
        }
        if r0 > r1 {
            return Err(Error::InvalidChannel(format!(
                "expected R0 <= R1, got R0={r0}, R1={r1}"
            )));
        }
        if !(theta0.is_finite() && theta1.is_finite()) {
            return Err(Error::InvalidChannel("phases must be finite".into()));
        }
        if !prior0.is_finite() || !(0.0..=1.0).contains(&prior0) {
            return Err(Error::InvalidChannel(format!(
                "prior0 must lie in [0, 1], got {prior0}"
            )));
        }
        Ok(Self {
            reflectance: [r0, r1],
            phase: [theta0, theta1],
            prior0,
        })
    }

    /// Same channels with different priors.
    pub fn with_prior0(self, prior0: f64) -> Result<Self> {
        Self::new(
            self.reflectance[0],
            self.reflectance[1],
            self.phase[0],
            self.phase[1],
            prior0,
        )
    }

    /// Power reflectance `R_b`.
    pub fn reflectance(&self, b: Hypothesis) -> f64 {
        self.reflectance[b.index()]
    }

    /// Power transmittance into the environment, `T_b = 1 - R_b`.
    pub fn transmittance(&self, b: Hypothesis) -> f64 {
        1.0 - self.reflectance[b.index()]
    }

    /// Field reflectivity `r_b = sqrt(R_b)`.
    pub fn r(&self, b: Hypothesis) -> f64 {
        self.reflectance(b).sqrt()
    }

    /// Field transmissivity `t_b = sqrt(T_b)`.
    pub fn t(&self, b: Hypothesis) -> f64 {
        self.transmittance(b).sqrt()
    }

    pub fn theta(&self, b: Hypothesis) -> f64 {
        self.phase[b.index()]
    }

    /// Phase difference `Δ = θ1 - θ0`.
    pub fn delta(&self) -> f64 {
        self.phase[1] - self.phase[0]
    }

    pub fn prior(&self, b: Hypothesis) -> f64 {
        match b {
            Hypothesis::Zero => self.prior0,
            Hypothesis::One => 1.0 - self.prior0,
        }
    }

    pub fn equal_priors(&self) -> bool {
        self.prior0 == 0.5
    }

    /// Single-photon overlap `μ = r0 r1 + t0 t1`.
    pub fn mu(&self) -> f64 {
        self.r_product() + self.t_product()
    }

    /// `μ²`, formed without a square root when one of the products vanishes
    /// so that boundary cases are exact.
    pub fn mu_squared(&self) -> f64 {
        let (rr, tt) = (
            self.reflectance[0] * self.reflectance[1],
            self.transmittance(Hypothesis::Zero) * self.transmittance(Hypothesis::One),
        );
        if tt == 0.0 {
            rr
        } else if rr == 0.0 {
            tt
        } else {
            let mu = self.mu();
            mu * mu
        }
    }

    /// `r0 r1`
    pub fn r_product(&self) -> f64 {
        (self.reflectance[0] * self.reflectance[1]).sqrt()
    }

    /// `t0 t1`
    pub fn t_product(&self) -> f64 {
        (self.transmittance(Hypothesis::Zero) * self.transmittance(Hypothesis::One)).sqrt()
    }

    /// Identical channels: `R0 = R1` and `Δ = 0`. No probe can tell them apart.
    pub fn is_degenerate(&self) -> bool {
        self.reflectance[0] == self.reflectance[1] && self.delta() == 0.0
    }

    /// `R0 = 0`: absence or presence of a reflector.
    pub fn is_target_detection(&self) -> bool {
        self.reflectance[0] == 0.0
    }

    /// `R1 = 1`: the second channel is the identity.
    pub fn is_ideal_memory(&self) -> bool {
        self.reflectance[1] == 1.0
    }

    pub(crate) fn require_zero_delta(&self, what: &str) -> Result<()> {
        if self.delta() != 0.0 {
            return Err(Error::UnsupportedRegime(format!(
                "{what} requires equal channel phases (Δ = 0), got Δ = {}",
                self.delta()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let c = ChannelPair::new(0.3, 0.6, 0.1, 0.4, 0.5).unwrap();
        assert!((c.r(Hypothesis::Zero) - 0.3f64.sqrt()).abs() < 1e-15);
        assert!((c.t(Hypothesis::One) - 0.4f64.sqrt()).abs() < 1e-15);
        assert!((c.delta() - 0.3).abs() < 1e-15);
        assert!((c.mu() - (0.18f64.sqrt() + 0.28f64.sqrt())).abs() < 1e-15);
        assert_eq!(c.prior(Hypothesis::One), 0.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ChannelPair::reading(0.6, 0.3).is_err());
        assert!(ChannelPair::reading(-0.1, 0.3).is_err());
        assert!(ChannelPair::reading(0.1, 1.3).is_err());
        assert!(ChannelPair::new(0.1, 0.3, 0.0, 0.0, 1.5).is_err());
        assert!(ChannelPair::new(0.1, 0.3, f64::NAN, 0.0, 0.5).is_err());
    }

    #[test]
    fn boundary_flags() {
        assert!(ChannelPair::reading(0.4, 0.4).unwrap().is_degenerate());
        assert!(!ChannelPair::new(0.4, 0.4, 0.0, 0.1, 0.5)
            .unwrap()
            .is_degenerate());
        assert!(ChannelPair::reading(0.0, 0.3)
            .unwrap()
            .is_target_detection());
        assert!(ChannelPair::reading(0.5, 1.0).unwrap().is_ideal_memory());
    }
}
