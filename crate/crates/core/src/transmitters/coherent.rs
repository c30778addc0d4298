use super::ChernoffEstimate;
use crate::channel::ChannelPair;
use crate::error::{Error, Result};
use crate::numerics::half_one_minus_sqrt_one_minus;

fn check_energy(ns: f64) -> Result<()> {
    if ns.is_finite() && ns >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "signal energy {ns} must be nonnegative"
        )))
    }
}

/// `(r1 - r0)²`, the Chernoff exponent of a coherent-state probe.
pub fn coherent_exponent(c: &ChannelPair) -> f64 {
    let d = c.r(crate::Hypothesis::One) - c.r(crate::Hypothesis::Zero);
    d * d
}

/// Error probability of the coherent probe `|√Ns⟩`, `(1 - sqrt(1 - e^{-(r1-r0)² Ns}))/2`.
pub fn coherent_pe(ns: f64, c: &ChannelPair) -> Result<f64> {
    c.require_zero_delta("the coherent-state closed form")?;
    check_energy(ns)?;
    Ok(half_one_minus_sqrt_one_minus(
        (-coherent_exponent(c) * ns).exp(),
    ))
}

/// `e^{-(r1-r0)² Ns} / 2`.
pub fn coherent_chernoff(ns: f64, c: &ChannelPair) -> Result<ChernoffEstimate> {
    c.require_zero_delta("the coherent-state closed form")?;
    check_energy(ns)?;
    let xi = coherent_exponent(c);
    Ok(ChernoffEstimate {
        bound: 0.5 * (-xi * ns).exp(),
        exponent: xi,
        s_star: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_probe_is_a_coin_flip() {
        let c = ChannelPair::reading(0.2, 0.9).unwrap();
        assert_eq!(coherent_pe(0.0, &c).unwrap(), 0.5);
    }

    #[test]
    fn detection_reduces_to_loss_form() {
        let c = ChannelPair::reading(0.0, 0.3).unwrap();
        let expect = (1.0 - (1.0 - (-0.3f64 * 2.0).exp()).sqrt()) / 2.0;
        assert!((coherent_pe(2.0, &c).unwrap() - expect).abs() < 1e-16);
    }

    #[test]
    fn reading_example() {
        let c = ChannelPair::reading(0.5, 1.0).unwrap();
        let x = (-4.0 * (1.0 - 0.5f64.sqrt()).powi(2)).exp();
        let expect = (1.0 - (1.0 - x).sqrt()) / 2.0;
        assert!((coherent_pe(4.0, &c).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn exponents() {
        assert_eq!(
            coherent_exponent(&ChannelPair::reading(0.4, 0.4).unwrap()),
            0.0
        );
        assert_eq!(
            coherent_exponent(&ChannelPair::reading(0.0, 1.0).unwrap()),
            1.0
        );
        let x = coherent_exponent(&ChannelPair::reading(0.2, 0.8).unwrap());
        assert!((x - 0.2).abs() < 1e-15);
    }

    #[test]
    fn phase_offset_is_rejected() {
        let c = ChannelPair::new(0.2, 0.8, 0.0, 0.1, 0.5).unwrap();
        assert!(matches!(
            coherent_pe(1.0, &c),
            Err(Error::UnsupportedRegime(_))
        ));
    }
}
