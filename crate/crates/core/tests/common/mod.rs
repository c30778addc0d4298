#![allow(dead_code)]

use ndsread::oracle::{nds_input_spec, propagate, DenseState};
use ndsread::{ChannelPair, Hypothesis, Occupation, SignalDistribution};
use proptest::prelude::*;

pub fn pair(r0: f64, r1: f64) -> ChannelPair {
    ChannelPair::reading(r0, r1).unwrap()
}

/// Random channel pair with `0 < R0 < R1 < 1`, a phase offset and a prior.
pub fn arb_channel(with_phase: bool) -> impl Strategy<Value = ChannelPair> {
    (0.02f64..0.98, 0.02f64..0.98, 0.0f64..6.2, 0.15f64..0.85).prop_filter_map(
        "distinct reflectances",
        move |(a, b, theta, prior)| {
            let (r0, r1) = if a < b { (a, b) } else { (b, a) };
            if r1 - r0 < 0.02 {
                return None;
            }
            let theta1 = if with_phase { theta } else { 0.0 };
            ChannelPair::new(r0, r1, 0.0, theta1, prior).ok()
        },
    )
}

/// Sparse distribution over at most `max_modes` modes with at most
/// `max_photons` photons per mode.
pub fn arb_distribution(
    max_modes: usize,
    max_photons: u32,
) -> impl Strategy<Value = SignalDistribution> {
    (1..=max_modes).prop_flat_map(move |modes| {
        let point = proptest::collection::vec(0..=max_photons, modes);
        proptest::collection::btree_map(point, 0.05f64..1.0, 1..6).prop_map(|m| {
            let total: f64 = m.values().sum();
            SignalDistribution::sparse(m.into_iter().map(|(k, w)| (Occupation::new(k), w / total)))
                .unwrap()
        })
    })
}

pub fn oracle_states(d: &SignalDistribution, c: &ChannelPair) -> (DenseState, DenseState) {
    let spec = nds_input_spec(d, None).unwrap();
    (
        propagate(&spec, c, Hypothesis::Zero).unwrap(),
        propagate(&spec, c, Hypothesis::One).unwrap(),
    )
}
