use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{Occupation, SignalDistribution};

/// Amplitudes `c_{m,n}` of a pure idler-signal input `Σ c_{m,n} |m⟩_I |n⟩_S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureInputSpec {
    amplitudes: BTreeMap<(Occupation, Occupation), C64>,
    cutoff: u32,
    tail_mass: f64,
}

impl PureInputSpec {
    /// `tail_mass` is the norm² of the input that was not stored.
    pub fn new(
        amplitudes: BTreeMap<(Occupation, Occupation), C64>,
        cutoff: u32,
        tail_mass: f64,
    ) -> Result<Self> {
        let mut keys = amplitudes.keys();
        let Some((i0, s0)) = keys.next() else {
            return Err(Error::InvalidDistribution(
                "empty input specification".into(),
            ));
        };
        let (mi, ms) = (i0.modes(), s0.modes());
        if ms == 0 {
            return Err(Error::InvalidDistribution(
                "input needs at least one signal mode".into(),
            ));
        }
        for (i, s) in amplitudes.keys() {
            if i.modes() != mi || s.modes() != ms {
                return Err(Error::InvalidDistribution(
                    "inconsistent mode counts".into(),
                ));
            }
            if i.counts().iter().chain(s.counts()).any(|&n| n > cutoff) {
                return Err(Error::Domain(format!(
                    "occupation ({i:?}, {s:?}) exceeds cutoff {cutoff}"
                )));
            }
        }
        if !(0.0..1.0).contains(&tail_mass) {
            return Err(Error::InvalidDistribution(format!("tail mass {tail_mass}")));
        }
        let norm: f64 = amplitudes.values().map(|a| a.norm_sqr()).sum();
        if (norm + tail_mass - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "norm² {norm} plus tail {tail_mass} is not 1"
            )));
        }
        Ok(Self {
            amplitudes,
            cutoff,
            tail_mass,
        })
    }

    pub fn amplitudes(&self) -> &BTreeMap<(Occupation, Occupation), C64> {
        &self.amplitudes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn idler_modes(&self) -> usize {
        self.amplitudes.keys().next().map_or(0, |(i, _)| i.modes())
    }

    pub fn signal_modes(&self) -> usize {
        self.amplitudes.keys().next().map_or(0, |(_, s)| s.modes())
    }
}

/// Purification of a number-diagonal signal: support point `j` of `d` is
/// paired with idler number state `|j⟩`, with optional extra phases.
pub fn nds_input_spec(d: &SignalDistribution, phases: Option<&[f64]>) -> Result<PureInputSpec> {
    let support = d.expand();
    if let Some(ph) = phases {
        if ph.len() != support.len() {
            return Err(Error::Domain(format!(
                "{} phases for {} support points",
                ph.len(),
                support.len()
            )));
        }
    }
    let mut cutoff = support.len().saturating_sub(1) as u32;
    let mut amplitudes = BTreeMap::new();
    for (j, (n, p)) in support.into_iter().enumerate() {
        cutoff = cutoff.max(n.counts().iter().copied().max().unwrap_or(0));
        let phase = phases.map_or(0.0, |ph| ph[j]);
        amplitudes.insert(
            (Occupation::new(vec![j as u32]), n),
            C64::from_polar(p.sqrt(), phase),
        );
    }
    PureInputSpec::new(amplitudes, cutoff, d.tail_mass())
}

/// Coherent state `|√Ns⟩` in one signal mode (no idler), truncated at `cutoff`.
pub fn coherent_input_spec(ns: f64, cutoff: u32) -> Result<PureInputSpec> {
    if !(ns.is_finite() && ns >= 0.0) {
        return Err(Error::Domain(format!(
            "signal energy {ns} must be nonnegative"
        )));
    }
    let mut amplitudes = BTreeMap::new();
    let idler = Occupation::new(Vec::new());
    let mut a = (-0.5 * ns).exp();
    for n in 0..=cutoff {
        if n > 0 {
            a *= (ns / n as f64).sqrt();
        }
        if a != 0.0 {
            amplitudes.insert((idler.clone(), Occupation::new(vec![n])), C64::new(a, 0.0));
        }
    }
    // Poisson tail beyond the cutoff, summed directly.
    let mut tail = 0.0;
    let mut p = a * a;
    let mut n = cutoff as f64;
    loop {
        n += 1.0;
        p *= ns / n;
        tail += p;
        if p <= tail * 1e-17 || p == 0.0 {
            break;
        }
    }
    PureInputSpec::new(amplitudes, cutoff, tail)
}
