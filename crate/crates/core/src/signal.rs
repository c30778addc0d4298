//! Signal photon-number statistics of a number-diagonal-signal probe.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{canonical_product, canonical_sum, CompensatedSum};

/// Normalization slack for stored mass plus declared tail.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Probabilities below this are moved into the tail.
pub const FLUSH_THRESHOLD: f64 = 1e-300;

/// Photon counts over an ordered set of modes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&n| n as u64).sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Component-wise `self <= other`.
    pub fn le(&self, other: &Occupation) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Sort key: total photon number first, lexicographic within a shell.
    pub fn shell_key(&self) -> (u64, &[u32]) {
        (self.total(), &self.0)
    }
}

impl From<Vec<u32>> for Occupation {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Debug for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A value together with a bound on its distance from the exact quantity.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certified {
    pub value: f64,
    pub error: f64,
}

/// Photon-number distribution of a single mode, truncated with a declared tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeDistribution {
    probs: Vec<f64>,
    tail_mass: f64,
    /// Exact (or upper-bounded) `Σ_{n in tail} n p_n`.
    tail_energy: f64,
}

impl ModeDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tail(probs, 0.0, 0.0)
    }

    pub fn with_tail(
        mut probs: Vec<f64>,
        mut tail_mass: f64,
        mut tail_energy: f64,
    ) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty mode distribution".into()));
        }
        if !(tail_mass >= 0.0 && tail_energy >= 0.0) {
            return Err(Error::InvalidDistribution(
                "tail must be nonnegative".into(),
            ));
        }
        for (n, p) in probs.iter_mut().enumerate() {
            if !(p.is_finite() && *p >= 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "probability of {n} photons is {p}"
                )));
            }
            if *p > 0.0 && *p < FLUSH_THRESHOLD {
                tail_mass += *p;
                tail_energy += *p * n as f64;
                *p = 0.0;
            }
        }
        while probs.len() > 1 && probs.last() == Some(&0.0) {
            probs.pop();
        }
        let stored = canonical_sum(&mut probs.clone());
        if (stored + tail_mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "stored mass {stored} plus tail {tail_mass} is not 1"
            )));
        }
        Ok(Self {
            probs,
            tail_mass,
            tail_energy,
        })
    }

    /// Number state `|n⟩`.
    pub fn fock(n: u32) -> Self {
        let mut probs = vec![0.0; n as usize + 1];
        probs[n as usize] = 1.0;
        Self {
            probs,
            tail_mass: 0.0,
            tail_energy: 0.0,
        }
    }

    /// Bose-Einstein (thermal) statistics with mean `mean`, truncated so the
    /// omitted mass is at most `max_tail`.
    ///
    /// This is the signal marginal of a two-mode squeezed vacuum. Tail mass and
    /// tail energy come from the geometric-series closed forms.
    pub fn thermal(mean: f64, max_tail: f64) -> Result<Self> {
        if !(mean.is_finite() && mean >= 0.0) {
            return Err(Error::InvalidDistribution(format!("thermal mean {mean}")));
        }
        if !(max_tail > 0.0 && max_tail < 1.0) {
            return Err(Error::InvalidDistribution(format!(
                "thermal tail target {max_tail}"
            )));
        }
        if mean == 0.0 {
            return Ok(Self::fock(0));
        }
        let ratio = mean / (mean + 1.0);
        // P(n > K) = ratio^(K+1)
        let cutoff = ((max_tail.ln() / ratio.ln()).ceil() as i64 - 1).max(0) as usize;
        let p0 = 1.0 / (mean + 1.0);
        let mut probs = Vec::with_capacity(cutoff + 1);
        let mut p = p0;
        for _ in 0..=cutoff {
            probs.push(p);
            p *= ratio;
        }
        let k1 = (cutoff + 1) as f64;
        let tail_mass = ratio.powf(k1);
        // Σ_{n>K} n (1-x) x^n = x^(K+1) (K+1 + x/(1-x))
        let tail_energy = tail_mass * (k1 + mean);
        let mut d = Self {
            probs,
            tail_mass,
            tail_energy,
        };
        d.flush();
        Ok(d)
    }

    fn flush(&mut self) {
        for (n, p) in self.probs.iter_mut().enumerate() {
            if *p > 0.0 && *p < FLUSH_THRESHOLD {
                self.tail_mass += *p;
                self.tail_energy += *p * n as f64;
                *p = 0.0;
            }
        }
        while self.probs.len() > 1 && self.probs.last() == Some(&0.0) {
            self.probs.pop();
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn max_photons(&self) -> u32 {
        (self.probs.len() - 1) as u32
    }

    pub fn mean(&self) -> Certified {
        let mut acc = CompensatedSum::new();
        acc.extend(self.probs.iter().enumerate().map(|(n, p)| n as f64 * p));
        Certified {
            value: acc.value() + self.tail_energy,
            error: 1e-15 * acc.value().abs(),
        }
    }
}

/// How the joint signal distribution `p_n` is stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DistributionForm {
    /// Explicit occupation vectors with their probabilities.
    Sparse(BTreeMap<Occupation, f64>),
    /// Independent modes, `p_n = Π_m p^(m)_{n_m}`.
    Product(Vec<ModeDistribution>),
}

/// Joint photon-number distribution of the `M` signal modes of an NDS probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalDistribution {
    modes: usize,
    form: DistributionForm,
    tail_mass: f64,
}

impl SignalDistribution {
    /// Sparse distribution from `(occupation, probability)` pairs; repeated
    /// occupations are merged.
    pub fn sparse<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, f64)>,
    {
        Self::sparse_with_tail(entries, 0.0)
    }

    pub fn sparse_with_tail<I>(entries: I, tail_mass: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, f64)>,
    {
        let mut map: BTreeMap<Occupation, f64> = BTreeMap::new();
        let mut modes = None;
        for (occ, p) in entries {
            if *modes.get_or_insert(occ.modes()) != occ.modes() {
                return Err(Error::InvalidDistribution(
                    "occupation vectors have differing mode counts".into(),
                ));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "probability of {occ:?} is {p}"
                )));
            }
            *map.entry(occ).or_insert(0.0) += p;
        }
        let modes = modes.ok_or_else(|| Error::InvalidDistribution("empty support".into()))?;
        if modes == 0 {
            return Err(Error::InvalidDistribution(
                "at least one signal mode is required".into(),
            ));
        }
        if !(tail_mass >= 0.0) {
            return Err(Error::InvalidDistribution(
                "tail must be nonnegative".into(),
            ));
        }
        let mut tail = tail_mass;
        map.retain(|_, p| {
            if *p < FLUSH_THRESHOLD {
                tail += *p;
                false
            } else {
                true
            }
        });
        let stored = canonical_sum(&mut map.values().copied().collect::<Vec<_>>());
        if (stored + tail - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "stored mass {stored} plus tail {tail} is not 1"
            )));
        }
        if map.is_empty() {
            return Err(Error::InvalidDistribution(
                "no mass above flush threshold".into(),
            ));
        }
        Ok(Self {
            modes,
            form: DistributionForm::Sparse(map),
            tail_mass: tail,
        })
    }

    pub fn product(modes: Vec<ModeDistribution>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidDistribution(
                "at least one signal mode is required".into(),
            ));
        }
        let mut kept: Vec<f64> = modes.iter().map(|m| 1.0 - m.tail_mass).collect();
        let tail_mass = 1.0 - canonical_product(&mut kept);
        Ok(Self {
            modes: modes.len(),
            form: DistributionForm::Product(modes),
            tail_mass,
        })
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::sparse([(Occupation::vacuum(modes), 1.0)])
    }

    /// Multimode number state `|N_1⟩ ⊗ ... ⊗ |N_M⟩`.
    pub fn fock(occupation: &[u32]) -> Result<Self> {
        Self::sparse([(Occupation::new(occupation.to_vec()), 1.0)])
    }

    /// Signal marginal of `pairs` two-mode squeezed vacua sharing `total_energy`.
    pub fn epr(pairs: usize, total_energy: f64, max_tail_per_mode: f64) -> Result<Self> {
        if pairs == 0 {
            return Err(Error::InvalidDistribution(
                "EPR probe needs at least one pair".into(),
            ));
        }
        let mode = ModeDistribution::thermal(total_energy / pairs as f64, max_tail_per_mode)?;
        Self::product(vec![mode; pairs])
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn form(&self) -> &DistributionForm {
        &self.form
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Stored support as explicit `(occupation, p)` entries.
    ///
    /// Product forms are expanded; the caller is responsible for keeping that small.
    pub fn expand(&self) -> Vec<(Occupation, f64)> {
        match &self.form {
            DistributionForm::Sparse(map) => map.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            DistributionForm::Product(modes) => {
                let mut out = vec![(Vec::<u32>::new(), Vec::<f64>::new())];
                for m in modes {
                    let mut next = Vec::with_capacity(out.len() * m.probs.len());
                    for (occ, factors) in &out {
                        for (n, &p) in m.probs.iter().enumerate() {
                            if p == 0.0 {
                                continue;
                            }
                            let mut o = occ.clone();
                            o.push(n as u32);
                            let mut f = factors.clone();
                            f.push(p);
                            next.push((o, f));
                        }
                    }
                    out = next;
                }
                out.into_iter()
                    .map(|(o, mut f)| (Occupation::new(o), canonical_product(&mut f)))
                    .collect()
            }
        }
    }

    /// Number of stored support points, without expanding product forms.
    pub fn support_size(&self) -> f64 {
        match &self.form {
            DistributionForm::Sparse(map) => map.len() as f64,
            DistributionForm::Product(modes) => modes
                .iter()
                .map(|m| m.probs.iter().filter(|&&p| p > 0.0).count() as f64)
                .product(),
        }
    }

    /// Mean total signal photon number `N_s`.
    pub fn mean_energy(&self) -> Certified {
        match &self.form {
            DistributionForm::Sparse(map) => {
                let mut terms: Vec<f64> = map.iter().map(|(o, p)| o.total() as f64 * p).collect();
                let v = canonical_sum(&mut terms);
                // Arbitrary sparse tails carry no energy information.
                let error = if self.tail_mass > 0.0 {
                    f64::INFINITY
                } else {
                    1e-15 * v
                };
                Certified { value: v, error }
            }
            DistributionForm::Product(modes) => {
                let mut v = CompensatedSum::new();
                let mut e = 0.0;
                for m in modes {
                    let c = m.mean();
                    v.add(c.value);
                    e += c.error;
                }
                Certified {
                    value: v.value(),
                    error: e,
                }
            }
        }
    }
}

/// Distribution of the total signal photon number `n = Σ_m n_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotalPhotonDistribution {
    pub probs: Vec<f64>,
    pub tail_mass: f64,
}

impl TotalPhotonDistribution {
    pub fn mean(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        acc.extend(self.probs.iter().enumerate().map(|(n, p)| n as f64 * p));
        acc.value()
    }
}

/// Reduces a multimode distribution to the distribution of its total photon number.
pub fn total_photon_distribution(d: &SignalDistribution) -> TotalPhotonDistribution {
    let probs = match d.form() {
        DistributionForm::Sparse(map) => {
            let max = map.keys().map(Occupation::total).max().unwrap_or(0) as usize;
            let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); max + 1];
            for (occ, &p) in map {
                buckets[occ.total() as usize].push(p);
            }
            buckets.iter_mut().map(|b| canonical_sum(b)).collect()
        }
        DistributionForm::Product(modes) => {
            let mut acc = vec![1.0];
            for m in modes {
                let mut next = vec![0.0; acc.len() + m.probs.len() - 1];
                for (i, &a) in acc.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    for (j, &b) in m.probs.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                acc = next;
            }
            acc
        }
    };
    TotalPhotonDistribution {
        probs,
        tail_mass: d.tail_mass(),
    }
}
