//! Enumeration of the environment-occupation terms `(p_k^(0), p_k^(1), I_k)`.
//!
//! For a number-diagonal-signal probe both output states split into mutually
//! orthogonal two-dimensional blocks, one per pattern `k` of photons lost to the
//! environment. Everything else in this module is a reduction over these terms.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelPair, Hypothesis};
use crate::control::SeriesControl;
use crate::error::{Error, Result};
use crate::numerics::{binomial_kernel_row, binomial_row, canonical_product, canonical_sum};
use crate::signal::{DistributionForm, ModeDistribution, Occupation, SignalDistribution};

/// One environment-occupation block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvTerm {
    pub k: Occupation,
    /// Probability of finding `k` photons in the environment under each hypothesis.
    pub p0: f64,
    pub p1: f64,
    /// Inner product of the two conditional (unnormalized) return states.
    pub cross: C64,
}

impl EnvTerm {
    /// `|I_k|² <= p0 p1`, with a relative slack for rounding.
    pub fn satisfies_cauchy_schwarz(&self, rel_slack: f64) -> bool {
        self.cross.norm_sqr() <= self.p0 * self.p1 * (1.0 + rel_slack) + f64::MIN_POSITIVE
    }
}

/// The full list of environment terms for one probe and channel pair.
///
/// Terms are ordered by nondecreasing total environment photon number and
/// lexicographically within a shell. `tail_mass` is the probe mass that was not
/// represented (it is the same under both hypotheses).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvSeries {
    modes: usize,
    terms: Vec<EnvTerm>,
    tail_mass: f64,
}

#[derive(Default)]
struct Contributions {
    p0: Vec<f64>,
    p1: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Contributions {
    fn push(&mut self, p0: f64, p1: f64, cross: C64) {
        self.p0.push(p0);
        self.p1.push(p1);
        self.re.push(cross.re);
        self.im.push(cross.im);
    }

    fn finish(mut self, k: Occupation) -> EnvTerm {
        EnvTerm {
            k,
            p0: canonical_sum(&mut self.p0),
            p1: canonical_sum(&mut self.p1),
            cross: C64::new(canonical_sum(&mut self.re), canonical_sum(&mut self.im)),
        }
    }
}

/// Per-mode kernel rows for one input photon number `n`.
struct KernelRows {
    loss0: Vec<f64>,
    loss1: Vec<f64>,
    cross: Vec<f64>,
}

fn kernel_rows(n: u32, c: &ChannelPair) -> KernelRows {
    let n = n as u64;
    KernelRows {
        loss0: binomial_row(n, c.transmittance(Hypothesis::Zero)),
        loss1: binomial_row(n, c.transmittance(Hypothesis::One)),
        cross: binomial_kernel_row(n, c.r_product(), c.t_product()),
    }
}

impl EnvSeries {
    /// Assembles a series from explicit terms (used for products and for
    /// fault-injection tests).
    pub fn from_parts(modes: usize, mut terms: Vec<EnvTerm>, tail_mass: f64) -> Self {
        terms.sort_by(|a, b| a.k.shell_key().cmp(&b.k.shell_key()));
        Self {
            modes,
            terms,
            tail_mass,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> &[EnvTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// `(Σ_k p_k^(0), Σ_k p_k^(1))`; both equal `1 - tail_mass` up to rounding.
    pub fn normalization(&self) -> (f64, f64) {
        let mut a: Vec<f64> = self.terms.iter().map(|t| t.p0).collect();
        let mut b: Vec<f64> = self.terms.iter().map(|t| t.p1).collect();
        (canonical_sum(&mut a), canonical_sum(&mut b))
    }

    /// Trace-norm distance between the exact and the tail-truncated output
    /// state under either hypothesis, `sqrt(4τ - 3τ²)`.
    pub(crate) fn state_truncation_norm(&self) -> f64 {
        let t = self.tail_mass;
        (4.0 * t - 3.0 * t * t).max(0.0).sqrt()
    }
}

fn budget_error(terms: usize, partial: &BTreeMap<Occupation, Contributions>) -> Error {
    let s0: f64 = partial.values().flat_map(|c| c.p0.iter()).sum();
    let s1: f64 = partial.values().flat_map(|c| c.p1.iter()).sum();
    Error::TruncationFailure {
        terms,
        residual0: (1.0 - s0).max(0.0),
        residual1: (1.0 - s1).max(0.0),
    }
}

/// Terms for an explicit list of support points.
fn sparse_series(
    modes: usize,
    support: &[(Occupation, f64)],
    tail_mass: f64,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<EnvSeries> {
    let delta = c.delta();
    let mut acc: BTreeMap<Occupation, Contributions> = BTreeMap::new();
    let mut rows_cache: BTreeMap<u32, KernelRows> = BTreeMap::new();
    for (n, p) in support {
        for &nm in n.counts() {
            rows_cache.entry(nm).or_insert_with(|| kernel_rows(nm, c));
        }
        let rows: Vec<&KernelRows> = n.counts().iter().map(|nm| &rows_cache[nm]).collect();
        let phase = C64::from_polar(1.0, n.total() as f64 * delta);

        // Odometer over all k <= n.
        let mut k = vec![0u32; modes];
        let mut f0 = Vec::with_capacity(modes);
        let mut f1 = Vec::with_capacity(modes);
        let mut fx = Vec::with_capacity(modes);
        loop {
            f0.clear();
            f1.clear();
            fx.clear();
            for (m, r) in rows.iter().enumerate() {
                let km = k[m] as usize;
                f0.push(r.loss0[km]);
                f1.push(r.loss1[km]);
                fx.push(r.cross[km]);
            }
            let a0 = p * canonical_product(&mut f0);
            let a1 = p * canonical_product(&mut f1);
            let ax = p * canonical_product(&mut fx);
            if a0 != 0.0 || a1 != 0.0 || ax != 0.0 {
                let key = Occupation::new(k.clone());
                if !acc.contains_key(&key) && acc.len() >= ctl.max_terms {
                    return Err(budget_error(acc.len(), &acc));
                }
                acc.entry(key).or_default().push(a0, a1, phase * ax);
            }
            // advance
            let mut m = 0;
            loop {
                if m == modes {
                    break;
                }
                if k[m] < n.counts()[m] {
                    k[m] += 1;
                    break;
                }
                k[m] = 0;
                m += 1;
            }
            if m == modes {
                break;
            }
        }
    }
    let terms = acc.into_iter().map(|(k, c)| c.finish(k)).collect();
    Ok(EnvSeries::from_parts(modes, terms, tail_mass))
}

/// Terms for a single mode, indexed directly by the environment count.
pub(crate) fn mode_series(m: &ModeDistribution, c: &ChannelPair) -> EnvSeries {
    let kmax = m.max_photons() as usize;
    let delta = c.delta();
    let mut acc: Vec<Contributions> = (0..=kmax).map(|_| Contributions::default()).collect();
    for (n, &p) in m.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let rows = kernel_rows(n as u32, c);
        let phase = C64::from_polar(1.0, n as f64 * delta);
        for k in 0..=n {
            let a0 = p * rows.loss0[k];
            let a1 = p * rows.loss1[k];
            let ax = p * rows.cross[k];
            if a0 != 0.0 || a1 != 0.0 || ax != 0.0 {
                acc[k].push(a0, a1, phase * ax);
            }
        }
    }
    let terms = acc
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.p0.is_empty())
        .map(|(k, c)| c.finish(Occupation::new(vec![k as u32])))
        .collect();
    EnvSeries::from_parts(1, terms, m.tail_mass())
}

/// Environment terms of a probe with photon statistics `d` through channels `c`.
///
/// `p_k^(b) = Σ_{n >= k} p_n Π_m C(n_m, k_m) R_b^(n_m - k_m) T_b^(k_m)` and
/// `I_k = Σ_{n >= k} p_n Π_m C(n_m, k_m) e^{i n_m Δ} (r0 r1)^(n_m - k_m) (t0 t1)^(k_m)`.
///
/// Fails when the undeclared tail of `d` exceeds `ctl.tail_tolerance`, or when
/// more than `ctl.max_terms` terms would be needed.
pub fn env_terms(
    d: &SignalDistribution,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<EnvSeries> {
    ctl.validate()?;
    if d.tail_mass() > ctl.tail_tolerance {
        return Err(Error::TruncationFailure {
            terms: 0,
            residual0: d.tail_mass(),
            residual1: d.tail_mass(),
        });
    }
    match d.form() {
        DistributionForm::Sparse(_) => {
            let support = d.expand();
            sparse_series(d.modes(), &support, d.tail_mass(), c, ctl)
        }
        DistributionForm::Product(modes) => {
            let factors: Vec<EnvSeries> = modes.iter().map(|m| mode_series(m, c)).collect();
            super::product::ProductSeries::new(factors).combined(ctl)
        }
    }
}

/// Per-factor series of a product-form probe, or a single factor otherwise.
pub(crate) fn factor_series(
    d: &SignalDistribution,
    c: &ChannelPair,
    ctl: &SeriesControl,
) -> Result<Vec<EnvSeries>> {
    ctl.validate()?;
    if d.tail_mass() > ctl.tail_tolerance {
        return Err(Error::TruncationFailure {
            terms: 0,
            residual0: d.tail_mass(),
            residual1: d.tail_mass(),
        });
    }
    match d.form() {
        DistributionForm::Sparse(_) => Ok(vec![env_terms(d, c, ctl)?]),
        DistributionForm::Product(modes) => Ok(modes.iter().map(|m| mode_series(m, c)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn vacuum_has_single_trivial_term() {
        let c = ChannelPair::new(0.2, 0.7, 0.4, 1.1, 0.5).unwrap();
        let s = env_terms(&SignalDistribution::vacuum(2).unwrap(), &c, &ctl()).unwrap();
        assert_eq!(s.len(), 1);
        let t = &s.terms()[0];
        assert_eq!(t.k, Occupation::vacuum(2));
        assert_eq!((t.p0, t.p1, t.cross), (1.0, 1.0, C64::new(1.0, 0.0)));
    }

    #[test]
    fn single_photon_terms_by_hand() {
        let c = ChannelPair::reading(0.3, 0.6).unwrap();
        let s = env_terms(&SignalDistribution::fock(&[1]).unwrap(), &c, &ctl()).unwrap();
        assert_eq!(s.len(), 2);
        let [a, b] = [&s.terms()[0], &s.terms()[1]];
        assert_eq!(a.k, Occupation::new(vec![0]));
        assert!((a.p0 - 0.3).abs() < 1e-15 && (a.p1 - 0.6).abs() < 1e-15);
        assert!((a.cross.re - 0.18f64.sqrt()).abs() < 1e-15 && a.cross.im == 0.0);
        assert!((b.p0 - 0.7).abs() < 1e-15 && (b.p1 - 0.4).abs() < 1e-15);
        assert!((b.cross.re - 0.28f64.sqrt()).abs() < 1e-15);
        let (n0, n1) = s.normalization();
        assert!((n0 - 1.0).abs() < 1e-15 && (n1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_marginal_gives_bose_einstein_environment() {
        let c = ChannelPair::reading(0.3, 0.6).unwrap();
        let d = SignalDistribution::epr(1, 1.0, 1e-30).unwrap();
        let s = env_terms(&d, &c, &ctl()).unwrap();
        for t in s.terms().iter().take(25) {
            let k = t.k.total() as i32;
            for (p, tb) in [(t.p0, 0.7f64), (t.p1, 0.4)] {
                let expect = 1.0 / (tb + 1.0) * (tb / (tb + 1.0)).powi(k);
                assert!(
                    (p - expect).abs() <= 1e-12 * expect,
                    "k={k}: {p} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn ordering_is_by_shell_then_lexicographic() {
        let c = ChannelPair::reading(0.3, 0.6).unwrap();
        let s = env_terms(&SignalDistribution::fock(&[2, 1]).unwrap(), &c, &ctl()).unwrap();
        let keys: Vec<Vec<u32>> = s.terms().iter().map(|t| t.k.counts().to_vec()).collect();
        assert_eq!(
            keys,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![1, 1],
                vec![2, 0],
                vec![2, 1]
            ]
        );
    }

    #[test]
    fn term_budget_is_enforced() {
        let c = ChannelPair::reading(0.3, 0.6).unwrap();
        let tight = SeriesControl::new(1e-12, 3, 1e-10).unwrap();
        let err = env_terms(&SignalDistribution::fock(&[2, 2]).unwrap(), &c, &tight).unwrap_err();
        assert!(matches!(err, Error::TruncationFailure { terms: 3, .. }));
    }

    #[test]
    fn oversized_tail_is_rejected() {
        let c = ChannelPair::reading(0.3, 0.6).unwrap();
        let d =
            SignalDistribution::sparse_with_tail([(Occupation::new(vec![1]), 0.9)], 0.1).unwrap();
        assert!(matches!(
            env_terms(&d, &c, &ctl()),
            Err(Error::TruncationFailure { .. })
        ));
    }
}
