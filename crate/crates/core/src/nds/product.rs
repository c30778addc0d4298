//! Probes that are tensor products across groups of modes.
//!
//! Fidelity and `Q(s)` are multiplicative over such groups. The error
//! probability is not, so it is evaluated on the combined term stream.

use num_complex::Complex64 as C64;

use super::reduce::ChernoffPoint;
use super::terms::{EnvSeries, EnvTerm};
use crate::control::SeriesControl;
use crate::error::{Error, Result};
use crate::numerics::{canonical_product, golden_section_min};
use crate::signal::{Certified, Occupation};

/// Independent factors of a product probe.
#[derive(Clone, Debug)]
pub struct ProductSeries {
    factors: Vec<EnvSeries>,
}

/// `Π (a_i + e_i) - Π a_i` for nonnegative values and error bounds.
fn product_error(values: &[Certified]) -> f64 {
    let exact: f64 = values.iter().map(|c| c.value).product();
    let upper: f64 = values.iter().map(|c| c.value + c.error).product();
    (upper - exact).max(0.0)
}

fn canonical_complex_product(values: &mut [C64]) -> C64 {
    values.sort_unstable_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    values.iter().fold(C64::new(1.0, 0.0), |acc, z| acc * z)
}

impl ProductSeries {
    pub fn new(factors: Vec<EnvSeries>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[EnvSeries] {
        &self.factors
    }

    pub fn modes(&self) -> usize {
        self.factors.iter().map(EnvSeries::modes).sum()
    }

    /// Number of terms the combined stream would have.
    pub fn combined_len(&self) -> f64 {
        self.factors.iter().map(|f| f.len() as f64).product()
    }

    pub fn fidelity(&self) -> Certified {
        let roots: Vec<Certified> = self.factors.iter().map(EnvSeries::root_fidelity).collect();
        let root: f64 = roots.iter().map(|c| c.value).product();
        let e = product_error(&roots);
        Certified {
            value: (root * root).min(1.0),
            error: 2.0 * root * e + e * e,
        }
    }

    pub fn q_of_s(&self, s: f64) -> Certified {
        let qs: Vec<Certified> = self.factors.iter().map(|f| f.q_of_s(s)).collect();
        Certified {
            value: qs.iter().map(|c| c.value).product(),
            error: product_error(&qs),
        }
    }

    pub fn chernoff(&self, s_tolerance: f64) -> ChernoffPoint {
        let m = golden_section_min(|s| self.q_of_s(s).value, 0.0, 1.0, s_tolerance);
        ChernoffPoint {
            q: m.value,
            s: m.argmin,
            error: self.q_of_s(m.argmin).error,
        }
    }

    /// Cartesian product of the factor streams as one [`EnvSeries`].
    pub fn combined(&self, ctl: &SeriesControl) -> Result<EnvSeries> {
        let total = self.combined_len();
        if total > ctl.max_terms as f64 {
            return Err(Error::TruncationFailure {
                terms: ctl.max_terms,
                residual0: f64::NAN,
                residual1: f64::NAN,
            });
        }
        let mut kept: Vec<f64> = self.factors.iter().map(|f| 1.0 - f.tail_mass()).collect();
        let tail = 1.0 - canonical_product(&mut kept);
        let modes = self.modes();

        let mut terms = Vec::with_capacity(total as usize);
        let mut idx = vec![0usize; self.factors.len()];
        if self.factors.iter().any(EnvSeries::is_empty) {
            return Ok(EnvSeries::from_parts(modes, terms, tail));
        }
        let mut f0 = Vec::with_capacity(idx.len());
        let mut f1 = Vec::with_capacity(idx.len());
        let mut fx = Vec::with_capacity(idx.len());
        loop {
            let mut k = Vec::with_capacity(modes);
            f0.clear();
            f1.clear();
            fx.clear();
            for (f, &i) in self.factors.iter().zip(&idx) {
                let t = &f.terms()[i];
                k.extend_from_slice(t.k.counts());
                f0.push(t.p0);
                f1.push(t.p1);
                fx.push(t.cross);
            }
            let term = EnvTerm {
                k: Occupation::new(k),
                p0: canonical_product(&mut f0),
                p1: canonical_product(&mut f1),
                cross: canonical_complex_product(&mut fx),
            };
            if term.p0 != 0.0 || term.p1 != 0.0 || term.cross.norm_sqr() != 0.0 {
                terms.push(term);
            }
            let mut j = 0;
            while j < idx.len() {
                idx[j] += 1;
                if idx[j] < self.factors[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == idx.len() {
                break;
            }
        }
        Ok(EnvSeries::from_parts(modes, terms, tail))
    }
}

/// Combines independent factor series into a product description.
pub fn product_combine(factors: Vec<EnvSeries>) -> ProductSeries {
    ProductSeries::new(factors)
}
