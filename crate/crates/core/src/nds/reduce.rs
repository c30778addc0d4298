//! Error probability, fidelity and Chernoff-type quantities as reductions over
//! an [`EnvSeries`].

use serde::{Deserialize, Serialize};

use super::terms::{EnvSeries, EnvTerm};
use crate::numerics::{canonical_sum, golden_section_min};
use crate::signal::Certified;

/// Trace norm of `π0|ψ0⟩⟨ψ0| - π1|ψ1⟩⟨ψ1|` restricted to one block.
pub(crate) fn block_trace_norm(t: &EnvTerm, pi0: f64, pi1: f64) -> f64 {
    let a = pi0 * t.p0;
    let b = pi1 * t.p1;
    let disc = (a + b) * (a + b) - 4.0 * pi0 * pi1 * t.cross.norm_sqr();
    disc.max(0.0).sqrt()
}

/// `Q(s)` contribution of one block; zero unless both `p_k^(b)` are positive.
pub(crate) fn q_term(t: &EnvTerm, s: f64) -> f64 {
    let i2 = t.cross.norm_sqr();
    if t.p0 <= 0.0 || t.p1 <= 0.0 || i2 == 0.0 {
        return 0.0;
    }
    ((s - 1.0) * t.p0.ln() - s * t.p1.ln() + i2.ln()).exp()
}

/// Minimum of `Q(s)` over `s ∈ [0, 1]`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffPoint {
    pub q: f64,
    pub s: f64,
    pub error: f64,
}

/// `ε^s + ε^(1-s)` with the convention that a zero perturbation contributes nothing.
pub(crate) fn q_perturbation(eps: f64, s: f64) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    (eps.powf(s) + eps.powf(1.0 - s)).min(2.0)
}

impl EnvSeries {
    /// Minimum error probability at equal priors,
    /// `1/2 - (1/4) Σ_k sqrt((p0 + p1)² - 4|I_k|²)`.
    pub fn helstrom_pe(&self) -> Certified {
        self.helstrom_pe_priors(0.5)
    }

    /// Minimum error probability with prior `π0` on hypothesis 0,
    /// `1/2 - (1/2) Σ_k ||π0|ψ_k0⟩⟨ψ_k0| - π1|ψ_k1⟩⟨ψ_k1|||_1`.
    pub fn helstrom_pe_priors(&self, prior0: f64) -> Certified {
        let pi1 = 1.0 - prior0;
        let mut norms: Vec<f64> = self
            .terms()
            .iter()
            .map(|t| block_trace_norm(t, prior0, pi1))
            .collect();
        let trace_norm = canonical_sum(&mut norms);
        let pe = (0.5 - 0.5 * trace_norm).clamp(0.0, 0.5);
        Certified {
            value: pe,
            error: 0.5 * self.state_truncation_norm(),
        }
    }

    /// `Σ_k |I_k|`, the square root of the output fidelity.
    pub fn root_fidelity(&self) -> Certified {
        let mut a: Vec<f64> = self.terms().iter().map(|t| t.cross.norm()).collect();
        Certified {
            value: canonical_sum(&mut a),
            error: self.tail_mass(),
        }
    }

    /// Output-state fidelity `(Σ_k |I_k|)²`.
    pub fn fidelity(&self) -> Certified {
        let r = self.root_fidelity();
        let v = r.value.min(1.0);
        Certified {
            value: v * v,
            error: 2.0 * v * r.error + r.error * r.error,
        }
    }

    /// `Q(s) = Tr[ρ0^s ρ1^(1-s)] = Σ_k p0^(s-1) p1^(-s) |I_k|²`.
    ///
    /// Blocks where either hypothesis has zero weight do not contribute, which
    /// fixes the support convention at `s = 0` and `s = 1`.
    pub fn q_of_s(&self, s: f64) -> Certified {
        let mut v: Vec<f64> = self.terms().iter().map(|t| q_term(t, s)).collect();
        Certified {
            value: canonical_sum(&mut v),
            error: q_perturbation(self.state_truncation_norm(), s),
        }
    }

    /// Chernoff bound `min_s Q(s)`, located by golden-section search.
    pub fn chernoff(&self, s_tolerance: f64) -> ChernoffPoint {
        let m = golden_section_min(|s| self.q_of_s(s).value, 0.0, 1.0, s_tolerance);
        ChernoffPoint {
            q: m.value,
            s: m.argmin,
            error: q_perturbation(self.state_truncation_norm(), m.argmin),
        }
    }
}
