//! Closed forms for the three named probe families: coherent states, number
//! states and two-mode squeezed vacua.

mod coherent;
mod epr;
mod fock;

pub use coherent::{coherent_chernoff, coherent_exponent, coherent_pe};
pub use epr::{
    epr_bhattacharyya_limit, epr_chernoff, epr_coeffs, epr_fidelity, epr_ideal_memory,
    epr_pe_lower, epr_q_of_s, BhattacharyyaLimit, EprCoefficients, EprInput,
};
pub use fock::{
    fock_chernoff, fock_count_distribution, fock_error_probability, fock_exponent, fock_pe,
    fock_special_pe, fock_threshold, gain, FockInput,
};

use serde::{Deserialize, Serialize};

/// `P_e <= bound = e^(-exponent · Ns) / 2`, with the minimizing `s` when one exists.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffEstimate {
    pub bound: f64,
    /// Per-photon exponent; for multi-pair probes, per unit of total energy.
    pub exponent: f64,
    pub s_star: Option<f64>,
}
