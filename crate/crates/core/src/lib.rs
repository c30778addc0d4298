//! Minimum-error discrimination of two beam-splitter channels probed by
//! number-diagonal-signal states.
//!
//! The [`nds`] module evaluates the exact error probability, fidelity and
//! Chernoff-type quantities as sums over environment-occupation blocks.
//! [`transmitters`] has closed forms for coherent, number-state and
//! two-mode-squeezed probes, and [`oracle`] is an independent dense-matrix
//! engine used to check everything else.

pub mod bounds;
pub mod channel;
pub mod control;
pub mod error;
pub mod nds;
pub mod numerics;
pub mod oracle;
pub mod signal;
pub mod transmitters;

pub use bounds::{
    minimum_fidelity, overlap_lower_bound, pe_lower_from_fidelity, qcb_exponent_upper_bound,
    universal_pe_lower_bound, BoundBracket, BoundSource, ExponentBound,
};
pub use channel::{ChannelPair, Hypothesis};
pub use control::SeriesControl;
pub use error::{Error, Result};
pub use signal::{
    total_photon_distribution, Certified, DistributionForm, ModeDistribution, Occupation,
    SignalDistribution, TotalPhotonDistribution,
};
