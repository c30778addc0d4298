//! Dense truncated Fock-space reference engine.
//!
//! Builds both channel outputs literally, as density matrices over the joint
//! idler and returned-signal modes, and evaluates the error probability,
//! fidelity and `Q(s)` by Hermitian eigendecomposition. It shares no code with
//! the series in [`crate::nds`] beyond the channel type, which is the point.

mod dense;
mod input;
mod measures;

pub use dense::{propagate, propagate_with_cap, DenseState, DEFAULT_DIM_CAP};
pub use input::{coherent_input_spec, nds_input_spec, PureInputSpec};
pub use measures::{q_of_s_dense, trace_norm_pe, uhlmann_fidelity, KERNEL_THRESHOLD};
