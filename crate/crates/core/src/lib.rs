//! Witness-based entanglement measures for finite-dimensional quantum states.
//!
//! The crate bundles dense Hermitian linear algebra, constructors for common
//! state families, a small primal–dual SDP solver and the measures, bounds and
//! spin-chain experiments built on top of them.

pub mod bounds;
pub mod eig;
pub mod error;
pub mod herm;
pub mod io;
pub mod measures;
pub mod rng;
pub mod sdp;
pub mod spin;
pub mod states;
pub mod symmetry;
pub mod witness;

pub use eig::{eig_hermitian, HermitianEigen};
pub use error::{Error, Result};
pub use herm::{
    hs_inner, partial_trace, partial_transpose, tensor, trace_norm, CMatrix, Cut, HermitianMatrix, SystemShape, C64,
};
pub use measures::MeasureResult;
pub use rng::StateRng;
pub use states::{DensityMatrix, PureState};
pub use witness::{Bound, Witness, WitnessClass};
