//! Exact transfer matrices for double-layer one-dimensional quantum
//! potentials, their convergence under three-scale squeezing to families of
//! point interactions, and the resonance-curve sets governing when the
//! squeezed system stays transparent.

pub mod error;
pub mod numerics;
pub mod resonance;
pub mod scattering;
pub mod seba;
pub mod squeeze;

pub use error::{Error, Result};
pub use resonance::BaseSet;
pub use scattering::{DoubleLayerPotential, ScatteringResult, TransferMatrix};
pub use squeeze::{ParameterRegion, PointInteraction, SqueezeSpec};
