//! Exact computations for rearrangement-invariant (symmetric) function spaces
//! on finite-partition measure spaces.

pub mod duality;
pub mod error;
pub mod ext;
pub mod measure;
pub mod norms;
pub mod rearrange;
pub mod sample;
pub mod stone;
pub mod suite;
pub mod wire;

pub use error::{Error, Result};
pub use ext::{Extended, Rational};
pub use measure::{MeasureSpace, Piece, PointwiseOp, StepFunction};
pub use norms::{NormSpec, NormValue};
pub use rearrange::{DecreasingProfile, Segment, ThresholdProfile, TransportMap};

/// Version of this library, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
