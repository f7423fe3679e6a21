pub mod error;
pub mod bodies;
pub mod kernel;
pub mod nets;
pub mod bm;
pub mod simplex;
pub mod volume;

pub use bm::BMEstimate;
pub use bodies::{AffineSubspace, Body, HPolytope, PolyBody, PolytopeJson, VPolytope};
pub use error::{GeomError, Result};
pub use kernel::RngStream;
pub use nets::{GluskinPolytope, GluskinSpec, SphereNet};
pub use simplex::{PositionedSection, ProjectedBody};
pub use volume::VolumeEstimate;

pub type Vector = nalgebra::DVector<f64>;
pub type Matrix = nalgebra::DMatrix<f64>;
