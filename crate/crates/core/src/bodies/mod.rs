//! Convex body representations and body-level operations.

pub mod canned;
pub mod enumerate;
pub mod hpoly;
pub mod john;
pub mod json;
pub mod poly;
pub mod subspace;
pub mod vpoly;

pub use hpoly::HPolytope;
pub use john::{center_position, inclusion_ratio, john_ellipsoid, Ellipsoid};
pub use json::PolytopeJson;
pub use poly::PolyBody;
pub use subspace::AffineSubspace;
pub use vpoly::{contains_scaled, Body, VPolytope, CONTAINMENT_TOL};
