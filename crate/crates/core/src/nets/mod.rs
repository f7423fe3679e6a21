//! Nets on spheres and Grassmannians, random subspaces, Gluskin polytopes.

pub mod gluskin;
pub mod grassmann;
pub mod sphere;

pub use gluskin::{ball_inclusion_radius, gluskin_build, gluskin_sample, GluskinPolytope, GluskinSpec};
pub use grassmann::{
    aligning_rotation, certify_grassmann_net, grassmann_metric, grassmann_net, principal_angles,
    random_rotation_near_identity, random_subspace, GrassmannNet, GrassmannPoint, MetricBracket,
};
pub use sphere::{certify_net, sphere_net, sphere_net_from, SphereNet};
