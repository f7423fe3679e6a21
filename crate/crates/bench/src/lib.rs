//! Fixtures shared by the benchmarks.

use convex_bm::bodies::VPolytope;
use convex_bm::kernel::RngStream;
use convex_bm::nets::{gluskin_build, GluskinSpec};

/// Gluskin polytope with a fixed seed.
pub fn gluskin(d: usize, m: usize) -> VPolytope {
    gluskin_build(&GluskinSpec::new(d, m, RngStream::new(7)).expect("valid cell")).expect("gluskin build")
}
