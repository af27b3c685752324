//! Holomorphic expression trees, path quadrature, logarithm continuation and
//! the Weierstrass elliptic function.

mod elliptic;
mod expr;
mod parse;
mod path;

pub use elliptic::{agm, lattice_invariants, wp, wp_prime, LatticeData};
pub use expr::HoloFunction;
pub use parse::parse;
pub use path::{
    continue_log, contour_integral, integrate_path, integrate_segment, PathSpec, QuadTolerance, DEFAULT_MAX_DEPTH,
};
