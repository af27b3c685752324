//! Periods, the dressing period map, closing conditions, residues, orders,
//! end classification and Gaussian curvature.

mod curvature;
mod ends;
mod periods;

pub use curvature::{gauss_curvature, gauss_curvature_any, gauss_curvature_from_differential, CurvatureSample};
pub use ends::{auto_radius, classify_end, order_at, residue_at, EndClass, EndReport};
pub use periods::{
    all_periods, closing_condition, closing_condition_general, lattice_coefficients, lattice_invariant, loop_period,
    sfd_period, sfd_period_general, Closing, PeriodVector,
};
