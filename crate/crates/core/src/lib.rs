//! Minimal surfaces in R^3 and R^4 from Weierstrass data.
//!
//! Surfaces are modelled in the quaternions: R^4 = H and R^3 = Im H. A minimal
//! surface is the real part of a holomorphic null curve `Phi` obtained by
//! integrating Weierstrass data, and its conjugate is the imaginary part. The
//! crate samples such surfaces on grids and applies closed-form
//! transformations to them (conjugation, associated families, simple factor
//! dressing, Lopez-Ros deformation, Goursat transforms, Darboux transforms and
//! associated Willmore surfaces), computes periods and end data, and checks
//! the defining identities numerically.
//!
//! All numerics are generic over [`Real`]; `f64` aliases are exported at the
//! crate root.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod analysis;
pub mod catalog;
pub mod error;
pub mod holomorphic;
pub mod mesh_io;
pub mod nullcurve;
pub mod scalar;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{cx, cxl, lit, principal_arg, Cx, Real};

pub type Quat = algebra::Quaternion<f64>;
pub type UnitQuat = algebra::UnitQuaternion<f64>;
pub type ComplexVec = algebra::ComplexVector<f64>;
pub type ComplexMat = algebra::ComplexMatrix<f64>;
pub type Rotation = algebra::RotationMap<f64>;
pub type Dress = transforms::DressParams<f64>;
pub type Curve = nullcurve::NullCurve<f64>;
pub type Surface = nullcurve::SurfaceGrid<f64>;
pub type Grid = nullcurve::GridSpec<f64>;
pub type Data = nullcurve::WeierstrassData<f64>;
pub type Entry = catalog::CatalogEntry<f64>;
pub type Periods = analysis::PeriodVector<f64>;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;
