//! Quaternions, rotations of R^4 and the complexified linear algebra used by
//! null curves and Goursat transforms.

mod complex_linear;
mod quaternion;
mod rotation;

pub use complex_linear::{hyperbolic_block, null_form, ComplexMatrix, ComplexVector, ORTHOGONALITY_TOL};
pub use quaternion::{quat_mul, Quaternion, UnitQuaternion};
pub use rotation::{det4, rotate, RotationMap};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::transforms::DressParams;

/// The dressing matrix `L^mu`: identity on the first coordinates and the
/// hyperbolic block with `w = s + i t` on the last two.
pub fn lmu_matrix<T: Real>(params: &DressParams<T>, dim: usize) -> Result<ComplexMatrix<T>> {
    match dim {
        3 | 4 => Ok(hyperbolic_block(params.w, dim, dim - 2)),
        _ => Err(Error::DimensionMismatch { expected: 4, got: dim }),
    }
}

/// `R L R^{-1}` with `R` in real matrix form. A 3x3 `L` acts on
/// `span{i, j, k}`; the result is returned as 3x3 when `R` preserves that
/// subspace and as 4x4 otherwise.
pub fn goursat_matrix_conjugate<T: Real>(r: &RotationMap<T>, l: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let res = l.orthogonality_residual();
    if res.as_f64() > ORTHOGONALITY_TOL {
        return Err(Error::NonOrthogonal { residual: res.as_f64() });
    }
    let rm = r.complex_matrix();
    // real orthogonal, so the inverse is the transpose
    let out = rm.matmul(&l.to_dim4())?.matmul(&rm.transpose())?;
    let out = if l.dim() == 3 {
        out.restrict_to_dim3(T::lit(1e-13)).unwrap_or(out)
    } else {
        out
    };
    out.into_orthogonal()
}
