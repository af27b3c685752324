use crate::algebra::ComplexVector;
use crate::error::{Error, Result};
use crate::nullcurve::{differential_at, DataKind, WeierstrassData};
use crate::scalar::{Cx, Real};

/// Gaussian curvature at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample<T> {
    pub z: Cx<T>,
    pub k: T,
}

/// Gaussian curvature of 3-space data at `z`:
/// `K = -(2 / (|g| + 1/|g|))^4 |g' / (g h')|^2` with `dh = h' dz`.
///
/// Needs `g(z)` finite and nonzero and `h'(z) != 0`. `(g, omega)` data use
/// `dh = g omega`.
pub fn gauss_curvature<T: Real>(data: &WeierstrassData<T>, z: Cx<T>) -> Result<CurvatureSample<T>> {
    let (g, dh) = match &data.kind {
        DataKind::R3Height { g, dh } => (g.clone(), dh.clone()),
        DataKind::R3 { g, omega } => (g.clone(), g.clone() * omega.clone()),
        _ => return Err(Error::InvalidParameter("curvature needs 3-space (g, dh) data".into())),
    };
    let singular = || Error::Singularity(z.re.as_f64(), z.im.as_f64());
    let gv = g.eval(z)?;
    let hv = dh.eval(z)?;
    let gn = gv.norm();
    if !(gn > T::zero() && gn.is_finite()) || !(hv.norm() > T::zero()) {
        return Err(singular());
    }
    let dg = g.derivative().eval(z)?;
    let q = T::lit(2.0) / (gn + gn.recip());
    let k = -q.powi(4) * (dg / (gv * hv)).norm_sqr();
    Ok(CurvatureSample { z, k })
}

/// Gaussian curvature from `phi = dPhi/dz` and `phi'` of any 3-space null
/// curve: `K = -4 (|phi|^2 |phi'|^2 - |<phi, conj phi'>|^2) / |phi|^6`.
pub fn gauss_curvature_from_differential<T: Real>(phi: &ComplexVector<T>, dphi: &ComplexVector<T>) -> Result<T> {
    if phi.dim() != 3 || dphi.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: phi.dim().max(dphi.dim()),
        });
    }
    let n2 = phi.norm() * phi.norm();
    if !(n2 > T::zero()) {
        return Err(Error::InvalidParameter("branch point: dPhi vanishes".into()));
    }
    let herm = phi
        .iter()
        .zip(dphi.iter())
        .fold(Cx::new(T::zero(), T::zero()), |s, (a, b)| s + *a * b.conj());
    let m2 = dphi.norm() * dphi.norm();
    Ok(-T::lit(4.0) * (n2 * m2 - herm.norm_sqr()) / (n2 * n2 * n2))
}

/// [`gauss_curvature_from_differential`] with `phi'` from the symbolic
/// derivatives of the data.
pub fn gauss_curvature_any<T: Real>(data: &WeierstrassData<T>, z: Cx<T>) -> Result<CurvatureSample<T>> {
    let phi = differential_at(data, z)?;
    let dphi: Vec<Cx<T>> = data
        .differential_exprs()
        .iter()
        .map(|e| e.derivative().eval(z))
        .collect::<Result<_>>()?;
    let k = gauss_curvature_from_differential(&phi, &ComplexVector::new(dphi))?;
    Ok(CurvatureSample { z, k })
}
