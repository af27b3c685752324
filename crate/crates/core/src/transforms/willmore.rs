use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::nullcurve::SurfaceGrid;
use crate::scalar::{Cx, Real};

use super::frame::{map_nodes, normals_at};
use super::params::DressParams;

// Outputs here are not minimal and carry no conjugate; `f*` holds zeros.

/// Associated Willmore surface `f_flat = f R - f*`.
///
/// Since `d f_flat = f dR`, its normals are `R_flat = -R` and
/// `N_flat = -f R f^{-1}`; nodes with `f = 0` are branch points and masked.
/// A constant `R` gives the degenerate `f R + c`; see
/// [`right_normal_is_constant`].
pub fn associated_willmore<T: Real>(surface: &SurfaceGrid<T>) -> Result<SurfaceGrid<T>> {
    if surface.r.is_none() {
        return Err(Error::MissingNormals);
    }
    let mut out = map_nodes(surface, |idx| {
        let (f, fs) = (surface.f[idx], surface.fstar[idx]);
        let (_, r) = normals_at(surface, idx)?;
        let normals = f.inv().map(|fi| (-(f * r * fi), -r));
        Some((f * r - fs, Quaternion::zero(), normals))
    });
    out.dim = 4;
    Ok(out)
}

/// The 3-space form `(-<f, N>, f x N - f*)` of the associated Willmore
/// surface; normals are not attached.
pub fn associated_willmore_r3<T: Real>(surface: &SurfaceGrid<T>) -> Result<SurfaceGrid<T>> {
    let Some(nv) = surface.n.as_ref() else {
        return Err(Error::MissingNormals);
    };
    let mut stripped = surface.clone();
    stripped.n = None;
    stripped.r = None;
    let mut out = map_nodes(&stripped, |idx| {
        let (f, fs, n) = (surface.f[idx], surface.fstar[idx], nv[idx]);
        let v = f.cross(n) - fs;
        Some((Quaternion::new(-f.dot(n), v.x, v.y, v.z), Quaternion::zero(), None))
    });
    out.dim = 4;
    Ok(out)
}

/// Whether the right normal is constant to `tol` over the valid nodes.
pub fn right_normal_is_constant<T: Real>(surface: &SurfaceGrid<T>, tol: T) -> bool {
    let Some(rv) = surface.r.as_ref() else {
        return false;
    };
    let mut it = surface.valid_indices();
    let Some(first) = it.next() else {
        return true;
    };
    it.all(|i| (rv[i] - rv[first]).norm() <= tol)
}

/// `mu`-Darboux transform `f# = (f R - f*)(R + rho)^{-1}` with
/// `rho = m i (1 + mu)/(1 - mu) m^{-1}`.
///
/// `f#` is the associated Willmore surface of `-h/2` where
/// `h = f b^ + f*(a^ - 1)` has right normal `R_h = (R + rho) R (R + rho)^{-1}`;
/// hence `R# = -R_h` and `N# = -h R_h h^{-1}`. Zeros of `R + rho` and of `h`
/// are masked.
pub fn mu_darboux<T: Real>(surface: &SurfaceGrid<T>, mu: Cx<T>, m: Quaternion<T>) -> Result<SurfaceGrid<T>> {
    if surface.r.is_none() {
        return Err(Error::MissingNormals);
    }
    let p = DressParams::new(mu, m, m)?;
    let rho = p.rho;
    let ah = p.m.get() * (p.a_quat() - Quaternion::one()) * p.m.inv();
    let bh = p.m.get() * p.b_quat() * p.m.inv();
    let floor = T::lit(1e-10) * (T::one() + rho.norm());
    let mut out = map_nodes(surface, |idx| {
        let (f, fs) = (surface.f[idx], surface.fstar[idx]);
        let (_, r) = normals_at(surface, idx)?;
        let d = r + rho;
        if d.norm() <= floor {
            return None;
        }
        let di = d.inv()?;
        let fsharp = (f * r - fs) * di;
        let rh = d * r * di;
        let h = f * bh + fs * ah;
        let normals = h.inv().map(|hi| (-(h * rh * hi), -rh));
        Some((fsharp, Quaternion::zero(), normals))
    });
    out.dim = 4;
    Ok(out)
}
