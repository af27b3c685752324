use crate::error::{Error, Result};
use crate::nullcurve::SurfaceGrid;
use crate::scalar::Real;

use super::frame::{map_nodes, normals_at};
use super::params::{AssocParams, Side};

/// Conjugate surface: `(f, f*) -> (f*, -f)`. Normals are unchanged.
pub fn conjugate<T: Real>(surface: &SurfaceGrid<T>) -> SurfaceGrid<T> {
    map_nodes(surface, |idx| {
        Some((surface.fstar[idx], -surface.f[idx], normals_at(surface, idx)))
    })
}

/// Right family `f p + f* q` with conjugate `f* p - f q`, right normal
/// `(p + R q)^{-1} R (p + R q)` and unchanged left normal; or left family
/// `p f + q f*` with conjugate `p f* - q f`, left normal
/// `(p - q N) N (p - q N)^{-1}` and unchanged right normal.
///
/// Nodes at zeros of `p + R q` (resp. `p - q N`) are masked.
pub fn associated<T: Real>(surface: &SurfaceGrid<T>, params: &AssocParams<T>) -> Result<SurfaceGrid<T>> {
    if surface.n.is_none() || surface.r.is_none() {
        return Err(Error::MissingNormals);
    }
    let AssocParams { p, q, side } = *params;
    let floor = T::lit(1e-10) * (p.norm() + q.norm());
    Ok(map_nodes(surface, |idx| {
        let (f, fs) = (surface.f[idx], surface.fstar[idx]);
        let (n, r) = normals_at(surface, idx)?;
        match side {
            Side::Right => {
                let d = p + r * q;
                if d.norm() <= floor {
                    return None;
                }
                let di = d.inv()?;
                Some((f * p + fs * q, fs * p - f * q, Some((n, di * r * d))))
            }
            Side::Left => {
                let d = p - q * n;
                if d.norm() <= floor {
                    return None;
                }
                let di = d.inv()?;
                Some((p * f + q * fs, p * fs - q * f, Some((d * n * di, r))))
            }
        }
    }))
}
