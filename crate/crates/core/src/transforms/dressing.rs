use crate::algebra::{
    goursat_matrix_conjugate, hyperbolic_block, lmu_matrix, ComplexMatrix, ComplexVector, Quaternion, RotationMap,
};
use crate::error::{Error, Result};
use crate::holomorphic::HoloFunction;
use crate::nullcurve::{DataKind, NullCurve, SurfaceGrid, WeierstrassData};
use crate::scalar::{Cx, Real};

use super::frame::{map_nodes, normals_at, normals_through_matrix};
use super::params::{validate_mu, DressParams, LopezRosParam};

/// Mixes quaternion coordinates `p, p + 1`:
/// `u = f_p cosh s - f*_{p+1} sinh s`, `v = f_{p+1} cosh s + f*_p sinh s`,
/// then rotates `(u, v)` by `t`. This is `Re` of the hyperbolic block with
/// `w = s + i t` applied to `f + i f*`.
pub(crate) fn hyperbolic_mix<T: Real>(f: Quaternion<T>, fs: Quaternion<T>, s: T, t: T, p: usize) -> Quaternion<T> {
    let (ch, sh) = (s.cosh(), s.sinh());
    let (c, sn) = (t.cos(), t.sin());
    let u = f.component(p) * ch - fs.component(p + 1) * sh;
    let v = f.component(p + 1) * ch + fs.component(p) * sh;
    let mut out = f;
    out.set_component(p, c * u - sn * v);
    out.set_component(p + 1, sn * u + c * v);
    out
}

/// Simple factor dressing with parameter `mu` (`m = n = 1`).
///
/// Only the `j`, `k` coordinates change. The output conjugate is the same
/// dressing applied to the conjugate surface, i.e. `Im(L^mu Phi)`.
pub fn sfd_mu<T: Real>(surface: &SurfaceGrid<T>, mu: Cx<T>) -> Result<SurfaceGrid<T>> {
    let p = DressParams::new(mu, Quaternion::one(), Quaternion::one())?;
    let l = lmu_matrix(&p, 4)?;
    Ok(map_nodes(surface, |idx| {
        let (f, fs) = (surface.f[idx], surface.fstar[idx]);
        let normals = normals_at(surface, idx).and_then(|(n, r)| normals_through_matrix(&l, n, r));
        Some((
            hyperbolic_mix(f, fs, p.s, p.t, 2),
            hyperbolic_mix(fs, -f, p.s, p.t, 2),
            normals,
        ))
    }))
}

/// Applies `v -> a v b^{-1}` to `f` and `f*`; normals follow as
/// `N -> a N a^{-1}`, `R -> b R b^{-1}`.
pub fn rigid_motion<T: Real>(surface: &SurfaceGrid<T>, rot: &RotationMap<T>) -> SurfaceGrid<T> {
    let (a, b) = (rot.m, rot.n);
    map_nodes(surface, |idx| {
        let normals = normals_at(surface, idx).map(|(n, r)| (a.get() * n * a.inv(), b.get() * r * b.inv()));
        Some((rot.rotate(surface.f[idx]), rot.rotate(surface.fstar[idx]), normals))
    })
}

/// Simple factor dressing with parameters `(mu, m, n)` through the rotated
/// surface: `f^ = R_{n,m}((R_{n,m}^{-1} f)^mu)` with `R_{n,m} v = n v m^{-1}`.
pub fn sfd<T: Real>(surface: &SurfaceGrid<T>, params: &DressParams<T>) -> Result<SurfaceGrid<T>> {
    let rot = RotationMap::from_units(params.n, params.m);
    let rotated = rigid_motion(surface, &rot.inverse());
    let dressed = sfd_mu(&rotated, params.mu)?;
    Ok(rigid_motion(&dressed, &rot))
}

/// The direct formula
/// `f^ = -f m(a-1)m^{-1}/2 + f* m b m^{-1}/2 - n c n^{-1} (f m b m^{-1}/2 + f* m(a-1)m^{-1}/2)`
/// with `c = b / (a - 1)`. Kept as an independent code path to [`sfd`].
pub fn sfd_direct<T: Real>(surface: &SurfaceGrid<T>, params: &DressParams<T>) -> Result<SurfaceGrid<T>> {
    let (m, n) = (params.m, params.n);
    let half = T::lit(0.5);
    let am = m.get() * (params.a_quat() - Quaternion::one()) * m.inv() * half;
    let bm = m.get() * params.b_quat() * m.inv() * half;
    let cn = params.rho_for(n);
    let dress = |f: Quaternion<T>, fs: Quaternion<T>| -(f * am) + fs * bm - cn * (f * bm + fs * am);
    let a = dressing_matrix(params)?;
    Ok(map_nodes(surface, |idx| {
        let (f, fs) = (surface.f[idx], surface.fstar[idx]);
        let normals = normals_at(surface, idx).and_then(|(nn, r)| normals_through_matrix(&a, nn, r));
        Some((dress(f, fs), dress(fs, -f), normals))
    }))
}

/// `R_{n,m} L^mu R_{n,m}^{-1}` as a 4x4 complex orthogonal matrix.
pub fn dressing_matrix<T: Real>(params: &DressParams<T>) -> Result<ComplexMatrix<T>> {
    let rot = RotationMap::from_units(params.n, params.m);
    Ok(goursat_matrix_conjugate(&rot, &lmu_matrix(params, 4)?)?.to_dim4())
}

/// Lopez-Ros deformation with `sigma = e^{s + i t}`: the hyperbolic mix on
/// the `i`, `j` coordinates, equal to `Re(L_sigma Phi)`.
pub fn lopez_ros<T: Real>(surface: &SurfaceGrid<T>, param: &LopezRosParam<T>) -> Result<SurfaceGrid<T>> {
    let l = lopez_ros_matrix(param);
    Ok(map_nodes(surface, |idx| {
        let (f, fs) = (surface.f[idx], surface.fstar[idx]);
        let normals = normals_at(surface, idx).and_then(|(n, r)| normals_through_matrix(&l, n, r));
        Some((
            hyperbolic_mix(f, fs, param.s, param.t, 1),
            hyperbolic_mix(fs, -f, param.s, param.t, 1),
            normals,
        ))
    }))
}

/// `L_sigma` on the `i`, `j` coordinates of `C^4`.
pub fn lopez_ros_matrix<T: Real>(param: &LopezRosParam<T>) -> ComplexMatrix<T> {
    hyperbolic_block(Cx::new(param.s, param.t), 4, 1)
}

/// The dressing parameters `(mu(sigma), m0, m0)` reproducing a Lopez-Ros
/// deformation, `m0 = (1 - i - j - k)/2`.
pub fn lopez_ros_as_sfd<T: Real>(param: &LopezRosParam<T>) -> Result<DressParams<T>> {
    let m0 = LopezRosParam::cyclic_frame();
    DressParams::new(param.equivalent_mu(), m0, m0)
}

/// Goursat transform `A Phi` of a null curve; `A` must be complex orthogonal.
pub fn goursat<T: Real>(curve: &NullCurve<T>, a: &ComplexMatrix<T>) -> Result<NullCurve<T>> {
    let a = a.clone().into_orthogonal()?;
    curve.with_matrix(&a)
}

/// Goursat transform applied to a sampled surface: `f + i f* -> A (f + i f*)`.
pub fn goursat_surface<T: Real>(surface: &SurfaceGrid<T>, a: &ComplexMatrix<T>) -> Result<SurfaceGrid<T>> {
    let a = a.clone().into_orthogonal()?.to_dim4();
    Ok(map_nodes(surface, |idx| {
        let phi = ComplexVector::from_quaternions(surface.f[idx], surface.fstar[idx], 4);
        let v = a.apply(&phi).ok()?;
        let normals = normals_at(surface, idx).and_then(|(n, r)| normals_through_matrix(&a, n, r));
        Some((v.re_quat(), v.im_quat(), normals))
    }))
}

/// Checks `mu` without building full parameters.
pub fn check_mu<T: Real>(mu: Cx<T>) -> Result<()> {
    validate_mu(mu)
}

/// Weierstrass data `(sigma g, omega / sigma)` of the Lopez-Ros deformation.
/// Only 3-space `(g, omega)` and `(g, dh)` data are supported.
pub fn lopez_ros_data<T: Real>(data: &WeierstrassData<T>, param: &LopezRosParam<T>) -> Result<WeierstrassData<T>> {
    let s = HoloFunction::constant(param.sigma);
    let kind = match &data.kind {
        DataKind::R3 { g, omega } => DataKind::R3 {
            g: s.clone() * g.clone(),
            omega: omega.clone() / s,
        },
        DataKind::R3Height { g, dh } => DataKind::R3Height {
            g: s * g.clone(),
            dh: dh.clone(),
        },
        _ => {
            return Err(Error::InvalidParameter(
                "Lopez-Ros data needs 3-space (g, omega) or (g, dh) data".into(),
            ))
        }
    };
    WeierstrassData::new(kind, data.domain.clone())
}
