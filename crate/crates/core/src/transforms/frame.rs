use crate::algebra::{ComplexMatrix, ComplexVector, Quaternion};
use crate::nullcurve::SurfaceGrid;
use crate::scalar::Real;

/// Values a pointwise transform produces at one node: `(f, f*, normals)`.
pub(crate) type NodeValue<T> = (Quaternion<T>, Quaternion<T>, Option<(Quaternion<T>, Quaternion<T>)>);

/// Applies a pointwise map to every valid node. Normals are attached to the
/// output iff the input carries them; a node whose map returns `None`, a
/// non-finite value, or no normals while normals are expected is masked.
pub(crate) fn map_nodes<T: Real, F>(src: &SurfaceGrid<T>, mut g: F) -> SurfaceGrid<T>
where
    F: FnMut(usize) -> Option<NodeValue<T>>,
{
    let with_normals = src.n.is_some() && src.r.is_some();
    let mut out = SurfaceGrid::empty(src.spec, src.dim);
    let len = src.len();
    let mut nv = vec![Quaternion::zero(); len];
    let mut rv = vec![Quaternion::zero(); len];
    for idx in src.valid_indices() {
        let Some((f, fs, normals)) = g(idx) else {
            continue;
        };
        if !(f.is_finite() && fs.is_finite()) {
            continue;
        }
        if with_normals {
            match normals {
                Some((n, r)) if n.is_finite() && r.is_finite() => {
                    nv[idx] = n;
                    rv[idx] = r;
                }
                _ => continue,
            }
        }
        out.f[idx] = f;
        out.fstar[idx] = fs;
        out.valid[idx] = true;
    }
    if with_normals {
        out.n = Some(nv);
        out.r = Some(rv);
    }
    let scale = out
        .valid_indices()
        .fold(T::one(), |m, i| m.max(out.f[i].norm()).max(out.fstar[i].norm()));
    out.refresh_dim(T::lit(1e-12) * scale);
    out
}

/// Normals `(N, R)` stored at a node, if any.
pub(crate) fn normals_at<T: Real>(s: &SurfaceGrid<T>, idx: usize) -> Option<(Quaternion<T>, Quaternion<T>)> {
    Some((s.n.as_ref()?[idx], s.r.as_ref()?[idx]))
}

/// A unit tangent vector `u` and `N u` for the plane with left normal `N`
/// and right normal `R`. Tangent vectors satisfy `N v = -v R`, and
/// `v -> (v + N v R) / 2` projects onto them.
pub(crate) fn tangent_frame<T: Real>(n: Quaternion<T>, r: Quaternion<T>) -> Option<(Quaternion<T>, Quaternion<T>)> {
    let basis = [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()];
    let t = basis
        .iter()
        .map(|e| (*e + n * *e * r) * T::lit(0.5))
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())?;
    let len = t.norm();
    if !(len > T::lit(0.1)) {
        return None;
    }
    let u = t / len;
    Some((u, n * u))
}

/// `N = f_y f_x^{-1}` and `R = -f_x^{-1} f_y`, normalized.
pub(crate) fn normals_from_derivatives<T: Real>(
    fx: Quaternion<T>,
    fy: Quaternion<T>,
) -> Option<(Quaternion<T>, Quaternion<T>)> {
    let xi = fx.inv()?;
    Some((unit((fy * xi).im())?, unit(-(xi * fy).im())?))
}

/// Normals of `Re(A Phi)` given the normals of `Re Phi` at the same point.
///
/// `dPhi` is proportional to `u - i N u` for any unit tangent `u`; the
/// complex factor only rotates the frame and leaves `N`, `R` unchanged.
pub(crate) fn normals_through_matrix<T: Real>(
    a: &ComplexMatrix<T>,
    n: Quaternion<T>,
    r: Quaternion<T>,
) -> Option<(Quaternion<T>, Quaternion<T>)> {
    let (u, nu) = tangent_frame(n, r)?;
    let d = ComplexVector::from_quaternions(u, -nu, 4);
    let e = a.apply(&d).ok()?;
    if e.norm() < T::lit(1e-12) {
        return None;
    }
    normals_from_derivatives(e.re_quat(), -e.im_quat())
}

pub(crate) fn unit<T: Real>(q: Quaternion<T>) -> Option<Quaternion<T>> {
    let n = q.norm();
    (n > T::zero() && n.is_finite()).then(|| q / n)
}
