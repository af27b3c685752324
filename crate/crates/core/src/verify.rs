//! Numerical checks of the defining identities of sampled surfaces and of
//! the equivalences between transform implementations.
//!
//! Finite-difference checks normalize by the local `|f_x|` so that residuals
//! do not depend on the ambient scale. They refuse grids coarser than
//! [`MAX_FD_STEP`].

use serde::{Deserialize, Serialize};

use crate::algebra::{null_form, ComplexVector, Quaternion, RotationMap};
use crate::error::{Error, Result};
use crate::nullcurve::{GridSpec, NullCurve, SurfaceGrid, PUNCTURE_MASK_STEPS};
use crate::scalar::{Cx, Real};
use crate::transforms::{
    dressing_matrix, goursat_surface, lopez_ros, lopez_ros_as_sfd, rigid_motion, sfd, DressParams, LopezRosParam,
};

/// Largest grid step accepted by finite-difference checks.
pub const MAX_FD_STEP: f64 = 1e-2;

/// Default tolerance for algebraic identities.
pub const TOL_ALGEBRAIC: f64 = 1e-10;
/// Default relative tolerance for first-order finite differences.
pub const TOL_FIRST_ORDER: f64 = 1e-6;
/// Default tolerance for second-order stencils.
pub const TOL_SECOND_ORDER: f64 = 1e-4;

/// Outcome of one check. `pass` iff `max_residual <= tolerance` over the
/// points that could be evaluated; `masked` counts the others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub masked: usize,
    /// Failure is the documented outcome for this input.
    #[serde(default)]
    pub expected_fail: bool,
}

impl CheckReport {
    fn from_residuals<T: Real>(
        name: &str,
        tol: T,
        total: usize,
        residuals: impl IntoIterator<Item = Option<T>>,
    ) -> Result<Self> {
        let mut max = T::zero();
        let mut count = 0usize;
        let mut finite = true;
        for r in residuals.into_iter().flatten() {
            count += 1;
            if !r.is_finite() {
                finite = false;
            } else if r > max {
                max = r;
            }
        }
        if count == 0 {
            return Err(Error::EmptyValidSet);
        }
        let max = if finite { max.as_f64() } else { f64::INFINITY };
        Ok(Self {
            name: name.into(),
            max_residual: max,
            tolerance: tol.as_f64(),
            pass: max <= tol.as_f64(),
            masked: total - count,
            expected_fail: false,
        })
    }

    /// Marks the report as an expected failure when `expected` holds.
    pub fn expecting_failure(mut self, expected: bool) -> Self {
        self.expected_fail = expected;
        self
    }

    /// A failure that is not on the expected-fail list.
    pub fn is_unexpected_failure(&self) -> bool {
        !self.pass && !self.expected_fail
    }
}

/// Checks that are allowed to fail for a transform output: minimality of
/// Darboux transforms and of associated Willmore surfaces.
pub const EXPECTED_FAILURES: [(&str, &str); 2] = [("minimal", "darboux"), ("minimal", "willmore")];

/// Whether `check` on the output of `transform` is on the expected-fail list.
pub fn is_expected_failure(check: &str, transform: &str) -> bool {
    EXPECTED_FAILURES.iter().any(|(c, t)| *c == check && *t == transform)
}

fn check_step<T: Real>(spec: &GridSpec<T>) -> Result<()> {
    let step = spec.hx().max(spec.hy()).as_f64();
    if step > MAX_FD_STEP {
        return Err(Error::GridTooCoarse {
            step,
            bound: MAX_FD_STEP,
        });
    }
    Ok(())
}

/// Central differences of `vals` at an interior node.
fn central<T: Real>(s: &SurfaceGrid<T>, vals: &[Quaternion<T>], idx: usize) -> Option<(Quaternion<T>, Quaternion<T>)> {
    if !s.valid[idx] {
        return None;
    }
    Some((s.dx_of(vals, idx)?, s.dy_of(vals, idx)?))
}

/// `|B(dPhi, dPhi)| <= tol |dPhi|^2` with `dPhi` evaluated analytically at
/// the grid nodes inside the domain and away from punctures. Branch points
/// (`|dPhi|` below `1e-10` of the median) carry no relative information and
/// are skipped, as the sampler masks them.
pub fn check_null<T: Real>(curve: &NullCurve<T>, spec: &GridSpec<T>, tol: T) -> Result<CheckReport> {
    let dom = &curve.data.domain;
    let r = T::lit(PUNCTURE_MASK_STEPS) * spec.hx().max(spec.hy());
    let diffs: Vec<Option<ComplexVector<T>>> = (0..spec.len())
        .map(|idx| {
            let z = spec.node_at(idx);
            if !dom.region.contains(z) || dom.is_near_puncture(z, r) {
                return None;
            }
            curve.differential(z).ok()
        })
        .collect();
    let mut speeds: Vec<T> = diffs.iter().flatten().map(|d| d.norm()).collect();
    speeds.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let floor = speeds.get(speeds.len() / 2).map_or(T::zero(), |m| *m * T::lit(1e-10));
    let residuals = diffs.iter().map(|d| {
        let d = d.as_ref()?;
        let n = d.norm();
        if !(n > floor) {
            return None;
        }
        Some(null_form(d, d).ok()?.norm() / (n * n))
    });
    CheckReport::from_residuals("null", tol, spec.len(), residuals)
}

/// `| |f_x| - |f_y| | <= tol |f_x|` and `|<f_x, f_y>| <= tol |f_x|^2`.
pub fn check_conformal<T: Real>(surface: &SurfaceGrid<T>, tol: T) -> Result<CheckReport> {
    check_step(&surface.spec)?;
    let residuals = (0..surface.len()).map(|idx| {
        let (fx, fy) = central(surface, &surface.f, idx)?;
        let a = fx.norm();
        if !(a > T::zero()) {
            return None;
        }
        Some(((a - fy.norm()).abs() / a).max(fx.dot(fy).abs() / (a * a)))
    });
    CheckReport::from_residuals("conformal", tol, surface.len(), residuals)
}

/// Five-point Laplacian of every coordinate, relative to `|f_x|`.
pub fn check_minimal<T: Real>(surface: &SurfaceGrid<T>, tol: T) -> Result<CheckReport> {
    check_step(&surface.spec)?;
    let residuals = (0..surface.len()).map(|idx| {
        let (fx, _) = central(surface, &surface.f, idx)?;
        let lap = surface.laplacian_of(&surface.f, idx)?;
        let a = fx.norm();
        (a > T::zero()).then(|| lap.norm() / a)
    });
    CheckReport::from_residuals("minimal", tol, surface.len(), residuals)
}

/// `|f_y - N f_x| <= tol |f_x|` and `|f_y + f_x R| <= tol |f_x|` with the
/// attached normals.
pub fn check_normal_eqs<T: Real>(surface: &SurfaceGrid<T>, tol: T) -> Result<CheckReport> {
    let (Some(nv), Some(rv)) = (surface.n.as_ref(), surface.r.as_ref()) else {
        return Err(Error::MissingNormals);
    };
    check_step(&surface.spec)?;
    let residuals = (0..surface.len()).map(|idx| {
        let (fx, fy) = central(surface, &surface.f, idx)?;
        let a = fx.norm();
        if !(a > T::zero()) {
            return None;
        }
        let left = (fy - nv[idx] * fx).norm();
        let right = (fy + fx * rv[idx]).norm();
        Some(left.max(right) / a)
    });
    CheckReport::from_residuals("normal_eqs", tol, surface.len(), residuals)
}

fn pointwise<T: Real>(name: &str, a: &SurfaceGrid<T>, b: &SurfaceGrid<T>, tol: T) -> Result<CheckReport> {
    let scale = a
        .valid_indices()
        .fold(T::one(), |m, i| m.max(a.f[i].norm()).max(a.fstar[i].norm()));
    let residuals = (0..a.len()).map(|i| (a.valid[i] && b.valid[i]).then(|| (a.f[i] - b.f[i]).norm() / scale));
    CheckReport::from_residuals(name, tol, a.len(), residuals)
}

/// `sfd(f)` against `Re(R_{n,m} L^mu R_{n,m}^{-1} Phi)` pointwise, relative
/// to the largest `|f|`, `|f*|`.
pub fn check_sfd_equals_goursat<T: Real>(
    surface: &SurfaceGrid<T>,
    params: &DressParams<T>,
    tol: T,
) -> Result<CheckReport> {
    let dressed = sfd(surface, params)?;
    check_dressed_matches_goursat(surface, &dressed, params, tol)
}

/// As [`check_sfd_equals_goursat`] for an already dressed surface.
pub fn check_dressed_matches_goursat<T: Real>(
    surface: &SurfaceGrid<T>,
    dressed: &SurfaceGrid<T>,
    params: &DressParams<T>,
    tol: T,
) -> Result<CheckReport> {
    let g = goursat_surface(surface, &dressing_matrix(params)?)?;
    pointwise("sfd_equals_goursat", dressed, &g, tol)
}

/// `sfd` of `f` against a sampled Goursat curve, after translating the
/// latter so both agree at the grid node nearest `z0`.
pub fn check_sfd_equals_goursat_curve<T: Real>(
    dressed: &SurfaceGrid<T>,
    goursat_sampled: &SurfaceGrid<T>,
    z0: Cx<T>,
    tol: T,
) -> Result<CheckReport> {
    let o = dressed.nearest_valid(z0).ok_or(Error::EmptyValidSet)?;
    let mut g = goursat_sampled.clone();
    if !g.valid[o] {
        return Err(Error::EmptyValidSet);
    }
    g.translate(dressed.f[o] - g.f[o], dressed.fstar[o] - g.fstar[o]);
    pointwise("sfd_equals_goursat", dressed, &g, tol)
}

/// Lopez-Ros with `sigma` against `sfd(mu(sigma), m0, m0)`.
///
/// For `|sigma| = 1` there is no dressing parameter (`mu` would be `1`);
/// the deformation is then the rotation by `arg sigma` about `k`, and that
/// rotation is the comparison.
pub fn check_lopezros_equals_sfd<T: Real>(surface: &SurfaceGrid<T>, sigma: Cx<T>, tol: T) -> Result<CheckReport> {
    let p = LopezRosParam::new(sigma)?;
    let a = lopez_ros(surface, &p)?;
    let b = if p.s.abs() <= T::lit(1e-12) {
        let h = p.t * T::lit(0.5);
        let q = Quaternion::new(h.cos(), T::zero(), T::zero(), h.sin());
        rigid_motion(surface, &RotationMap::new(q, q)?)
    } else {
        sfd(surface, &lopez_ros_as_sfd(&p)?)?
    };
    pointwise("lopezros_equals_sfd", &a, &b, tol)
}

/// Right normal `-f_x^{-1} f_y` of the Darboux transform against
/// `-(rho + R) R (rho + R)^{-1}` built from the source normal, relative.
pub fn check_darboux_right_normal<T: Real>(
    source: &SurfaceGrid<T>,
    darboux: &SurfaceGrid<T>,
    mu: Cx<T>,
    m: Quaternion<T>,
    tol: T,
) -> Result<CheckReport> {
    let rv = source.r.as_ref().ok_or(Error::MissingNormals)?;
    check_step(&darboux.spec)?;
    let rho = DressParams::new(mu, m, m)?.rho;
    let residuals = (0..darboux.len()).map(|idx| {
        let (fx, fy) = central(darboux, &darboux.f, idx)?;
        let r_fd = -(fx.inv()? * fy);
        let r_fd = r_fd / r_fd.norm();
        let d = rho + rv[idx];
        let expect = -(d * rv[idx] * d.inv()?);
        Some((r_fd - expect).norm())
    });
    CheckReport::from_residuals("darboux_right_normal", tol, darboux.len(), residuals)
}

/// Generalized Riccati equation of `T = f# - f`:
/// `dT + df - T dR (f rho + f*)^{-1} T = 0` in both directions, relative to
/// `|f_x|`.
pub fn check_riccati<T: Real>(
    source: &SurfaceGrid<T>,
    darboux: &SurfaceGrid<T>,
    mu: Cx<T>,
    m: Quaternion<T>,
    tol: T,
) -> Result<CheckReport> {
    let rv = source.r.as_ref().ok_or(Error::MissingNormals)?;
    check_step(&source.spec)?;
    let rho = DressParams::new(mu, m, m)?.rho;
    let tv: Vec<Quaternion<T>> = darboux.f.iter().zip(&source.f).map(|(a, b)| *a - *b).collect();
    let mut both = source.clone();
    for (v, w) in both.valid.iter_mut().zip(&darboux.valid) {
        *v = *v && *w;
    }
    let residuals = (0..both.len()).map(|idx| {
        let (tx, ty) = central(&both, &tv, idx)?;
        let (fx, fy) = central(&both, &both.f, idx)?;
        let (rx, ry) = central(&both, rv, idx)?;
        let t = tv[idx];
        let k = (both.f[idx] * rho + both.fstar[idx]).inv()?;
        let ex = tx + fx - t * rx * k * t;
        let ey = ty + fy - t * ry * k * t;
        let a = fx.norm();
        (a > T::zero()).then(|| ex.norm().max(ey.norm()) / a)
    });
    CheckReport::from_residuals("riccati", tol, both.len(), residuals)
}

/// `dR + R *dR = 0` for the attached right normal, i.e.
/// `R_x + R R_y = 0` and `R_y - R R_x = 0`, relative to `|R_x| + |R_y|`.
pub fn check_right_normal_antiholomorphic<T: Real>(surface: &SurfaceGrid<T>, tol: T) -> Result<CheckReport> {
    let rv = surface.r.as_ref().ok_or(Error::MissingNormals)?;
    check_step(&surface.spec)?;
    let residuals = (0..surface.len()).map(|idx| {
        let (rx, ry) = central(surface, rv, idx)?;
        let r = rv[idx];
        let scale = rx.norm() + ry.norm();
        (scale > T::zero()).then(|| (rx + r * ry).norm().max((ry - r * rx).norm()) / scale)
    });
    CheckReport::from_residuals("right_normal_antiholomorphic", tol, surface.len(), residuals)
}

/// Attached normals against `N = f_y f_x^{-1}`, `R = -f_x^{-1} f_y` from
/// central differences.
pub fn check_normals_fd<T: Real>(surface: &SurfaceGrid<T>, tol: T) -> Result<CheckReport> {
    let (Some(nv), Some(rv)) = (surface.n.as_ref(), surface.r.as_ref()) else {
        return Err(Error::MissingNormals);
    };
    check_step(&surface.spec)?;
    let residuals = (0..surface.len()).map(|idx| {
        let (fx, fy) = central(surface, &surface.f, idx)?;
        let xi = fx.inv()?;
        let (n, r) = (fy * xi, -(xi * fy));
        let (n, r) = (n / n.norm(), r / r.norm());
        Some((n - nv[idx]).norm().max((r - rv[idx]).norm()))
    });
    CheckReport::from_residuals("normals_fd", tol, surface.len(), residuals)
}

/// Ratio of a check's residual at step `h` to the residual at `h / 2`.
/// Second-order checks give about `4`.
pub fn step_halving_ratio<T, S, C>(h: T, mut sample: S, mut check: C) -> Result<f64>
where
    T: Real,
    S: FnMut(T) -> Result<SurfaceGrid<T>>,
    C: FnMut(&SurfaceGrid<T>) -> Result<CheckReport>,
{
    let coarse = check(&sample(h)?)?;
    let fine = check(&sample(h * T::lit(0.5))?)?;
    Ok(coarse.max_residual / fine.max_residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lmu_matrix;
    use crate::catalog;
    use crate::holomorphic::HoloFunction;
    use crate::nullcurve::{DataKind, DomainSpec, Region, WeierstrassData};
    use crate::transforms::{
        associated, associated_willmore, conjugate, goursat, lopez_ros, mu_darboux, sfd_mu, AssocParams, Side,
    };
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::SQRT_2;

    type Q = Quaternion<f64>;
    type S = SurfaceGrid<f64>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn patch(e: &catalog::CatalogEntry<f64>, z0: Complex64, h: f64) -> S {
        e.closed_form_grid(&GridSpec::patch(z0, h, 3)).unwrap().unwrap()
    }

    fn cat(z0: Complex64) -> S {
        patch(&catalog::catenoid(), z0, 1e-3)
    }

    fn enn(z0: Complex64) -> S {
        patch(&catalog::enneper(), z0, 1e-3)
    }

    fn rand_q(rng: &mut impl Rng) -> Q {
        Q::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    fn rand_mu(rng: &mut impl Rng) -> Complex64 {
        loop {
            let mu = Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(-3.0..3.0));
            if (mu - 1.0).norm() > 0.2 {
                return mu;
            }
        }
    }

    #[test]
    fn null_check() {
        let e = catalog::catenoid::<f64>();
        assert!(check_null(&e.curve(), &e.grid, 1e-10).unwrap().pass);
        let sc = catalog::scherk1::<f64>();
        let p = DressParams::new(c(0.4, -0.7), Q::one(), Q::one()).unwrap();
        let g = goursat(&sc.curve(), &lmu_matrix(&p, 3).unwrap()).unwrap();
        let r = check_null(&g, &sc.grid, 1e-10).unwrap();
        assert!(r.pass && r.masked > 0, "{r:?}");
        let bad = WeierstrassData::new(
            DataKind::Differential {
                components: vec![
                    HoloFunction::real(1.0),
                    HoloFunction::real(1.0),
                    HoloFunction::real(0.0),
                ],
            },
            DomainSpec::new(
                Region::Rect {
                    x0: -1.0,
                    x1: 1.0,
                    y0: -1.0,
                    y1: 1.0,
                },
                vec![],
                c(0.0, 0.0),
                vec![],
            )
            .unwrap(),
        )
        .unwrap();
        let r = check_null(
            &NullCurve::from_data(bad),
            &GridSpec::new(-1.0, 1.0, -1.0, 1.0, 5, 5).unwrap(),
            1e-10,
        );
        assert!(!r.unwrap().pass);
    }

    #[test]
    fn conformal_check() {
        for z0 in [c(0.0, 0.0), c(1.2, -2.0), c(-1.5, 0.4)] {
            let r = check_conformal(&cat(z0), 1e-6).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let spec = GridSpec::patch(c(0.0, 0.0), 1e-3, 2);
        let sheared = S::from_fn(spec, 3, |z| Some((Q::imag(z.re, z.im, z.re + z.im), Q::zero())));
        assert!(!check_conformal(&sheared, 1e-6).unwrap().pass);
        let coarse = catalog::catenoid::<f64>()
            .closed_form_grid(&catalog::catenoid().grid)
            .unwrap()
            .unwrap();
        assert!(matches!(
            check_conformal(&coarse, 1e-6),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn minimal_check() {
        assert!(check_minimal(&cat(c(0.5, 0.5)), 1e-4).unwrap().pass);
        assert!(check_minimal(&enn(c(-0.5, 0.7)), 1e-4).unwrap().pass);
        let spec = GridSpec::patch(c(0.2, 0.1), 1e-3, 2);
        let graph = S::from_fn(spec, 3, |z| Some((Q::imag(z.re, z.im, z.norm_sqr()), Q::zero())));
        assert!(!check_minimal(&graph, 1e-4).unwrap().pass);
    }

    #[test]
    fn normal_equations_check() {
        let s = cat(c(0.3, 0.9));
        assert!(check_normal_eqs(&s, 1e-6).unwrap().pass);
        let mut flipped = s.clone();
        flipped.n = flipped.n.map(|v| v.into_iter().map(|q| -q).collect());
        assert!(!check_normal_eqs(&flipped, 1e-6).unwrap().pass);
        let p = AssocParams::new(Q::new(0.6, 0.0, 0.0, 0.0), Q::new(0.0, 0.48, 0.0, 0.64), Side::Right).unwrap();
        assert!(check_normal_eqs(&associated(&s, &p).unwrap(), 1e-6).unwrap().pass);
        let mut bare = s;
        bare.n = None;
        assert!(matches!(check_normal_eqs(&bare, 1e-6), Err(Error::MissingNormals)));
    }

    #[test]
    fn sfd_goursat_equivalence() {
        let s = catalog::catenoid::<f64>()
            .closed_form_grid(&catalog::catenoid().grid)
            .unwrap()
            .unwrap();
        let p = DressParams::new(
            c(0.0, -0.5),
            Q::new(1.0, 0.0, 0.0, 1.0) * (3.0 / SQRT_2),
            Q::new(0.0, 1.0, -1.0, 0.0) * (0.5 / SQRT_2),
        )
        .unwrap();
        assert!(check_sfd_equals_goursat(&s, &p, 1e-10).unwrap().pass);
        let p = DressParams::new(Complex64::from_polar(1.0, 2.0), Q::one(), Q::one()).unwrap();
        let r = check_sfd_equals_goursat(&s, &p, 1e-10).unwrap();
        assert!(r.pass && sfd(&s, &p).unwrap().max_f_diff(&s) < 1e-12);
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let e = catalog::enneper::<f64>().sample(&catalog::enneper().grid).unwrap();
        for _ in 0..5 {
            let p = DressParams::new(rand_mu(&mut rng), rand_q(&mut rng), rand_q(&mut rng)).unwrap();
            assert!(check_sfd_equals_goursat(&e, &p, 1e-8).unwrap().pass);
        }
        // a sign error in the conjugate is caught
        let p = DressParams::new(c(-0.5, 0.3), rand_q(&mut rng), rand_q(&mut rng)).unwrap();
        let mut wrong = e.clone();
        wrong.fstar.iter_mut().for_each(|q| *q = -*q);
        let dressed = sfd(&wrong, &p).unwrap();
        assert!(!check_dressed_matches_goursat(&e, &dressed, &p, 1e-8).unwrap().pass);
    }

    #[test]
    fn sfd_against_sampled_goursat_curve() {
        let e = catalog::scherk1::<f64>();
        let s = e.sample(&e.grid).unwrap();
        let p = DressParams::new(c(-0.4, 0.2), Q::new(1.0, 2.0, 0.0, -1.0), Q::new(0.5, 0.0, 1.0, 1.0)).unwrap();
        let g = goursat(&e.curve(), &dressing_matrix(&p).unwrap()).unwrap();
        let gs = crate::nullcurve::sample_surface(&g, &e.grid).unwrap();
        let r = check_sfd_equals_goursat_curve(&sfd(&s, &p).unwrap(), &gs, e.data.domain.basepoint, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn lopez_ros_sfd_equivalence() {
        let s = catalog::catenoid::<f64>()
            .closed_form_grid(&catalog::catenoid().grid)
            .unwrap()
            .unwrap();
        assert!(check_lopezros_equals_sfd(&s, c(2.0, 0.0), 1e-10).unwrap().pass);
        assert!(check_lopezros_equals_sfd(&s, c(1.0, 0.0), 1e-10).unwrap().pass);
        assert!(
            check_lopezros_equals_sfd(&s, Complex64::from_polar(1.0, 0.8), 1e-10)
                .unwrap()
                .pass
        );
        let e = catalog::enneper::<f64>().sample(&catalog::enneper().grid).unwrap();
        assert!(check_lopezros_equals_sfd(&e, c(1.0, 1.0).exp(), 1e-8).unwrap().pass);
        assert!(check_lopezros_equals_sfd(&e, c(0.0, 0.0), 1e-8).is_err());
    }

    #[test]
    fn darboux_checks() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let e = catalog::enneper::<f64>();
        for s in [
            patch(&catalog::catenoid(), c(0.4, -0.6), 5e-4),
            patch(&e, c(0.5, 0.3), 5e-4),
        ] {
            for _ in 0..4 {
                let (mu, m) = (rand_mu(&mut rng), rand_q(&mut rng));
                let d = mu_darboux(&s, mu, m).unwrap();
                let r = check_darboux_right_normal(&s, &d, mu, m, 1e-6).unwrap();
                assert!(r.pass, "{r:?}");
                let r = check_riccati(&s, &d, mu, m, 1e-4).unwrap();
                assert!(r.pass, "{r:?}");
                assert!(check_conformal(&d, 1e-6).unwrap().pass);
                assert!(check_normals_fd(&d, 1e-6).unwrap().pass);
                assert!(!check_minimal(&d, 1e-4).unwrap().pass);
            }
        }
    }

    #[test]
    fn willmore_checks() {
        for s in [cat(c(0.4, -0.6)), enn(c(0.5, 0.3))] {
            let w = associated_willmore(&s).unwrap();
            let r = check_right_normal_antiholomorphic(&w, 1e-4).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(check_conformal(&w, 1e-6).unwrap().pass);
            assert!(check_normals_fd(&w, 1e-6).unwrap().pass);
            assert!(!check_minimal(&w, 1e-4).unwrap().pass);
        }
    }

    #[test]
    fn minimal_transforms_pass_the_suite() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        let s = cat(c(0.2, 0.4));
        let p = DressParams::new(rand_mu(&mut rng), rand_q(&mut rng), rand_q(&mut rng)).unwrap();
        let outputs = [
            conjugate(&s),
            associated(
                &s,
                &AssocParams::new(rand_q(&mut rng), rand_q(&mut rng), Side::Left).unwrap(),
            )
            .unwrap(),
            sfd_mu(&s, rand_mu(&mut rng)).unwrap(),
            sfd(&s, &p).unwrap(),
            lopez_ros(&s, &LopezRosParam::new(c(0.7, 1.3)).unwrap()).unwrap(),
        ];
        for out in &outputs {
            assert!(check_conformal(out, 1e-6).unwrap().pass);
            assert!(check_minimal(out, 1e-4).unwrap().pass);
            assert!(check_normal_eqs(out, 1e-6).unwrap().pass);
        }
    }

    #[test]
    fn residuals_converge_at_second_order() {
        let e = catalog::catenoid::<f64>();
        let z0 = c(0.7, 0.3);
        let sample = |h: f64| e.closed_form_grid(&GridSpec::patch(z0, h, 1)).unwrap();
        let checks: [fn(&S, f64) -> Result<CheckReport>; 3] = [check_conformal, check_minimal, check_normal_eqs];
        for check in checks {
            let ratio = step_halving_ratio(8e-3, sample, |s| check(s, 1.0)).unwrap();
            assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn expected_failures_and_serialization() {
        assert!(is_expected_failure("minimal", "darboux"));
        assert!(is_expected_failure("minimal", "willmore"));
        assert!(!is_expected_failure("conformal", "darboux"));
        assert!(!is_expected_failure("minimal", "sfd"));
        let r = check_conformal(&cat(c(0.0, 0.0)), 1e-6).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<CheckReport>(&js).unwrap(), r);
        let failing = CheckReport { pass: false, ..r };
        assert!(failing.is_unexpected_failure());
        assert!(!failing.expecting_failure(true).is_unexpected_failure());
    }
}
