//! Null curves from Weierstrass data, sampled surfaces and their normals.
//!
//! 3-space surfaces sit in `Im H` with `Phi` components `(1, 2, 3)` on
//! `(i, j, k)`; 4-space surfaces use `(0, 1, 2, 3)` on `(1, i, j, k)`.

mod curve;
mod data;
mod grid;

pub(crate) use curve::gauss_from_differential;
pub use curve::{integrate_phi, weierstrass_from_phi, NullCurve};
pub use data::{differential_at, DataKind, DomainSpec, Generator, Region, WeierstrassData};
pub use grid::{normals, sample_surface, stereographic, GridSpec, NormalMethod, SurfaceGrid, PUNCTURE_MASK_STEPS};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{null_form, ComplexVector, Quaternion};
    use crate::error::Error;
    use crate::holomorphic::{HoloFunction, PathSpec};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    type F = HoloFunction<f64>;
    type Q = Quaternion<f64>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rect(x0: f64, x1: f64, y0: f64, y1: f64, punct: Vec<Complex64>, base: Complex64) -> DomainSpec<f64> {
        DomainSpec::new(Region::Rect { x0, x1, y0, y1 }, punct, base, vec![]).unwrap()
    }

    fn enneper() -> NullCurve<f64> {
        let d = WeierstrassData::new(
            DataKind::R3 {
                g: F::z(),
                omega: F::real(1.0),
            },
            rect(-1.5, 1.5, -1.5, 1.5, vec![], c(0.0, 0.0)),
        )
        .unwrap();
        NullCurve::from_data(d)
    }

    fn catenoid() -> NullCurve<f64> {
        let iu = || F::complex(0.0, 1.0);
        let g = (F::z().exp() - iu()) / (F::z().exp() + iu());
        let omega = F::real(1.0) - iu() * F::z().sinh();
        let d = WeierstrassData::new(
            DataKind::R3 { g, omega },
            rect(-2.0, 2.0, -PI, 2.0 * PI, vec![], c(0.0, 0.0)),
        )
        .unwrap();
        NullCurve::new(d, ComplexVector::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])).unwrap()
    }

    fn scherk() -> NullCurve<f64> {
        let punct = vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
        let omega = F::real(-4.0) / (F::z().powi(4) - F::real(1.0));
        let d = WeierstrassData::new(
            DataKind::R3 { g: F::z(), omega },
            rect(-2.0, 2.0, -2.0, 2.0, punct, c(0.0, 0.0)),
        )
        .unwrap();
        NullCurve::from_data(d)
    }

    fn cat_phi(z: Complex64) -> Vec<Complex64> {
        vec![z, z.cosh(), c(0.0, -1.0) * z.sinh()]
    }

    #[test]
    fn enneper_differential() {
        let z = c(0.3, -0.7);
        let d = differential_at(&enneper().data, z).unwrap();
        let e = [(1.0 - z * z) * 0.5, c(0.0, 0.5) * (1.0 + z * z), z];
        for k in 0..3 {
            assert!((d[k] - e[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn catenoid_differential_at_origin() {
        let d = differential_at(&catenoid().data, c(0.0, 0.0)).unwrap();
        assert!((d[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(d[1].norm() < 1e-15);
        assert!((d[2] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn scherk_differential_is_null() {
        let s = scherk();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let d = s.differential(z).unwrap();
            assert!(null_form(&d, &d).unwrap().norm() <= 1e-12 * d.norm().powi(2));
        }
    }

    #[test]
    fn pole_of_integrand_is_an_error() {
        assert!(matches!(
            scherk().differential(c(1.0, 0.0)),
            Err(Error::Singularity(..))
        ));
    }

    #[test]
    fn empty_path_returns_basepoint_value() {
        let cat = catenoid();
        let v = integrate_phi(&cat, &PathSpec::point(c(0.0, 0.0))).unwrap();
        assert_eq!(v, cat.phi0);
        assert!(integrate_phi(&cat, &PathSpec::point(c(1.0, 0.0))).is_err());
    }

    #[test]
    fn catenoid_and_enneper_integrals_match_antiderivatives() {
        let cat = catenoid();
        let en = enneper();
        for &z in &[c(1.3, 0.4), c(-1.9, 2.9), c(0.5, -3.0)] {
            let p = PathSpec::segment(c(0.0, 0.0), z).unwrap();
            let v = integrate_phi(&cat, &p).unwrap();
            let e = cat_phi(z);
            for k in 0..3 {
                assert!((v[k] - e[k]).norm() <= 1e-10, "{z} {k}");
            }
            let zz = z * 0.5;
            let p = PathSpec::segment(c(0.0, 0.0), zz).unwrap();
            let v = integrate_phi(&en, &p).unwrap();
            let e = [
                zz / 2.0 - zz.powi(3) / 6.0,
                c(0.0, 1.0) * (zz / 2.0 + zz.powi(3) / 6.0),
                zz * zz / 2.0,
            ];
            for k in 0..3 {
                assert!((v[k] - e[k]).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn catenoid_samples_match_closed_form() {
        let cat = catenoid();
        let spec = GridSpec::new(-1.0, 1.0, 0.0, 2.0 * PI, 5, 9).unwrap();
        let s = sample_surface(&cat, &spec).unwrap();
        assert_eq!(s.valid_count(), 45);
        let at = |z: Complex64| s.nearest_valid(z).unwrap();
        let o = at(c(0.0, 0.0));
        assert!((s.f[o] - Q::j()).max_abs() < 1e-12);
        assert!(s.fstar[o].max_abs() < 1e-12);
        // j e^{-i pi/2} = -j i = k
        let q = at(c(0.0, PI / 2.0));
        assert!((s.f[q] - Q::k()).max_abs() < 1e-10);
        let top = at(c(0.0, 2.0 * PI));
        assert!((s.fstar[top] - s.fstar[o] - Q::i() * (2.0 * PI)).max_abs() < 1e-10);
        for idx in s.valid_indices() {
            let (x, y) = (s.z(idx).re, s.z(idx).im);
            let e_iy = Q::new(y.cos(), -y.sin(), 0.0, 0.0);
            let f = Q::i() * x + Q::j() * e_iy * x.cosh();
            let fs = Q::i() * y + Q::j() * Q::i() * e_iy * x.sinh();
            assert!((s.f[idx] - f).max_abs() < 1e-10);
            assert!((s.fstar[idx] - fs).max_abs() < 1e-10);
        }
    }

    #[test]
    fn normals_from_gauss_map() {
        let cat = catenoid();
        let spec = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 3, 3).unwrap();
        let s = normals(&sample_surface(&cat, &spec).unwrap(), NormalMethod::FromG(&cat)).unwrap();
        let o = s.nearest_valid(c(0.0, 0.0)).unwrap();
        let n = s.n.as_ref().unwrap()[o];
        assert!((n + Q::j()).max_abs() < 1e-14);
        for idx in s.valid_indices() {
            let (x, y) = (s.z(idx).re, s.z(idx).im);
            let e_iy = Q::new(y.cos(), -y.sin(), 0.0, 0.0);
            let closed = (Q::i() * x.sinh() - Q::j() * e_iy) / x.cosh();
            assert!((s.n.as_ref().unwrap()[idx] - closed).max_abs() < 1e-12);
            assert_eq!(s.n.as_ref().unwrap()[idx], s.r.as_ref().unwrap()[idx]);
        }
        // planar-end data g = z^2 at z = 1 gives N = i
        assert!((stereographic(c(1.0, 0.0)) - Q::i()).max_abs() < 1e-15);
    }

    #[test]
    fn finite_difference_normals_agree_with_gauss_map() {
        let cat = catenoid();
        let spec = GridSpec::patch(c(0.4, 0.7), 1e-3, 3);
        let s = sample_surface(&cat, &spec).unwrap();
        let a = normals(&s, NormalMethod::FromG(&cat)).unwrap();
        let b = normals(&s, NormalMethod::FiniteDifference).unwrap();
        let mut checked = 0;
        for idx in b.valid_indices() {
            let d = (a.n.as_ref().unwrap()[idx] - b.n.as_ref().unwrap()[idx]).norm();
            let e = (a.r.as_ref().unwrap()[idx] - b.r.as_ref().unwrap()[idx]).norm();
            assert!(d < 1e-4 && e < 1e-4, "{d} {e}");
            checked += 1;
        }
        assert_eq!(checked, 25);
    }

    #[test]
    fn four_space_normals_agree_with_finite_differences() {
        // g1 = z, g2 = z^2 + 1/2, omega = dz
        let d = WeierstrassData::new(
            DataKind::R4 {
                g1: F::z(),
                g2: F::z().powi(2) + F::real(0.5),
                omega: F::real(1.0),
            },
            rect(-1.0, 1.0, -1.0, 1.0, vec![], c(0.0, 0.0)),
        )
        .unwrap();
        let curve = NullCurve::from_data(d);
        let spec = GridSpec::patch(c(0.3, -0.2), 1e-3, 2);
        let s = sample_surface(&curve, &spec).unwrap();
        assert_eq!(s.dim, 4);
        let a = normals(&s, NormalMethod::FromG(&curve)).unwrap();
        let b = normals(&s, NormalMethod::FiniteDifference).unwrap();
        for idx in b.valid_indices() {
            let d = (a.n.as_ref().unwrap()[idx] - b.n.as_ref().unwrap()[idx]).norm();
            let e = (a.r.as_ref().unwrap()[idx] - b.r.as_ref().unwrap()[idx]).norm();
            assert!(d < 1e-4 && e < 1e-4, "{d} {e}");
        }
    }

    #[test]
    fn normal_equations_and_conformality_on_catenoid() {
        let cat = catenoid();
        let spec = GridSpec::patch(c(-0.8, 1.1), 1e-3, 3);
        let s = normals(&sample_surface(&cat, &spec).unwrap(), NormalMethod::FromG(&cat)).unwrap();
        for idx in s.valid_indices() {
            let Some((fx, fy)) = s.df(idx) else { continue };
            let n = s.n.as_ref().unwrap()[idx];
            let r = s.r.as_ref().unwrap()[idx];
            assert!((fy - n * fx).norm() <= 1e-6 * fx.norm());
            assert!((fy + fx * r).norm() <= 1e-6 * fx.norm());
            assert!((fx.norm() - fy.norm()).abs() <= 1e-6 * fx.norm());
            assert!(fx.dot(fy).abs() <= 1e-6 * fx.norm_sqr());
            // df* = -*df
            let fsx = s.dx_of(&s.fstar, idx).unwrap();
            let fsy = s.dy_of(&s.fstar, idx).unwrap();
            assert!((fsx + fy).norm() <= 1e-4 && (fsy - fx).norm() <= 1e-4);
        }
    }

    #[test]
    fn punctures_are_masked() {
        let s = scherk();
        let spec = GridSpec::new(-2.0, 2.0, -2.0, 2.0, 41, 41).unwrap();
        let g = sample_surface(&s, &spec).unwrap();
        for p in &s.data.domain.punctures {
            let idx = g.spec.len();
            let near = (0..idx).filter(|i| (g.z(*i) - p).norm() < 0.29).collect::<Vec<_>>();
            assert!(!near.is_empty());
            assert!(near.iter().all(|i| !g.valid[*i]));
        }
        assert!(g.valid_count() > 1500);
    }

    #[test]
    fn unreachable_grid_is_an_error() {
        let s = scherk();
        let spec = GridSpec::new(0.95, 1.05, -0.05, 0.05, 3, 3).unwrap();
        assert!(matches!(sample_surface(&s, &spec), Err(Error::Unreachable)));
    }

    #[test]
    fn weierstrass_round_trip() {
        let cat = catenoid();
        let data = weierstrass_from_phi(&cat).unwrap();
        let DataKind::R3 { g, .. } = &data.kind else {
            panic!("3-space data expected")
        };
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        for _ in 0..20 {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0));
            let e = (z.exp() - c(0.0, 1.0)) / (z.exp() + c(0.0, 1.0));
            let v = g.eval(z).unwrap();
            assert!((v - e).norm() <= 1e-10 * (1.0 + e.norm()));
            let a = differential_at(&data, z).unwrap();
            let b = cat.differential(z).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-10 * (1.0 + b.norm()));
        }
        let en = weierstrass_from_phi(&enneper()).unwrap();
        let DataKind::R3 { g, omega } = &en.kind else { panic!() };
        let z = c(0.4, 0.1);
        assert!((g.eval(z).unwrap() - z).norm() < 1e-14);
        assert!((omega.eval(z).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn degenerate_denominator() {
        let d = WeierstrassData::new(
            DataKind::Differential {
                components: vec![F::complex(0.0, 1.0), F::real(1.0), F::real(0.0)],
            },
            rect(-1.0, 1.0, -1.0, 1.0, vec![], c(0.0, 0.0)),
        )
        .unwrap();
        assert!(matches!(
            weierstrass_from_phi(&NullCurve::from_data(d)),
            Err(Error::DegenerateDenominator)
        ));
    }
}
