//! Closed-form transformations of sampled minimal surfaces.
//!
//! Every transform is a pointwise map of `(f, f*, N, R)`; nodes where a map
//! is undefined are masked instead of failing the whole grid. Equivalences
//! between transforms hold exactly (not only up to translation) because all
//! of them are linear in `(f, f*)` and share the basepoint convention
//! `f*(z0) = Im Phi(z0)`.

mod dressing;
mod family;
mod frame;
mod params;
mod willmore;

pub(crate) use dressing::hyperbolic_mix;
pub use dressing::{
    check_mu, dressing_matrix, goursat, goursat_surface, lopez_ros, lopez_ros_as_sfd, lopez_ros_data, lopez_ros_matrix,
    rigid_motion, sfd, sfd_direct, sfd_mu,
};
pub use family::{associated, conjugate};
pub use params::{AssocParams, DressParams, LopezRosParam, Side};
pub use willmore::{associated_willmore, associated_willmore_r3, mu_darboux, right_normal_is_constant};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lmu_matrix, Quaternion};
    use crate::catalog;
    use crate::nullcurve::{normals, sample_surface, GridSpec, NormalMethod, SurfaceGrid};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    type Q = Quaternion<f64>;
    type S = SurfaceGrid<f64>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(w: f64, x: f64, y: f64, z: f64) -> Q {
        Q::new(w, x, y, z)
    }

    fn cat_grid(spec: GridSpec<f64>) -> S {
        catalog::catenoid::<f64>().closed_form_grid(&spec).unwrap().unwrap()
    }

    fn cat_default() -> S {
        cat_grid(GridSpec::new(-2.0, 2.0, -3.0, 3.0, 25, 25).unwrap())
    }

    fn enneper() -> S {
        let e = catalog::enneper::<f64>();
        e.sample(&GridSpec::new(-1.2, 1.2, -1.2, 1.2, 21, 21).unwrap()).unwrap()
    }

    /// `e^{-i y}` as a quaternion.
    fn emiy(y: f64) -> Q {
        q(y.cos(), -y.sin(), 0.0, 0.0)
    }

    fn rand_unit(rng: &mut impl Rng) -> Q {
        let v = q(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        v / v.norm()
    }

    fn rand_mu(rng: &mut impl Rng) -> Complex64 {
        loop {
            let mu = Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(-3.0..3.0));
            if (mu - 1.0).norm() > 0.2 {
                return mu;
            }
        }
    }

    fn max_normal_diff(a: &S, b: &S) -> f64 {
        let (an, ar) = (a.n.as_ref().unwrap(), a.r.as_ref().unwrap());
        let (bn, br) = (b.n.as_ref().unwrap(), b.r.as_ref().unwrap());
        a.valid_indices()
            .filter(|i| b.valid[*i])
            .map(|i| (an[i] - bn[i]).norm().max((ar[i] - br[i]).norm()))
            .fold(0.0, f64::max)
    }

    /// Stored normals against `N = f_y f_x^{-1}`, `R = -f_x^{-1} f_y` from
    /// central differences, at interior nodes.
    fn normals_match_fd(s: &S, tol: f64) {
        let fd = normals(s, NormalMethod::FiniteDifference).unwrap();
        let mut count = 0;
        for i in fd.valid_indices() {
            let (n, r) = (s.n.as_ref().unwrap()[i], s.r.as_ref().unwrap()[i]);
            let (nf, rf) = (fd.n.as_ref().unwrap()[i], fd.r.as_ref().unwrap()[i]);
            assert!((n - nf).norm() < tol, "N at {}: {n:?} vs {nf:?}", s.z(i));
            assert!((r - rf).norm() < tol, "R at {}: {r:?} vs {rf:?}", s.z(i));
            count += 1;
        }
        assert!(count > 0);
    }

    #[test]
    fn conjugate_of_catenoid_is_helicoid() {
        let s = cat_default();
        let h = conjugate(&s);
        for i in h.valid_indices() {
            let (x, y) = (s.z(i).re, s.z(i).im);
            let e = Q::i() * y + Q::j() * Q::i() * emiy(y) * x.sinh();
            assert!((h.f[i] - e).norm() < 1e-12);
        }
        assert_eq!(h.n, s.n);
        let back = conjugate(&h);
        for i in back.valid_indices() {
            assert!((back.f[i] + s.f[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn conjugate_of_plane_is_plane() {
        let spec = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 5, 5).unwrap();
        // Phi = (z, -i z, 0) on the (i, j) coordinates
        let s = S::from_fn(spec, 3, |z| Some((Q::imag(z.re, z.im, 0.0), Q::imag(z.im, -z.re, 0.0))));
        let h = conjugate(&s);
        for i in h.valid_indices() {
            let z = s.z(i);
            assert_eq!(h.f[i], Q::imag(z.im, -z.re, 0.0));
        }
    }

    #[test]
    fn associated_identity_and_catenoid_families() {
        let s = cat_default();
        let id = associated(&s, &AssocParams::new(Q::one(), Q::zero(), Side::Right).unwrap()).unwrap();
        assert!(id.max_f_diff(&s) == 0.0 && max_normal_diff(&id, &s) < 1e-15);
        let (p, qq) = (q(2.0, 0.0, 0.0, 0.0) / 6f64.sqrt(), q(1.0, 1.0, 0.0, 0.0) / 6f64.sqrt());
        let right = associated(&s, &AssocParams::new(p, qq, Side::Right).unwrap()).unwrap();
        let left = associated(&s, &AssocParams::new(p, qq, Side::Left).unwrap()).unwrap();
        for i in s.valid_indices() {
            let (x, y) = (s.z(i).re, s.z(i).im);
            let e = Q::i() * (p * x + qq * y) + Q::j() * emiy(y) * (p * x.cosh() + Q::i() * qq * x.sinh());
            assert!((right.f[i] - e).norm() < 1e-12, "right at {}", s.z(i));
            let e = (p * x + qq * y) * Q::i() + (p * x.cosh() - qq * Q::i() * x.sinh()) * Q::j() * emiy(y);
            assert!((left.f[i] - e).norm() < 1e-12, "left at {}", s.z(i));
        }
    }

    #[test]
    fn classical_family_is_isometric() {
        let s = cat_grid(GridSpec::patch(c(0.4, 0.7), 1e-3, 3));
        let out = associated(&s, &AssocParams::classical(0.9, Side::Right)).unwrap();
        for i in s.valid_indices() {
            if let (Some((a, _)), Some((b, _))) = (s.df(i), out.df(i)) {
                assert!((a.norm() - b.norm()).abs() <= 1e-5 * a.norm());
            }
        }
    }

    #[test]
    fn associated_normals_match_finite_differences() {
        let (p, qq) = (
            q(1.0, 0.0, 0.0, 0.0) / 2f64.sqrt(),
            q(1.0, 1.0, -1.0, -1.0) / (2.0 * 2f64.sqrt()),
        );
        for side in [Side::Right, Side::Left] {
            let s = cat_grid(GridSpec::patch(c(0.3, -0.8), 1e-3, 2));
            let out = associated(&s, &AssocParams::new(p, qq, side).unwrap()).unwrap();
            assert_eq!(out.dim, 4);
            normals_match_fd(&out, 1e-6);
        }
    }

    #[test]
    fn associated_masks_zeros_of_p_plus_rq() {
        let s = cat_default();
        // R(0, 0) = -j, so p + R q vanishes there for p = 1, q = -j
        let out = associated(&s, &AssocParams::new(Q::one(), -Q::j(), Side::Right).unwrap()).unwrap();
        let origin = s.nearest_valid(c(0.0, 0.0)).unwrap();
        assert!(s.z(origin).norm() < 1e-12);
        assert!(!out.valid[origin]);
        assert_eq!(out.masked_count(), s.masked_count() + 1);
    }

    #[test]
    fn sfd_mu_is_trivial_on_the_unit_circle() {
        let s = cat_default();
        for k in 1..8 {
            let out = sfd_mu(&s, Complex64::from_polar(1.0, 0.8 * k as f64)).unwrap();
            assert!(out.max_f_diff(&s) <= 1e-12 && out.max_fstar_diff(&s) <= 1e-12);
            assert!(max_normal_diff(&out, &s) <= 1e-12);
        }
    }

    #[test]
    fn sfd_mu_reparametrizes_the_catenoid() {
        let s = cat_default();
        for mu in [c(-0.5, 0.0), c(0.0, -0.5), c(-0.5, 0.5), c(2.0, 1.0)] {
            let p = DressParams::new(mu, Q::one(), Q::one()).unwrap();
            let out = sfd_mu(&s, mu).unwrap();
            for i in out.valid_indices() {
                let (x, y) = (s.z(i).re, s.z(i).im);
                let e = Q::i() * x + Q::j() * emiy(y + p.t) * (x + p.s).cosh();
                assert!((out.f[i] - e).norm() <= 1e-8 * (1.0 + e.norm()), "{mu} at {}", s.z(i));
            }
            let n = out.n.as_ref().unwrap();
            for i in out.valid_indices() {
                let (x, y) = (s.z(i).re + p.s, s.z(i).im + p.t);
                let e = Q::imag(x.tanh(), -y.cos() / x.cosh(), -y.sin() / x.cosh());
                assert!((n[i] - e).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn sfd_mu_equals_dressing_matrix_on_phi() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for s in [cat_default(), enneper()] {
            for _ in 0..5 {
                let mu = rand_mu(&mut rng);
                let p = DressParams::new(mu, Q::one(), Q::one()).unwrap();
                let a = goursat_surface(&s, &lmu_matrix(&p, 4).unwrap()).unwrap();
                let b = sfd_mu(&s, mu).unwrap();
                assert!(a.max_f_diff(&b) <= 1e-10 && a.max_fstar_diff(&b) <= 1e-10);
                assert!(max_normal_diff(&a, &b) <= 1e-10);
            }
        }
    }

    #[test]
    fn sfd_rotation_route_matches_direct_formula() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for s in [cat_default(), enneper()] {
            for _ in 0..10 {
                let p = DressParams::new(rand_mu(&mut rng), rand_unit(&mut rng), rand_unit(&mut rng)).unwrap();
                let a = sfd(&s, &p).unwrap();
                let b = sfd_direct(&s, &p).unwrap();
                let scale = s.valid_indices().map(|i| s.f[i].norm()).fold(1.0, f64::max);
                assert!(a.max_f_diff(&b) <= 1e-10 * scale, "{}", a.max_f_diff(&b));
                assert!(a.max_fstar_diff(&b) <= 1e-10 * scale);
                assert!(max_normal_diff(&a, &b) <= 1e-8);
                let g = goursat_surface(&s, &dressing_matrix(&p).unwrap()).unwrap();
                assert!(a.max_f_diff(&g) <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn sfd_parameter_symmetries() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        let s = cat_default();
        for _ in 0..5 {
            let (mu, m, n) = (rand_mu(&mut rng), rand_unit(&mut rng), rand_unit(&mut rng));
            let base = sfd(&s, &DressParams::new(mu, m, n).unwrap()).unwrap();
            let (za, zb) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let zq = |t: f64| q(t.cos(), t.sin(), 0.0, 0.0);
            let p2 = DressParams::new(mu, m * zq(za), n * zq(zb)).unwrap();
            assert!(base.max_f_diff(&sfd(&s, &p2).unwrap()) <= 1e-12 * 50.0);
            let p3 = DressParams::new(mu.conj().inv(), m * Q::j(), n * Q::j()).unwrap();
            assert!(base.max_f_diff(&sfd(&s, &p3).unwrap()) <= 1e-12 * 50.0);
        }
    }

    #[test]
    fn sfd_with_equal_frames_stays_in_three_space() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        let s = enneper();
        for _ in 0..5 {
            let m = rand_unit(&mut rng);
            let lam = q(0.3, 1.1, 0.0, 0.0);
            let out = sfd(&s, &DressParams::new(rand_mu(&mut rng), m, m * lam).unwrap()).unwrap();
            assert_eq!(out.dim, 3);
            assert!(out.valid_indices().all(|i| out.f[i].w.abs() <= 1e-12));
        }
    }

    #[test]
    fn sfd_normals_match_finite_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let s = cat_grid(GridSpec::patch(c(0.5, 1.0), 1e-3, 2));
        for _ in 0..4 {
            let p = DressParams::new(rand_mu(&mut rng), rand_unit(&mut rng), rand_unit(&mut rng)).unwrap();
            normals_match_fd(&sfd(&s, &p).unwrap(), 1e-6);
        }
    }

    #[test]
    fn lopez_ros_identity_and_catenoid_formula() {
        let s = cat_default();
        let id = lopez_ros(&s, &LopezRosParam::new(c(1.0, 0.0)).unwrap()).unwrap();
        assert!(id.max_f_diff(&s) == 0.0);
        for sigma in [c(2.0, 0.0), c(0.5, 1.5), Complex64::new(1.0, 1.0).exp()] {
            let p = LopezRosParam::new(sigma).unwrap();
            let out = lopez_ros(&s, &p).unwrap();
            let (cs, ss, ct, st) = (p.s.cosh(), p.s.sinh(), p.t.cos(), p.t.sin());
            for i in out.valid_indices() {
                let (x, y) = (s.z(i).re, s.z(i).im);
                let u = x * cs - x.sinh() * y.sin() * ss;
                let v = x.cosh() * y.cos() * cs + y * ss;
                let e = Q::imag(ct * u - st * v, st * u + ct * v, x.cosh() * y.sin());
                assert!((out.f[i] - e).norm() <= 1e-10 * (1.0 + e.norm()));
            }
        }
    }

    #[test]
    fn lopez_ros_is_a_dressing() {
        for s in [cat_default(), enneper()] {
            for sigma in [c(2.0, 0.0), c(4.0, 0.0), c(0.3, 0.0), Complex64::new(1.0, 1.0).exp()] {
                let p = LopezRosParam::new(sigma).unwrap();
                let a = lopez_ros(&s, &p).unwrap();
                let b = sfd(&s, &lopez_ros_as_sfd(&p).unwrap()).unwrap();
                assert!(a.max_f_diff(&b) <= 1e-8 && a.max_fstar_diff(&b) <= 1e-8);
                assert!(max_normal_diff(&a, &b) <= 1e-8);
                if sigma.im == 0.0 {
                    assert!((p.equivalent_mu() + 1.0 / sigma).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn lopez_ros_composes_multiplicatively() {
        let s = enneper();
        let (a, b) = (c(1.3, 0.4), c(0.6, -0.9));
        let pa = LopezRosParam::new(a).unwrap();
        let pb = LopezRosParam::new(b).unwrap();
        let pab = LopezRosParam::new(a * b).unwrap();
        let two = lopez_ros(&lopez_ros(&s, &pb).unwrap(), &pa).unwrap();
        let one = lopez_ros(&s, &pab).unwrap();
        assert!(two.max_f_diff(&one) < 1e-12);
    }

    #[test]
    fn lopez_ros_matches_reintegrated_data() {
        let e = catalog::enneper::<f64>();
        let spec = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 11, 11).unwrap();
        let s = e.sample(&spec).unwrap();
        let p = LopezRosParam::new(c(1.7, 0.6)).unwrap();
        let direct = lopez_ros(&s, &p).unwrap();
        let data = lopez_ros_data(&e.data, &p).unwrap();
        let re = sample_surface(&crate::nullcurve::NullCurve::from_data(data), &spec).unwrap();
        // both vanish... up to the constant fixed at the basepoint
        let o = s.nearest_valid(c(0.0, 0.0)).unwrap();
        let (df, dfs) = (direct.f[o] - re.f[o], direct.fstar[o] - re.fstar[o]);
        let mut re = re;
        re.translate(df, dfs);
        assert!(direct.max_f_diff(&re) < 1e-9, "{}", direct.max_f_diff(&re));
    }

    #[test]
    fn goursat_identity_and_lopez_ros_curve() {
        let e = catalog::enneper::<f64>();
        let curve = e.curve();
        let spec = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 11, 11).unwrap();
        let s = sample_surface(&curve, &spec).unwrap();
        let id = goursat(&curve, &crate::algebra::ComplexMatrix::identity(3)).unwrap();
        assert!(sample_surface(&id, &spec).unwrap().max_f_diff(&s) < 1e-14);
        let p = LopezRosParam::new(c(2.0, 0.5)).unwrap();
        let g = goursat(&curve, &lopez_ros_matrix(&p)).unwrap();
        let gs = sample_surface(&g, &spec).unwrap();
        let lr = lopez_ros(&s, &p).unwrap();
        assert!(gs.max_f_diff(&lr) < 1e-10);
        let bad = crate::algebra::ComplexMatrix::from_real(3, &[1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(goursat(&curve, &bad).is_err());
    }

    #[test]
    fn associated_willmore_of_catenoid() {
        let s = cat_default();
        let w = associated_willmore(&s).unwrap();
        let w3 = associated_willmore_r3(&s).unwrap();
        for i in w.valid_indices() {
            let (x, y) = (s.z(i).re, s.z(i).im);
            let e =
                (Q::real(x.cosh() - x * x.sinh()) - Q::i() * (y * x.cosh()) + Q::j() * Q::i() * emiy(y) * x) / x.cosh();
            assert!((w.f[i] - e).norm() < 1e-10 * (1.0 + e.norm()));
            assert!((w3.f[i] - w.f[i]).norm() < 1e-10 * (1.0 + e.norm()));
        }
        let o = s.nearest_valid(c(0.0, 0.0)).unwrap();
        assert!((w.f[o] - Q::one()).norm() < 1e-15);
        assert!(!right_normal_is_constant(&s, 1e-9));
    }

    #[test]
    fn associated_willmore_normals_match_finite_differences() {
        normals_match_fd(
            &associated_willmore(&cat_grid(GridSpec::patch(c(0.6, 0.4), 1e-3, 2))).unwrap(),
            1e-6,
        );
        let e = catalog::enneper::<f64>();
        let patch = e
            .closed_form_grid(&GridSpec::patch(c(0.5, -0.3), 1e-3, 2))
            .unwrap()
            .unwrap();
        normals_match_fd(&associated_willmore(&patch).unwrap(), 1e-6);
    }

    #[test]
    fn darboux_of_catenoid_on_the_unit_circle() {
        let s = cat_default();
        for th in [0.7, 2.0, -1.3] {
            let mu = Complex64::from_polar(1.0, th);
            let rho = (c(0.0, 1.0) * (1.0 + mu) / (1.0 - mu)).re;
            let out = mu_darboux(&s, mu, Q::one()).unwrap();
            for i in out.valid_indices() {
                let (x, y) = (s.z(i).re, s.z(i).im);
                let th = x.tanh();
                let e = (Q::real(rho - (x * rho + y) * th)
                    + Q::i() * (x - y * rho - th)
                    + Q::j() * emiy(y) * (Q::one() + Q::i() * (y + rho * x)) / x.cosh())
                    / (1.0 + rho * rho);
                assert!((out.f[i] - e).norm() < 1e-10 * (1.0 + e.norm()), "{th} at {}", s.z(i));
            }
            let o = s.nearest_valid(c(0.0, 0.0)).unwrap();
            assert!((out.f[o] - (Q::real(rho) + Q::j()) / (1.0 + rho * rho)).norm() < 1e-14);
        }
    }

    #[test]
    fn darboux_normals_match_finite_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        let s = cat_grid(GridSpec::patch(c(-0.4, 0.9), 1e-3, 2));
        for _ in 0..4 {
            let out = mu_darboux(&s, rand_mu(&mut rng), rand_unit(&mut rng)).unwrap();
            normals_match_fd(&out, 1e-5);
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let s = cat_default();
        assert!(sfd_mu(&s, c(1.0, 0.0)).is_err());
        assert!(sfd_mu(&s, c(0.0, 0.0)).is_err());
        assert!(mu_darboux(&s, c(1.0, 0.0), Q::one()).is_err());
        let mut bare = s.clone();
        bare.n = None;
        bare.r = None;
        assert!(associated(&bare, &AssocParams::classical(0.1, Side::Left)).is_err());
        assert!(mu_darboux(&bare, c(0.5, 0.0), Q::one()).is_err());
    }
}
