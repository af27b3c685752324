//! Built-in example surfaces: Weierstrass data, domains, generators, default
//! grids and, where single-valued, closed forms used as oracles.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::algebra::{ComplexVector, Quaternion};
use crate::error::{Error, Result};
use crate::holomorphic::{HoloFunction, LatticeData, PathSpec};
use crate::nullcurve::{
    normals, sample_surface, stereographic, DataKind, DomainSpec, Generator, GridSpec, NormalMethod, NullCurve, Region,
    SurfaceGrid, WeierstrassData,
};
use crate::scalar::{principal_arg, Cx, Real};

type ClosedFn<T, V> = Arc<dyn Fn(Cx<T>) -> Option<V> + Send + Sync>;

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 6] = [
    "catenoid",
    "enneper",
    "planar_end",
    "scherk1",
    "small_torus",
    "catenoidal_end",
];

/// A catalog surface.
#[derive(Clone)]
pub struct CatalogEntry<T> {
    pub name: String,
    pub data: WeierstrassData<T>,
    /// `Phi` at the basepoint.
    pub phi0: ComplexVector<T>,
    pub grid: GridSpec<T>,
    /// Parameters after defaults were applied.
    pub params: Vec<(String, f64)>,
    closed_phi: Option<ClosedFn<T, ComplexVector<T>>>,
    closed_normal: Option<ClosedFn<T, Quaternion<T>>>,
}

impl<T: fmt::Debug> fmt::Debug for CatalogEntry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("grid", &self.grid)
            .field("params", &self.params)
            .field("closed_form", &self.closed_phi.is_some())
            .finish()
    }
}

impl<T: Real + 'static> CatalogEntry<T> {
    pub fn curve(&self) -> NullCurve<T> {
        NullCurve::new(self.data.clone(), self.phi0.clone()).expect("catalog dimensions agree")
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed_phi.is_some()
    }

    /// Closed-form `Phi(z)`, if the entry has one and `z` is regular.
    pub fn closed_phi(&self, z: Cx<T>) -> Option<ComplexVector<T>> {
        self.closed_phi.as_ref().and_then(|f| f(z))
    }

    /// Closed-form left normal, if available.
    pub fn closed_normal(&self, z: Cx<T>) -> Option<Quaternion<T>> {
        self.closed_normal.as_ref().and_then(|f| f(z))
    }

    /// Integrated surface with normals from the Gauss maps.
    pub fn sample(&self, spec: &GridSpec<T>) -> Result<SurfaceGrid<T>> {
        let curve = self.curve();
        let s = sample_surface(&curve, spec)?;
        normals(&s, NormalMethod::FromG(&curve))
    }

    /// Surface from the closed form. Normals come from the closed-form normal
    /// when present and from the Gauss maps otherwise; nodes the sampler
    /// would mask near punctures are masked here as well.
    pub fn closed_form_grid(&self, spec: &GridSpec<T>) -> Option<Result<SurfaceGrid<T>>> {
        self.closed_phi.as_ref()?;
        let dom = &self.data.domain;
        let r = T::lit(crate::nullcurve::PUNCTURE_MASK_STEPS) * spec.hx().max(spec.hy());
        let mut s = SurfaceGrid::from_fn(*spec, self.data.dim(), |z| {
            if !dom.region.contains(z) || dom.is_near_puncture(z, r) {
                return None;
            }
            let v = self.closed_phi(z)?;
            Some((v.re_quat(), v.im_quat()))
        });
        if self.closed_normal.is_some() {
            let mut nv = vec![Quaternion::zero(); s.len()];
            let mut drop = Vec::new();
            for idx in s.valid_indices() {
                match self.closed_normal(s.z(idx)) {
                    Some(n) => nv[idx] = n,
                    None => drop.push(idx),
                }
            }
            s.n = Some(nv.clone());
            s.r = Some(nv);
            for idx in drop {
                s.mask(idx);
            }
            return Some(Ok(s));
        }
        Some(normals(&s, NormalMethod::FromG(&self.curve())))
    }
}

/// Catalog entry by name with `key=value` parameters; unknown names or keys
/// are errors.
pub fn by_name<T: Real + 'static>(name: &str, params: &[(String, f64)]) -> Result<CatalogEntry<T>> {
    let get = |key: &str, default: f64| -> f64 {
        params
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .unwrap_or(default)
    };
    let allowed: &[&str] = match name {
        "planar_end" => &["l"],
        "small_torus" => &["g2", "g3"],
        _ => &[],
    };
    if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("unknown parameter {k} for {name}")));
    }
    match name {
        "catenoid" => Ok(catenoid()),
        "enneper" => Ok(enneper()),
        "planar_end" => {
            let l = get("l", 1.0);
            if l < 1.0 || l.fract() != 0.0 || l > 64.0 {
                return Err(Error::InvalidParameter(format!(
                    "planar_end needs an integer l in 1..=64, got {l}"
                )));
            }
            planar_end(l as u32)
        }
        "scherk1" => Ok(scherk1()),
        "small_torus" => small_torus(T::lit(get("g2", 100.0)), T::lit(get("g3", 0.0))),
        "catenoidal_end" => Ok(catenoidal_end()),
        _ => Err(Error::InvalidParameter(format!(
            "unknown example {name}; known: {}",
            NAMES.join(", ")
        ))),
    }
}

fn c<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::lit(re), T::lit(im))
}

fn rect<T: Real>(h: f64, w: f64) -> Region<T> {
    Region::Rect {
        x0: T::lit(-h),
        x1: T::lit(h),
        y0: T::lit(-w),
        y1: T::lit(w),
    }
}

fn grid<T: Real>(h: f64, w: f64, n: usize) -> GridSpec<T> {
    GridSpec::new(T::lit(-h), T::lit(h), T::lit(-w), T::lit(w), n, n).expect("valid default grid")
}

/// Catenoid `f = i x + j cosh x e^{-i y}` with
/// `Phi = (z, cosh z, -i sinh z)`, `g = (e^z - i)/(e^z + i)`,
/// `omega = 1 - i sinh z`. The generator `y` runs from `0` to `2 pi i`.
pub fn catenoid<T: Real + 'static>() -> CatalogEntry<T> {
    type F<T> = HoloFunction<T>;
    let iu = || F::<T>::complex(0.0, 1.0);
    let g = (F::z().exp() - iu()) / (F::z().exp() + iu());
    let omega = F::real(1.0) - iu() * F::z().sinh();
    let pi = std::f64::consts::PI;
    let gen = Generator {
        name: "y".into(),
        path: PathSpec::segment(c(0.0, 0.0), c(0.0, 2.0 * pi)).expect("distinct ends"),
    };
    let domain = DomainSpec::new(rect(2.0, pi), vec![], c(0.0, 0.0), vec![gen]).expect("valid domain");
    let phi = |z: Cx<T>| {
        let miu = Complex::new(T::zero(), -T::one());
        Some(ComplexVector::new(vec![z, z.cosh(), miu * z.sinh()]))
    };
    let normal = |z: Cx<T>| {
        let (x, y) = (z.re, z.im);
        let ch = x.cosh();
        Some(Quaternion::imag(x.tanh(), -y.cos() / ch, -y.sin() / ch))
    };
    CatalogEntry {
        name: "catenoid".into(),
        data: WeierstrassData::new(DataKind::R3 { g, omega }, domain).expect("valid data"),
        phi0: ComplexVector::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        grid: grid(2.0, pi, 41),
        params: vec![],
        closed_phi: Some(Arc::new(phi)),
        closed_normal: Some(Arc::new(normal)),
    }
}

/// Enneper surface `g = z`, `omega = dz`,
/// `Phi = (z/2 - z^3/6, i (z/2 + z^3/6), z^2/2)`.
pub fn enneper<T: Real + 'static>() -> CatalogEntry<T> {
    let domain = DomainSpec::new(rect(1.5, 1.5), vec![], c(0.0, 0.0), vec![]).expect("valid domain");
    let phi = |z: Cx<T>| {
        let h = T::lit(0.5);
        let z3 = z * z * z / T::lit(6.0);
        Some(ComplexVector::new(vec![
            z * h - z3,
            Complex::new(T::zero(), T::one()) * (z * h + z3),
            z * z * h,
        ]))
    };
    CatalogEntry {
        name: "enneper".into(),
        data: WeierstrassData::new(
            DataKind::R3 {
                g: HoloFunction::z(),
                omega: HoloFunction::real(1.0),
            },
            domain,
        )
        .expect("valid data"),
        phi0: ComplexVector::zeros(3),
        grid: grid(1.5, 1.5, 41),
        params: vec![],
        closed_phi: Some(Arc::new(phi)),
        closed_normal: Some(Arc::new(|z| Some(stereographic(z)))),
    }
}

/// One planar end at `0`: `g = z^{l+1}`, `dh = z^{l-1} dz`,
/// `Phi = (-(1/z + z^{2l+1}/(2l+1))/2, i(-1/z + z^{2l+1}/(2l+1))/2, z^l/l)`.
/// Basepoint `1`; the generator `around0` is the unit circle.
pub fn planar_end<T: Real + 'static>(l: u32) -> Result<CatalogEntry<T>> {
    if l == 0 {
        return Err(Error::InvalidParameter("planar_end needs l >= 1".into()));
    }
    let li = l as i32;
    let gen = Generator {
        name: "around0".into(),
        path: PathSpec::circle(c(0.0, 0.0), T::one(), 64)?,
    };
    let domain = DomainSpec::new(rect(1.5, 1.5), vec![c(0.0, 0.0)], c(1.0, 0.0), vec![gen])?;
    let phi = move |z: Cx<T>| {
        if z.norm() == T::zero() {
            return None;
        }
        let h = T::lit(0.5);
        let k = T::lit((2 * l + 1) as f64);
        let zi = z.inv();
        let zp = z.powi(2 * li + 1) / k;
        Some(ComplexVector::new(vec![
            -(zi + zp) * h,
            Complex::new(T::zero(), h) * (zp - zi),
            z.powi(li) / T::lit(l as f64),
        ]))
    };
    let phi0 = phi(c(1.0, 0.0)).expect("regular basepoint");
    Ok(CatalogEntry {
        name: "planar_end".into(),
        data: WeierstrassData::new(
            DataKind::R3Height {
                g: HoloFunction::z().powi(li + 1),
                dh: HoloFunction::z().powi(li - 1),
            },
            domain,
        )?,
        phi0,
        grid: grid(1.5, 1.5, 41),
        params: vec![("l".into(), l as f64)],
        closed_phi: Some(Arc::new(phi)),
        closed_normal: Some(Arc::new(move |z: Cx<T>| {
            (z.norm() > T::zero()).then(|| stereographic(z.powi(li + 1)))
        })),
    })
}

/// Scherk's first surface `g = z`, `omega = -4/(z^4 - 1) dz` with punctures
/// `+-1, +-i` and generators `gamma_1`, `gamma_-1`, `gamma_i`, `gamma_-i`
/// (positive circles of radius 1/2). `Phi` is multivalued, so no closed
/// form is attached; see [`scherk1_principal_phi`].
pub fn scherk1<T: Real + 'static>() -> CatalogEntry<T> {
    type F<T> = HoloFunction<T>;
    let punct: Vec<Cx<T>> = vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    let names = ["gamma_1", "gamma_-1", "gamma_i", "gamma_-i"];
    let gens = punct
        .iter()
        .zip(names)
        .map(|(p, n)| Generator {
            name: n.into(),
            path: PathSpec::circle(*p, T::lit(0.5), 64).expect("valid circle"),
        })
        .collect();
    let domain = DomainSpec::new(rect(2.0, 2.0), punct, c(0.0, 0.0), gens).expect("valid domain");
    let omega = F::<T>::real(-4.0) / (F::z().powi(4) - F::real(1.0));
    let pi = std::f64::consts::PI;
    CatalogEntry {
        name: "scherk1".into(),
        data: WeierstrassData::new(DataKind::R3 { g: F::z(), omega }, domain).expect("valid data"),
        phi0: ComplexVector::new(vec![c(-pi, 0.0), c(-pi, 0.0), c(0.0, pi)]),
        grid: grid(2.0, 2.0, 41),
        params: vec![],
        closed_phi: None,
        closed_normal: None,
    }
}

/// The logarithm arguments of Scherk's `Phi`:
/// `Phi = (i log a0, i log a1, log a2)` with `a0 = (z+i)/(z-i)`,
/// `a1 = (z+1)/(z-1)`, `a2 = (z^2+1)/(z^2-1)`.
pub fn scherk1_log_arguments<T: Real>() -> [HoloFunction<T>; 3] {
    type F<T> = HoloFunction<T>;
    let iu = || F::<T>::complex(0.0, 1.0);
    let one = || F::<T>::real(1.0);
    [
        (F::z() + iu()) / (F::z() - iu()),
        (F::z() + one()) / (F::z() - one()),
        (F::z().powi(2) + one()) / (F::z().powi(2) - one()),
    ]
}

/// Scherk's `Phi` on principal branches, arguments in `(-pi, pi]`
/// regardless of the sign of a zero imaginary part.
pub fn scherk1_principal_phi<T: Real>(z: Cx<T>) -> Result<ComplexVector<T>> {
    let [a0, a1, a2] = scherk1_log_arguments::<T>();
    let iu = Complex::new(T::zero(), T::one());
    Ok(ComplexVector::new(vec![
        iu * principal_ln(a0.eval(z)?),
        iu * principal_ln(a1.eval(z)?),
        principal_ln(a2.eval(z)?),
    ]))
}

fn principal_ln<T: Real>(w: Cx<T>) -> Cx<T> {
    Complex::new(w.norm().ln(), principal_arg(w))
}

/// Small's torus with invariants `(g2, g3)`: `Phi` is a rational
/// expression in `wp`, `wp'` on the lattice solved from the invariants, and
/// `dPhi` is its symbolic derivative. The domain is the closed fundamental
/// parallelogram; lattice points and half periods are punctures.
pub fn small_torus<T: Real + 'static>(g2: T, g3: T) -> Result<CatalogEntry<T>> {
    let lat = Arc::new(LatticeData::from_invariants(g2, g3)?);
    let comps = small_torus_phi_exprs(&lat);
    let (w1, w2) = (lat.omega1, lat.omega2);
    let h = T::lit(0.5);
    let mut punct = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            punct.push(w1 * (T::from_usize(a).unwrap() * h) + w2 * (T::from_usize(b).unwrap() * h));
        }
    }
    let base = (w1 + w2) * T::lit(0.25);
    let region = Region::Torus { omega1: w1, omega2: w2 };
    let mut domain = DomainSpec::new(region, punct, base, vec![])?;
    domain.generators = vec![
        Generator {
            name: "omega1".into(),
            path: PathSpec::segment(base, base + w1)?,
        },
        Generator {
            name: "omega2".into(),
            path: PathSpec::segment(base, base + w2)?,
        },
    ];
    domain.validate()?;
    let exprs = comps.clone();
    let phi = move |z: Cx<T>| {
        let v: Option<Vec<_>> = exprs.iter().map(|e| e.eval(z).ok()).collect();
        v.map(ComplexVector::new)
    };
    let phi0 = phi(base).ok_or(Error::Singularity(base.re.as_f64(), base.im.as_f64()))?;
    let components = comps.iter().map(|e| e.derivative()).collect();
    // the grid covers the rectangle spanned by the (real, imaginary) periods
    let grid = GridSpec::new(T::zero(), w1.re, T::zero(), w2.im, 41, 41)?;
    Ok(CatalogEntry {
        name: "small_torus".into(),
        data: WeierstrassData::new(DataKind::Differential { components }, domain)?,
        phi0,
        grid,
        params: vec![("g2".into(), g2.as_f64()), ("g3".into(), g3.as_f64())],
        closed_phi: Some(Arc::new(phi)),
        closed_normal: None,
    })
}

/// The components of the torus null curve.
pub fn small_torus_phi_exprs<T: Real>(lat: &Arc<LatticeData<T>>) -> Vec<HoloFunction<T>> {
    type F<T> = HoloFunction<T>;
    let p = F::wp(lat.clone(), F::z());
    let dp = F::wp_prime(lat.clone(), F::z());
    let k = |x: Cx<T>| F::constant(x);
    let (g2, g3) = (lat.g2, lat.g3);
    let r = |x: f64| Complex::new(T::lit(x), T::zero());
    let pw = |n: i32| p.clone().powi(n);
    let poly = |terms: Vec<(Cx<T>, i32)>| {
        terms
            .into_iter()
            .map(|(c, n)| if n == 0 { k(c) } else { k(c) * pw(n) })
            .reduce(|a, b| a + b)
            .expect("nonempty")
    };
    let d3 = dp.clone().powi(3);
    let phi1 = poly(vec![
        (-g2 * g2 - r(8.0) * g3 * g3, 0),
        (-r(48.0) * g3 - r(12.0) * g2 * g3, 1),
        (-r(24.0) * g2 - r(3.0) * g2 * g2, 2),
        (r(64.0) * g3, 3),
        (r(48.0) + r(24.0) * g2, 4),
        (r(16.0), 6),
    ]) / (F::real(8.0) * d3.clone());
    let phi2 = F::complex(0.0, 1.0)
        * poly(vec![
            (-g2 * g2 + r(8.0) * g3 * g3, 0),
            (-r(48.0) * g3 + r(12.0) * g2 * g3, 1),
            (-r(24.0) * g2 + r(3.0) * g2 * g2, 2),
            (-r(64.0) * g3, 3),
            (r(48.0) - r(24.0) * g2, 4),
            (-r(16.0), 6),
        ])
        / (F::real(8.0) * d3.clone());
    let phi3 = poly(vec![
        (-r(2.0) * g2 * g3, 0),
        (-r(3.0) * g2 * g2, 1),
        (-r(24.0) * g3, 2),
        (r(8.0) * g2, 3),
        (-r(48.0), 5),
    ]) / (F::real(4.0) * d3);
    vec![phi1, phi2, phi3]
}

/// Catenoidal end at `0`: `g = z`, `dh = dz / z` on the punctured square,
/// basepoint `1`, generator `around0` the unit circle.
pub fn catenoidal_end<T: Real + 'static>() -> CatalogEntry<T> {
    let gen = Generator {
        name: "around0".into(),
        path: PathSpec::circle(c(0.0, 0.0), T::one(), 64).expect("valid circle"),
    };
    let domain = DomainSpec::new(rect(1.5, 1.5), vec![c(0.0, 0.0)], c(1.0, 0.0), vec![gen]).expect("valid domain");
    CatalogEntry {
        name: "catenoidal_end".into(),
        data: WeierstrassData::new(
            DataKind::R3Height {
                g: HoloFunction::z(),
                dh: HoloFunction::real(1.0) / HoloFunction::z(),
            },
            domain,
        )
        .expect("valid data"),
        // Phi(1) = (-(1/z + z)/2, i(z - 1/z)/2, log z) at z = 1
        phi0: ComplexVector::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
        grid: grid(1.5, 1.5, 41),
        params: vec![],
        closed_phi: None,
        closed_normal: None,
    }
}
