use crate::algebra::{ComplexVector, Quaternion, RotationMap};
use crate::error::{Error, Result};
use crate::holomorphic::PathSpec;
use crate::nullcurve::NullCurve;
use crate::scalar::{Cx, Real};
use crate::transforms::DressParams;

use crate::transforms::hyperbolic_mix;

/// Translational periods along one generator: `gamma^* Phi = Phi + tau + i tau*`.
///
/// Components follow `Phi`: `(i, j, k)` in 3-space, `(1, i, j, k)` in 4-space.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodVector<T> {
    pub generator: String,
    pub tau: Vec<T>,
    pub tau_star: Vec<T>,
}

impl<T: Real> PeriodVector<T> {
    pub fn new(generator: impl Into<String>, tau: Vec<T>, tau_star: Vec<T>) -> Result<Self> {
        if !(tau.len() == 3 || tau.len() == 4) || tau.len() != tau_star.len() {
            return Err(Error::DimensionMismatch {
                expected: tau.len(),
                got: tau_star.len(),
            });
        }
        Ok(Self {
            generator: generator.into(),
            tau,
            tau_star,
        })
    }

    pub fn zero(generator: impl Into<String>, dim: usize) -> Self {
        Self {
            generator: generator.into(),
            tau: vec![T::zero(); dim],
            tau_star: vec![T::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.tau.len()
    }

    /// `tau + i tau*` as a complex vector.
    pub fn complex(&self) -> ComplexVector<T> {
        ComplexVector::new(
            self.tau
                .iter()
                .zip(&self.tau_star)
                .map(|(a, b)| Cx::new(*a, *b))
                .collect(),
        )
    }

    pub fn from_complex(generator: impl Into<String>, v: &ComplexVector<T>) -> Result<Self> {
        Self::new(generator, v.re(), v.im())
    }

    /// `(tau, tau*)` as quaternions.
    pub fn quaternions(&self) -> (Quaternion<T>, Quaternion<T>) {
        let c = self.complex();
        (c.re_quat(), c.im_quat())
    }

    fn from_quaternions(generator: &str, tau: Quaternion<T>, tau_star: Quaternion<T>, dim: usize) -> Self {
        let c = ComplexVector::from_quaternions(tau, tau_star, dim);
        Self {
            generator: generator.into(),
            tau: c.re(),
            tau_star: c.im(),
        }
    }

    /// Largest absolute component of `tau`.
    pub fn tau_max(&self) -> T {
        self.tau.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Integral of `dPhi` along `path`, split into real and imaginary parts.
pub fn loop_period<T: Real>(curve: &NullCurve<T>, name: &str, path: &PathSpec<T>) -> Result<PeriodVector<T>> {
    PeriodVector::from_complex(name, &curve.integrate_differential(path)?)
}

/// Periods along every generator of the curve's domain, in declaration order.
pub fn all_periods<T: Real>(curve: &NullCurve<T>) -> Result<Vec<PeriodVector<T>>> {
    curve
        .data
        .domain
        .generators
        .iter()
        .map(|g| loop_period(curve, &g.name, &g.path))
        .collect()
}

/// Periods `(tau^mu, tau^mu*)` of the simple factor dressing with parameter
/// `mu`: `tau` and `tau*` mix in the `j`, `k` coordinates through
/// `cosh s`, `sinh s` and turn by `t`.
pub fn sfd_period<T: Real>(pv: &PeriodVector<T>, mu: Cx<T>) -> Result<PeriodVector<T>> {
    let p = DressParams::new(mu, Quaternion::one(), Quaternion::one())?;
    let (tau, ts) = pv.quaternions();
    Ok(PeriodVector::from_quaternions(
        &pv.generator,
        hyperbolic_mix(tau, ts, p.s, p.t, 2),
        hyperbolic_mix(ts, -tau, p.s, p.t, 2),
        pv.dim(),
    ))
}

/// Periods of the simple factor dressing with parameters `(mu, m, n)`:
/// rotate by `R_{n,m}^{-1}`, apply [`sfd_period`], rotate back. The result
/// stays 3-dimensional iff its real parts vanish to `1e-12` of its size.
pub fn sfd_period_general<T: Real>(pv: &PeriodVector<T>, params: &DressParams<T>) -> Result<PeriodVector<T>> {
    let rot = RotationMap::from_units(params.n, params.m);
    let inv = rot.inverse();
    let (tau, ts) = pv.quaternions();
    let (a, b) = (inv.rotate(tau), inv.rotate(ts));
    let (a, b) = (
        hyperbolic_mix(a, b, params.s, params.t, 2),
        hyperbolic_mix(b, -a, params.s, params.t, 2),
    );
    let (tau, ts) = (rot.rotate(a), rot.rotate(b));
    let scale = T::one().max(tau.norm()).max(ts.norm());
    let flat = tau.w.abs().max(ts.w.abs()) <= T::lit(1e-12) * scale;
    let dim = if pv.dim() == 3 && flat { 3 } else { 4 };
    Ok(PeriodVector::from_quaternions(&pv.generator, tau, ts, dim))
}

/// Outcome of a closing test with the largest violated residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closing<T> {
    pub closed: bool,
    pub residual: T,
}

/// Whether the dressing with parameter `mu` closes along the generator:
/// `tau_0 = tau_1 = 0` and `(tau_2, tau_3) = (tau*_3, -tau*_2) tanh s`,
/// absolute tolerance `1e-8`. In 3-space only `tau_1` must vanish.
pub fn closing_condition<T: Real>(pv: &PeriodVector<T>, mu: Cx<T>) -> Result<Closing<T>> {
    let p = DressParams::new(mu, Quaternion::one(), Quaternion::one())?;
    let (tau, ts) = pv.quaternions();
    Ok(closing_residual(tau, ts, p.s))
}

/// [`closing_condition`] for parameters `(mu, m, n)`, evaluated on the
/// periods rotated by `R_{n,m}^{-1}`.
pub fn closing_condition_general<T: Real>(pv: &PeriodVector<T>, params: &DressParams<T>) -> Closing<T> {
    let inv = RotationMap::from_units(params.n, params.m).inverse();
    let (tau, ts) = pv.quaternions();
    closing_residual(inv.rotate(tau), inv.rotate(ts), params.s)
}

fn closing_residual<T: Real>(tau: Quaternion<T>, ts: Quaternion<T>, s: T) -> Closing<T> {
    let th = s.tanh();
    let residual = tau
        .w
        .abs()
        .max(tau.x.abs())
        .max((tau.y - ts.z * th).abs())
        .max((tau.z + ts.y * th).abs());
    Closing {
        closed: residual <= T::lit(1e-8),
        residual,
    }
}

/// Integer coefficients of `v` in the basis `(e1, e2)`, if `v` is such a
/// combination to `tol` (absolute, on both the reconstruction and the
/// distance of the coefficients from integers).
pub fn lattice_coefficients<T: Real>(v: &[T], e1: &[T], e2: &[T], tol: T) -> Option<(i64, i64)> {
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |s, (x, y)| s + *x * *y);
    let (a11, a12, a22) = (dot(e1, e1), dot(e1, e2), dot(e2, e2));
    let det = a11 * a22 - a12 * a12;
    if !(det.abs() > T::lit(1e-14) * (a11 * a22).max(T::min_positive_value())) {
        return None;
    }
    let (b1, b2) = (dot(v, e1), dot(v, e2));
    let c1 = (a22 * b1 - a12 * b2) / det;
    let c2 = (a11 * b2 - a12 * b1) / det;
    let (r1, r2) = (c1.round(), c2.round());
    let off = v
        .iter()
        .zip(e1.iter().zip(e2))
        .fold(T::zero(), |m, (x, (p, q))| m.max((*x - r1 * *p - r2 * *q).abs()));
    (off <= tol).then(|| (r1.to_i64().unwrap_or(0), r2.to_i64().unwrap_or(0)))
}

/// Whether every period lies in the integer lattice spanned by `e1`, `e2`.
pub fn lattice_invariant<T: Real>(periods: &[Vec<T>], e1: &[T], e2: &[T], tol: T) -> bool {
    periods.iter().all(|v| lattice_coefficients(v, e1, e2, tol).is_some())
}
