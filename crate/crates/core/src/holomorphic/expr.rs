use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{pt, Error, Result};
use crate::scalar::{Cx, Real};

use super::elliptic::{wp, wp_prime, LatticeData};

/// Expression tree of a holomorphic (or meromorphic) function of `z`.
///
/// Every node is evaluated with principal branches. Multivalued pieces along
/// a path are handled by [`super::continue_log`].
#[derive(Debug, Clone)]
pub enum HoloFunction<T> {
    Const(Cx<T>),
    Z,
    Add(Box<Self>, Box<Self>),
    Sub(Box<Self>, Box<Self>),
    Mul(Box<Self>, Box<Self>),
    Div(Box<Self>, Box<Self>),
    Neg(Box<Self>),
    /// Integer power; negative exponents are reciprocals.
    Powi(Box<Self>, i32),
    /// `exp(e log b)` with the principal logarithm.
    Pow(Box<Self>, Box<Self>),
    Exp(Box<Self>),
    Log(Box<Self>),
    Sin(Box<Self>),
    Cos(Box<Self>),
    Sinh(Box<Self>),
    Cosh(Box<Self>),
    Wp(Arc<LatticeData<T>>, Box<Self>),
    WpPrime(Arc<LatticeData<T>>, Box<Self>),
}

use HoloFunction as H;

fn b<T>(f: H<T>) -> Box<H<T>> {
    Box::new(f)
}

impl<T: Real> HoloFunction<T> {
    pub fn z() -> Self {
        H::Z
    }

    pub fn constant(c: Cx<T>) -> Self {
        H::Const(c)
    }

    pub fn real(x: f64) -> Self {
        H::Const(Complex::new(T::lit(x), T::zero()))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        H::Const(Complex::new(T::lit(re), T::lit(im)))
    }

    pub fn exp(self) -> Self {
        H::Exp(b(self))
    }

    pub fn log(self) -> Self {
        H::Log(b(self))
    }

    pub fn sin(self) -> Self {
        H::Sin(b(self))
    }

    pub fn cos(self) -> Self {
        H::Cos(b(self))
    }

    pub fn sinh(self) -> Self {
        H::Sinh(b(self))
    }

    pub fn cosh(self) -> Self {
        H::Cosh(b(self))
    }

    pub fn powi(self, n: i32) -> Self {
        H::Powi(b(self), n)
    }

    pub fn pow(self, e: Self) -> Self {
        match e.as_const().and_then(integral) {
            Some(n) => self.powi(n),
            None => H::Pow(b(self), b(e)),
        }
    }

    pub fn wp(lat: Arc<LatticeData<T>>, arg: Self) -> Self {
        H::Wp(lat, b(arg))
    }

    pub fn wp_prime(lat: Arc<LatticeData<T>>, arg: Self) -> Self {
        H::WpPrime(lat, b(arg))
    }

    pub fn as_const(&self) -> Option<Cx<T>> {
        match self {
            H::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, H::Const(c) if c.re == T::zero() && c.im == T::zero())
    }

    fn is_one(&self) -> bool {
        matches!(self, H::Const(c) if c.re == T::one() && c.im == T::zero())
    }

    /// Substitutes `inner` for `z`.
    pub fn compose(&self, inner: &Self) -> Self {
        let c = |f: &Self| b(f.compose(inner));
        match self {
            H::Const(v) => H::Const(*v),
            H::Z => inner.clone(),
            H::Add(l, r) => H::Add(c(l), c(r)),
            H::Sub(l, r) => H::Sub(c(l), c(r)),
            H::Mul(l, r) => H::Mul(c(l), c(r)),
            H::Div(l, r) => H::Div(c(l), c(r)),
            H::Neg(a) => H::Neg(c(a)),
            H::Powi(a, n) => H::Powi(c(a), *n),
            H::Pow(l, r) => H::Pow(c(l), c(r)),
            H::Exp(a) => H::Exp(c(a)),
            H::Log(a) => H::Log(c(a)),
            H::Sin(a) => H::Sin(c(a)),
            H::Cos(a) => H::Cos(c(a)),
            H::Sinh(a) => H::Sinh(c(a)),
            H::Cosh(a) => H::Cosh(c(a)),
            H::Wp(l, a) => H::Wp(l.clone(), c(a)),
            H::WpPrime(l, a) => H::WpPrime(l.clone(), c(a)),
        }
    }

    /// Value at `z`. Division by zero, `log 0` and non-finite results are
    /// reported as a singularity at `z`.
    pub fn eval(&self, z: Cx<T>) -> Result<Cx<T>> {
        let v = self.eval_raw(z)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            let (re, im) = pt(z);
            Err(Error::Singularity(re, im))
        }
    }

    fn eval_raw(&self, z: Cx<T>) -> Result<Cx<T>> {
        let sing = || {
            let (re, im) = pt(z);
            Error::Singularity(re, im)
        };
        let zero = Complex::new(T::zero(), T::zero());
        Ok(match self {
            H::Const(c) => *c,
            H::Z => z,
            H::Add(l, r) => l.eval_raw(z)? + r.eval_raw(z)?,
            H::Sub(l, r) => l.eval_raw(z)? - r.eval_raw(z)?,
            H::Mul(l, r) => l.eval_raw(z)? * r.eval_raw(z)?,
            H::Div(l, r) => {
                let d = r.eval_raw(z)?;
                if d == zero {
                    return Err(sing());
                }
                l.eval_raw(z)? / d
            }
            H::Neg(a) => -a.eval_raw(z)?,
            H::Powi(a, n) => {
                let v = a.eval_raw(z)?;
                if *n < 0 && v == zero {
                    return Err(sing());
                }
                v.powi(*n)
            }
            H::Pow(l, r) => {
                let base = l.eval_raw(z)?;
                let e = r.eval_raw(z)?;
                if base == zero {
                    if e.re > T::zero() {
                        zero
                    } else {
                        return Err(sing());
                    }
                } else {
                    (e * base.ln()).exp()
                }
            }
            H::Exp(a) => a.eval_raw(z)?.exp(),
            H::Log(a) => {
                let v = a.eval_raw(z)?;
                if v == zero {
                    return Err(sing());
                }
                v.ln()
            }
            H::Sin(a) => a.eval_raw(z)?.sin(),
            H::Cos(a) => a.eval_raw(z)?.cos(),
            H::Sinh(a) => a.eval_raw(z)?.sinh(),
            H::Cosh(a) => a.eval_raw(z)?.cosh(),
            H::Wp(lat, a) => wp(a.eval_raw(z)?, lat)?,
            H::WpPrime(lat, a) => wp_prime(a.eval_raw(z)?, lat)?,
        })
    }

    /// Symbolic derivative in `z`.
    pub fn derivative(&self) -> Self {
        match self {
            H::Const(_) => H::real(0.0),
            H::Z => H::real(1.0),
            H::Add(l, r) => add(l.derivative(), r.derivative()),
            H::Sub(l, r) => sub(l.derivative(), r.derivative()),
            H::Mul(l, r) => add(mul(l.derivative(), (**r).clone()), mul((**l).clone(), r.derivative())),
            H::Div(l, r) => {
                // (l'/r) - l r' / r^2
                let first = div(l.derivative(), (**r).clone());
                let second = div(mul((**l).clone(), r.derivative()), (**r).clone().powi(2));
                sub(first, second)
            }
            H::Neg(a) => neg(a.derivative()),
            H::Powi(a, n) => match *n {
                0 => H::real(0.0),
                1 => a.derivative(),
                _ => mul(mul(H::real(*n as f64), (**a).clone().powi(n - 1)), a.derivative()),
            },
            H::Pow(l, r) => {
                // d(b^e) = b^e (e' log b + e b'/b)
                let term = add(
                    mul(r.derivative(), (**l).clone().log()),
                    div(mul((**r).clone(), l.derivative()), (**l).clone()),
                );
                mul(self.clone(), term)
            }
            H::Exp(a) => mul(self.clone(), a.derivative()),
            H::Log(a) => div(a.derivative(), (**a).clone()),
            H::Sin(a) => mul((**a).clone().cos(), a.derivative()),
            H::Cos(a) => neg(mul((**a).clone().sin(), a.derivative())),
            H::Sinh(a) => mul((**a).clone().cosh(), a.derivative()),
            H::Cosh(a) => mul((**a).clone().sinh(), a.derivative()),
            H::Wp(lat, a) => mul(H::WpPrime(lat.clone(), a.clone()), a.derivative()),
            H::WpPrime(lat, a) => {
                // wp'' = 6 wp^2 - g2/2
                let w = H::Wp(lat.clone(), a.clone());
                let half_g2 = H::Const(lat.g2 * T::lit(0.5));
                mul(sub(mul(H::real(6.0), w.powi(2)), half_g2), a.derivative())
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            H::Const(_) | H::Z => 1,
            H::Add(l, r) | H::Sub(l, r) | H::Mul(l, r) | H::Div(l, r) | H::Pow(l, r) => 1 + l.size() + r.size(),
            H::Neg(a)
            | H::Powi(a, _)
            | H::Exp(a)
            | H::Log(a)
            | H::Sin(a)
            | H::Cos(a)
            | H::Sinh(a)
            | H::Cosh(a)
            | H::Wp(_, a)
            | H::WpPrime(_, a) => 1 + a.size(),
        }
    }
}

fn integral<T: Real>(c: Cx<T>) -> Option<i32> {
    let r = c.re.round();
    if c.im == T::zero() && c.re == r && r.abs() <= T::lit(1e6) {
        r.to_i32()
    } else {
        None
    }
}

fn add<T: Real>(l: H<T>, r: H<T>) -> H<T> {
    match (l.as_const(), r.as_const()) {
        (Some(a), Some(c)) => H::Const(a + c),
        _ if l.is_zero() => r,
        _ if r.is_zero() => l,
        _ => H::Add(b(l), b(r)),
    }
}

fn sub<T: Real>(l: H<T>, r: H<T>) -> H<T> {
    match (l.as_const(), r.as_const()) {
        (Some(a), Some(c)) => H::Const(a - c),
        _ if r.is_zero() => l,
        _ if l.is_zero() => neg(r),
        _ => H::Sub(b(l), b(r)),
    }
}

fn mul<T: Real>(l: H<T>, r: H<T>) -> H<T> {
    match (l.as_const(), r.as_const()) {
        (Some(a), Some(c)) => H::Const(a * c),
        _ if l.is_zero() || r.is_zero() => H::real(0.0),
        _ if l.is_one() => r,
        _ if r.is_one() => l,
        _ => H::Mul(b(l), b(r)),
    }
}

fn div<T: Real>(l: H<T>, r: H<T>) -> H<T> {
    if l.is_zero() {
        return H::real(0.0);
    }
    if r.is_one() {
        return l;
    }
    H::Div(b(l), b(r))
}

fn neg<T: Real>(a: H<T>) -> H<T> {
    match a {
        H::Const(c) => H::Const(-c),
        H::Neg(inner) => *inner,
        other => H::Neg(b(other)),
    }
}

impl<T: Real> Add for HoloFunction<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        H::Add(b(self), b(r))
    }
}

impl<T: Real> Sub for HoloFunction<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        H::Sub(b(self), b(r))
    }
}

impl<T: Real> Mul for HoloFunction<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        H::Mul(b(self), b(r))
    }
}

impl<T: Real> Div for HoloFunction<T> {
    type Output = Self;
    fn div(self, r: Self) -> Self {
        H::Div(b(self), b(r))
    }
}

impl<T: Real> Neg for HoloFunction<T> {
    type Output = Self;
    fn neg(self) -> Self {
        H::Neg(b(self))
    }
}

fn fmt_const<T: Real>(c: Cx<T>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (re, im) = (c.re.as_f64(), c.im.as_f64());
    if im == 0.0 {
        write!(f, "({re:?})")
    } else if re == 0.0 {
        write!(f, "({im:?}i)")
    } else {
        write!(f, "({re:?}+{im:?}i)")
    }
}

/// Fully parenthesized form accepted by [`super::parse`] (except the
/// elliptic nodes, which print their invariants for reference only).
impl<T: Real> fmt::Display for HoloFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            H::Const(c) => fmt_const(*c, f),
            H::Z => write!(f, "z"),
            H::Add(l, r) => write!(f, "({l}+{r})"),
            H::Sub(l, r) => write!(f, "({l}-{r})"),
            H::Mul(l, r) => write!(f, "({l}*{r})"),
            H::Div(l, r) => write!(f, "({l}/{r})"),
            H::Neg(a) => write!(f, "(-{a})"),
            H::Powi(a, n) => write!(f, "({a}^({n}))"),
            H::Pow(l, r) => write!(f, "({l}^{r})"),
            H::Exp(a) => write!(f, "exp({a})"),
            H::Log(a) => write!(f, "log({a})"),
            H::Sin(a) => write!(f, "sin({a})"),
            H::Cos(a) => write!(f, "cos({a})"),
            H::Sinh(a) => write!(f, "sinh({a})"),
            H::Cosh(a) => write!(f, "cosh({a})"),
            H::Wp(l, a) => write!(f, "wp[g2={},g3={}]({a})", l.g2, l.g3),
            H::WpPrime(l, a) => write!(f, "wpd[g2={},g3={}]({a})", l.g2, l.g3),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cxl;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    type F = HoloFunction<f64>;

    fn iu() -> F {
        F::complex(0.0, 1.0)
    }

    #[test]
    fn identity_evaluation() {
        assert_eq!(F::z().eval(cxl(2.0, 1.0)).unwrap(), cxl(2.0, 1.0));
    }

    #[test]
    fn catenoid_gauss_map_at_origin() {
        let g = (F::z().exp() - iu()) / (F::z().exp() + iu());
        let v = g.eval(cxl(0.0, 0.0)).unwrap();
        assert!((v - cxl(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn scherk_form_has_poles_at_fourth_roots() {
        let w = F::real(-4.0) / (F::z().powi(4) - F::real(1.0));
        for p in [cxl(1.0, 0.0), cxl(-1.0, 0.0), cxl(0.0, 1.0), cxl(0.0, -1.0)] {
            assert!(matches!(w.eval(p), Err(Error::Singularity(..))), "{p}");
        }
        assert!(w.eval(cxl(0.5, 0.5)).is_ok());
    }

    #[test]
    fn log_of_zero_is_singular() {
        assert!(F::z().log().eval(cxl(0.0, 0.0)).is_err());
    }

    #[test]
    fn compose_substitutes() {
        let f = F::z().powi(2) + F::real(1.0);
        let g = f.compose(&F::z().exp());
        let z = cxl(0.3, -0.4);
        assert!((g.eval(z).unwrap() - (z.exp() * z.exp() + 1.0)).norm() < 1e-14);
    }

    fn samples() -> Vec<F> {
        let z = F::z;
        vec![
            (z().exp() - iu()) / (z().exp() + iu()),
            F::real(-4.0) / (z().powi(4) - F::real(1.0)),
            z().powi(3) * z().sin() - z().cosh() / (z() + F::real(3.0)),
            (z() + F::real(2.0)).log() * z().cos() + z().sinh(),
            (z() + F::real(2.0)).pow(F::complex(0.5, 0.25)),
            -(z().powi(-2)) + iu() * z(),
        ]
    }

    #[test]
    fn symbolic_derivative_matches_central_difference() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let h = 1e-5;
        for f in samples() {
            let df = f.derivative();
            let mut checked = 0;
            while checked < 100 {
                let z = Complex64::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
                if z.norm() < 0.2 || (z.powi(4) - 1.0).norm() < 0.2 {
                    continue;
                }
                let fd = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
                let an = df.eval(z).unwrap();
                assert!((fd - an).norm() <= 1e-6 * (1.0 + an.norm()), "{f} at {z}: {fd} vs {an}");
                checked += 1;
            }
        }
    }
}
