use num_complex::Complex;

use crate::algebra::{Quaternion, UnitQuaternion};
use crate::error::{Error, Result};
use crate::scalar::{principal_arg, Cx, Real};

/// Parameters `(mu, m, n)` of a simple factor dressing together with the
/// derived quantities every dressing formula reads.
///
/// `s` and `t` are computed once here so that all formulas use the same
/// branch of `arg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressParams<T> {
    pub mu: Cx<T>,
    pub m: UnitQuaternion<T>,
    pub n: UnitQuaternion<T>,
    /// `(mu + 1/mu) / 2`
    pub a: Cx<T>,
    /// `i (1/mu - mu) / 2`
    pub b: Cx<T>,
    /// `-ln|mu|`
    pub s: T,
    /// `arg((conj(mu) - 1) / (conj(mu) (1 - mu)))`
    pub t: T,
    /// `s + i t`
    pub w: Cx<T>,
    /// `m (i (1 + mu) / (1 - mu)) m^{-1}`
    pub rho: Quaternion<T>,
}

impl<T: Real> DressParams<T> {
    /// `m` and `n` may be any nonzero quaternions; they are normalized.
    pub fn new(mu: Cx<T>, m: Quaternion<T>, n: Quaternion<T>) -> Result<Self> {
        validate_mu(mu)?;
        let m = UnitQuaternion::new(m).ok_or_else(|| Error::InvalidParameter("dressing parameter m is zero".into()))?;
        let n = UnitQuaternion::new(n).ok_or_else(|| Error::InvalidParameter("dressing parameter n is zero".into()))?;
        let one = Complex::new(T::one(), T::zero());
        let half = T::lit(0.5);
        let iu = Complex::new(T::zero(), T::one());
        let inv = mu.inv();
        let a = (mu + inv) * half;
        let b = iu * (inv - mu) * half;
        let s = -mu.norm().ln();
        let mc = mu.conj();
        let t = principal_arg((mc - one) / (mc * (one - mu)));
        let mut p = Self {
            mu,
            m,
            n,
            a,
            b,
            s,
            t,
            w: Complex::new(s, t),
            rho: Quaternion::zero(),
        };
        p.rho = p.rho_for(m);
        Ok(p)
    }

    /// `b / (a - 1) = i (1 + mu) / (1 - mu)` as a quaternion in `span{1, i}`.
    pub fn c_quat(&self) -> Quaternion<T> {
        let one = Complex::new(T::one(), T::zero());
        let iu = Complex::new(T::zero(), T::one());
        Quaternion::from_complex(iu * (one + self.mu) / (one - self.mu))
    }

    /// `q (b / (a - 1)) q^{-1}` for a unit quaternion `q`.
    pub fn rho_for(&self, q: UnitQuaternion<T>) -> Quaternion<T> {
        q.get() * self.c_quat() * q.inv()
    }

    pub fn a_quat(&self) -> Quaternion<T> {
        Quaternion::from_complex(self.a)
    }

    pub fn b_quat(&self) -> Quaternion<T> {
        Quaternion::from_complex(self.b)
    }

    pub fn is_trivial(&self) -> bool {
        self.s == T::zero() && self.t == T::zero()
    }
}

pub(crate) fn validate_mu<T: Real>(mu: Cx<T>) -> Result<()> {
    if !(mu.re.is_finite() && mu.im.is_finite()) {
        return Err(Error::InvalidParameter("mu must be finite".into()));
    }
    if mu.norm() == T::zero() {
        return Err(Error::InvalidParameter("mu must be nonzero".into()));
    }
    if mu.re == T::one() && mu.im == T::zero() {
        return Err(Error::InvalidParameter("mu must differ from 1".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// Parameters of the right family `f p + f* q` or the left family
/// `p f + q f*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssocParams<T> {
    pub p: Quaternion<T>,
    pub q: Quaternion<T>,
    pub side: Side,
}

impl<T: Real> AssocParams<T> {
    pub fn new(p: Quaternion<T>, q: Quaternion<T>, side: Side) -> Result<Self> {
        if p.norm_sqr() == T::zero() && q.norm_sqr() == T::zero() {
            return Err(Error::InvalidParameter(
                "associated family parameters p and q both vanish".into(),
            ));
        }
        Ok(Self { p, q, side })
    }

    /// The classical family `p = cos(theta)`, `q = sin(theta)`.
    pub fn classical(theta: T, side: Side) -> Self {
        Self {
            p: Quaternion::real(theta.cos()),
            q: Quaternion::real(theta.sin()),
            side,
        }
    }
}

/// Lopez-Ros parameter `sigma = e^{s + i t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LopezRosParam<T> {
    pub sigma: Cx<T>,
    /// `ln|sigma|`
    pub s: T,
    /// `arg(sigma)`
    pub t: T,
}

impl<T: Real> LopezRosParam<T> {
    pub fn new(sigma: Cx<T>) -> Result<Self> {
        if !(sigma.re.is_finite() && sigma.im.is_finite()) || sigma.norm() == T::zero() {
            return Err(Error::InvalidParameter("sigma must be finite and nonzero".into()));
        }
        Ok(Self {
            sigma,
            s: sigma.norm().ln(),
            t: principal_arg(sigma),
        })
    }

    /// The dressing parameter `mu = (1 - e^{-(s + i t)}) / (1 - e^{s - i t})`
    /// whose dressing with `m = n = (1 - i - j - k)/2` reproduces this
    /// deformation.
    pub fn equivalent_mu(&self) -> Cx<T> {
        let one = Complex::new(T::one(), T::zero());
        (one - Complex::new(-self.s, -self.t).exp()) / (one - Complex::new(self.s, -self.t).exp())
    }

    /// `(1 - i - j - k) / 2`
    pub fn cyclic_frame() -> Quaternion<T> {
        Quaternion::lit(0.5, -0.5, -0.5, -0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cxl;
    use proptest::prelude::*;

    type Q = Quaternion<f64>;

    #[test]
    fn rejects_zero_and_one() {
        assert!(DressParams::new(cxl(0.0, 0.0), Q::one(), Q::one()).is_err());
        assert!(DressParams::new(cxl(1.0, 0.0), Q::one(), Q::one()).is_err());
        assert!(DressParams::new(cxl(0.5, 0.0), Q::zero(), Q::one()).is_err());
        assert!(LopezRosParam::new(cxl::<f64>(0.0, 0.0)).is_err());
        assert!(AssocParams::new(Q::zero(), Q::zero(), Side::Right).is_err());
    }

    #[test]
    fn unit_circle_has_zero_s_and_t() {
        for k in 1..12 {
            let mu = num_complex::Complex64::from_polar(1.0, 0.5 * k as f64);
            let p = DressParams::new(mu, Q::one(), Q::one()).unwrap();
            assert!(p.s.abs() < 1e-15 && p.t.abs() < 1e-14, "{} {}", p.s, p.t);
        }
    }

    #[test]
    fn negative_real_mu() {
        let p = DressParams::new(cxl(-0.5f64.sqrt(), 0.0), Q::one(), Q::one()).unwrap();
        assert!((p.s - 2f64.sqrt().ln()).abs() < 1e-15);
        assert_eq!(p.t, 0.0);
    }

    #[test]
    fn real_sigma_gives_negative_reciprocal() {
        for &s in &[2.0, 4.0, 0.3] {
            let mu = LopezRosParam::new(cxl::<f64>(s, 0.0)).unwrap().equivalent_mu();
            assert!((mu - cxl(-1.0 / s, 0.0)).norm() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn a_squared_plus_b_squared_is_one(r in 0.1..10.0f64, ang in -3.1..3.1f64) {
            prop_assume!((r - 1.0).abs() + ang.abs() > 1e-3);
            let p = DressParams::new(num_complex::Complex64::from_polar(r, ang), Q::one(), Q::one()).unwrap();
            let e = p.a * p.a + p.b * p.b - cxl(1.0, 0.0);
            prop_assert!(e.norm() <= 1e-12 * (1.0 + p.a.norm_sqr()));
        }

        #[test]
        fn c_quat_is_b_over_a_minus_one(r in 0.1..10.0f64, ang in -3.1..3.1f64) {
            prop_assume!((r - 1.0).abs() + ang.abs() > 1e-2);
            let p = DressParams::new(num_complex::Complex64::from_polar(r, ang), Q::one(), Q::one()).unwrap();
            let direct = p.b / (p.a - cxl(1.0, 0.0));
            let c = p.c_quat();
            prop_assert!((num_complex::Complex64::new(c.w, c.x) - direct).norm() <= 1e-9 * (1.0 + direct.norm()));
        }
    }
}
