use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::scalar::{Cx, Real};

/// Quaternion `w + x i + y j + z k` with the Hamilton convention `ij = k`.
///
/// Euclidean 4-space is modelled as the quaternions and 3-space as the
/// imaginary quaternions `span{i, j, k}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    #[inline]
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn lit(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self::new(T::lit(w), T::lit(x), T::lit(y), T::lit(z))
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    /// Imaginary quaternion `x i + y j + z k`.
    pub fn imag(x: T, y: T, z: T) -> Self {
        Self::new(T::zero(), x, y, z)
    }

    /// Embeds a complex number into `span{1, i}`.
    pub fn from_complex(c: Cx<T>) -> Self {
        Self::new(c.re, c.im, T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Component by index in the order (1, i, j, k).
    pub fn component(&self, idx: usize) -> T {
        match idx {
            0 => self.w,
            1 => self.x,
            2 => self.y,
            3 => self.z,
            _ => panic!("quaternion component index {idx} out of range"),
        }
    }

    pub fn set_component(&mut self, idx: usize, v: T) {
        match idx {
            0 => self.w = v,
            1 => self.x = v,
            2 => self.y = v,
            3 => self.z = v,
            _ => panic!("quaternion component index {idx} out of range"),
        }
    }

    pub fn re(self) -> T {
        self.w
    }

    pub fn im(self) -> Self {
        Self::imag(self.x, self.y, self.z)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> T {
        // hypot-style scaling keeps tiny and huge inputs finite
        let m = self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs());
        if m == T::zero() || !m.is_finite() {
            return m;
        }
        (self / m).norm_sqr().sqrt() * m
    }

    /// Multiplicative inverse; `None` for the zero quaternion.
    pub fn inv(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 == T::zero() || !n2.is_finite() {
            None
        } else {
            Some(self.conj() / n2)
        }
    }

    /// Euclidean inner product on R^4.
    pub fn dot(self, o: Self) -> T {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Cross product of the imaginary parts.
    pub fn cross(self, o: Self) -> Self {
        Self::imag(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs(self) -> T {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    /// `p q^{-1}`; `None` when `q` vanishes.
    pub fn right_div(self, q: Self) -> Option<Self> {
        q.inv().map(|qi| self * qi)
    }

    /// `q^{-1} p`; `None` when `q` vanishes.
    pub fn left_div(self, q: Self) -> Option<Self> {
        q.inv().map(|qi| qi * self)
    }
}

/// Hamilton product.
#[inline]
pub fn quat_mul<T: Real>(p: Quaternion<T>, q: Quaternion<T>) -> Quaternion<T> {
    Quaternion::new(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, q: Self) -> Self {
        quat_mul(self, q)
    }
}

impl<T: Real> Mul<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Real> Div<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn add(self, q: Self) -> Self {
        Self::new(self.w + q.w, self.x + q.x, self.y + q.y, self.z + q.z)
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn sub(self, q: Self) -> Self {
        Self::new(self.w - q.w, self.x - q.x, self.y - q.y, self.z - q.z)
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, q: Self) {
        *self = *self + q;
    }
}

impl<T: Real> SubAssign for Quaternion<T> {
    fn sub_assign(&mut self, q: Self) {
        *self = *self - q;
    }
}

/// Quaternion of norm one. Construction normalizes any nonzero input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion<T>(Quaternion<T>);

impl<T: Real> UnitQuaternion<T> {
    /// Normalizes `q`; `None` for the zero quaternion.
    pub fn new(q: Quaternion<T>) -> Option<Self> {
        let n = q.norm();
        if n == T::zero() || !n.is_finite() {
            None
        } else {
            Some(Self(q / n))
        }
    }

    pub fn identity() -> Self {
        Self(Quaternion::one())
    }

    pub fn get(self) -> Quaternion<T> {
        self.0
    }

    pub fn inv(self) -> Quaternion<T> {
        self.0.conj()
    }
}

impl<T: Real> From<UnitQuaternion<T>> for Quaternion<T> {
    fn from(u: UnitQuaternion<T>) -> Self {
        u.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = Quaternion<f64>;

    #[test]
    fn identity_and_basis_relations() {
        let q = Q::lit(0.3, -1.2, 2.0, 0.7);
        assert_eq!(Q::one() * q, q);
        assert_eq!(q * Q::one(), q);
        assert_eq!(Q::i() * Q::j(), Q::k());
        assert_eq!(Q::j() * Q::i(), -Q::k());
        assert_eq!(Q::j() * Q::k(), Q::i());
        assert_eq!(Q::k() * Q::i(), Q::j());
        assert_eq!(Q::i() * Q::i(), -Q::one());
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(Q::zero().inv().is_none());
        assert!(UnitQuaternion::new(Q::zero()).is_none());
    }

    #[test]
    fn unit_constructor_normalizes() {
        let u = UnitQuaternion::new(Q::lit(1.0, 0.0, 0.0, 1.0)).unwrap();
        assert!((u.get().norm() - 1.0).abs() < 1e-15);
        assert!((u.get().w - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn imaginary_product_splits_into_dot_and_cross() {
        let a = Q::imag(0.2, -1.0, 0.5);
        let b = Q::imag(1.5, 0.3, -0.8);
        let p = a * b;
        assert!((p.w + a.dot(b)).abs() < 1e-15);
        assert!((p.im() - a.cross(b)).max_abs() < 1e-15);
    }

    fn arb_q() -> impl Strategy<Value = Q> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(w, x, y, z)| Q::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(p in arb_q(), q in arb_q()) {
            prop_assert!(((p * q).norm() - p.norm() * q.norm()).abs() <= 1e-12);
        }

        #[test]
        fn product_is_associative(p in arb_q(), q in arb_q(), r in arb_q()) {
            let d = ((p * q) * r - p * (q * r)).max_abs();
            prop_assert!(d <= 1e-12 * (1.0 + p.norm() * q.norm() * r.norm()));
        }
    }
}
