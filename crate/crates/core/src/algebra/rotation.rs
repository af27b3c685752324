use crate::error::{Error, Result};
use crate::scalar::Real;

use super::complex_linear::ComplexMatrix;
use super::quaternion::{Quaternion, UnitQuaternion};

/// The rotation `v -> m v n^{-1}` of R^4 = H for unit quaternions `m, n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMap<T> {
    pub m: UnitQuaternion<T>,
    pub n: UnitQuaternion<T>,
}

impl<T: Real> RotationMap<T> {
    /// Normalizes both factors; zero quaternions are rejected.
    pub fn new(m: Quaternion<T>, n: Quaternion<T>) -> Result<Self> {
        let m = UnitQuaternion::new(m).ok_or_else(|| Error::InvalidParameter("rotation factor m is zero".into()))?;
        let n = UnitQuaternion::new(n).ok_or_else(|| Error::InvalidParameter("rotation factor n is zero".into()))?;
        Ok(Self { m, n })
    }

    pub fn from_units(m: UnitQuaternion<T>, n: UnitQuaternion<T>) -> Self {
        Self { m, n }
    }

    pub fn identity() -> Self {
        Self::from_units(UnitQuaternion::identity(), UnitQuaternion::identity())
    }

    pub fn rotate(&self, v: Quaternion<T>) -> Quaternion<T> {
        self.m.get() * v * self.n.inv()
    }

    /// `v -> m^{-1} v n`.
    pub fn inverse(&self) -> Self {
        Self::from_units(
            UnitQuaternion::new(self.m.inv()).unwrap_or(UnitQuaternion::identity()),
            UnitQuaternion::new(self.n.inv()).unwrap_or(UnitQuaternion::identity()),
        )
    }

    /// Real 4x4 matrix in the basis (1, i, j, k); column `c` is the image of
    /// the `c`-th basis vector.
    pub fn real_matrix(&self) -> [[T; 4]; 4] {
        let mut out = [[T::zero(); 4]; 4];
        for c in 0..4 {
            let mut e = Quaternion::zero();
            e.set_component(c, T::one());
            let img = self.rotate(e);
            for (r, row) in out.iter_mut().enumerate() {
                row[c] = img.component(r);
            }
        }
        out
    }

    pub fn complex_matrix(&self) -> ComplexMatrix<T> {
        let rm = self.real_matrix();
        let flat: Vec<T> = rm.iter().flat_map(|r| r.iter().copied()).collect();
        ComplexMatrix::from_real(4, &flat)
    }
}

pub fn rotate<T: Real>(r: &RotationMap<T>, v: Quaternion<T>) -> Quaternion<T> {
    r.rotate(v)
}

/// Determinant of a real 4x4 matrix by cofactor expansion.
pub fn det4<T: Real>(a: &[[T; 4]; 4]) -> T {
    let det3 = |skip_r: usize, skip_c: usize| -> T {
        let mut m = [[T::zero(); 3]; 3];
        let mut ri = 0;
        for (r, row) in a.iter().enumerate() {
            if r == skip_r {
                continue;
            }
            let mut ci = 0;
            for (c, v) in row.iter().enumerate() {
                if c == skip_c {
                    continue;
                }
                m[ri][ci] = *v;
                ci += 1;
            }
            ri += 1;
        }
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let mut d = T::zero();
    for (c, &entry) in a[0].iter().enumerate() {
        let term = entry * det3(0, c);
        d = if c % 2 == 0 { d + term } else { d - term };
    }
    d
}
