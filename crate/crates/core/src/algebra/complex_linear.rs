use std::ops::{Add, Index, IndexMut, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

use super::quaternion::Quaternion;

/// Vector in the complexification of R^3 or R^4.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    entries: Vec<Cx<T>>,
}

impl<T: Real> ComplexVector<T> {
    pub fn new(entries: Vec<Cx<T>>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex::new(T::zero(), T::zero()); dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Cx<T>] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cx<T>> {
        self.entries.iter()
    }

    /// Builds `re + i im` from two real quaternions, keeping `dim` trailing
    /// components (dim 3 drops the real quaternion part).
    pub fn from_quaternions(re: Quaternion<T>, im: Quaternion<T>, dim: usize) -> Self {
        let off = 4 - dim;
        Self::new(
            (off..4)
                .map(|c| Complex::new(re.component(c), im.component(c)))
                .collect(),
        )
    }

    /// Real part as a quaternion (dim 3 vectors land in `span{i, j, k}`).
    pub fn re_quat(&self) -> Quaternion<T> {
        let mut q = Quaternion::zero();
        let off = 4 - self.dim();
        for (c, e) in self.entries.iter().enumerate() {
            q.set_component(c + off, e.re);
        }
        q
    }

    /// Imaginary part as a quaternion.
    pub fn im_quat(&self) -> Quaternion<T> {
        let mut q = Quaternion::zero();
        let off = 4 - self.dim();
        for (c, e) in self.entries.iter().enumerate() {
            q.set_component(c + off, e.im);
        }
        q
    }

    pub fn re(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.re).collect()
    }

    pub fn im(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.im).collect()
    }

    /// Hermitian norm `sqrt(sum |u_k|^2)`.
    pub fn norm(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, e| acc + e.norm_sqr()).sqrt()
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::new(self.entries.iter().map(|e| *e * s).collect())
    }

    /// Promotes a 3-vector to a 4-vector with vanishing real-quaternion slot.
    pub fn to_dim4(&self) -> Self {
        if self.dim() == 4 {
            return self.clone();
        }
        let mut v = vec![Complex::new(T::zero(), T::zero())];
        v.extend_from_slice(&self.entries);
        Self::new(v)
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        self.entries
            .iter()
            .zip(o.entries.iter())
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }
}

impl<T> Index<usize> for ComplexVector<T> {
    type Output = Cx<T>;
    fn index(&self, i: usize) -> &Cx<T> {
        &self.entries[i]
    }
}

impl<T> IndexMut<usize> for ComplexVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut Cx<T> {
        &mut self.entries[i]
    }
}

impl<T: Real> Add for &ComplexVector<T> {
    type Output = ComplexVector<T>;
    fn add(self, o: Self) -> ComplexVector<T> {
        ComplexVector::new(
            self.entries
                .iter()
                .zip(o.entries.iter())
                .map(|(a, b)| *a + *b)
                .collect(),
        )
    }
}

impl<T: Real> Sub for &ComplexVector<T> {
    type Output = ComplexVector<T>;
    fn sub(self, o: Self) -> ComplexVector<T> {
        ComplexVector::new(
            self.entries
                .iter()
                .zip(o.entries.iter())
                .map(|(a, b)| *a - *b)
                .collect(),
        )
    }
}

/// Symmetric complex bilinear form `B(u, v) = sum u_k v_k` (no conjugation).
pub fn null_form<T: Real>(u: &ComplexVector<T>, v: &ComplexVector<T>) -> Result<Cx<T>> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    Ok(u.iter()
        .zip(v.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + *a * *b))
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Cx<T>>,
    claimed_orthogonal: bool,
}

/// Tolerance for `A^t A = I` on matrices claimed complex orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

impl<T: Real> ComplexMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<Cx<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Self {
            dim,
            data,
            claimed_orthogonal: false,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m.claimed_orthogonal = true;
        m
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
            claimed_orthogonal: false,
        }
    }

    pub fn from_real(dim: usize, real: &[T]) -> Self {
        Self {
            dim,
            data: real.iter().map(|x| Complex::new(*x, T::zero())).collect(),
            claimed_orthogonal: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<Cx<T>>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn is_claimed_orthogonal(&self) -> bool {
        self.claimed_orthogonal
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t[(c, r)] = self[(r, c)];
            }
        }
        t.claimed_orthogonal = self.claimed_orthogonal;
        t
    }

    pub fn matmul(&self, o: &Self) -> Result<Self> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: o.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    acc += self[(r, k)] * o[(k, c)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVector<T>) -> Result<ComplexVector<T>> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        let n = self.dim;
        Ok(ComplexVector::new(
            (0..n)
                .map(|r| (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + self[(r, k)] * v[k]))
                .collect(),
        ))
    }

    /// `max |(A^t A - I)_{rc}|`.
    pub fn orthogonality_residual(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    acc += self[(k, r)] * self[(k, c)];
                }
                if r == c {
                    acc -= Complex::new(T::one(), T::zero());
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Checks `A^t A = I` to [`ORTHOGONALITY_TOL`] and marks the matrix.
    pub fn into_orthogonal(mut self) -> Result<Self> {
        let res = self.orthogonality_residual();
        if res.as_f64() <= ORTHOGONALITY_TOL {
            self.claimed_orthogonal = true;
            Ok(self)
        } else {
            Err(Error::NonOrthogonal { residual: res.as_f64() })
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        self.data
            .iter()
            .zip(o.data.iter())
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// Embeds a 3x3 matrix acting on `span{i, j, k}` into 4x4.
    pub fn to_dim4(&self) -> Self {
        if self.dim == 4 {
            return self.clone();
        }
        let mut m = Self::identity(4);
        for r in 0..3 {
            for c in 0..3 {
                m[(r + 1, c + 1)] = self[(r, c)];
            }
        }
        m.claimed_orthogonal = self.claimed_orthogonal;
        m
    }

    /// Restricts a 4x4 matrix to `span{i, j, k}` when it fixes the real axis
    /// to within `tol`.
    pub fn restrict_to_dim3(&self, tol: T) -> Option<Self> {
        if self.dim != 4 {
            return None;
        }
        for k in 1..4 {
            if self[(0, k)].norm() > tol || self[(k, 0)].norm() > tol {
                return None;
            }
        }
        if (self[(0, 0)] - Complex::new(T::one(), T::zero())).norm() > tol {
            return None;
        }
        let mut m = Self::zeros(3);
        for r in 0..3 {
            for c in 0..3 {
                m[(r, c)] = self[(r + 1, c + 1)];
            }
        }
        m.claimed_orthogonal = self.claimed_orthogonal;
        Some(m)
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Cx<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Cx<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[r * self.dim + c]
    }
}

/// The complex orthogonal block
/// `[[cosh w, i sinh w], [-i sinh w, cosh w]]` placed on the coordinate pair
/// `(first, first + 1)` of an otherwise identity matrix.
pub fn hyperbolic_block<T: Real>(w: Cx<T>, dim: usize, first: usize) -> ComplexMatrix<T> {
    let iu = Complex::new(T::zero(), T::one());
    let mut m = ComplexMatrix::identity(dim);
    m[(first, first)] = w.cosh();
    m[(first, first + 1)] = iu * w.sinh();
    m[(first + 1, first)] = -iu * w.sinh();
    m[(first + 1, first + 1)] = w.cosh();
    m
}
