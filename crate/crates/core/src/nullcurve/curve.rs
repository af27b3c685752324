use num_complex::Complex;

use crate::algebra::{ComplexMatrix, ComplexVector};
use crate::error::{pt, Error, Result};
use crate::holomorphic::{integrate_path, HoloFunction, PathSpec, QuadTolerance};
use crate::scalar::{Cx, Real};

use super::data::{differential_at, DataKind, WeierstrassData};

/// Holomorphic null curve `Phi = Phi(z0) + int_{z0} A dPhi_data`.
///
/// `A` is an optional complex orthogonal matrix (a Goursat transform); a 4x4
/// matrix applied to 3-space data promotes the curve to 4-space.
#[derive(Debug, Clone)]
pub struct NullCurve<T> {
    pub data: WeierstrassData<T>,
    pub basepoint: Cx<T>,
    pub phi0: ComplexVector<T>,
    pub tol: QuadTolerance<T>,
    pub matrix: Option<ComplexMatrix<T>>,
}

impl<T: Real> NullCurve<T> {
    /// Curve with basepoint taken from the domain and `Phi(z0) = phi0`.
    pub fn new(data: WeierstrassData<T>, phi0: ComplexVector<T>) -> Result<Self> {
        if phi0.dim() != data.dim() {
            return Err(Error::DimensionMismatch {
                expected: data.dim(),
                got: phi0.dim(),
            });
        }
        let basepoint = data.domain.basepoint;
        Ok(Self {
            data,
            basepoint,
            phi0,
            tol: QuadTolerance::default(),
            matrix: None,
        })
    }

    /// Curve with `Phi(z0) = 0`.
    pub fn from_data(data: WeierstrassData<T>) -> Self {
        let dim = data.dim();
        Self::new(data, ComplexVector::zeros(dim)).expect("matching dimension")
    }

    pub fn with_tolerance(mut self, tol: QuadTolerance<T>) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        match &self.matrix {
            Some(m) => m.dim(),
            None => self.data.dim(),
        }
    }

    /// `dPhi/dz` at `z`, after the optional matrix.
    pub fn differential(&self, z: Cx<T>) -> Result<ComplexVector<T>> {
        let d = differential_at(&self.data, z)?;
        match &self.matrix {
            None => Ok(d),
            Some(m) if m.dim() == d.dim() => m.apply(&d),
            Some(m) => m.apply(&d.to_dim4()),
        }
    }

    /// `dPhi/dz` at `z`, falling back to the mean over a circle of radius
    /// `r` when direct evaluation fails or returns a negligible value.
    ///
    /// The fallback resolves removable cancellations such as `g^2 omega` at a
    /// pole of `g`; at a genuine branch point the mean is negligible too.
    pub fn differential_regularized(&self, z: Cx<T>, r: T) -> Result<ComplexVector<T>> {
        let direct = self.differential(z);
        if let Ok(d) = &direct {
            if d.norm() > T::lit(1e-8) {
                return direct;
            }
        }
        let n = 16;
        let mut acc = ComplexVector::zeros(self.dim());
        for k in 0..n {
            let th = T::lit(2.0) * T::PI() * T::from_usize(k).unwrap() / T::from_usize(n).unwrap();
            let d = self.differential(z + Complex::from_polar(r, th))?;
            acc = &acc + &d;
        }
        Ok(acc.scale(Complex::new(T::one() / T::from_usize(n).unwrap(), T::zero())))
    }

    /// Symbolic `dPhi/dz` components, after the optional matrix.
    pub fn differential_exprs(&self) -> Vec<HoloFunction<T>> {
        let mut comps = self.data.differential_exprs();
        let Some(m) = &self.matrix else {
            return comps;
        };
        if m.dim() == 4 && comps.len() == 3 {
            comps.insert(0, HoloFunction::real(0.0));
        }
        (0..m.dim())
            .map(|r| {
                let mut acc: Option<HoloFunction<T>> = None;
                for (k, c) in comps.iter().enumerate() {
                    let coef = m[(r, k)];
                    if coef.norm() == T::zero() {
                        continue;
                    }
                    let term = if coef == Complex::new(T::one(), T::zero()) {
                        c.clone()
                    } else {
                        HoloFunction::constant(coef) * c.clone()
                    };
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a + term,
                    });
                }
                acc.unwrap_or(HoloFunction::real(0.0))
            })
            .collect()
    }

    /// `int_path dPhi` without the basepoint value.
    pub fn integrate_differential(&self, path: &PathSpec<T>) -> Result<ComplexVector<T>> {
        path.check_clearance(&self.data.domain.punctures, self.data.domain.clearance)?;
        let mut f = |z: Cx<T>| self.differential(z);
        integrate_path(&mut f, path, self.tol, self.dim())
    }

    /// Gauss maps `(G1, G2)` at `z` read off from `dPhi`. In 3-space both
    /// equal `g = dPhi3 / (dPhi1 - i dPhi2)`; in 4-space
    /// `G1 = g1 - i g2`, `G2 = g1 + i g2`.
    pub fn gauss_maps(&self, z: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        if self.matrix.is_none() {
            match &self.data.kind {
                DataKind::R3Height { g, .. } | DataKind::R3 { g, .. } => {
                    if let Ok(v) = g.eval(z) {
                        return Ok((v, v));
                    }
                }
                DataKind::R4 { g1, g2, .. } => {
                    if let (Ok(a), Ok(b)) = (g1.eval(z), g2.eval(z)) {
                        let iu = Complex::new(T::zero(), T::one());
                        return Ok((a - iu * b, a + iu * b));
                    }
                }
                DataKind::Differential { .. } => {}
            }
        }
        let r = T::lit(1e-6) * self.data.domain.region.diameter();
        let d = self.differential_regularized(z, r)?;
        gauss_from_differential(&d, z)
    }

    /// Applies a further matrix on the left of the current one.
    pub fn with_matrix(&self, a: &ComplexMatrix<T>) -> Result<Self> {
        let mut out = self.clone();
        let current = match &self.matrix {
            Some(m) => m.clone(),
            None => ComplexMatrix::identity(self.data.dim()),
        };
        let (a, current, phi0) = if a.dim() == current.dim() {
            (a.clone(), current, self.phi0.clone())
        } else if a.dim() == 4 && current.dim() == 3 {
            (a.clone(), current.to_dim4(), self.phi0.to_dim4())
        } else if a.dim() == 3 && current.dim() == 4 {
            (a.to_dim4(), current, self.phi0.clone())
        } else {
            return Err(Error::DimensionMismatch {
                expected: current.dim(),
                got: a.dim(),
            });
        };
        out.phi0 = a.apply(&phi0)?;
        out.matrix = Some(a.matmul(&current)?);
        Ok(out)
    }
}

pub(crate) fn gauss_from_differential<T: Real>(d: &ComplexVector<T>, z: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
    let iu = Complex::new(T::zero(), T::one());
    let off = d.dim() - 3;
    let w = d[off] - iu * d[off + 1];
    if w.norm() <= T::epsilon() * d.norm() {
        // the Gauss map sits at infinity
        let inf = Complex::new(T::infinity(), T::zero());
        if w.norm() == T::zero() && d.norm() == T::zero() {
            let (re, im) = pt(z);
            return Err(Error::Singularity(re, im));
        }
        return Ok((inf, inf));
    }
    let g1 = d[off + 2] / w;
    if off == 0 {
        return Ok((g1, g1));
    }
    let g2 = d[0] / w;
    Ok((g1 - iu * g2, g1 + iu * g2))
}

/// `Phi` at the end of `path`, which must start at the basepoint.
pub fn integrate_phi<T: Real>(curve: &NullCurve<T>, path: &PathSpec<T>) -> Result<ComplexVector<T>> {
    if path.start() != curve.basepoint {
        let (re, im) = pt(path.start());
        return Err(Error::InvalidParameter(format!(
            "path starts at ({re}, {im}), not at the basepoint"
        )));
    }
    let int = curve.integrate_differential(path)?;
    Ok(&curve.phi0 + &int)
}

/// Sample points used to decide whether a symbolic denominator vanishes
/// identically.
fn probe_points<T: Real>(curve: &NullCurve<T>) -> Vec<Cx<T>> {
    let d = curve.data.domain.region.diameter().max(T::lit(1e-3));
    let r = d * T::lit(0.05);
    (0..16)
        .map(|k| {
            let th = T::lit(0.37 + 0.81 * k as f64);
            let rad = r * T::lit(1.0 + 0.13 * k as f64);
            curve.basepoint + Complex::from_polar(rad, th)
        })
        .collect()
}

/// Recovers `(g, omega)` (3-space) or `(g1, g2, omega)` (4-space) from the
/// null curve: `omega = dPhi1 - i dPhi2`, `g = dPhi3 / omega`.
pub fn weierstrass_from_phi<T: Real>(curve: &NullCurve<T>) -> Result<WeierstrassData<T>> {
    let comps = curve.differential_exprs();
    let off = comps.len() - 3;
    let iu = HoloFunction::complex(0.0, 1.0);
    let omega = comps[off].clone() - iu * comps[off + 1].clone();
    let mut scale = T::zero();
    let mut worst = T::zero();
    for z in probe_points(curve) {
        let (Ok(w), Ok(d)) = (omega.eval(z), curve.differential(z)) else {
            continue;
        };
        scale = scale.max(d.norm());
        worst = worst.max(w.norm());
    }
    if !(worst > T::lit(1e-13) * scale) {
        return Err(Error::DegenerateDenominator);
    }
    let g = comps[off + 2].clone() / omega.clone();
    let kind = if off == 0 {
        DataKind::R3 { g, omega }
    } else {
        DataKind::R4 {
            g1: g,
            g2: comps[0].clone() / omega.clone(),
            omega,
        }
    };
    WeierstrassData::new(kind, curve.data.domain.clone())
}
