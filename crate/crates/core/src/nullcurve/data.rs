use num_complex::Complex;

use crate::algebra::ComplexVector;
use crate::error::{pt, Error, Result};
use crate::holomorphic::{HoloFunction, PathSpec};
use crate::scalar::{Cx, Real};

/// Parameter region in the z-plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Region<T> {
    Rect {
        x0: T,
        x1: T,
        y0: T,
        y1: T,
    },
    Annulus {
        center: Cx<T>,
        r0: T,
        r1: T,
    },
    /// Closed fundamental parallelogram `{a w1 + b w2 : a, b in [0, 1]}`.
    Torus {
        omega1: Cx<T>,
        omega2: Cx<T>,
    },
}

impl<T: Real> Region<T> {
    pub fn contains(&self, z: Cx<T>) -> bool {
        match self {
            Region::Rect { x0, x1, y0, y1 } => z.re >= *x0 && z.re <= *x1 && z.im >= *y0 && z.im <= *y1,
            Region::Annulus { center, r0, r1 } => {
                let d = (z - *center).norm();
                d >= *r0 && d <= *r1
            }
            Region::Torus { omega1, omega2 } => {
                // solve z = a w1 + b w2
                let det = omega1.re * omega2.im - omega1.im * omega2.re;
                let a = (z.re * omega2.im - z.im * omega2.re) / det;
                let b = (omega1.re * z.im - omega1.im * z.re) / det;
                let eps = T::lit(1e-12);
                a >= -eps && a <= T::one() + eps && b >= -eps && b <= T::one() + eps
            }
        }
    }

    pub fn diameter(&self) -> T {
        match self {
            Region::Rect { x0, x1, y0, y1 } => (*x1 - *x0).hypot(*y1 - *y0),
            Region::Annulus { r1, .. } => *r1 * T::lit(2.0),
            Region::Torus { omega1, omega2 } => (*omega1 + *omega2).norm().max((*omega1 - *omega2).norm()),
        }
    }
}

/// Named homotopy generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator<T> {
    pub name: String,
    pub path: PathSpec<T>,
}

/// Parameter domain: region, declared punctures, basepoint and generators.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec<T> {
    pub region: Region<T>,
    pub punctures: Vec<Cx<T>>,
    pub basepoint: Cx<T>,
    pub generators: Vec<Generator<T>>,
    /// Exclusion radius around punctures.
    pub clearance: T,
}

impl<T: Real> DomainSpec<T> {
    /// Clearance defaults to `1e-6` times the region diameter. Punctures may
    /// lie on the boundary of the region; generators must avoid punctures.
    pub fn new(
        region: Region<T>,
        punctures: Vec<Cx<T>>,
        basepoint: Cx<T>,
        generators: Vec<Generator<T>>,
    ) -> Result<Self> {
        let clearance = T::lit(1e-6) * region.diameter();
        let d = Self {
            region,
            punctures,
            basepoint,
            generators,
            clearance,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        // punctures are checked against a slightly enlarged region so that
        // boundary punctures such as torus lattice points are accepted
        for p in &self.punctures {
            if !self.region.contains(*p) && !self.near_region(*p) {
                let (re, im) = pt(*p);
                return Err(Error::InvalidParameter(format!(
                    "puncture ({re}, {im}) lies outside the region"
                )));
            }
        }
        if self.is_near_puncture(self.basepoint, self.clearance) {
            let (re, im) = pt(self.basepoint);
            return Err(Error::ClearanceViolation {
                re,
                im,
                clearance: self.clearance.as_f64(),
            });
        }
        for g in &self.generators {
            g.path.check_clearance(&self.punctures, self.clearance)?;
        }
        Ok(())
    }

    fn near_region(&self, z: Cx<T>) -> bool {
        let tol = T::lit(1e-9) * (T::one() + self.region.diameter());
        [
            Complex::new(tol, T::zero()),
            Complex::new(-tol, T::zero()),
            Complex::new(T::zero(), tol),
            Complex::new(T::zero(), -tol),
        ]
        .iter()
        .any(|d| self.region.contains(z + *d))
    }

    pub fn is_near_puncture(&self, z: Cx<T>, radius: T) -> bool {
        self.punctures.iter().any(|p| (*p - z).norm() < radius)
    }

    pub fn generator(&self, name: &str) -> Option<&Generator<T>> {
        self.generators.iter().find(|g| g.name == name)
    }
}

/// The meromorphic data a null curve is integrated from.
#[derive(Debug, Clone)]
pub enum DataKind<T> {
    /// `(g, dh)` in 3-space; `dh` is the coefficient of `dz`.
    R3Height { g: HoloFunction<T>, dh: HoloFunction<T> },
    /// `(g, omega)` in 3-space with `dh = g omega`.
    R3 { g: HoloFunction<T>, omega: HoloFunction<T> },
    /// `(g1, g2, omega)` in 4-space.
    R4 {
        g1: HoloFunction<T>,
        g2: HoloFunction<T>,
        omega: HoloFunction<T>,
    },
    /// `dPhi` given componentwise (3 or 4 components).
    Differential { components: Vec<HoloFunction<T>> },
}

/// Weierstrass data together with its parameter domain.
#[derive(Debug, Clone)]
pub struct WeierstrassData<T> {
    pub kind: DataKind<T>,
    pub domain: DomainSpec<T>,
}

impl<T: Real> WeierstrassData<T> {
    pub fn new(kind: DataKind<T>, domain: DomainSpec<T>) -> Result<Self> {
        if let DataKind::Differential { components } = &kind {
            if components.len() != 3 && components.len() != 4 {
                return Err(Error::DimensionMismatch {
                    expected: 3,
                    got: components.len(),
                });
            }
        }
        Ok(Self { kind, domain })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            DataKind::R3Height { .. } | DataKind::R3 { .. } => 3,
            DataKind::R4 { .. } => 4,
            DataKind::Differential { components } => components.len(),
        }
    }

    /// Symbolic components of `dPhi / dz`.
    pub fn differential_exprs(&self) -> Vec<HoloFunction<T>> {
        let half = || HoloFunction::real(0.5);
        let ihalf = || HoloFunction::complex(0.0, 0.5);
        let one = || HoloFunction::real(1.0);
        match &self.kind {
            DataKind::R3Height { g, dh } => {
                let inv = one() / g.clone();
                vec![
                    half() * (inv.clone() - g.clone()) * dh.clone(),
                    ihalf() * (inv + g.clone()) * dh.clone(),
                    dh.clone(),
                ]
            }
            DataKind::R3 { g, omega } => {
                let g2 = g.clone().powi(2);
                vec![
                    half() * (one() - g2.clone()) * omega.clone(),
                    ihalf() * (one() + g2) * omega.clone(),
                    g.clone() * omega.clone(),
                ]
            }
            DataKind::R4 { g1, g2, omega } => {
                let s = g1.clone().powi(2) + g2.clone().powi(2);
                vec![
                    g2.clone() * omega.clone(),
                    half() * (one() - s.clone()) * omega.clone(),
                    ihalf() * (one() + s) * omega.clone(),
                    g1.clone() * omega.clone(),
                ]
            }
            DataKind::Differential { components } => components.clone(),
        }
    }
}

/// `dPhi/dz` at `z` from the representation formulas.
pub fn differential_at<T: Real>(data: &WeierstrassData<T>, z: Cx<T>) -> Result<ComplexVector<T>> {
    let half = T::lit(0.5);
    let one = Complex::new(T::one(), T::zero());
    let iu = Complex::new(T::zero(), T::one());
    let sing = || {
        let (re, im) = pt(z);
        Error::Singularity(re, im)
    };
    let v = match &data.kind {
        DataKind::R3Height { g, dh } => {
            let gv = g.eval(z)?;
            let h = dh.eval(z)?;
            if gv.norm() == T::zero() {
                return Err(sing());
            }
            let inv = gv.inv();
            vec![(inv - gv) * h * half, iu * (inv + gv) * h * half, h]
        }
        DataKind::R3 { g, omega } => {
            let gv = g.eval(z)?;
            let w = omega.eval(z)?;
            let g2 = gv * gv;
            vec![(one - g2) * w * half, iu * (one + g2) * w * half, gv * w]
        }
        DataKind::R4 { g1, g2, omega } => {
            let a = g1.eval(z)?;
            let b = g2.eval(z)?;
            let w = omega.eval(z)?;
            let s = a * a + b * b;
            vec![b * w, (one - s) * w * half, iu * (one + s) * w * half, a * w]
        }
        DataKind::Differential { components } => components.iter().map(|c| c.eval(z)).collect::<Result<Vec<_>>>()?,
    };
    let v = ComplexVector::new(v);
    if v.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(sing());
    }
    Ok(v)
}
