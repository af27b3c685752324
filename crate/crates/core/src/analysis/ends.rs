use num_complex::Complex;

use crate::algebra::{ComplexVector, Quaternion};
use crate::error::{Error, Result};
use crate::holomorphic::PathSpec;
use crate::nullcurve::{gauss_from_differential, stereographic, NullCurve};
use crate::scalar::{Cx, Real};

/// Segments of the polygonal circles used around punctures. Polygons are
/// exact contours for meromorphic integrands.
const CIRCLE_SEGMENTS: usize = 64;
/// Angles sampled per radius when estimating orders.
const ORDER_ANGLES: usize = 16;

/// End type at a puncture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndClass {
    Planar,
    Catenoidal,
    NotEmbeddedFtc,
}

impl EndClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EndClass::Planar => "planar",
            EndClass::Catenoidal => "catenoidal",
            EndClass::NotEmbeddedFtc => "not_embedded_ftc",
        }
    }
}

/// Diagnostics of `dPhi` at a puncture.
///
/// `Planar` iff the order is `-2` and the residue vanishes; `Catenoidal`
/// iff the order is `-2` and the residue is real and nonzero. `alpha` is
/// set for catenoidal ends only.
#[derive(Debug, Clone, PartialEq)]
pub struct EndReport<T> {
    pub puncture: Cx<T>,
    pub order: i32,
    pub residue: ComplexVector<T>,
    pub class: EndClass,
    pub alpha: Option<T>,
}

/// Radius for contours around `p`: well inside the distance to every other
/// puncture of the domain, at most `1/2`.
pub fn auto_radius<T: Real>(curve: &NullCurve<T>, p: Cx<T>) -> T {
    let scale = T::lit(1e-9) * (T::one() + p.norm());
    curve
        .data
        .domain
        .punctures
        .iter()
        .map(|q| (*q - p).norm())
        .filter(|d| *d > scale)
        .fold(T::lit(0.5), |r, d| r.min(T::lit(0.4) * d))
}

fn circle_integral<T: Real>(curve: &NullCurve<T>, p: Cx<T>, r: T) -> Result<ComplexVector<T>> {
    let path = PathSpec::circle(p, r, CIRCLE_SEGMENTS)?;
    let mut f = |z: Cx<T>| curve.differential(z);
    crate::holomorphic::integrate_path(&mut f, &path, curve.tol, curve.dim())
}

/// `(1 / 2 pi i)` times the integral of `dPhi` over positive circles of
/// radius `r, r/2, r/4` around `p`; the three values must agree to `1e-8`
/// (relative to `1 + |res|`), otherwise the singularity is not isolated.
pub fn residue_at<T: Real>(curve: &NullCurve<T>, p: Cx<T>) -> Result<ComplexVector<T>> {
    let r = auto_radius(curve, p);
    let k = Complex::new(T::zero(), T::one() / (T::lit(2.0) * T::PI()));
    let vals: Vec<ComplexVector<T>> = [T::one(), T::lit(0.5), T::lit(0.25)]
        .iter()
        .map(|f| circle_integral(curve, p, r * *f).map(|v| v.scale(-k)))
        .collect::<Result<_>>()?;
    let spread = vals[0].max_abs_diff(&vals[1]).max(vals[0].max_abs_diff(&vals[2]));
    if spread > T::lit(1e-8) * (T::one() + vals[0].norm()) {
        return Err(Error::NonIsolated {
            re: p.re.as_f64(),
            im: p.im.as_f64(),
            spread: spread.as_f64(),
        });
    }
    Ok(vals[0].clone())
}

/// Vanishing order of `dPhi` at `p`: the minimum over components of the
/// slope of `log |dPhi_i|` against `log r` on radii `r, r/2, r/4`.
///
/// `log |dPhi_i|` is averaged over equally spaced angles, which removes the
/// angular dependence of the higher Laurent terms. A fit residual of `0.1` or
/// more, or a slope further than `0.1` from an integer, is reported as
/// [`Error::NonIntegralOrder`]. Components vanishing on all samples are
/// skipped.
pub fn order_at<T: Real>(curve: &NullCurve<T>, p: Cx<T>) -> Result<i32> {
    let r0 = auto_radius(curve, p) * T::lit(0.125);
    let radii = [r0, r0 * T::lit(0.5), r0 * T::lit(0.25)];
    let dim = curve.dim();
    let mut logs = vec![[T::zero(); 3]; dim];
    let mut zero = vec![true; dim];
    for (ri, r) in radii.iter().enumerate() {
        let mut sums = vec![T::zero(); dim];
        let mut counts = vec![0usize; dim];
        for k in 0..ORDER_ANGLES {
            let th = T::lit(2.0) * T::PI() * (T::from_usize(k).unwrap() + T::lit(0.5))
                / T::from_usize(ORDER_ANGLES).unwrap();
            let z = p + Complex::from_polar(*r, th);
            let d = curve.differential(z)?;
            for (c, v) in d.iter().enumerate() {
                if v.norm() > T::zero() {
                    sums[c] += v.norm().ln();
                    counts[c] += 1;
                    zero[c] = false;
                }
            }
        }
        for c in 0..dim {
            if counts[c] > 0 {
                logs[c][ri] = sums[c] / T::from_usize(counts[c]).unwrap();
            }
        }
    }
    let lr: Vec<T> = radii.iter().map(|r| r.ln()).collect();
    let mut order: Option<i32> = None;
    for c in (0..dim).filter(|c| !zero[*c]) {
        let (slope, resid) = fit_slope(&lr, &logs[c]);
        let rounded = slope.round();
        if resid >= T::lit(0.1) || (slope - rounded).abs() >= T::lit(0.1) {
            return Err(Error::NonIntegralOrder {
                slope: slope.as_f64(),
                re: p.re.as_f64(),
                im: p.im.as_f64(),
            });
        }
        let k = rounded.to_i32().unwrap_or(i32::MAX);
        order = Some(order.map_or(k, |o| o.min(k)));
    }
    order.ok_or_else(|| Error::InvalidParameter("dPhi vanishes identically near the point".into()))
}

/// Least-squares slope and the largest deviation of the two successive
/// slopes from it.
fn fit_slope<T: Real>(x: &[T], y: &[T; 3]) -> (T, T) {
    let n = T::lit(3.0);
    let mx = x.iter().fold(T::zero(), |s, v| s + *v) / n;
    let my = y.iter().fold(T::zero(), |s, v| s + *v) / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for i in 0..3 {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    let slope = sxy / sxx;
    let s1 = (y[1] - y[0]) / (x[1] - x[0]);
    let s2 = (y[2] - y[1]) / (x[2] - x[1]);
    (slope, (s1 - slope).abs().max((s2 - slope).abs()))
}

/// Order, residue and type of the end at `p`; `tol` bounds the residue
/// (zero for planar ends) and its imaginary part (real for catenoidal ends).
///
/// For a catenoidal end in 3-space, `alpha` is read off from
/// `res = -(0, 0, 2 pi alpha)` in a frame where the limiting normal at `p`
/// points along `+k`, i.e. `alpha = -<Re res, N_p> / 2 pi`. In 4-space there
/// is no such normal and `alpha = |res| / 2 pi`.
pub fn classify_end<T: Real>(curve: &NullCurve<T>, p: Cx<T>, tol: T) -> Result<EndReport<T>> {
    let order = order_at(curve, p)?;
    let residue = residue_at(curve, p)?;
    let re = residue.re();
    let im = residue.im();
    let re_norm = re.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
    let im_max = im.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let class = if order != -2 {
        EndClass::NotEmbeddedFtc
    } else if residue.norm() <= tol {
        EndClass::Planar
    } else if im_max <= tol {
        EndClass::Catenoidal
    } else {
        EndClass::NotEmbeddedFtc
    };
    let alpha = if class == EndClass::Catenoidal {
        let two_pi = T::lit(2.0) * T::PI();
        Some(match end_normal(curve, p) {
            Some(n) if curve.dim() == 3 => -Quaternion::imag(re[0], re[1], re[2]).dot(n) / two_pi,
            _ => re_norm / two_pi,
        })
    } else {
        None
    };
    Ok(EndReport {
        puncture: p,
        order,
        residue,
        class,
        alpha,
    })
}

/// Limiting normal at `p` in 3-space, averaged over a small circle.
fn end_normal<T: Real>(curve: &NullCurve<T>, p: Cx<T>) -> Option<Quaternion<T>> {
    if curve.dim() != 3 {
        return None;
    }
    let r = auto_radius(curve, p) * T::lit(1e-4);
    let mut acc = Quaternion::zero();
    for k in 0..4 {
        let th = T::FRAC_PI_2() * T::from_usize(k).unwrap();
        let z = p + Complex::from_polar(r, th);
        let d = curve.differential(z).ok()?;
        let (g, _) = gauss_from_differential(&d, z).ok()?;
        acc += stereographic(g);
    }
    let n = acc.norm();
    (n > T::lit(0.5)).then(|| acc / n)
}
