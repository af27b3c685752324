use num_complex::Complex;

use crate::algebra::ComplexVector;
use crate::error::{pt, Error, Result};
use crate::scalar::{principal_arg, Cx, Real};

use super::expr::HoloFunction;

/// Default bisection limit for adaptive routines along a path.
pub const DEFAULT_MAX_DEPTH: usize = 40;

/// Polygonal integration contour.
///
/// Loops are closed polygons; for holomorphic integrands a polygon gives the
/// same contour integral as any homotopic smooth curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec<T> {
    waypoints: Vec<Cx<T>>,
    pub max_depth: usize,
}

impl<T: Real> PathSpec<T> {
    /// Consecutive waypoints must be distinct. A single waypoint is the empty
    /// path.
    pub fn new(waypoints: Vec<Cx<T>>) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(Error::InvalidParameter("path needs a waypoint".into()));
        }
        for w in waypoints.windows(2) {
            if w[0] == w[1] {
                let (re, im) = pt(w[0]);
                return Err(Error::InvalidParameter(format!(
                    "repeated consecutive waypoint ({re}, {im})"
                )));
            }
        }
        if waypoints.iter().any(|w| !(w.re.is_finite() && w.im.is_finite())) {
            return Err(Error::InvalidParameter("non-finite waypoint".into()));
        }
        Ok(Self {
            waypoints,
            max_depth: DEFAULT_MAX_DEPTH,
        })
    }

    pub fn point(z: Cx<T>) -> Self {
        Self {
            waypoints: vec![z],
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    pub fn segment(a: Cx<T>, b: Cx<T>) -> Result<Self> {
        Self::new(vec![a, b])
    }

    /// Positively oriented regular `n`-gon inscribed in the circle, starting
    /// at `center + radius`.
    pub fn circle(center: Cx<T>, radius: T, n: usize) -> Result<Self> {
        if !(radius > T::zero()) || n < 3 {
            return Err(Error::InvalidParameter(
                "circle needs positive radius and at least 3 vertices".into(),
            ));
        }
        let tau = T::lit(2.0) * T::PI();
        let mut w: Vec<Cx<T>> = (0..n)
            .map(|k| {
                let th = tau * T::from_usize(k).unwrap() / T::from_usize(n).unwrap();
                center + Complex::from_polar(radius, th)
            })
            .collect();
        w.push(w[0]);
        Self::new(w)
    }

    pub fn with_max_depth(mut self, d: usize) -> Self {
        self.max_depth = d;
        self
    }

    pub fn waypoints(&self) -> &[Cx<T>] {
        &self.waypoints
    }

    pub fn start(&self) -> Cx<T> {
        self.waypoints[0]
    }

    pub fn end(&self) -> Cx<T> {
        *self.waypoints.last().unwrap()
    }

    pub fn is_closed(&self) -> bool {
        self.waypoints.len() > 1 && self.start() == self.end()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Cx<T>, Cx<T>)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> T {
        self.segments().fold(T::zero(), |acc, (a, b)| acc + (b - a).norm())
    }

    pub fn translated(&self, by: Cx<T>) -> Self {
        Self {
            waypoints: self.waypoints.iter().map(|w| *w + by).collect(),
            max_depth: self.max_depth,
        }
    }

    pub fn reversed(&self) -> Self {
        let mut w = self.waypoints.clone();
        w.reverse();
        Self {
            waypoints: w,
            max_depth: self.max_depth,
        }
    }

    /// Smallest distance from the path to `p`.
    pub fn distance_to(&self, p: Cx<T>) -> T {
        if self.waypoints.len() == 1 {
            return (self.waypoints[0] - p).norm();
        }
        self.segments()
            .map(|(a, b)| segment_distance(a, b, p))
            .fold(T::infinity(), |m, d| m.min(d))
    }

    /// Fails on the first point closer than `clearance` to the path.
    pub fn check_clearance(&self, points: &[Cx<T>], clearance: T) -> Result<()> {
        for p in points {
            if self.distance_to(*p) < clearance {
                let (re, im) = pt(*p);
                return Err(Error::ClearanceViolation {
                    re,
                    im,
                    clearance: clearance.as_f64(),
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn segment_distance<T: Real>(a: Cx<T>, b: Cx<T>, p: Cx<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let u = ((p - a) * d.conj()).re / len2;
    let u = u.max(T::zero()).min(T::one());
    (a + d * u - p).norm()
}

/// Absolute and relative tolerances for path quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Default for QuadTolerance<T> {
    fn default() -> Self {
        Self {
            abs: T::lit(1e-10),
            rel: T::lit(1e-10),
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Rule<T> {
    kronrod: ComplexVector<T>,
    err: T,
    l1: T,
}

fn gk15<T, F>(f: &mut F, a: Cx<T>, b: Cx<T>) -> Result<Rule<T>>
where
    T: Real,
    F: FnMut(Cx<T>) -> Result<ComplexVector<T>>,
{
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let centre = f(mid)?;
    let dim = centre.dim();
    let mut k = centre.scale(Complex::new(T::lit(WGK[7]), T::zero()));
    let mut g = centre.scale(Complex::new(T::lit(WG[3]), T::zero()));
    let mut l1 = centre.norm() * T::lit(WGK[7]);
    for j in 0..7 {
        let x = half * T::lit(XGK[j]);
        let lo = f(mid - x)?;
        let hi = f(mid + x)?;
        if lo.dim() != dim || hi.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: lo.dim().max(hi.dim()),
            });
        }
        let sum = &lo + &hi;
        k = &k + &sum.scale(Complex::new(T::lit(WGK[j]), T::zero()));
        if j % 2 == 1 {
            g = &g + &sum.scale(Complex::new(T::lit(WG[j / 2]), T::zero()));
        }
        l1 += (lo.norm() + hi.norm()) * T::lit(WGK[j]);
    }
    let k = k.scale(half);
    let g = g.scale(half);
    let err = (&k - &g).norm();
    Ok(Rule {
        kronrod: k,
        err,
        l1: l1 * half.norm(),
    })
}

/// Adaptive Gauss-Kronrod (7/15) integral of a vector-valued holomorphic
/// integrand along the straight segment `a -> b`.
///
/// A piece is accepted once its error estimate is below its length-weighted
/// share of `max(abs, rel |I|)` or below the roundoff floor of its absolute
/// integral.
pub fn integrate_segment<T, F>(
    f: &mut F,
    a: Cx<T>,
    b: Cx<T>,
    tol: QuadTolerance<T>,
    max_depth: usize,
) -> Result<ComplexVector<T>>
where
    T: Real,
    F: FnMut(Cx<T>) -> Result<ComplexVector<T>>,
{
    let whole = gk15(f, a, b)?;
    let target = tol.abs.max(tol.rel * whole.kronrod.norm());
    let total_len = (b - a).norm();
    let eps_floor = T::lit(50.0) * T::epsilon();
    let mut acc: Option<ComplexVector<T>> = None;
    let mut worst = T::zero();
    // depth-first with an explicit stack keeps the summation order fixed
    let mut stack = vec![(a, b, 0usize, Some(whole))];
    while let Some((lo, hi, depth, rule)) = stack.pop() {
        let rule = match rule {
            Some(r) => r,
            None => gk15(f, lo, hi)?,
        };
        let share = target * (hi - lo).norm() / total_len;
        let floor = eps_floor * rule.l1;
        if rule.err <= share.max(floor) {
            acc = Some(match acc {
                None => rule.kronrod,
                Some(s) => &s + &rule.kronrod,
            });
            continue;
        }
        if depth >= max_depth {
            worst = worst.max(rule.err);
            return Err(Error::QuadratureFailed {
                estimate: worst.as_f64(),
            });
        }
        let m = (lo + hi) * T::lit(0.5);
        stack.push((m, hi, depth + 1, None));
        stack.push((lo, m, depth + 1, None));
    }
    Ok(acc.expect("at least one accepted piece"))
}

/// Integral along every segment of the path, summed in path order. The empty
/// path integrates to zero in dimension `dim`.
pub fn integrate_path<T, F>(
    f: &mut F,
    path: &PathSpec<T>,
    tol: QuadTolerance<T>,
    dim: usize,
) -> Result<ComplexVector<T>>
where
    T: Real,
    F: FnMut(Cx<T>) -> Result<ComplexVector<T>>,
{
    let mut acc = ComplexVector::zeros(dim);
    for (a, b) in path.segments() {
        let piece = integrate_segment(f, a, b, tol, path.max_depth)?;
        if piece.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: piece.dim(),
            });
        }
        acc = &acc + &piece;
    }
    Ok(acc)
}

/// Scalar convenience wrapper around [`integrate_path`].
pub fn contour_integral<T: Real>(f: &HoloFunction<T>, path: &PathSpec<T>, tol: QuadTolerance<T>) -> Result<Cx<T>> {
    let mut g = |z: Cx<T>| f.eval(z).map(|v| ComplexVector::new(vec![v]));
    Ok(integrate_path(&mut g, path, tol, 1)?[0])
}

/// Analytic continuation of `log f` along `path`, starting from the
/// principal value at the start point.
///
/// Each segment is subdivided until the argument of `f` moves by less than
/// `pi/2` between consecutive samples. A sample where `f` vanishes, or a
/// segment that cannot be resolved within the refinement limit, means the
/// path runs through a branch point.
pub fn continue_log<T: Real>(f: &HoloFunction<T>, path: &PathSpec<T>) -> Result<Cx<T>> {
    let start = path.start();
    let v0 = f.eval(start)?;
    if v0.norm() == T::zero() {
        return Err(branch_hit(start));
    }
    let mut arg = principal_arg(v0);
    let mut prev = v0;
    let half_pi = T::FRAC_PI_2();
    for (a, b) in path.segments() {
        // sample on a uniform grid first, then bisect offending pieces
        let mut stack = vec![(a, b, 0usize)];
        let mut fa = prev;
        while let Some((lo, hi, depth)) = stack.pop() {
            let fh = f.eval(hi)?;
            if fh.norm() == T::zero() {
                return Err(branch_hit(hi));
            }
            let step = principal_arg(fh / fa);
            // a half-way probe guards against aliasing over a full turn
            let m = (lo + hi) * T::lit(0.5);
            let fm = f.eval(m)?;
            if fm.norm() == T::zero() {
                return Err(branch_hit(m));
            }
            let s1 = principal_arg(fm / fa);
            let s2 = principal_arg(fh / fm);
            let consistent = (s1 + s2 - step).abs() < T::lit(1e-9) * (T::one() + step.abs());
            if step.abs() < half_pi && consistent {
                arg += step;
                fa = fh;
                continue;
            }
            if depth >= path.max_depth {
                return Err(branch_hit(m));
            }
            stack.push((m, hi, depth + 1));
            stack.push((lo, m, depth + 1));
        }
        prev = fa;
    }
    Ok(Complex::new(prev.norm().ln(), arg))
}

fn branch_hit<T: Real>(z: Cx<T>) -> Error {
    let (re, im) = pt(z);
    Error::ClearanceViolation { re, im, clearance: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cxl;
    use num_complex::Complex64;

    type F = HoloFunction<f64>;

    #[test]
    fn rejects_repeated_waypoints() {
        assert!(PathSpec::new(vec![cxl::<f64>(1.0, 0.0), cxl(1.0, 0.0)]).is_err());
        assert!(PathSpec::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn constant_argument_gives_principal_log() {
        let f = F::complex(-2.0, 1.0);
        let p = PathSpec::new(vec![cxl(0.0, 0.0), cxl(1.0, 1.0), cxl(-3.0, 0.5)]).unwrap();
        let v = continue_log(&f, &p).unwrap();
        assert!((v - Complex64::new(-2.0, 1.0).ln()).norm() < 1e-15);
    }

    #[test]
    fn log_around_unit_circle_gains_two_pi_i() {
        let p = PathSpec::circle(cxl(0.0, 0.0), 1.0, 12).unwrap();
        let v = continue_log(&F::z(), &p).unwrap();
        assert!((v - cxl(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-14);
    }

    #[test]
    fn scherk_second_component_gains_two_pi() {
        // i log((z+1)/(z-1)) around z = 1
        let arg = (F::z() + F::real(1.0)) / (F::z() - F::real(1.0));
        let p = PathSpec::circle(cxl(1.0, 0.0), 0.5, 16).unwrap();
        let start = continue_log(&arg, &PathSpec::point(p.start())).unwrap();
        let end = continue_log(&arg, &p).unwrap();
        let gain = cxl::<f64>(0.0, 1.0) * (end - start);
        assert!((gain - cxl(2.0 * std::f64::consts::PI, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn path_through_zero_is_rejected() {
        let p = PathSpec::segment(cxl::<f64>(-1.0, 0.0), cxl(1.0, 0.0)).unwrap();
        assert!(continue_log(&F::z(), &p).is_err());
    }

    #[test]
    fn quadrature_of_polynomial_and_residue() {
        let tol = QuadTolerance::default();
        let p = PathSpec::segment(cxl(0.0, 0.0), cxl(1.0, 2.0)).unwrap();
        let v = contour_integral(&(F::z().powi(3)), &p, tol).unwrap();
        assert!((v - cxl::<f64>(1.0, 2.0).powi(4) / 4.0).norm() < 1e-13);
        let c = PathSpec::circle(cxl(0.0, 0.0), 1e-2, 8).unwrap();
        let r = contour_integral(&(F::z().exp() / F::z()), &c, tol).unwrap();
        assert!((r - cxl(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-10);
    }

    #[test]
    fn quadrature_near_pole_refines() {
        let tol = QuadTolerance::default();
        let p = PathSpec::segment(cxl(-1.0, 1e-3), cxl(1.0, 1e-3)).unwrap();
        let v = contour_integral(&(F::real(1.0) / F::z()), &p, tol).unwrap();
        let exact = cxl::<f64>(1.0, 1e-3).ln() - cxl::<f64>(-1.0, 1e-3).ln();
        assert!((v - exact).norm() < 1e-9, "{v} {exact}");
    }

    #[test]
    fn depth_limit_reports_failure() {
        let tol = QuadTolerance { abs: 1e-14, rel: 0.0 };
        let p = PathSpec::segment(cxl(-1.0, 1e-9), cxl(1.0, 1e-9))
            .unwrap()
            .with_max_depth(2);
        assert!(matches!(
            contour_integral(&(F::real(1.0) / F::z()), &p, tol),
            Err(Error::QuadratureFailed { .. })
        ));
    }

    #[test]
    fn clearance_check() {
        let p = PathSpec::circle(cxl::<f64>(0.0, 0.0), 1.0, 16).unwrap();
        assert!(p.check_clearance(&[cxl(0.0, 0.0)], 0.5).is_ok());
        assert!(p.check_clearance(&[cxl(1.0, 0.0)], 1e-3).is_err());
    }
}
