use num_complex::Complex;

use crate::error::{pt, Error, Result};
use crate::scalar::{Cx, Real};

/// Period lattice `Z w1 + Z w2` with its invariants `g2, g3`.
///
/// Evaluation uses a reduced basis `(r1, r2)` of the same lattice with
/// `tau = r2/r1` in the standard fundamental domain, so the nome
/// `q = exp(2 pi i tau)` satisfies `|q| <= exp(-pi sqrt 3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeData<T> {
    pub omega1: Cx<T>,
    pub omega2: Cx<T>,
    pub g2: Cx<T>,
    pub g3: Cx<T>,
    r1: Cx<T>,
    tau: Cx<T>,
    q: Cx<T>,
}

/// Relative truncation target for every q-series.
const SERIES_TOL: f64 = 1e-18;
const MAX_TERMS: usize = 200;

impl<T: Real> LatticeData<T> {
    pub fn from_periods(omega1: Cx<T>, omega2: Cx<T>) -> Result<Self> {
        let ratio = omega2 / omega1;
        if !(ratio.im.is_finite() && ratio.re.is_finite())
            || ratio.im.abs() <= T::lit(1e-12) * (T::one() + ratio.norm())
        {
            return Err(Error::DegenerateLattice);
        }
        let (r1, tau) = reduce_basis(omega1, omega2);
        let q = nome(tau);
        let (e4, e6) = eisenstein(q);
        let pi = T::PI();
        let g2 = e4 * (T::lit(4.0) * pi.powi(4) / T::lit(3.0)) / r1.powi(4);
        let g3 = e6 * (T::lit(8.0) * pi.powi(6) / T::lit(27.0)) / r1.powi(6);
        Ok(Self {
            omega1,
            omega2,
            g2,
            g3,
            r1,
            tau,
            q,
        })
    }

    /// Rectangular lattice with real invariants and positive discriminant,
    /// solved through the arithmetic-geometric mean. `omega1` is the real
    /// period and `omega2` the imaginary one.
    pub fn from_invariants(g2: T, g3: T) -> Result<Self> {
        let disc = g2.powi(3) - T::lit(27.0) * g3 * g3;
        if !(disc > T::zero()) {
            return Err(Error::UnsupportedInvariants(format!(
                "need real invariants with g2^3 - 27 g3^2 > 0, got g2 = {g2}, g3 = {g3}"
            )));
        }
        let (e1, e2, e3) = real_roots(g2, g3);
        let pi = T::PI();
        let w1 = pi / agm((e1 - e3).sqrt(), (e1 - e2).sqrt());
        let w2 = pi / agm((e1 - e3).sqrt(), (e2 - e3).sqrt());
        Self::from_periods(Complex::new(w1, T::zero()), Complex::new(T::zero(), w2))
    }

    /// `(g2, g3)` as a pair.
    pub fn invariants(&self) -> (Cx<T>, Cx<T>) {
        (self.g2, self.g3)
    }

    /// Half periods `w1/2`, `w2/2`, `(w1+w2)/2`.
    pub fn half_periods(&self) -> [Cx<T>; 3] {
        let h = T::lit(0.5);
        [self.omega1 * h, self.omega2 * h, (self.omega1 + self.omega2) * h]
    }

    /// Exclusion radius around lattice points.
    pub fn clearance(&self) -> T {
        T::lit(1e-6) * self.omega1.norm().max(self.omega2.norm())
    }

    /// `u = z / r1` reduced into the cell `|Im u| <= Im tau / 2`,
    /// `|Re u| <= 1/2`, together with its distance to the nearest lattice
    /// point in `z` units.
    fn reduce(&self, z: Cx<T>) -> (Cx<T>, T) {
        let mut u = z / self.r1;
        let n = (u.im / self.tau.im).round();
        u -= self.tau * n;
        u = u - Complex::new(u.re.round(), T::zero());
        let mut best = u.norm();
        for a in -1..=1 {
            for b in -1..=1 {
                let v = u - Complex::new(T::lit(a as f64), T::zero()) - self.tau * T::lit(b as f64);
                best = best.min(v.norm());
            }
        }
        (u, best * self.r1.norm())
    }

    fn check_clearance(&self, z: Cx<T>, dist: T) -> Result<()> {
        if dist < self.clearance() {
            let (re, im) = pt(z);
            return Err(Error::ClearanceViolation {
                re,
                im,
                clearance: self.clearance().as_f64(),
            });
        }
        Ok(())
    }
}

/// Weierstrass elliptic function of the lattice.
pub fn wp<T: Real>(z: Cx<T>, lat: &LatticeData<T>) -> Result<Cx<T>> {
    let (u, dist) = lat.reduce(z);
    lat.check_clearance(z, dist)?;
    let two_pi_i = Complex::new(T::zero(), T::lit(2.0) * T::PI());
    let x = (two_pi_i * u).exp();
    // x/(1-x)^2 with 1 - x = -expm1(2 pi i u) for accuracy near the pole
    let one_minus_x = -cexpm1(two_pi_i * u);
    let mut sum = x / (one_minus_x * one_minus_x);
    let mut qn = lat.q;
    let one = Complex::new(T::one(), T::zero());
    let mut constant = Complex::new(T::lit(1.0 / 12.0), T::zero());
    for _ in 0..MAX_TERMS {
        let a = qn * x;
        let b = qn / x;
        let term =
            a / ((one - a) * (one - a)) + b / ((one - b) * (one - b)) - (qn / ((one - qn) * (one - qn))) * T::lit(2.0);
        sum += term;
        if term.norm() <= T::lit(SERIES_TOL) * (T::one() + sum.norm()) {
            break;
        }
        qn *= lat.q;
    }
    constant += sum;
    Ok(constant * two_pi_i * two_pi_i / (lat.r1 * lat.r1))
}

/// Derivative of [`wp`].
pub fn wp_prime<T: Real>(z: Cx<T>, lat: &LatticeData<T>) -> Result<Cx<T>> {
    let (u, dist) = lat.reduce(z);
    lat.check_clearance(z, dist)?;
    let two_pi_i = Complex::new(T::zero(), T::lit(2.0) * T::PI());
    let x = (two_pi_i * u).exp();
    let one = Complex::new(T::one(), T::zero());
    let one_minus_x = -cexpm1(two_pi_i * u);
    let mut sum = x * (one + x) / (one_minus_x * one_minus_x * one_minus_x);
    let mut qn = lat.q;
    for _ in 0..MAX_TERMS {
        let a = qn * x;
        let b = qn / x;
        let term =
            a * (one + a) / ((one - a) * (one - a) * (one - a)) - b * (one + b) / ((one - b) * (one - b) * (one - b));
        sum += term;
        if term.norm() <= T::lit(SERIES_TOL) * (T::one() + sum.norm()) {
            break;
        }
        qn *= lat.q;
    }
    Ok(sum * two_pi_i * two_pi_i * two_pi_i / (lat.r1 * lat.r1 * lat.r1))
}

/// Invariants `(g2, g3)` of the lattice spanned by `omega1, omega2`.
pub fn lattice_invariants<T: Real>(omega1: Cx<T>, omega2: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
    LatticeData::from_periods(omega1, omega2).map(|l| l.invariants())
}

fn nome<T: Real>(tau: Cx<T>) -> Cx<T> {
    (Complex::new(T::zero(), T::lit(2.0) * T::PI()) * tau).exp()
}

/// Moves `tau = w2/w1` into the standard fundamental domain by unimodular
/// basis changes, returning the new first period and ratio.
fn reduce_basis<T: Real>(w1: Cx<T>, w2: Cx<T>) -> (Cx<T>, Cx<T>) {
    let (mut a, mut b) = (w1, w2);
    if (b / a).im < T::zero() {
        b = -b;
    }
    for _ in 0..100 {
        let tau = b / a;
        let n = tau.re.round();
        b -= a * n;
        let tau = b / a;
        if tau.norm() < T::one() - T::lit(1e-14) {
            // tau -> -1/tau
            let na = b;
            let nb = -a;
            a = na;
            b = nb;
        } else {
            break;
        }
    }
    (a, b / a)
}

/// `E4` and `E6` from their divisor-sum q-expansions.
fn eisenstein<T: Real>(q: Cx<T>) -> (Cx<T>, Cx<T>) {
    let one = Complex::new(T::one(), T::zero());
    let mut s3 = Complex::new(T::zero(), T::zero());
    let mut s5 = Complex::new(T::zero(), T::zero());
    let mut qn = q;
    for n in 1..=MAX_TERMS {
        let nf = T::from_usize(n).unwrap();
        let frac = qn / (one - qn);
        let t3 = frac * nf.powi(3);
        let t5 = frac * nf.powi(5);
        s3 += t3;
        s5 += t5;
        if t5.norm() <= T::lit(SERIES_TOL) * (T::one() + s5.norm()) {
            break;
        }
        qn *= q;
    }
    (one + s3 * T::lit(240.0), one - s5 * T::lit(504.0))
}

/// `e^w - 1` without cancellation for small `w`.
fn cexpm1<T: Real>(w: Cx<T>) -> Cx<T> {
    let half = w.im * T::lit(0.5);
    let s = half.sin();
    let re = w.re.exp_m1() * w.im.cos() - T::lit(2.0) * s * s;
    let im = w.re.exp() * w.im.sin();
    Complex::new(re, im)
}

/// Arithmetic-geometric mean of positive reals.
pub fn agm<T: Real>(mut a: T, mut b: T) -> T {
    for _ in 0..64 {
        let an = (a + b) * T::lit(0.5);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= T::epsilon() * an {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// Real roots `e1 > e2 > e3` of `4e^3 - g2 e - g3` (positive discriminant),
/// by the trigonometric formula.
fn real_roots<T: Real>(g2: T, g3: T) -> (T, T, T) {
    // e = 2 sqrt(g2/12) cos(theta), cos(3 theta) = g3 / (4 (g2/12)^{3/2})
    let p = g2 / T::lit(12.0);
    let r = p.sqrt();
    let c = (g3 / (T::lit(4.0) * p * r)).max(-T::one()).min(T::one());
    let th = c.acos() / T::lit(3.0);
    let two_pi_3 = T::lit(2.0) * T::PI() / T::lit(3.0);
    let mut e = [
        T::lit(2.0) * r * th.cos(),
        T::lit(2.0) * r * (th - two_pi_3).cos(),
        T::lit(2.0) * r * (th + two_pi_3).cos(),
    ];
    e.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (e[0], e[1], e[2])
}
