use std::collections::VecDeque;

use num_complex::Complex;

use crate::algebra::{ComplexVector, Quaternion};
use crate::error::{Error, Result};
use crate::holomorphic::PathSpec;
use crate::scalar::{Cx, Real};

use super::curve::NullCurve;

/// Rectangular parameter grid with `nx * ny` nodes including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 || !(x1 > x0) || !(y1 > y0) {
            return Err(Error::InvalidParameter(
                "grid needs at least 2x2 nodes over a nondegenerate rectangle".into(),
            ));
        }
        Ok(Self { x0, x1, y0, y1, nx, ny })
    }

    /// Square grid of the given step centred at `c` with `2k + 1` nodes per
    /// side.
    pub fn patch(c: Cx<T>, step: T, k: usize) -> Self {
        let half = step * T::from_usize(k).unwrap();
        Self {
            x0: c.re - half,
            x1: c.re + half,
            y0: c.im - half,
            y1: c.im + half,
            nx: 2 * k + 1,
            ny: 2 * k + 1,
        }
    }

    pub fn hx(&self) -> T {
        (self.x1 - self.x0) / T::from_usize(self.nx - 1).unwrap()
    }

    pub fn hy(&self) -> T {
        (self.y1 - self.y0) / T::from_usize(self.ny - 1).unwrap()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn node(&self, i: usize, j: usize) -> Cx<T> {
        // endpoints are hit exactly
        let x = if i + 1 == self.nx {
            self.x1
        } else {
            self.x0 + self.hx() * T::from_usize(i).unwrap()
        };
        let y = if j + 1 == self.ny {
            self.y1
        } else {
            self.y0 + self.hy() * T::from_usize(j).unwrap()
        };
        Complex::new(x, y)
    }

    pub fn node_at(&self, idx: usize) -> Cx<T> {
        let (i, j) = self.coords(idx);
        self.node(i, j)
    }

    /// 4-neighbours in the fixed order (-x, +x, -y, +y).
    pub fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> {
        let (i, j) = self.coords(idx);
        let (nx, ny) = (self.nx, self.ny);
        [
            (i > 0).then(|| j * nx + i - 1),
            (i + 1 < nx).then(|| j * nx + i + 1),
            (j > 0).then(|| (j - 1) * nx + i),
            (j + 1 < ny).then(|| (j + 1) * nx + i),
        ]
        .into_iter()
        .flatten()
    }
}

/// Sampled surface `f`, conjugate `f*` and optional left/right normals.
///
/// 3-space surfaces have vanishing real quaternion part. Invalid nodes keep
/// zero placeholders and are ignored by every consumer.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid<T> {
    pub spec: GridSpec<T>,
    /// 3 when `f` lies in `Im H`, 4 otherwise.
    pub dim: usize,
    pub f: Vec<Quaternion<T>>,
    pub fstar: Vec<Quaternion<T>>,
    pub n: Option<Vec<Quaternion<T>>>,
    pub r: Option<Vec<Quaternion<T>>>,
    pub valid: Vec<bool>,
}

impl<T: Real> SurfaceGrid<T> {
    /// Grid from a closed form returning `(f, f*)`; `None` masks the node.
    pub fn from_fn<F>(spec: GridSpec<T>, dim: usize, mut g: F) -> Self
    where
        F: FnMut(Cx<T>) -> Option<(Quaternion<T>, Quaternion<T>)>,
    {
        let mut out = Self::empty(spec, dim);
        for idx in 0..spec.len() {
            if let Some((f, fs)) = g(spec.node_at(idx)) {
                if f.is_finite() && fs.is_finite() {
                    out.f[idx] = f;
                    out.fstar[idx] = fs;
                    out.valid[idx] = true;
                }
            }
        }
        out
    }

    pub fn empty(spec: GridSpec<T>, dim: usize) -> Self {
        let n = spec.len();
        Self {
            spec,
            dim,
            f: vec![Quaternion::zero(); n],
            fstar: vec![Quaternion::zero(); n],
            n: None,
            r: None,
            valid: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    pub fn masked_count(&self) -> usize {
        self.len() - self.valid_count()
    }

    pub fn valid_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|i| self.valid[*i])
    }

    pub fn z(&self, idx: usize) -> Cx<T> {
        self.spec.node_at(idx)
    }

    /// `Phi = f + i f*` at a node, in `dim` components.
    pub fn phi(&self, idx: usize) -> ComplexVector<T> {
        ComplexVector::from_quaternions(self.f[idx], self.fstar[idx], self.dim)
    }

    /// Marks the output as 4-dimensional when any valid `f` or `f*` leaves
    /// `Im H` by more than `tol`.
    pub fn refresh_dim(&mut self, tol: T) {
        let leaves = self
            .valid_indices()
            .any(|i| self.f[i].w.abs() > tol || self.fstar[i].w.abs() > tol);
        self.dim = if leaves { 4 } else { 3 };
    }

    /// Central difference in x of `vals` at `idx`, if both neighbours are
    /// valid.
    pub fn dx_of(&self, vals: &[Quaternion<T>], idx: usize) -> Option<Quaternion<T>> {
        let (i, j) = self.spec.coords(idx);
        if i == 0 || i + 1 == self.spec.nx {
            return None;
        }
        let (a, b) = (self.spec.index(i - 1, j), self.spec.index(i + 1, j));
        (self.valid[a] && self.valid[b]).then(|| (vals[b] - vals[a]) / (self.spec.hx() * T::lit(2.0)))
    }

    pub fn dy_of(&self, vals: &[Quaternion<T>], idx: usize) -> Option<Quaternion<T>> {
        let (i, j) = self.spec.coords(idx);
        if j == 0 || j + 1 == self.spec.ny {
            return None;
        }
        let (a, b) = (self.spec.index(i, j - 1), self.spec.index(i, j + 1));
        (self.valid[a] && self.valid[b]).then(|| (vals[b] - vals[a]) / (self.spec.hy() * T::lit(2.0)))
    }

    /// `(f_x, f_y)` by central differences.
    pub fn df(&self, idx: usize) -> Option<(Quaternion<T>, Quaternion<T>)> {
        if !self.valid[idx] {
            return None;
        }
        Some((self.dx_of(&self.f, idx)?, self.dy_of(&self.f, idx)?))
    }

    /// Five-point Laplacian of `vals` at `idx`.
    pub fn laplacian_of(&self, vals: &[Quaternion<T>], idx: usize) -> Option<Quaternion<T>> {
        let (i, j) = self.spec.coords(idx);
        if !self.valid[idx] || i == 0 || j == 0 || i + 1 == self.spec.nx || j + 1 == self.spec.ny {
            return None;
        }
        let s = &self.spec;
        let ids = [
            s.index(i - 1, j),
            s.index(i + 1, j),
            s.index(i, j - 1),
            s.index(i, j + 1),
        ];
        if ids.iter().any(|k| !self.valid[*k]) {
            return None;
        }
        let c = vals[idx] * T::lit(2.0);
        let hx2 = s.hx() * s.hx();
        let hy2 = s.hy() * s.hy();
        Some((vals[ids[0]] + vals[ids[1]] - c) / hx2 + (vals[ids[2]] + vals[ids[3]] - c) / hy2)
    }

    /// Invalidates nodes and the normals stored there.
    pub fn mask(&mut self, idx: usize) {
        self.valid[idx] = false;
        self.f[idx] = Quaternion::zero();
        self.fstar[idx] = Quaternion::zero();
        for v in [&mut self.n, &mut self.r].into_iter().flatten() {
            v[idx] = Quaternion::zero();
        }
    }

    /// Valid node nearest to `z` (lowest index on ties).
    pub fn nearest_valid(&self, z: Cx<T>) -> Option<usize> {
        self.valid_indices().min_by(|a, b| {
            let da = (self.z(*a) - z).norm();
            let db = (self.z(*b) - z).norm();
            da.partial_cmp(&db).unwrap().then(a.cmp(b))
        })
    }

    /// Largest pointwise distance between `f` values at nodes valid in both.
    pub fn max_f_diff(&self, o: &Self) -> T {
        (0..self.len().min(o.len()))
            .filter(|i| self.valid[*i] && o.valid[*i])
            .fold(T::zero(), |m, i| m.max((self.f[i] - o.f[i]).norm()))
    }

    pub fn max_fstar_diff(&self, o: &Self) -> T {
        (0..self.len().min(o.len()))
            .filter(|i| self.valid[*i] && o.valid[*i])
            .fold(T::zero(), |m, i| m.max((self.fstar[i] - o.fstar[i]).norm()))
    }

    /// Adds constants to `f` and `f*` at every valid node.
    pub fn translate(&mut self, df: Quaternion<T>, dfs: Quaternion<T>) {
        for i in 0..self.len() {
            if self.valid[i] {
                self.f[i] += df;
                self.fstar[i] += dfs;
            }
        }
    }
}

/// Radius, in grid steps, of the disc masked around each puncture.
pub const PUNCTURE_MASK_STEPS: f64 = 3.0;

/// Samples `f = Re Phi` and `f* = Im Phi` on the grid.
///
/// Values are integrated from the basepoint to the nearest valid node and
/// then along a breadth-first spanning tree of grid edges, so multivalued
/// surfaces are reported on the universal cover along those paths. Nodes
/// near punctures, outside the region, at branch points or unreachable from
/// the root are masked.
pub fn sample_surface<T: Real>(curve: &NullCurve<T>, spec: &GridSpec<T>) -> Result<SurfaceGrid<T>> {
    let dom = &curve.data.domain;
    let n = spec.len();
    let mask_radius = T::lit(PUNCTURE_MASK_STEPS) * spec.hx().max(spec.hy());
    let mut candidate = vec![false; n];
    let mut speed = vec![T::zero(); n];
    for (idx, c) in candidate.iter_mut().enumerate() {
        let z = spec.node_at(idx);
        if !dom.region.contains(z) || dom.is_near_puncture(z, mask_radius) {
            continue;
        }
        if let Ok(d) = curve.differential_regularized(z, spec.hx().min(spec.hy()) * T::lit(0.25)) {
            speed[idx] = d.norm();
            *c = true;
        }
    }
    // branch points: |dPhi| negligible against the typical size
    let mut sp: Vec<T> = (0..n).filter(|i| candidate[*i]).map(|i| speed[i]).collect();
    if sp.is_empty() {
        return Err(Error::Unreachable);
    }
    sp.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sp[sp.len() / 2];
    for i in 0..n {
        if candidate[i] && speed[i] <= T::lit(1e-10) * median {
            candidate[i] = false;
        }
    }

    let dim = curve.dim();
    let mut phi: Vec<Option<ComplexVector<T>>> = vec![None; n];
    let mut order: Vec<usize> = (0..n).filter(|i| candidate[*i]).collect();
    order.sort_by(|a, b| {
        let da = (spec.node_at(*a) - curve.basepoint).norm();
        let db = (spec.node_at(*b) - curve.basepoint).norm();
        da.partial_cmp(&db).unwrap().then(a.cmp(b))
    });
    let mut root = None;
    for idx in order.into_iter().take(16) {
        let z = spec.node_at(idx);
        let v = if z == curve.basepoint {
            Ok(curve.phi0.clone())
        } else {
            PathSpec::segment(curve.basepoint, z)
                .and_then(|p| curve.integrate_differential(&p))
                .map(|d| &curve.phi0 + &d)
        };
        if let Ok(v) = v {
            phi[idx] = Some(v);
            root = Some(idx);
            break;
        }
    }
    let root = root.ok_or(Error::Unreachable)?;

    let mut queue = VecDeque::from([root]);
    while let Some(cur) = queue.pop_front() {
        let base = phi[cur].clone().expect("queued nodes carry values");
        let zc = spec.node_at(cur);
        for nb in spec.neighbours(cur) {
            if !candidate[nb] || phi[nb].is_some() {
                continue;
            }
            let zn = spec.node_at(nb);
            let Ok(seg) = PathSpec::segment(zc, zn) else {
                continue;
            };
            if let Ok(d) = curve.integrate_differential(&seg) {
                phi[nb] = Some(&base + &d);
                queue.push_back(nb);
            }
        }
    }

    let mut out = SurfaceGrid::empty(*spec, dim);
    for (idx, v) in phi.into_iter().enumerate() {
        if let Some(v) = v {
            out.f[idx] = v.re_quat();
            out.fstar[idx] = v.im_quat();
            out.valid[idx] = true;
        }
    }
    Ok(out)
}

/// Stereographic image `(2 Re G, 2 Im G, |G|^2 - 1) / (|G|^2 + 1)` as an
/// imaginary quaternion; `G = infinity` maps to `k`.
pub fn stereographic<T: Real>(g: Cx<T>) -> Quaternion<T> {
    if !(g.re.is_finite() && g.im.is_finite()) {
        return Quaternion::k();
    }
    let n2 = g.norm_sqr();
    if !n2.is_finite() || n2 > T::lit(1e300).min(T::max_value().sqrt()) {
        return Quaternion::k();
    }
    let d = n2 + T::one();
    Quaternion::imag(T::lit(2.0) * g.re / d, T::lit(2.0) * g.im / d, (n2 - T::one()) / d)
}

/// How normals are obtained.
#[derive(Debug, Clone, Copy)]
pub enum NormalMethod<'a, T> {
    /// Stereographic projection of the Gauss maps of the curve.
    FromG(&'a NullCurve<T>),
    /// `N = f_y f_x^{-1}`, `R = -f_x^{-1} f_y` from central differences.
    FiniteDifference,
}

/// Fills `N` and `R`. Nodes where they cannot be evaluated are masked.
pub fn normals<T: Real>(surface: &SurfaceGrid<T>, method: NormalMethod<'_, T>) -> Result<SurfaceGrid<T>> {
    let mut out = surface.clone();
    let len = surface.len();
    let mut nv = vec![Quaternion::zero(); len];
    let mut rv = vec![Quaternion::zero(); len];
    let mut drop = Vec::new();
    for idx in surface.valid_indices() {
        let res = match method {
            NormalMethod::FromG(curve) => curve
                .gauss_maps(surface.z(idx))
                .ok()
                .map(|(g1, g2)| (stereographic(g1), stereographic(g2))),
            NormalMethod::FiniteDifference => surface.df(idx).and_then(|(fx, fy)| {
                let xi = fx.inv()?;
                let n = (fy * xi).im();
                let r = -(xi * fy).im();
                Some((unit(n)?, unit(r)?))
            }),
        };
        match res {
            Some((n, r)) => {
                nv[idx] = n;
                rv[idx] = r;
            }
            None => drop.push(idx),
        }
    }
    out.n = Some(nv);
    out.r = Some(rv);
    for idx in drop {
        out.mask(idx);
    }
    if out.valid_count() == 0 {
        return Err(Error::EmptyValidSet);
    }
    Ok(out)
}

fn unit<T: Real>(q: Quaternion<T>) -> Option<Quaternion<T>> {
    let n = q.norm();
    (n > T::zero() && n.is_finite()).then(|| q / n)
}
