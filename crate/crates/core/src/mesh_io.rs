//! Triangle meshes from sampled surfaces and ASCII OBJ/PLY/JSON writers.
//!
//! Output is byte-deterministic: coordinates use fixed-point notation with
//! nine fractional digits and `-0` is written as `0`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::nullcurve::SurfaceGrid;
use crate::scalar::Real;

/// Orthogonal projection of 4-space onto 3-space by deleting one coordinate
/// (`0..4` on `(1, i, j, k)`). 3-space surfaces always drop the real part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Projection {
    pub drop: usize,
}

impl Projection {
    pub fn new(drop: usize) -> Result<Self> {
        if drop > 3 {
            return Err(Error::InvalidParameter(format!("projection axis {drop} not in 0..4")));
        }
        Ok(Self { drop })
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 3] {
        let mut out = [0.0; 3];
        let mut k = 0;
        for (i, x) in v.iter().enumerate() {
            if i != self.drop {
                out[k] = *x;
                k += 1;
            }
        }
        out
    }
}

/// One vertex per grid node in row order (`x` fastest); masked nodes keep
/// their slot with `valid = false` and are never referenced by a triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    /// `(1, i, j, k)` coordinates.
    pub vertices: Vec<[f64; 4]>,
    pub valid: Vec<bool>,
    pub triangles: Vec<[usize; 3]>,
    /// 3 or 4.
    pub dim: usize,
    pub projection: Projection,
}

impl Mesh {
    /// Projected coordinates of the valid vertices and triangles re-indexed
    /// to them.
    pub fn compact(&self) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
        let proj = if self.dim == 3 {
            Projection::default()
        } else {
            self.projection
        };
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut verts = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if self.valid[i] {
                map[i] = verts.len();
                verts.push(proj.apply(*v));
            }
        }
        let tris = self
            .triangles
            .iter()
            .map(|t| [map[t[0]], map[t[1]], map[t[2]]])
            .collect();
        (verts, tris)
    }

    pub fn valid_vertex_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }
}

/// Two triangles per quad whose four corners are valid.
pub fn grid_to_mesh<T: Real>(surface: &SurfaceGrid<T>, projection: Projection) -> Result<Mesh> {
    let spec = &surface.spec;
    if spec.nx < 2 || spec.ny < 2 {
        return Err(Error::InvalidParameter("mesh needs at least a 2x2 grid".into()));
    }
    let vertices = surface.f.iter().map(|q| quat_f64(*q)).collect();
    let mut triangles = Vec::new();
    for j in 0..spec.ny - 1 {
        for i in 0..spec.nx - 1 {
            let (a, b) = (spec.index(i, j), spec.index(i + 1, j));
            let (c, d) = (spec.index(i + 1, j + 1), spec.index(i, j + 1));
            if [a, b, c, d].iter().all(|k| surface.valid[*k]) {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }
    }
    if triangles.is_empty() {
        return Err(Error::EmptyValidSet);
    }
    Ok(Mesh {
        vertices,
        valid: surface.valid.clone(),
        triangles,
        dim: surface.dim,
        projection,
    })
}

fn quat_f64<T: Real>(q: Quaternion<T>) -> [f64; 4] {
    [q.w.as_f64(), q.x.as_f64(), q.y.as_f64(), q.z.as_f64()]
}

/// Fixed-point with nine fractional digits; `-0` becomes `0`.
pub fn fmt_coord(x: f64) -> String {
    let s = format!("{:.9}", x);
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// ASCII OBJ text: `v x y z` lines, then 1-based `f i j k` lines.
pub fn obj_string(mesh: &Mesh) -> String {
    let (verts, tris) = mesh.compact();
    let mut out = String::new();
    for v in &verts {
        let _ = writeln!(out, "v {} {} {}", fmt_coord(v[0]), fmt_coord(v[1]), fmt_coord(v[2]));
    }
    for t in &tris {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}

/// ASCII PLY 1.0 text with `vertex` and `face` elements.
pub fn ply_string(mesh: &Mesh) -> String {
    let (verts, tris) = mesh.compact();
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", verts.len());
    out.push_str("property double x\nproperty double y\nproperty double z\n");
    let _ = writeln!(out, "element face {}", tris.len());
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for v in &verts {
        let _ = writeln!(out, "{} {} {}", fmt_coord(v[0]), fmt_coord(v[1]), fmt_coord(v[2]));
    }
    for t in &tris {
        let _ = writeln!(out, "3 {} {} {}", t[0], t[1], t[2]);
    }
    out
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_obj(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &obj_string(mesh))
}

pub fn write_ply(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &ply_string(mesh))
}

/// Writes by extension: `.ply` as PLY, anything else as OBJ.
pub fn write_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("ply") => write_ply(mesh, path),
        _ => write_obj(mesh, path),
    }
}

/// Pretty JSON with a trailing newline. Map keys keep their declaration
/// (structs) or sorted (maps) order.
pub fn json_string<V: Serialize>(value: &V) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<V: Serialize>(value: &V, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &json_string(value)?)
}

/// Vertex coordinates of an OBJ file.
pub fn read_obj_vertices(path: impl AsRef<Path>) -> Result<Vec<[f64; 3]>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    text.lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
                .collect::<Result<_>>()?;
            match v.as_slice() {
                [x, y, z] => Ok([*x, *y, *z]),
                _ => Err(Error::Parse(format!("vertex line with {} coordinates", v.len()))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nullcurve::GridSpec;
    use num_complex::Complex64;

    type Q = Quaternion<f64>;

    fn plane(n: usize) -> SurfaceGrid<f64> {
        let spec = GridSpec::new(0.0, 1.0, 0.0, 1.0, n, n).unwrap();
        SurfaceGrid::from_fn(spec, 3, |z| Some((Q::imag(z.re, z.im, 0.0), Q::zero())))
    }

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("minsurf-mesh-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn quad_and_masked_grids() {
        let m = grid_to_mesh(&plane(2), Projection::default()).unwrap();
        assert_eq!(m.triangles.len(), 2);
        let obj = obj_string(&m);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2);
        let mut s = plane(3);
        s.mask(4);
        assert!(matches!(
            grid_to_mesh(&s, Projection::default()),
            Err(Error::EmptyValidSet)
        ));
    }

    #[test]
    fn catenoid_triangle_count() {
        let e = catalog::catenoid::<f64>();
        let s = e.closed_form_grid(&e.grid).unwrap().unwrap();
        let m = grid_to_mesh(&s, Projection::default()).unwrap();
        assert_eq!((m.triangles.len(), m.valid_vertex_count()), (3200, 1681));
        for t in &m.triangles {
            assert!(t.iter().all(|k| m.valid[*k]));
        }
    }

    #[test]
    fn masked_vertices_are_not_referenced() {
        let e = catalog::scherk1::<f64>();
        let s = e.sample(&e.grid).unwrap();
        let m = grid_to_mesh(&s, Projection::default()).unwrap();
        assert!(m.valid_vertex_count() < 41 * 41);
        let (v, t) = m.compact();
        assert!(t.iter().flatten().all(|k| *k < v.len()));
    }

    #[test]
    fn obj_round_trip_and_determinism() {
        let e = catalog::enneper::<f64>();
        let s = e.sample(&e.grid).unwrap();
        let m = grid_to_mesh(&s, Projection::default()).unwrap();
        let (p1, p2) = (tmp("a.obj"), tmp("b.obj"));
        write_obj(&m, &p1).unwrap();
        write_obj(
            &grid_to_mesh(&e.sample(&e.grid).unwrap(), Projection::default()).unwrap(),
            &p2,
        )
        .unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
        let back = read_obj_vertices(&p1).unwrap();
        let (verts, _) = m.compact();
        assert_eq!(back.len(), verts.len());
        for (a, b) in back.iter().zip(&verts) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn ply_header_counts() {
        let m = grid_to_mesh(&plane(4), Projection::default()).unwrap();
        let ply = ply_string(&m);
        assert!(ply.starts_with("ply\nformat ascii 1.0\nelement vertex 16\n"));
        assert!(ply.contains("element face 18\n"));
        let body: Vec<&str> = ply.split("end_header\n").nth(1).unwrap().lines().collect();
        assert_eq!(body.len(), 16 + 18);
        let p = tmp("m.ply");
        write_mesh(&m, &p).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), ply);
    }

    #[test]
    fn projections() {
        let s = plane(2);
        let m = grid_to_mesh(&s, Projection::new(2).unwrap()).unwrap();
        // 3-space data ignore the requested axis: (i, j, k) -> (x, y, z)
        let (v, _) = m.compact();
        assert_eq!(v[3], [1.0, 1.0, 0.0]);
        let p = Projection::new(1).unwrap();
        assert_eq!(p.apply([1.0, 2.0, 3.0, 4.0]), [1.0, 3.0, 4.0]);
        assert!(Projection::new(4).is_err());
        let spec = GridSpec::patch(Complex64::new(0.0, 0.0), 1.0, 1);
        let s4 = SurfaceGrid::from_fn(spec, 4, |z| Some((Q::new(7.0, z.re, z.im, 1.0), Q::zero())));
        let (v, _) = grid_to_mesh(&s4, Projection::new(3).unwrap()).unwrap().compact();
        assert_eq!(v[0], [7.0, -1.0, -1.0]);
    }

    #[test]
    fn coordinate_format() {
        assert_eq!(fmt_coord(-0.0), "0.000000000");
        assert_eq!(fmt_coord(-1e-12), "0.000000000");
        assert_eq!(fmt_coord(1.5), "1.500000000");
        assert_eq!(fmt_coord(-2.25), "-2.250000000");
    }
}
