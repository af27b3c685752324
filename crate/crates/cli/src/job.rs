//! Job execution: source sampling, the transform chain, periods, ends and
//! verification.

use std::path::{Path, PathBuf};

use minsurf::algebra::{ComplexMatrix, ComplexVector};
use minsurf::analysis::{all_periods, classify_end, closing_condition_general, sfd_period_general, PeriodVector};
use minsurf::catalog;
use minsurf::holomorphic::{parse, PathSpec};
use minsurf::mesh_io::{self, grid_to_mesh, Projection};
use minsurf::nullcurve::{
    normals, sample_surface, weierstrass_from_phi, DataKind, DomainSpec, Generator, NormalMethod, Region,
    WeierstrassData,
};
use minsurf::transforms::{
    associated, associated_willmore, conjugate, dressing_matrix, goursat, goursat_surface, lopez_ros, lopez_ros_matrix,
    mu_darboux, sfd, AssocParams, LopezRosParam, Side,
};
use minsurf::verify::{self, CheckReport};
use minsurf::{Curve, Dress, Grid, Quat, Surface};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{InlineData, JobConfig, RegionConfig, SideConfig, SourceConfig, TransformConfig};
use crate::CliError;

/// Default node count per axis.
pub const DEFAULT_NODES: usize = 41;

/// Deliberate defects used to confirm that verification catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Negates `f*` before every simple factor dressing.
    SfdSign,
}

impl Mutation {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "sfd-sign" => Ok(Self::SfdSign),
            _ => Err(CliError::Config(format!("unknown mutation {s}"))),
        }
    }
}

/// The sampled source with everything needed to re-sample it elsewhere.
pub struct Source {
    pub curve: Curve,
    pub grid: Grid,
    pub echo: Value,
}

/// A chain step with validated parameters.
#[derive(Debug, Clone)]
pub enum Step {
    Sfd(Dress),
    LopezRos(LopezRosParam<f64>),
    Assoc(AssocParams<f64>),
    Darboux { mu: Complex64, m: Quat },
    Willmore,
    Goursat(ComplexMatrix<f64>),
    Conjugate,
}

impl Step {
    pub fn from_config(t: &TransformConfig) -> Result<Self, CliError> {
        Ok(match t {
            TransformConfig::Sfd { mu, m, n } => Step::Sfd(Dress::new(mu.0, m.0, n.0)?),
            TransformConfig::Lopezros { sigma } => Step::LopezRos(LopezRosParam::new(sigma.0)?),
            TransformConfig::Assoc { theta, p, q, side } => {
                let side = match side {
                    SideConfig::Right => Side::Right,
                    SideConfig::Left => Side::Left,
                };
                match (theta, p, q) {
                    (Some(th), None, None) => Step::Assoc(AssocParams::classical(*th, side)),
                    (None, Some(p), Some(q)) => Step::Assoc(AssocParams::new(p.0, q.0, side)?),
                    _ => return Err(CliError::Config("assoc needs either theta or both p and q".into())),
                }
            }
            TransformConfig::Darboux { mu, m } => {
                // validates mu and m
                Dress::new(mu.0, m.0, m.0)?;
                Step::Darboux { mu: mu.0, m: m.0 }
            }
            TransformConfig::Willmore => Step::Willmore,
            TransformConfig::Goursat { matrix } => {
                let rows = matrix.iter().map(|r| r.iter().map(|c| c.0).collect()).collect();
                Step::Goursat(ComplexMatrix::from_rows(rows)?.into_orthogonal()?)
            }
            TransformConfig::Conjugate => Step::Conjugate,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Step::Sfd(_) => "sfd",
            Step::LopezRos(_) => "lopezros",
            Step::Assoc(_) => "assoc",
            Step::Darboux { .. } => "darboux",
            Step::Willmore => "willmore",
            Step::Goursat(_) => "goursat",
            Step::Conjugate => "conjugate",
        }
    }

    /// Outputs that are not minimal surfaces.
    fn leaves_minimal(&self) -> bool {
        matches!(self, Step::Darboux { .. } | Step::Willmore)
    }

    /// The complex orthogonal matrix acting on `Phi`, for Goursat-type steps.
    fn matrix(&self) -> Result<Option<ComplexMatrix<f64>>, CliError> {
        Ok(match self {
            Step::Sfd(p) => Some(dressing_matrix(p)?),
            Step::LopezRos(p) => Some(lopez_ros_matrix(p)),
            Step::Goursat(a) => Some(a.clone()),
            _ => None,
        })
    }

    pub fn apply(&self, s: &Surface, mutation: Option<Mutation>) -> Result<Surface, CliError> {
        Ok(match self {
            Step::Sfd(p) => {
                if mutation == Some(Mutation::SfdSign) {
                    let mut bad = s.clone();
                    bad.fstar.iter_mut().for_each(|q| *q = -*q);
                    sfd(&bad, p)?
                } else {
                    sfd(s, p)?
                }
            }
            Step::LopezRos(p) => lopez_ros(s, p)?,
            Step::Assoc(p) => associated(s, p)?,
            Step::Darboux { mu, m } => mu_darboux(s, *mu, *m)?,
            Step::Willmore => associated_willmore(s)?,
            Step::Goursat(a) => goursat_surface(s, a)?,
            Step::Conjugate => conjugate(s),
        })
    }

    /// Parameters after normalization, with the formula applied.
    pub fn echo(&self) -> Value {
        match self {
            Step::Sfd(p) => json!({
                "type": "sfd",
                "mu": cx(p.mu),
                "m": quat(p.m.get()),
                "n": quat(p.n.get()),
                "s": p.s,
                "t": p.t,
                "rho": quat(p.rho),
                "formula": "f^ = R_{n,m}((R_{n,m}^{-1} f)^mu), f^mu = Re(L^mu Phi), R_{n,m} v = n v m^{-1}",
            }),
            Step::LopezRos(p) => json!({
                "type": "lopezros",
                "sigma": cx(p.sigma),
                "s": p.s,
                "t": p.t,
                "formula": "(g, omega) -> (sigma g, omega / sigma)",
            }),
            Step::Assoc(p) => json!({
                "type": "assoc",
                "p": quat(p.p),
                "q": quat(p.q),
                "side": match p.side { Side::Right => "right", Side::Left => "left" },
                "formula": match p.side {
                    Side::Right => "f p + f* q",
                    Side::Left => "p f + q f*",
                },
            }),
            Step::Darboux { mu, m } => {
                let p = Dress::new(*mu, *m, *m).expect("validated");
                json!({
                    "type": "darboux",
                    "mu": cx(*mu),
                    "m": quat(p.m.get()),
                    "rho": quat(p.rho),
                    "formula": "f# = (f R - f*)(R + rho)^{-1}, rho = m i (1 + mu)/(1 - mu) m^{-1}",
                })
            }
            Step::Willmore => json!({"type": "willmore", "formula": "f_flat = f R - f*"}),
            Step::Goursat(a) => json!({
                "type": "goursat",
                "matrix": a.rows().iter().map(|r| r.iter().map(|c| cx(*c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "formula": "Phi -> A Phi",
            }),
            Step::Conjugate => json!({"type": "conjugate", "formula": "(f, f*) -> (f*, -f)"}),
        }
    }

    /// `(tau, tau*)` of the output, where the step acts linearly on `f + i f*`.
    fn map_period(&self, pv: &PeriodVector<f64>) -> Result<PeriodVector<f64>, CliError> {
        let name = pv.generator.clone();
        match self {
            Step::Sfd(p) => Ok(sfd_period_general(pv, p)?),
            Step::LopezRos(_) | Step::Goursat(_) => {
                let a = self.matrix()?.expect("matrix step");
                let v = pv.complex();
                let v = if a.dim() == 4 { v.to_dim4() } else { v };
                let a = if v.dim() == 4 { a.to_dim4() } else { a };
                Ok(PeriodVector::from_complex(name, &a.apply(&v)?)?)
            }
            Step::Assoc(p) => {
                let (t, ts) = pv.quaternions();
                let (a, b) = match p.side {
                    Side::Right => (t * p.p + ts * p.q, ts * p.p - t * p.q),
                    Side::Left => (p.p * t + p.q * ts, p.p * ts - p.q * t),
                };
                let dim = if a.w == 0.0 && b.w == 0.0 { pv.dim() } else { 4 };
                Ok(PeriodVector::from_complex(
                    name,
                    &ComplexVector::from_quaternions(a, b, dim),
                )?)
            }
            Step::Conjugate => Ok(PeriodVector::new(
                name,
                pv.tau_star.clone(),
                pv.tau.iter().map(|v| -v).collect(),
            )?),
            Step::Darboux { .. } | Step::Willmore => Err(CliError::Config(format!(
                "periods are not defined for {} outputs",
                self.kind()
            ))),
        }
    }
}

fn cx(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn quat(q: Quat) -> [f64; 4] {
    q.to_array()
}

/// A fully resolved job.
pub struct Job {
    pub source: Source,
    pub steps: Vec<Step>,
    pub config: JobConfig,
    pub mutation: Option<Mutation>,
}

impl Job {
    pub fn new(config: JobConfig, mutation: Option<Mutation>) -> Result<Self, CliError> {
        let source = build_source(&config)?;
        let steps = config
            .transforms
            .iter()
            .map(Step::from_config)
            .collect::<Result<_, _>>()?;
        Ok(Self {
            source,
            steps,
            config,
            mutation,
        })
    }

    /// Source surface with normals on `spec`.
    pub fn sample(&self, spec: &Grid) -> Result<Surface, CliError> {
        let s = sample_surface(&self.source.curve, spec)?;
        Ok(normals(&s, NormalMethod::FromG(&self.source.curve))?)
    }

    /// Every surface of the chain, source first.
    pub fn run_chain(&self, spec: &Grid) -> Result<Vec<Surface>, CliError> {
        let mut out = vec![self.sample(spec)?];
        for step in &self.steps {
            let next = step.apply(out.last().expect("nonempty"), self.mutation)?;
            if next.valid_count() == 0 {
                return Err(CliError::Numeric(format!("{} masked every node", step.kind())));
            }
            out.push(next);
        }
        Ok(out)
    }

    fn echo(&self, command: &str) -> Value {
        let g = &self.source.grid;
        let mut v = json!({
            "command": command,
            "source": self.source.echo,
            "grid": {"x0": g.x0, "x1": g.x1, "y0": g.y0, "y1": g.y1, "nx": g.nx, "ny": g.ny},
            "transforms": self.steps.iter().map(Step::echo).collect::<Vec<_>>(),
            "conventions": {
                "quaternion_order": "w, x, y, z = 1, i, j, k",
                "three_space": "Im H, Phi components on (i, j, k)",
                "conjugate_basepoint": "f*(z0) = 0",
            },
        });
        if let Some(m) = self.mutation {
            v["mutation"] = json!(format!("{m:?}"));
        }
        v
    }

    /// `gen` and `transform`: writes the mesh of the final surface and the
    /// metadata JSON.
    pub fn write_mesh(&self, command: &str) -> Result<Value, CliError> {
        let out = &self.config.outputs;
        let path = out
            .mesh
            .clone()
            .ok_or_else(|| CliError::Config("no mesh output path (--out)".into()))?;
        let chain = self.run_chain(&self.source.grid)?;
        let last = chain.last().expect("nonempty");
        let mesh = grid_to_mesh(last, Projection::new(out.projection)?)?;
        mesh_io::write_mesh(&mesh, &path)?;
        let mut meta = self.echo(command);
        meta["mesh"] = json!({
            "format": if is_ply(&path) { "ply" } else { "obj" },
            "dim": last.dim,
            "projection_dropped_axis": if last.dim == 4 { json!(out.projection) } else { Value::Null },
            "vertices": mesh.valid_vertex_count(),
            "triangles": mesh.triangles.len(),
            "masked_nodes": last.masked_count(),
        });
        if self.config.via_nullcurve {
            meta["via_nullcurve"] = self.via_nullcurve(&chain)?;
        }
        let meta_path = out.metadata.clone().unwrap_or_else(|| path.with_extension("json"));
        mesh_io::write_json(&meta, meta_path)?;
        Ok(meta)
    }

    /// Re-derives Weierstrass data after each Goursat-type step and compares
    /// the re-integrated surface with the chain output. The comparison stops
    /// at the first step that is not a Goursat transform.
    fn via_nullcurve(&self, chain: &[Surface]) -> Result<Value, CliError> {
        let mut curve = self.source.curve.clone();
        let mut rows = Vec::new();
        for (k, step) in self.steps.iter().enumerate() {
            let Some(a) = step.matrix()? else {
                rows.push(json!({"step": k, "type": step.kind(), "skipped": "not a Goursat transform"}));
                break;
            };
            let moved = goursat(&curve, &a)?;
            let data = weierstrass_from_phi(&moved)?;
            curve = Curve::new(data, moved.phi0.clone())?;
            let s = sample_surface(&curve, &self.source.grid)?;
            let d = s.max_f_diff(&chain[k + 1]).max(s.max_fstar_diff(&chain[k + 1]));
            rows.push(json!({"step": k, "type": step.kind(), "max_diff": d}));
        }
        Ok(Value::Array(rows))
    }

    /// Periods along the generators, carried through the chain, closing
    /// conditions of dressing steps and end data of the source.
    pub fn periods(&self) -> Result<Value, CliError> {
        let curve = &self.source.curve;
        let mut current = all_periods(curve)?;
        let mut stages = vec![json!({"after": "source", "periods": periods_json(&current)})];
        for (k, step) in self.steps.iter().enumerate() {
            let mapped = current
                .iter()
                .map(|pv| step.map_period(pv))
                .collect::<Result<Vec<_>, _>>()?;
            let mut stage = json!({"after": k, "type": step.kind(), "periods": periods_json(&mapped)});
            if let Step::Sfd(p) = step {
                stage["closing"] = Value::Array(
                    current
                        .iter()
                        .map(|pv| {
                            let c = closing_condition_general(pv, p);
                            json!({"generator": pv.generator, "closed": c.closed, "residual": c.residual})
                        })
                        .collect(),
                );
            }
            stages.push(stage);
            current = mapped;
        }
        let ends: Vec<Value> = curve
            .data
            .domain
            .punctures
            .iter()
            .map(|p| match classify_end(curve, *p, 1e-8) {
                Ok(r) => json!({
                    "puncture": cx(r.puncture),
                    "order": r.order,
                    "residue": r.residue.iter().map(|c| cx(*c)).collect::<Vec<_>>(),
                    "class": r.class.as_str(),
                    "alpha": r.alpha,
                }),
                Err(e) => json!({"puncture": cx(*p), "error": e.to_string()}),
            })
            .collect();
        let mut v = self.echo("periods");
        v["stages"] = Value::Array(stages);
        v["period_sum"] = json!(sum_tau(&current));
        v["ends"] = Value::Array(ends);
        Ok(v)
    }

    /// Runs all checks; the boolean is `false` on any unexpected failure.
    pub fn verify(&self) -> Result<(Value, bool), CliError> {
        let tol = self.config.verify;
        let mut rows: Vec<CheckRow> = Vec::new();
        rows.push(CheckRow::new(
            "source",
            None,
            verify::check_null(&self.source.curve, &self.source.grid, tol.null),
        ));

        // exact identities on the full grid
        let chain = self.run_chain(&self.source.grid)?;
        for (k, step) in self.steps.iter().enumerate() {
            let (input, output) = (&chain[k], &chain[k + 1]);
            match step {
                Step::Sfd(p) => rows.push(CheckRow::new(
                    step.kind(),
                    Some(k),
                    verify::check_dressed_matches_goursat(input, output, p, tol.algebraic),
                )),
                Step::LopezRos(p) => rows.push(CheckRow::new(
                    step.kind(),
                    Some(k),
                    verify::check_lopezros_equals_sfd(input, p.sigma, tol.algebraic),
                )),
                _ => {}
            }
        }

        // finite-difference checks on small patches around sample nodes
        let last = chain.last().expect("nonempty");
        let centers = patch_centers(last, &self.source.curve);
        if centers.is_empty() {
            return Err(CliError::Numeric("no sample points for patch checks".into()));
        }
        let mut fd: Vec<CheckRow> = Vec::new();
        for c in &centers {
            let scale = local_scale(&self.source.curve, *c);
            let patch = Grid::patch(*c, tol.step * scale, 2);
            let pchain = self.run_chain(&patch);
            let mut non_minimal = false;
            for k in 0..=self.steps.len() {
                let (stage, step) = match k.checked_sub(1) {
                    None => ("source", None),
                    Some(j) => (self.steps[j].kind(), Some(j)),
                };
                // transforms of a non-minimal surface promise nothing
                let downstream = non_minimal;
                if let Some(j) = step {
                    non_minimal |= self.steps[j].leaves_minimal();
                }
                let out = pchain.as_ref().map(|v| &v[k]).map_err(Clone::clone);
                let conformal = out.clone().and_then(|s| Ok(verify::check_conformal(s, tol.conformal)?));
                let minimal = out.and_then(|s| Ok(verify::check_minimal(s, tol.minimal)?));
                fd.push(CheckRow::from_cli(stage, step, conformal).expected(downstream));
                fd.push(CheckRow::from_cli(stage, step, minimal).expected(non_minimal));
            }
            for (k, step) in self.steps.iter().enumerate() {
                let Step::Darboux { mu, m } = step else { continue };
                let dchain = self.run_chain(&Grid::patch(*c, tol.darboux_step * scale, 2));
                let pair = dchain.as_ref().map(|v| (&v[k], &v[k + 1])).map_err(Clone::clone);
                let normal = pair
                    .clone()
                    .and_then(|(a, b)| Ok(verify::check_darboux_right_normal(a, b, *mu, *m, tol.darboux)?));
                let riccati = pair.and_then(|(a, b)| Ok(verify::check_riccati(a, b, *mu, *m, tol.darboux)?));
                fd.push(CheckRow::from_cli(step.kind(), Some(k), normal));
                fd.push(CheckRow::from_cli(step.kind(), Some(k), riccati));
            }
        }
        rows.extend(merge_rows(fd));

        let ok = rows.iter().all(|r| !r.is_unexpected_failure());
        let mut v = self.echo("verify");
        v["patch_centers"] = json!(centers.iter().map(|c| cx(*c)).collect::<Vec<_>>());
        v["checks"] = serde_json::to_value(&rows).map_err(|e| CliError::Numeric(e.to_string()))?;
        v["pass"] = json!(ok);
        Ok((v, ok))
    }
}

fn is_ply(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("ply"))
}

fn periods_json(pvs: &[PeriodVector<f64>]) -> Value {
    Value::Array(
        pvs.iter()
            .map(|pv| json!({"generator": pv.generator, "tau": pv.tau, "tau_star": pv.tau_star}))
            .collect(),
    )
}

fn sum_tau(pvs: &[PeriodVector<f64>]) -> Vec<f64> {
    let dim = pvs.iter().map(|p| p.dim()).max().unwrap_or(0);
    let mut out = vec![0.0; dim];
    for pv in pvs {
        let off = dim - pv.dim();
        for (k, v) in pv.tau.iter().enumerate() {
            out[k + off] += v;
        }
    }
    out
}

/// Grid nodes at fixed fractions of the extent, snapped to nodes that are
/// valid in `last` and well away from punctures.
fn patch_centers(last: &Surface, curve: &Curve) -> Vec<Complex64> {
    let spec = &last.spec;
    let clear = 8.0 * spec.hx().max(spec.hy());
    let mut out: Vec<Complex64> = Vec::new();
    for (fx, fy) in [(0.5, 0.5), (0.3, 0.7), (0.7, 0.3)] {
        let i = ((spec.nx - 1) as f64 * fx).round() as usize;
        let j = ((spec.ny - 1) as f64 * fy).round() as usize;
        let z = spec.node(i, j);
        let Some(idx) = last.nearest_valid(z) else { continue };
        let z = last.z(idx);
        if curve.data.domain.is_near_puncture(z, clear) || out.contains(&z) {
            continue;
        }
        out.push(z);
    }
    out
}

/// `min(1, |dPhi| / |dPhi'|)`: the distance over which `dPhi` changes by
/// about itself. Finite-difference steps are scaled by it so that truncation
/// error stays comparable near ends and branch points.
fn local_scale(curve: &Curve, z: Complex64) -> f64 {
    let exprs = curve.differential_exprs();
    let (mut d, mut dd) = (0.0, 0.0);
    for e in &exprs {
        let (Ok(a), Ok(b)) = (e.eval(z), e.derivative().eval(z)) else {
            return 1.0;
        };
        d += a.norm_sqr();
        dd += b.norm_sqr();
    }
    if dd > 0.0 {
        (d.sqrt() / dd.sqrt()).min(1.0)
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Serialize)]
struct CheckRow {
    /// `source` or the transform type.
    stage: String,
    /// Position in the chain.
    step: Option<usize>,
    #[serde(flatten)]
    report: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl CheckRow {
    fn new(stage: &str, step: Option<usize>, r: minsurf::Result<CheckReport>) -> Self {
        Self::from_cli(stage, step, r.map_err(CliError::from))
    }

    fn from_cli(stage: &str, step: Option<usize>, r: Result<CheckReport, CliError>) -> Self {
        let (report, error) = match r {
            Ok(rep) => (rep, None),
            Err(e) => (
                CheckReport {
                    name: "unevaluated".into(),
                    max_residual: f64::NAN,
                    tolerance: f64::NAN,
                    pass: false,
                    masked: 0,
                    expected_fail: false,
                },
                Some(e.to_string()),
            ),
        };
        Self {
            stage: stage.into(),
            step,
            report,
            error,
        }
    }

    fn expected(mut self, yes: bool) -> Self {
        self.report.expected_fail = yes || verify::is_expected_failure(&self.report.name, &self.stage);
        self
    }

    fn is_unexpected_failure(&self) -> bool {
        self.report.is_unexpected_failure()
    }
}

/// Combines patch results per `(step, check)`: largest residual, summed
/// masks, first error.
fn merge_rows(rows: Vec<CheckRow>) -> Vec<CheckRow> {
    let mut out: Vec<CheckRow> = Vec::new();
    for r in rows {
        let same = out
            .iter_mut()
            .find(|o| o.step == r.step && o.report.name == r.report.name && o.stage == r.stage);
        match same {
            None => out.push(r),
            Some(o) => {
                let (a, b) = (&mut o.report, &r.report);
                a.max_residual = a.max_residual.max(b.max_residual);
                a.masked += b.masked;
                a.pass &= b.pass;
                a.expected_fail |= b.expected_fail;
                if o.error.is_none() {
                    o.error = r.error;
                }
            }
        }
    }
    out
}

fn build_source(cfg: &JobConfig) -> Result<Source, CliError> {
    let src = cfg
        .source
        .as_ref()
        .ok_or_else(|| CliError::Config("no source: give --example or a config with a source".into()))?;
    let (data, phi0, default_extent, echo) = match src {
        SourceConfig::Example { name, params } => {
            let e = catalog::by_name::<f64>(name, params)?;
            let g = e.grid;
            let params: serde_json::Map<String, Value> = e.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            (
                e.data,
                e.phi0,
                ([g.x0, g.x1, g.y0, g.y1], g.nx, g.ny),
                json!({"example": name, "params": params}),
            )
        }
        SourceConfig::Data(d) => {
            let (data, phi0) = inline_data(d)?;
            let ext = region_extent(&data.domain.region);
            (data, phi0, (ext, DEFAULT_NODES, DEFAULT_NODES), inline_echo(d))
        }
    };
    // conjugate surfaces are normalized to vanish at the basepoint
    let dim = phi0.dim();
    let phi0 = ComplexVector::from_quaternions(phi0.re_quat(), Quat::zero(), dim);
    let curve = Curve::new(data, phi0)?;
    let (ext, nx, ny) = match cfg.grid {
        Some(g) => (g.extent.unwrap_or(default_extent.0), g.nx, g.ny),
        None => default_extent,
    };
    let grid = Grid::new(ext[0], ext[1], ext[2], ext[3], nx, ny)?;
    Ok(Source { curve, grid, echo })
}

fn inline_echo(d: &InlineData) -> Value {
    let mut v = json!({"kind": d.kind});
    for (k, e) in [
        ("g", &d.g),
        ("omega", &d.omega),
        ("dh", &d.dh),
        ("g1", &d.g1),
        ("g2", &d.g2),
    ] {
        if let Some(e) = e {
            v[k] = json!(e);
        }
    }
    if let Some(c) = &d.components {
        v["components"] = json!(c);
    }
    v
}

fn region_extent(r: &Region<f64>) -> [f64; 4] {
    match r {
        Region::Rect { x0, x1, y0, y1 } => [*x0, *x1, *y0, *y1],
        Region::Annulus { center, r1, .. } => [center.re - r1, center.re + r1, center.im - r1, center.im + r1],
        Region::Torus { omega1, omega2 } => {
            let xs = [0.0, omega1.re, omega2.re, omega1.re + omega2.re];
            let ys = [0.0, omega1.im, omega2.im, omega1.im + omega2.im];
            let (x0, x1) = lo_hi(xs);
            let (y0, y1) = lo_hi(ys);
            [x0, x1, y0, y1]
        }
    }
}

fn lo_hi(v: [f64; 4]) -> (f64, f64) {
    (
        v.iter().cloned().fold(f64::MAX, f64::min),
        v.iter().cloned().fold(f64::MIN, f64::max),
    )
}

fn inline_data(d: &InlineData) -> Result<(WeierstrassData<f64>, ComplexVector<f64>), CliError> {
    let expr = |name: &str, v: &Option<String>| -> Result<_, CliError> {
        let src = v
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("data of kind {} needs {name}", d.kind)))?;
        Ok(parse::<f64>(src)?)
    };
    let kind = match d.kind.as_str() {
        "r3" => DataKind::R3 {
            g: expr("g", &d.g)?,
            omega: expr("omega", &d.omega)?,
        },
        "r3_height" => DataKind::R3Height {
            g: expr("g", &d.g)?,
            dh: expr("dh", &d.dh)?,
        },
        "r4" => DataKind::R4 {
            g1: expr("g1", &d.g1)?,
            g2: expr("g2", &d.g2)?,
            omega: expr("omega", &d.omega)?,
        },
        "differential" => DataKind::Differential {
            components: d
                .components
                .as_ref()
                .ok_or_else(|| CliError::Config("differential data needs components".into()))?
                .iter()
                .map(|s| parse::<f64>(s))
                .collect::<Result<_, _>>()?,
        },
        k => {
            return Err(CliError::Config(format!(
                "unknown data kind {k}; expected r3, r3_height, r4 or differential"
            )))
        }
    };
    let dom = &d.domain;
    let region = match &dom.region {
        RegionConfig::Rect([x0, x1, y0, y1]) => {
            if !(x0 < x1 && y0 < y1) {
                return Err(CliError::Config("rect region needs x0 < x1 and y0 < y1".into()));
            }
            Region::Rect {
                x0: *x0,
                x1: *x1,
                y0: *y0,
                y1: *y1,
            }
        }
        RegionConfig::Annulus { center, r0, r1 } => {
            if !(0.0 <= *r0 && r0 < r1) {
                return Err(CliError::Config("annulus needs 0 <= r0 < r1".into()));
            }
            Region::Annulus {
                center: center.0,
                r0: *r0,
                r1: *r1,
            }
        }
    };
    let generators = dom
        .generators
        .iter()
        .map(|g| {
            Ok(Generator {
                name: g.name.clone(),
                path: PathSpec::new(g.waypoints.iter().map(|c| c.0).collect())?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let domain = DomainSpec::new(
        region,
        dom.punctures.iter().map(|c| c.0).collect(),
        dom.basepoint.0,
        generators,
    )?;
    let data = WeierstrassData::new(kind, domain)?;
    let dim = data.dim();
    let phi0 = match &d.phi0 {
        Some(v) if v.len() == dim => ComplexVector::new(v.iter().map(|c| c.0).collect()),
        Some(v) => {
            return Err(CliError::Config(format!(
                "phi0 has {} entries, data has dimension {dim}",
                v.len()
            )))
        }
        None => ComplexVector::zeros(dim),
    };
    Ok((data, phi0))
}

/// Writes `value` to `path`, or to stdout when no path is given.
pub fn emit(value: &Value, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => Ok(mesh_io::write_json(value, p)?),
        None => {
            print!("{}", mesh_io::json_string(value)?);
            Ok(())
        }
    }
}
