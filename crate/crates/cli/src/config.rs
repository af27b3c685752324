//! Job configuration: JSON schema types and parsing of command-line values.
//!
//! Complex numbers are accepted as a JSON number, a `[re, im]` pair, or a
//! string `"re,im"` / `"re+im i"`. Quaternions are `[w, x, y, z]` or the
//! string `"w,x,y,z"`.

use std::path::PathBuf;

use minsurf::{Cx, Quat};
use num_complex::Complex64;
use schemars::gen::SchemaGenerator;
use schemars::schema::Schema;
use schemars::JsonSchema;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::CliError;

/// A job: source surface, sampling grid, transform chain, outputs and
/// check tolerances. Command-line flags override the file.
#[derive(Debug, Clone, Default, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub source: Option<SourceConfig>,
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub transforms: Vec<TransformConfig>,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub via_nullcurve: bool,
}

#[derive(Debug, Clone, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum SourceConfig {
    Example {
        name: String,
        #[serde(default)]
        params: Vec<(String, f64)>,
    },
    Data(Box<InlineData>),
}

/// Weierstrass data given as expressions in `z`.
#[derive(Debug, Clone, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct InlineData {
    /// `r3`, `r3_height`, `r4` or `differential`.
    pub kind: String,
    pub g: Option<String>,
    pub omega: Option<String>,
    pub dh: Option<String>,
    pub g1: Option<String>,
    pub g2: Option<String>,
    pub components: Option<Vec<String>>,
    pub domain: DomainConfig,
    /// `Phi` at the basepoint; zero by default.
    pub phi0: Option<Vec<CxValue>>,
}

#[derive(Debug, Clone, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub region: RegionConfig,
    #[serde(default)]
    pub punctures: Vec<CxValue>,
    pub basepoint: CxValue,
    #[serde(default)]
    pub generators: Vec<GeneratorConfig>,
}

#[derive(Debug, Clone, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum RegionConfig {
    /// `[x0, x1, y0, y1]`
    Rect([f64; 4]),
    Annulus {
        center: CxValue,
        r0: f64,
        r1: f64,
    },
}

#[derive(Debug, Clone, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub name: String,
    pub waypoints: Vec<CxValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    /// `[x0, x1, y0, y1]`; the source's default extent when absent.
    pub extent: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum SideConfig {
    Right,
    Left,
}

/// One step of the transform chain.
#[derive(Debug, Clone, PartialEq, Deserialize, JsonSchema)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TransformConfig {
    Sfd {
        mu: CxValue,
        #[serde(default = "unit_quat")]
        m: QuatValue,
        #[serde(default = "unit_quat")]
        n: QuatValue,
    },
    Lopezros {
        sigma: CxValue,
    },
    Assoc {
        #[serde(default)]
        theta: Option<f64>,
        #[serde(default)]
        p: Option<QuatValue>,
        #[serde(default)]
        q: Option<QuatValue>,
        #[serde(default = "right")]
        side: SideConfig,
    },
    Darboux {
        mu: CxValue,
        #[serde(default = "unit_quat")]
        m: QuatValue,
    },
    Willmore,
    Goursat {
        /// Rows of complex entries.
        matrix: Vec<Vec<CxValue>>,
    },
    Conjugate,
}

fn unit_quat() -> QuatValue {
    QuatValue(Quat::one())
}

fn right() -> SideConfig {
    SideConfig::Right
}

impl TransformConfig {
    /// Builds a step from a flag name and its `key=value` tokens.
    pub fn from_flag(flag: &str, tokens: &[String]) -> Result<Self, CliError> {
        let kv = key_values(flag, tokens)?;
        let allow = |keys: &[&str]| -> Result<(), CliError> {
            match kv.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
                Some((k, _)) => Err(CliError::Config(format!("--{flag}: unknown key {k}"))),
                None => Ok(()),
            }
        };
        let get = |k: &str| kv.iter().rev().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
        let need = |k: &str| get(k).ok_or_else(|| CliError::Config(format!("--{flag}: missing {k}=")));
        let quat_or_one = |k: &str| get(k).map_or(Ok(unit_quat()), |v| parse_quat(v).map(QuatValue));
        let out = match flag {
            "sfd" => {
                allow(&["mu", "m", "n"])?;
                Self::Sfd {
                    mu: CxValue(parse_complex(need("mu")?)?),
                    m: quat_or_one("m")?,
                    n: quat_or_one("n")?,
                }
            }
            "lopezros" => {
                allow(&["sigma"])?;
                Self::Lopezros {
                    sigma: CxValue(parse_complex(need("sigma")?)?),
                }
            }
            "assoc" => {
                allow(&["theta", "p", "q", "side"])?;
                let side = match get("side").unwrap_or("right") {
                    "right" => SideConfig::Right,
                    "left" => SideConfig::Left,
                    s => {
                        return Err(CliError::Config(format!(
                            "--assoc: side must be left or right, got {s}"
                        )))
                    }
                };
                Self::Assoc {
                    theta: get("theta").map(parse_real).transpose()?,
                    p: get("p").map(parse_quat).transpose()?.map(QuatValue),
                    q: get("q").map(parse_quat).transpose()?.map(QuatValue),
                    side,
                }
            }
            "darboux" => {
                allow(&["mu", "m"])?;
                Self::Darboux {
                    mu: CxValue(parse_complex(need("mu")?)?),
                    m: quat_or_one("m")?,
                }
            }
            "willmore" => {
                allow(&[])?;
                Self::Willmore
            }
            "conjugate" => {
                allow(&[])?;
                Self::Conjugate
            }
            "goursat" => {
                allow(&["matrix"])?;
                Self::Goursat {
                    matrix: parse_matrix(need("matrix")?)?,
                }
            }
            _ => return Err(CliError::Config(format!("unknown transform --{flag}"))),
        };
        Ok(out)
    }
}

fn key_values(flag: &str, tokens: &[String]) -> Result<Vec<(String, String)>, CliError> {
    tokens
        .iter()
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| CliError::Config(format!("--{flag}: expected key=value, got {t}")))
        })
        .collect()
}

#[derive(Debug, Clone, Default, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// `.obj` or `.ply`.
    pub mesh: Option<PathBuf>,
    /// Metadata JSON; defaults to the mesh path with extension `json`.
    pub metadata: Option<PathBuf>,
    /// Report JSON for `periods` and `verify`.
    pub report: Option<PathBuf>,
    /// Coordinate `0..4` of `(1, i, j, k)` dropped for 4-space meshes.
    #[serde(default)]
    pub projection: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub enabled: bool,
    pub null: f64,
    pub conformal: f64,
    pub minimal: f64,
    pub algebraic: f64,
    pub darboux: f64,
    /// Patch step for finite-difference checks.
    pub step: f64,
    /// Patch step for the Darboux right-normal and Riccati checks.
    pub darboux_step: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            null: 1e-8,
            conformal: 1e-6,
            minimal: 1e-4,
            algebraic: 1e-8,
            darboux: 1e-4,
            step: 2.5e-4,
            darboux_step: 2.5e-4,
        }
    }
}

/// A complex number in any of the accepted notations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CxValue(pub Complex64);

impl<'de> Deserialize<'de> for CxValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Pair([f64; 2]),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Self(Complex64::new(x, 0.0))),
            Raw::Pair([a, b]) => Ok(Self(Complex64::new(a, b))),
            Raw::Text(s) => parse_complex(&s).map(Self).map_err(D::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuatValue(pub Quat);

// Schema mirrors of the accepted notations.

/// A complex number: a real number, `[re, im]`, or a string.
#[allow(dead_code)]
#[derive(JsonSchema)]
#[serde(untagged)]
enum ComplexNotation {
    Real(f64),
    Pair([f64; 2]),
    /// `"re,im"` or `"a+bi"`
    Text(String),
}

/// A quaternion `w + x i + y j + z k`.
#[allow(dead_code)]
#[derive(JsonSchema)]
#[serde(untagged)]
enum QuaternionNotation {
    /// `[w, x, y, z]`
    Array([f64; 4]),
    /// `"w,x,y,z"`
    Text(String),
}

impl JsonSchema for CxValue {
    fn schema_name() -> String {
        "Complex".into()
    }

    fn json_schema(gen: &mut SchemaGenerator) -> Schema {
        ComplexNotation::json_schema(gen)
    }
}

impl JsonSchema for QuatValue {
    fn schema_name() -> String {
        "Quaternion".into()
    }

    fn json_schema(gen: &mut SchemaGenerator) -> Schema {
        QuaternionNotation::json_schema(gen)
    }
}

/// JSON schema of [`JobConfig`].
pub fn schema() -> serde_json::Value {
    serde_json::to_value(schemars::schema_for!(JobConfig)).expect("schema serializes")
}

impl<'de> Deserialize<'de> for QuatValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Arr([f64; 4]),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Arr(a) => Ok(Self(Quat::from_array(a))),
            Raw::Text(s) => parse_quat(&s).map(Self).map_err(D::Error::custom),
        }
    }
}

pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("not a number: {s}")))?;
    if !v.is_finite() {
        return Err(CliError::Config(format!("not a finite number: {s}")));
    }
    Ok(v)
}

/// `re,im`, `a`, `bi`, `a+bi`, `a-b i`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Cx<f64>, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((a, b)) = t.split_once(',') {
        return Ok(Complex64::new(parse_real(a)?, parse_real(b)?));
    }
    let bad = || CliError::Config(format!("not a complex number: {s}"));
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(&t)?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => parse_real(x).map_err(|_| bad())?,
    };
    let re = if re.is_empty() {
        0.0
    } else {
        parse_real(re).map_err(|_| bad())?
    };
    Ok(Complex64::new(re, im))
}

pub fn parse_quat(s: &str) -> Result<Quat, CliError> {
    let v: Vec<f64> = s.split(',').map(parse_real).collect::<Result<_, _>>()?;
    match v.as_slice() {
        [w, x, y, z] => Ok(Quat::new(*w, *x, *y, *z)),
        _ => Err(CliError::Config(format!("quaternion needs w,x,y,z: {s}"))),
    }
}

/// Rows separated by `;`, entries by `|`; each entry a complex number.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<CxValue>>, CliError> {
    s.split(';')
        .map(|row| row.split('|').map(|e| parse_complex(e).map(CxValue)).collect())
        .collect()
}

/// `NXxNY`, e.g. `41x41`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("grid must look like 41x41, got {s}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nx: usize = a.trim().parse().map_err(|_| bad())?;
    let ny: usize = b.trim().parse().map_err(|_| bad())?;
    if nx < 2 || ny < 2 {
        return Err(CliError::Config(format!("grid needs at least 2x2 nodes, got {s}")));
    }
    Ok((nx, ny))
}

pub fn parse_extent(s: &str) -> Result<[f64; 4], CliError> {
    let v: Vec<f64> = s.split(',').map(parse_real).collect::<Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c, d] if a < b && c < d => Ok([*a, *b, *c, *d]),
        _ => Err(CliError::Config(format!(
            "extent needs x0,x1,y0,y1 with x0 < x1, y0 < y1: {s}"
        ))),
    }
}

/// `key=value` with a numeric value.
pub fn parse_param(s: &str) -> Result<(String, f64), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("parameter must be key=value, got {s}")))?;
    Ok((k.trim().to_string(), parse_real(v)?))
}
