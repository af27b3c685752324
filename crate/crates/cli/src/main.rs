//! `minsurf`: generate, transform, and check minimal surfaces.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 verification failure.

mod config;
mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};
use minsurf::catalog;
use serde_json::json;

use config::{parse_extent, parse_grid, parse_param, GridConfig, JobConfig, SourceConfig, TransformConfig};
use job::{emit, Job, Mutation};

#[derive(Debug, Clone, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("verification failed")]
    Verification,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Verification => 4,
        }
    }
}

impl From<minsurf::Error> for CliError {
    fn from(e: minsurf::Error) -> Self {
        use minsurf::Error as E;
        match e {
            E::InvalidParameter(_) | E::Parse(_) | E::DimensionMismatch { .. } | E::Io(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

/// Transform flags; their order on the command line is the chain order.
const TRANSFORM_FLAGS: [(&str, &str); 7] = [
    ("sfd", "simple factor dressing: mu=C [m=Q] [n=Q]"),
    ("lopezros", "Lopez-Ros deformation: sigma=C"),
    ("assoc", "associated family: theta=R | p=Q q=Q, [side=right|left]"),
    ("darboux", "mu-Darboux transform: mu=C [m=Q]"),
    ("willmore", "associated Willmore surface"),
    (
        "goursat",
        "Goursat transform: matrix=a|b|c;d|e|f;g|h|k (complex orthogonal)",
    ),
    ("conjugate", "conjugate surface"),
];

fn source_args(cmd: Command) -> Command {
    cmd.arg(
        Arg::new("config")
            .long("config")
            .value_name("FILE")
            .help("job configuration (JSON)"),
    )
    .arg(
        Arg::new("example")
            .long("example")
            .value_name("NAME")
            .help("catalog surface (see catalog-list)"),
    )
    .arg(
        Arg::new("param")
            .long("param")
            .value_name("KEY=VALUE")
            .action(ArgAction::Append)
            .help("catalog parameter, e.g. l=2"),
    )
    .arg(
        Arg::new("grid")
            .long("grid")
            .value_name("NXxNY")
            .help("grid nodes [default: source grid, 41x41]"),
    )
    .arg(
        Arg::new("extent")
            .long("extent")
            .value_name("X0,X1,Y0,Y1")
            .allow_hyphen_values(true)
            .help("grid extent [default: source extent]"),
    )
    .arg(Arg::new("mutate").long("mutate").value_name("KIND").hide(true))
}

fn transform_args(mut cmd: Command) -> Command {
    for (name, help) in TRANSFORM_FLAGS {
        cmd = cmd.arg(
            Arg::new(name)
                .long(name)
                .num_args(0..)
                .value_name("KEY=VALUE")
                .action(ArgAction::Append)
                .help(help),
        );
    }
    cmd.arg(
        Arg::new("via-nullcurve")
            .long("via-nullcurve")
            .action(ArgAction::SetTrue)
            .help("re-derive Weierstrass data after each Goursat-type step and report the difference"),
    )
}

fn mesh_args(cmd: Command) -> Command {
    cmd.arg(
        Arg::new("out")
            .long("out")
            .value_name("FILE")
            .help("mesh output (.obj or .ply)"),
    )
    .arg(
        Arg::new("meta")
            .long("meta")
            .value_name("FILE")
            .help("metadata JSON [default: mesh path with .json]"),
    )
    .arg(
        Arg::new("projection")
            .long("projection")
            .value_name("AXIS")
            .value_parser(clap::value_parser!(usize))
            .help("coordinate of (1, i, j, k) dropped for 4-space surfaces [default: 0]"),
    )
}

fn report_arg(cmd: Command) -> Command {
    cmd.arg(
        Arg::new("report")
            .long("report")
            .value_name("FILE")
            .help("report JSON [default: stdout]"),
    )
}

fn cli() -> Command {
    Command::new("minsurf")
        .about("Minimal surfaces from Weierstrass data: sampling, transforms, periods and checks")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .subcommand(mesh_args(source_args(
            Command::new("gen").about("sample a surface and write a mesh"),
        )))
        .subcommand(mesh_args(transform_args(source_args(
            Command::new("transform").about("apply a transform chain and write a mesh"),
        ))))
        .subcommand(report_arg(transform_args(source_args(
            Command::new("periods").about("periods along generators, closing conditions and ends"),
        ))))
        .subcommand(report_arg(transform_args(source_args(
            Command::new("verify").about("check nullity, conformality, minimality and transform identities"),
        ))))
        .subcommand(
            Command::new("catalog-list").about("list built-in surfaces").arg(
                Arg::new("json")
                    .long("json")
                    .action(ArgAction::SetTrue)
                    .help("print JSON"),
            ),
        )
        .subcommand(Command::new("schema").about("print the JSON schema of job configuration files"))
}

/// Transform flags with their tokens, in command-line order.
fn ordered_transforms(args: &[String]) -> Result<Vec<TransformConfig>, CliError> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < args.len() {
        let name = args[k]
            .strip_prefix("--")
            .filter(|n| TRANSFORM_FLAGS.iter().any(|(f, _)| f == n));
        let Some(name) = name else {
            k += 1;
            continue;
        };
        let mut j = k + 1;
        while j < args.len() && !args[j].starts_with("--") {
            j += 1;
        }
        out.push(TransformConfig::from_flag(name, &args[k + 1..j])?);
        k = j;
    }
    Ok(out)
}

fn load_config(cmd: &str, m: &ArgMatches, args: &[String]) -> Result<(JobConfig, Option<Mutation>), CliError> {
    let mut cfg = match m.get_one::<String>("config") {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{p}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{p}: {e}")))?
        }
        None => JobConfig::default(),
    };
    if let Some(name) = m.get_one::<String>("example") {
        let params = m
            .get_many::<String>("param")
            .into_iter()
            .flatten()
            .map(|s| parse_param(s))
            .collect::<Result<_, _>>()?;
        cfg.source = Some(SourceConfig::Example {
            name: name.clone(),
            params,
        });
    } else if m.get_many::<String>("param").is_some() {
        return Err(CliError::Config("--param needs --example".into()));
    }
    let grid = m.get_one::<String>("grid").map(|s| parse_grid(s)).transpose()?;
    let extent = m.get_one::<String>("extent").map(|s| parse_extent(s)).transpose()?;
    if grid.is_some() || extent.is_some() {
        let (nx, ny) = grid
            .or(cfg.grid.map(|g| (g.nx, g.ny)))
            .unwrap_or((job::DEFAULT_NODES, job::DEFAULT_NODES));
        cfg.grid = Some(GridConfig {
            nx,
            ny,
            extent: extent.or(cfg.grid.and_then(|g| g.extent)),
        });
    }
    if cmd != "gen" {
        cfg.transforms.extend(ordered_transforms(args)?);
        if m.get_flag("via-nullcurve") {
            cfg.via_nullcurve = true;
        }
    }
    if matches!(cmd, "gen" | "transform") {
        if let Some(p) = m.get_one::<String>("out") {
            cfg.outputs.mesh = Some(PathBuf::from(p));
        }
        if let Some(p) = m.get_one::<String>("meta") {
            cfg.outputs.metadata = Some(PathBuf::from(p));
        }
        if let Some(p) = m.get_one::<usize>("projection") {
            cfg.outputs.projection = *p;
        }
    } else if let Some(p) = m.get_one::<String>("report") {
        cfg.outputs.report = Some(PathBuf::from(p));
    }
    let mutation = m.get_one::<String>("mutate").map(|s| Mutation::parse(s)).transpose()?;
    Ok((cfg, mutation))
}

fn catalog_list(as_json: bool) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for name in catalog::NAMES {
        let e = catalog::by_name::<f64>(name, &[])?;
        let g = e.grid;
        rows.push(json!({
            "name": name,
            "dim": e.data.dim(),
            "params": e.params.iter().map(|(k, v)| json!({"key": k, "default": v})).collect::<Vec<_>>(),
            "grid": {"x0": g.x0, "x1": g.x1, "y0": g.y0, "y1": g.y1, "nx": g.nx, "ny": g.ny},
            "punctures": e.data.domain.punctures.iter().map(|p| [p.re, p.im]).collect::<Vec<_>>(),
            "generators": e.data.domain.generators.iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
            "closed_form": e.has_closed_form(),
        }));
    }
    if as_json {
        emit(&json!(rows), None)
    } else {
        for (name, r) in catalog::NAMES.iter().zip(&rows) {
            let params: Vec<String> = r["params"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|p| format!("{}={}", p["key"].as_str().unwrap_or(""), p["default"]))
                .collect();
            println!(
                "{name:<16} R^{}  punctures={:<2} generators={:<2} closed_form={:<5} {}",
                r["dim"],
                r["punctures"].as_array().map_or(0, |v| v.len()),
                r["generators"].as_array().map_or(0, |v| v.len()),
                r["closed_form"],
                params.join(" ")
            );
        }
        Ok(())
    }
}

fn run(args: Vec<String>) -> Result<(), CliError> {
    let matches = cli().try_get_matches_from(&args).map_err(|e| {
        let _ = e.print();
        match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                CliError::Config(String::new())
            }
            _ => CliError::Config("invalid arguments".into()),
        }
    });
    let matches = match matches {
        Ok(m) => m,
        Err(CliError::Config(msg)) if msg.is_empty() => return Ok(()),
        Err(e) => return Err(e),
    };
    let (cmd, m) = matches.subcommand().expect("subcommand required");
    if cmd == "catalog-list" {
        return catalog_list(m.get_flag("json"));
    }
    if cmd == "schema" {
        return emit(&config::schema(), None);
    }
    let (cfg, mutation) = load_config(cmd, m, &args)?;
    let report_path = cfg.outputs.report.clone();
    let job = Job::new(cfg, mutation)?;
    match cmd {
        "gen" | "transform" => {
            job.write_mesh(cmd)?;
            Ok(())
        }
        "periods" => emit(&job.periods()?, report_path.as_ref()),
        "verify" => {
            let (report, ok) = job.verify()?;
            emit(&report, report_path.as_ref())?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Verification)
            }
        }
        _ => unreachable!("unknown subcommand"),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("minsurf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
