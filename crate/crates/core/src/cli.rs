//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 domain condition (outside the
//! support, zero-mass half-space, no solution), 3 failed verification.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::barycentric::{
    coords_from_point, point_from_coords, represent_with, BarycentricCoords, CoordKind,
    RepresentationResult,
};
use crate::config::Tolerances;
use crate::depth::{zonoid_depth_with, DepthStatus};
use crate::error::{Error, Result};
use crate::gaussian::gaussian_depth;
use crate::gaussian::scalar;
use crate::io::{
    format_sig, parse_vector, read_gaussian_json, read_measure_csv, to_json, OUTPUT_DIGITS,
};
use crate::measures::{offset_serde, Direction, HalfSpace, Measure, Vector};
use crate::verify::{run_suite, Suite, VerifyConfig};
use crate::zonoid::{
    direction_grid, support_lift_zonoid, support_trimmed, support_zonoid, trimmed_boundary_point,
    zonotope_polygon_2d, LiftDirection, TrimmedRegionQuery,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Significant digits of the scalar Gaussian tools.
const SCALAR_DIGITS: usize = 15;

#[derive(Debug, Parser)]
#[command(
    name = "liftzonoid",
    version,
    about = "Zonoid depth, trimmed regions and half-space barycentric coordinates"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for direction grids and Monte-Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override a numeric tolerance, e.g. `--tolerance lp_feasibility=1e-10`.
    #[arg(long = "tolerance", global = true, value_name = "KEY=VALUE")]
    tolerances: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Source {
    /// CSV file, one atom per row, optional `weight` column.
    #[arg(long, conflicts_with = "gaussian")]
    measure: Option<PathBuf>,
    /// JSON file `{"mean": [...], "covariance": [[...]]}`.
    #[arg(long)]
    gaussian: Option<PathBuf>,
}

impl Source {
    fn load(&self) -> Result<Measure> {
        match (&self.measure, &self.gaussian) {
            (Some(p), None) => Ok(read_measure_csv(p)?.into()),
            (None, Some(p)) => Ok(read_gaussian_json(p)?.into()),
            _ => Err(Error::Input(
                "give exactly one of --measure or --gaussian".into(),
            )),
        }
    }

    fn load_optional(&self) -> Result<Option<Measure>> {
        if self.measure.is_none() && self.gaussian.is_none() {
            Ok(None)
        } else {
            self.load().map(Some)
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zonoid depth of a point with its LP certificate.
    Depth {
        #[command(flatten)]
        source: Source,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Boundary points of a trimmed region over a direction grid.
    Contour {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 360)]
        directions: usize,
    },
    /// Support function of the zonoid, the lift zonoid or a trimmed region.
    Support {
        #[command(flatten)]
        source: Source,
        /// Trimmed region level; without it the zonoid itself is used.
        #[arg(long, conflicts_with = "lift_t")]
        alpha: Option<f64>,
        /// First coordinate `t` of a lift-zonoid direction `(t, u)`.
        #[arg(long, allow_hyphen_values = true)]
        lift_t: Option<f64>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "directions")]
        direction: Option<String>,
        /// Number of grid directions.
        #[arg(long)]
        directions: Option<usize>,
    },
    /// Mass and barycenter of the half-space `{y : <y,u> >= a}`.
    Barycenter {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        /// Offset `a`; `-inf` selects the whole space.
        #[arg(long, allow_hyphen_values = true)]
        offset: String,
    },
    /// Half-space whose barycenter is the given point.
    Represent {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Convert between a point and its offset, support and depth coordinates.
    Coords {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["from", "scalar"])]
        point: Option<String>,
        /// Form of the input coordinates given by --scalar and --direction.
        #[arg(long, requires_all = ["scalar", "direction"])]
        from: Option<CoordKind>,
        #[arg(long, allow_hyphen_values = true)]
        scalar: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
        /// Form to convert the point to.
        #[arg(long)]
        to: Option<CoordKind>,
        /// Convert the `--to` coordinates back through the point into this form.
        #[arg(long, requires = "to")]
        to_back: Option<CoordKind>,
    },
    /// Scalar Gaussian functions, one value per line.
    Gaussian {
        #[arg(value_enum)]
        function: ScalarFn,
        #[arg(allow_negative_numbers = true, required = true)]
        values: Vec<f64>,
    },
    /// Exact zonotope of a planar point cloud, counterclockwise vertices.
    Polygon2d {
        #[command(flatten)]
        source: Source,
    },
    /// Run a verification suite: theorem1, gaussian, roundtrip or oracle.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScalarFn {
    Pdf,
    Cdf,
    Sf,
    Quantile,
    Mills,
    Isoperimetric,
    Radius,
    RadiusInverse,
    G,
    GInverse,
}

impl ScalarFn {
    fn eval(self, x: f64) -> Result<f64> {
        match self {
            ScalarFn::Pdf => Ok(scalar::normal_pdf(x)),
            ScalarFn::Cdf => Ok(scalar::normal_cdf(x)),
            ScalarFn::Sf => Ok(scalar::normal_sf(x)),
            ScalarFn::Quantile => scalar::normal_quantile(x),
            ScalarFn::Mills => Ok(scalar::mills_ratio(x)),
            ScalarFn::Isoperimetric => scalar::isoperimetric(x),
            ScalarFn::Radius => scalar::radius(x),
            ScalarFn::RadiusInverse => scalar::radius_inverse(x),
            ScalarFn::G => Ok(scalar::g_ratio(x)),
            ScalarFn::GInverse => scalar::g_inverse(x),
        }
    }
}

/// Text to emit and the exit code that goes with it.
struct Output {
    text: String,
    code: i32,
    /// Side summary, written next to `--out` or to standard error.
    summary: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            code: EXIT_OK,
            summary: None,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OutsideSupport { .. }
        | Error::ZeroMass
        | Error::NoSolution(_)
        | Error::MeanPoint
        | Error::NotConverged { .. }
        | Error::NoDual(_) => EXIT_DOMAIN,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let shown = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(shown.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(shown.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    let result = match cli.workers {
        Some(0) => Err(Error::Input("--workers must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Input(format!("cannot start {n} workers: {e}")))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result.and_then(|out| emit(&cli, out, stdout, stderr)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(cli: &Cli, out: Output, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let io_err = |p: &Path, e: std::io::Error| Error::Input(format!("{}: {e}", p.display()));
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &out.text).map_err(|e| io_err(path, e))?;
            if let Some(summary) = &out.summary {
                let mut side = path.clone().into_os_string();
                side.push(".json");
                let side = PathBuf::from(side);
                std::fs::write(&side, summary).map_err(|e| io_err(&side, e))?;
            }
        }
        None => {
            stdout
                .write_all(out.text.as_bytes())
                .map_err(|e| Error::Input(format!("stdout: {e}")))?;
            if let Some(summary) = &out.summary {
                let _ = stderr.write_all(summary.as_bytes());
            }
        }
    }
    Ok(out.code)
}

fn tolerances(cli: &Cli) -> Result<Tolerances> {
    let mut tol = Tolerances::DEFAULT;
    for kv in &cli.tolerances {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("tolerance override `{kv}` is not KEY=VALUE")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("tolerance value `{v}` is not a number")))?;
        tol.set(k.trim(), v)?;
    }
    Ok(tol)
}

fn line(mut s: String) -> String {
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    format_sig(x, OUTPUT_DIGITS)
}

fn joined(v: &Vector) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
}

fn axis_names(prefix: char, d: usize) -> Vec<String> {
    if d <= 3 {
        ["x", "y", "z"][..d]
            .iter()
            .map(|s| format!("{prefix}{s}"))
            .collect()
    } else {
        (1..=d).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn json_only(cli: &Cli, what: &str) -> Result<()> {
    match cli.format {
        Some(Format::Csv) => Err(Error::Input(format!("{what} output is JSON only"))),
        _ => Ok(()),
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Depth { source, point } => {
            cmd_depth(cli, &source.load()?, &parse_vector(point)?, tol)
        }
        Command::Contour {
            source,
            alpha,
            directions,
        } => cmd_contour(cli, &source.load()?, *alpha, *directions),
        Command::Support {
            source,
            alpha,
            lift_t,
            direction,
            directions,
        } => cmd_support(
            cli,
            &source.load()?,
            *alpha,
            *lift_t,
            direction.as_deref(),
            *directions,
        ),
        Command::Barycenter {
            source,
            direction,
            offset,
        } => cmd_barycenter(cli, &source.load()?, direction, offset),
        Command::Represent { source, point } => {
            json_only(cli, "represent")?;
            let r = represent_with(&source.load()?, &parse_vector(point)?, tol)?;
            Ok(Output::ok(line(to_json(&representation_json(&r)))))
        }
        Command::Coords {
            source,
            point,
            from,
            scalar,
            direction,
            to,
            to_back,
        } => {
            json_only(cli, "coords")?;
            let measure = source.load()?;
            let given = match (point, from, scalar, direction) {
                (Some(p), None, None, _) => (parse_vector(p)?, None),
                (None, Some(kind), Some(s), Some(u)) => {
                    let c = BarycentricCoords {
                        kind: *kind,
                        scalar: *s,
                        direction: Direction::new(parse_vector(u)?)?,
                    };
                    (point_from_coords(&measure, &c)?, Some(c))
                }
                _ => {
                    return Err(Error::Input(
                        "give --point, or --from with --scalar and --direction".into(),
                    ))
                }
            };
            cmd_coords(&measure, given, *to, *to_back)
        }
        Command::Gaussian { function, values } => {
            let mut text = String::new();
            for &v in values {
                text.push_str(&format_sig(function.eval(v)?, SCALAR_DIGITS));
                text.push('\n');
            }
            Ok(Output::ok(text))
        }
        Command::Polygon2d { source } => cmd_polygon(cli, &source.load()?),
        Command::Verify {
            suite,
            samples,
            source,
        } => {
            json_only(cli, "verify")?;
            let suite: Suite = suite.parse()?;
            let cfg = VerifyConfig {
                seed: cli.seed,
                samples: *samples,
                measure: source.load_optional()?,
            };
            let report = run_suite(suite, &cfg)?;
            let code = if report.passed { EXIT_OK } else { EXIT_VERIFY };
            Ok(Output {
                text: line(to_json(&report)),
                code,
                summary: None,
            })
        }
    }
}

fn cmd_depth(cli: &Cli, measure: &Measure, x: &Vector, tol: Tolerances) -> Result<Output> {
    let (depth, status, body) = match measure {
        Measure::Empirical(m) => {
            let cert = zonoid_depth_with(m, x, tol)?;
            (
                cert.depth,
                cert.status,
                serde_json::to_value(cert.to_json()).expect("plain data"),
            )
        }
        Measure::Gaussian(g) => {
            let d = gaussian_depth(g, x)?;
            let status = if d == 1.0 {
                DepthStatus::Mean
            } else {
                DepthStatus::Interior
            };
            (d, status, json!({ "depth": d, "status": status }))
        }
    };
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => line(to_json(&body)),
        Format::Csv => {
            let status = serde_json::to_value(status).expect("plain data");
            format!(
                "depth,status\n{},{}\n",
                num(depth),
                status.as_str().unwrap_or_default()
            )
        }
    };
    let code = if status == DepthStatus::Outside {
        EXIT_DOMAIN
    } else {
        EXIT_OK
    };
    Ok(Output {
        text,
        code,
        summary: None,
    })
}

fn cmd_contour(cli: &Cli, measure: &Measure, alpha: f64, n: usize) -> Result<Output> {
    let d = measure.dim();
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if d > 1 && n < 4 {
        return Err(Error::Input(format!(
            "contours need at least 4 directions, got {n}"
        )));
    }
    let dirs = direction_grid(d, n, cli.seed);
    let points: Vec<Vector> = dirs
        .par_iter()
        .map(|u| {
            if alpha == 1.0 {
                Ok(measure.mean())
            } else {
                trimmed_boundary_point(measure, &TrimmedRegionQuery::new(alpha, u.clone())?)
            }
        })
        .collect::<Result<_>>()?;
    if d == 2 {
        let worst = convexity_violation(&points);
        if worst > 1e-9 {
            log::warn!("contour polygon is not convex: cross product {worst:e}");
        }
    }
    let summary = to_json(&json!({ "alpha": alpha, "n_directions": dirs.len(), "seed": cli.seed }));
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut header = vec!["alpha".to_string()];
            header.extend(axis_names('u', d));
            header.extend(axis_names('b', d));
            let mut text = line(header.join(","));
            for (u, b) in dirs.iter().zip(&points) {
                text.push_str(&format!(
                    "{},{},{}\n",
                    num(alpha),
                    joined(u.as_vector()),
                    joined(b)
                ));
            }
            Ok(Output {
                text,
                code: EXIT_OK,
                summary: Some(line(summary)),
            })
        }
        Format::Json => {
            let pts: Vec<Value> = dirs
                .iter()
                .zip(&points)
                .map(|(u, b)| json!({ "u": u.as_vector().as_slice(), "b": b.as_slice() }))
                .collect();
            let body = json!({ "alpha": alpha, "n_directions": dirs.len(), "seed": cli.seed, "points": pts });
            Ok(Output::ok(line(to_json(&body))))
        }
    }
}

/// Largest clockwise turn along the closed point sequence, ignoring
/// repeated points.
pub fn convexity_violation(points: &[Vector]) -> f64 {
    let mut ring: Vec<&Vector> = Vec::new();
    for p in points {
        if ring.last().is_none_or(|q| (*q - p).norm() > 1e-12) {
            ring.push(p);
        }
    }
    while ring.len() > 1 && (ring[0] - ring[ring.len() - 1]).norm() <= 1e-12 {
        ring.pop();
    }
    let k = ring.len();
    if k < 3 {
        return 0.0;
    }
    (0..k)
        .map(|i| {
            let (a, b, c) = (ring[i], ring[(i + 1) % k], ring[(i + 2) % k]);
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            (-cross).max(0.0)
        })
        .fold(0.0, f64::max)
}

fn cmd_support(
    cli: &Cli,
    measure: &Measure,
    alpha: Option<f64>,
    lift_t: Option<f64>,
    direction: Option<&str>,
    n: Option<usize>,
) -> Result<Output> {
    let d = measure.dim();
    let raw: Vec<Vector> = match (direction, n) {
        (Some(u), None) => vec![parse_vector(u)?],
        (None, Some(k)) => direction_grid(d, k, cli.seed)
            .into_iter()
            .map(Direction::into_vector)
            .collect(),
        _ => return Err(Error::Input("give --direction or --directions".into())),
    };
    let values: Vec<(Vector, f64)> = raw
        .into_par_iter()
        .map(|v| -> Result<(Vector, f64)> {
            match (alpha, lift_t) {
                (_, Some(t)) => {
                    let w = LiftDirection::new(t, v)?;
                    let h = support_lift_zonoid(measure, &w)?;
                    let mut full = vec![w.t()];
                    full.extend(w.u().iter());
                    Ok((Vector::from_vec(full), h))
                }
                (Some(a), None) => {
                    let u = Direction::new(v)?;
                    let h = support_trimmed(measure, &TrimmedRegionQuery::new(a, u.clone())?)?;
                    Ok((u.into_vector(), h))
                }
                (None, None) => {
                    let u = Direction::new(v)?;
                    let h = support_zonoid(measure, &u)?;
                    Ok((u.into_vector(), h))
                }
            }
        })
        .collect::<Result<_>>()?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let rows: Vec<Value> = values
                .iter()
                .map(|(u, h)| json!({ "u": u.as_slice(), "h": h }))
                .collect();
            Ok(Output::ok(line(to_json(
                &json!({ "alpha": alpha, "lift_t": lift_t, "values": rows }),
            ))))
        }
        Format::Csv => {
            let mut header = if lift_t.is_some() {
                vec!["t".to_string()]
            } else {
                Vec::new()
            };
            header.extend(axis_names('u', d));
            header.push("h".into());
            let mut text = line(header.join(","));
            for (u, h) in &values {
                text.push_str(&format!("{},{}\n", joined(u), num(*h)));
            }
            Ok(Output::ok(text))
        }
    }
}

fn cmd_barycenter(cli: &Cli, measure: &Measure, direction: &str, offset: &str) -> Result<Output> {
    json_only(cli, "barycenter")?;
    let offset = if offset.trim() == "-inf" {
        f64::NEG_INFINITY
    } else {
        offset
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("offset `{offset}` is not a number")))?
    };
    let h = HalfSpace::new(Direction::new(parse_vector(direction)?)?, offset)?;
    let mass = measure.halfspace_mass(&h)?;
    let b = measure.halfspace_barycenter(&h)?;
    let body = json!({ "halfspace": halfspace_json(&h), "mass": mass, "barycenter": b.as_slice() });
    Ok(Output::ok(line(to_json(&body))))
}

fn halfspace_json(h: &HalfSpace) -> Value {
    let a = offset_serde::serialize(&h.offset, serde_json::value::Serializer).expect("plain data");
    json!({ "u": h.direction.as_vector().as_slice(), "a": a })
}

fn representation_json(r: &RepresentationResult) -> Value {
    let halfspace = if r.halfspace.is_whole_space() {
        json!("whole-space")
    } else {
        halfspace_json(&r.halfspace)
    };
    json!({
        "halfspace": halfspace,
        "alpha": r.alpha,
        "residual": r.residual,
        "unique": r.unique,
        "method": r.method,
    })
}

fn cmd_coords(
    measure: &Measure,
    (x, given): (Vector, Option<BarycentricCoords>),
    to: Option<CoordKind>,
    to_back: Option<CoordKind>,
) -> Result<Output> {
    let mut body = json!({ "point": x.as_slice() });
    if let Some(kind) = to {
        let c = coords_from_point(measure, &x, kind)?;
        body["coords"] = serde_json::to_value(&c).expect("plain data");
        if let Some(back_kind) = to_back {
            let y = point_from_coords(measure, &c)?;
            let back = coords_from_point(measure, &y, back_kind)?;
            body["back"] = serde_json::to_value(&back).expect("plain data");
            if let Some(g) = given.filter(|g| g.kind == back_kind) {
                let err = (g.scalar - back.scalar)
                    .abs()
                    .max((g.direction.as_vector() - back.direction.as_vector()).norm());
                body["roundtrip_error"] = json!(err);
            }
        }
    }
    Ok(Output::ok(line(to_json(&body))))
}

fn cmd_polygon(cli: &Cli, measure: &Measure) -> Result<Output> {
    let m = measure
        .as_empirical()
        .ok_or_else(|| Error::Input("polygon2d needs a point cloud (--measure)".into()))?;
    let poly = zonotope_polygon_2d(m)?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut text = String::from("x,y\n");
            for v in &poly.vertices {
                text.push_str(&format!("{},{}\n", num(v[0]), num(v[1])));
            }
            Ok(Output::ok(text))
        }
        Format::Json => Ok(Output::ok(line(to_json(
            &json!({ "vertices": poly.vertices, "area": poly.area() }),
        )))),
    }
}
