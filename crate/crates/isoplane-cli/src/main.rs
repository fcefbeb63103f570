//! Command-line surface for the isoplane library: distance evaluation,
//! isometry classification and decomposition, seeded verification of the
//! octic group, Poincaré-disk and sphere mirror classification, and conic
//! emission as CSV or SVG.
//!
//! Exit codes: 0 success (and verdict true), 1 failed verification
//! verdict, 2 usage error, 3 domain error. Every error path prints a
//! single-line JSON object on standard error.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isoplane::affine::AffineMap;
use isoplane::conics::{self, BoundingBox, PolyShape};
use isoplane::euclid::{classify, decompose, Correspondence};
use isoplane::lp::{check_midpoint_affinity, octic_group, verify_isometry, VerificationReport};
use isoplane::noneuclid::{classify_hyperbolic, classify_sphere, Geodesic, GreatCircle};
use isoplane::{Error, Metric, Point};

const EXIT_VERDICT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "isoplane",
    version,
    about = "Isometries of metric planes: classify, decompose, verify, and draw"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two points under an lp metric
    Dist {
        /// Metric exponent (a number >= 1, or "inf")
        #[arg(long)]
        p: String,
        /// First point as "x,y"
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Second point as "x,y"
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Classify a planar affine isometry (rotation, translation, ...)
    Classify {
        /// Affine map as inline JSON or a path to a JSON file
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Decompose a point correspondence into at most n+1 mirror reflections
    Decompose {
        /// Source points "x,y;x,y;..." (n+1 points of dimension n)
        #[arg(long, allow_hyphen_values = true)]
        src: String,
        /// Target points, same shape as --src
        #[arg(long, allow_hyphen_values = true)]
        dst: String,
        /// Dimension (default 2)
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Verify distance preservation by seeded random sampling
    Verify {
        #[arg(long)]
        map: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// List the eight origin-fixing isometries with per-element verification
    Group {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Check the affinity identity f((1-l)x + ly) = (1-l)f(x) + lf(y)
    Midpoint {
        #[arg(long)]
        map: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Emit a conic locus as CSV or SVG
    Conic {
        #[command(subcommand)]
        shape: ConicCommand,
    },
    /// Classify a composition of great-circle reflections on the sphere
    Sphere {
        /// JSON array of {"normal": [x, y, z]} mirrors, inline or a file
        #[arg(long)]
        mirrors: String,
    },
    /// Classify a composition of geodesic reflections in the Poincaré disk
    Hyper {
        /// JSON array of geodesics ({"kind":"diameter",...} or
        /// {"kind":"arc",...}), inline or a file
        #[arg(long)]
        mirrors: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

#[derive(Subcommand)]
enum ConicCommand {
    /// Taxicab circle (diamond)
    Circle {
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: f64,
        #[command(flatten)]
        out: ConicOutput,
    },
    /// Taxicab ellipse {x : d(x,f1) + d(x,f2) = sum}
    Ellipse {
        #[arg(long, allow_hyphen_values = true)]
        f1: String,
        #[arg(long, allow_hyphen_values = true)]
        f2: String,
        #[arg(long)]
        sum: f64,
        #[command(flatten)]
        out: ConicOutput,
    },
    /// Taxicab hyperbola {x : |d(x,f1) - d(x,f2)| = gap}
    Hyperbola {
        #[arg(long, allow_hyphen_values = true)]
        f1: String,
        #[arg(long, allow_hyphen_values = true)]
        f2: String,
        #[arg(long)]
        gap: f64,
        /// Clip window "minx,miny,maxx,maxy"
        #[arg(long, default_value = "-10,-10,10,10", allow_hyphen_values = true)]
        bbox: String,
        #[command(flatten)]
        out: ConicOutput,
    },
    /// Sampled unit circle of an lp metric
    Lpcircle {
        #[arg(long)]
        p: String,
        /// Number of sample points (>= 4)
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[command(flatten)]
        out: ConicOutput,
    },
}

#[derive(Args)]
struct ConicOutput {
    #[arg(long, value_enum, default_value_t = ConicFormat::Csv)]
    format: ConicFormat,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConicFormat {
    Csv,
    Svg,
}

/// Bad command-line input that clap's own validation cannot catch.
#[derive(Debug)]
struct UsageError(String);

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                err.exit();
            }
            _ => {
                emit_error("usage", &err.to_string());
                return ExitCode::from(EXIT_USAGE);
            }
        },
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(message)) => {
            emit_error("usage", &message);
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Domain(err)) => {
            emit_error(error_code(&err), &err.to_string());
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

fn emit_error(code: &str, message: &str) {
    let line = json!({ "error": code, "message": message });
    eprintln!("{line}");
}

/// Short stable identifier for each domain error.
fn error_code(err: &Error) -> &'static str {
    match err {
        Error::InvalidExponent { .. } => "invalid_exponent",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NonFiniteCoordinate => "non_finite_coordinate",
        Error::DimensionTooSmall(_) => "dimension_too_small",
        Error::SingularMatrix { .. } => "singular_matrix",
        Error::ZeroNormal => "zero_normal",
        Error::CoincidentPoints => "coincident_points",
        Error::CollinearAnchors => "collinear_anchors",
        Error::InconsistentDistances { .. } => "inconsistent_distances",
        Error::DegenerateSimplex => "degenerate_simplex",
        Error::NonCongruent { .. } => "non_congruent",
        Error::NotAnIsometry { .. } => "not_an_isometry",
        Error::UnsupportedDimension { .. } => "unsupported_dimension",
        Error::NotOnUnitCircle { .. } => "not_on_unit_circle",
        Error::NotCounterclockwise => "not_counterclockwise",
        Error::NonpositiveRadius(_) => "nonpositive_radius",
        Error::SumTooSmall { .. } => "sum_too_small",
        Error::InvalidGap { .. } => "invalid_gap",
        Error::DegenerateLocus { .. } => "degenerate_locus",
        Error::TooFewPoints { .. } => "too_few_points",
        Error::IdenticalMirrors => "identical_mirrors",
        Error::PointOutsideDisk(_) => "point_outside_disk",
        Error::NotOrthogonalToBoundary { .. } => "not_orthogonal_to_boundary",
        _ => "error",
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Dist { p, a, b, format } => {
            let metric = parse_metric(&p)?;
            let a = parse_point(&a, 2)?;
            let b = parse_point(&b, 2)?;
            let distance = metric.distance(&a, &b)?;
            match format {
                TextFormat::Text => println!("{distance}"),
                TextFormat::Json => print_json(&json!({
                    "p": serde_json::to_value(metric).expect("metric serializes"),
                    "distance": distance,
                })),
            }
            Ok(0)
        }
        Command::Classify { map, tolerance } => {
            let map: AffineMap = load_json(&map)?;
            let class = classify(&map, tolerance)?;
            print_json(&serde_json::to_value(&class).expect("class serializes"));
            Ok(0)
        }
        Command::Decompose { src, dst, dim } => {
            let sources = parse_points(&src, dim)?;
            let targets = parse_points(&dst, dim)?;
            let correspondence = Correspondence::new(sources, targets)?;
            let mirrors = decompose(&correspondence);
            print_json(&serde_json::to_value(&mirrors).expect("mirrors serialize"));
            Ok(0)
        }
        Command::Verify {
            map,
            p,
            samples,
            seed,
            tolerance,
        } => {
            let metric = parse_metric(&p)?;
            let map: AffineMap = load_json(&map)?;
            let report = verify_isometry(&map, &metric, samples, seed, tolerance);
            let verdict = report.verdict;
            print_json(&report_envelope(&metric, samples, seed, tolerance, &report));
            Ok(if verdict { 0 } else { EXIT_VERDICT_FALSE })
        }
        Command::Group {
            p,
            samples,
            seed,
            tolerance,
        } => {
            let metric = parse_metric(&p)?;
            let mut elements = Vec::new();
            let mut all_verified = true;
            for element in octic_group() {
                let report = verify_isometry(&element.map, &metric, samples, seed, tolerance);
                all_verified &= report.verdict;
                elements.push(json!({
                    "name": serde_json::to_value(element.name).expect("name serializes"),
                    "map": serde_json::to_value(&element.map).expect("map serializes"),
                    "report": serde_json::to_value(&report).expect("report serializes"),
                }));
            }
            print_json(&json!({
                "p": serde_json::to_value(metric).expect("metric serializes"),
                "samples": samples,
                "seed": seed,
                "tolerance": tolerance,
                "all_verified": all_verified,
                "elements": elements,
            }));
            Ok(if all_verified { 0 } else { EXIT_VERDICT_FALSE })
        }
        Command::Midpoint {
            map,
            p,
            samples,
            seed,
            tolerance,
        } => {
            let metric = parse_metric(&p)?;
            let map: AffineMap = load_json(&map)?;
            if map.dim() != 2 {
                return Err(Error::UnsupportedDimension {
                    expected: 2,
                    found: map.dim(),
                }
                .into());
            }
            let report =
                check_midpoint_affinity(|q| map.apply(q), &metric, samples, seed, tolerance);
            let mut envelope = report_envelope(&metric, samples, seed, tolerance, &report);
            envelope["strictly_convex"] = json!(metric.is_strictly_convex());
            let verdict = report.verdict;
            print_json(&envelope);
            Ok(if verdict { 0 } else { EXIT_VERDICT_FALSE })
        }
        Command::Conic { shape } => run_conic(shape),
        Command::Sphere { mirrors } => {
            let mirrors: Vec<GreatCircle> = load_json(&mirrors)?;
            let class = classify_sphere(&mirrors)?;
            print_json(&serde_json::to_value(&class).expect("class serializes"));
            Ok(0)
        }
        Command::Hyper { mirrors, tolerance } => {
            let mirrors: Vec<Geodesic> = load_json(&mirrors)?;
            let class = classify_hyperbolic(&mirrors, tolerance)?;
            print_json(&serde_json::to_value(&class).expect("class serializes"));
            Ok(0)
        }
    }
}

fn run_conic(shape: ConicCommand) -> Result<u8, Failure> {
    let (poly, out) = match shape {
        ConicCommand::Circle {
            center,
            radius,
            out,
        } => {
            let center = parse_point(&center, 2)?;
            (conics::taxicab_circle(&center, radius)?, out)
        }
        ConicCommand::Ellipse { f1, f2, sum, out } => {
            let f1 = parse_point(&f1, 2)?;
            let f2 = parse_point(&f2, 2)?;
            (conics::taxicab_ellipse(&f1, &f2, sum)?, out)
        }
        ConicCommand::Hyperbola {
            f1,
            f2,
            gap,
            bbox,
            out,
        } => {
            let f1 = parse_point(&f1, 2)?;
            let f2 = parse_point(&f2, 2)?;
            let bbox = parse_bbox(&bbox)?;
            (conics::taxicab_hyperbola(&f1, &f2, gap, &bbox)?, out)
        }
        ConicCommand::Lpcircle { p, n, out } => {
            let metric = parse_metric(&p)?;
            (conics::lp_circle_points(&metric, n)?, out)
        }
    };
    let rendered = render_conic(&poly, out.format);
    match out.output {
        Some(path) => fs::write(&path, rendered)
            .map_err(|e| UsageError(format!("cannot write {path}: {e}")))?,
        None => {
            // Raw write keeps the exact bytes (no extra newline).
            std::io::stdout()
                .write_all(rendered.as_bytes())
                .expect("stdout is writable");
        }
    }
    Ok(0)
}

fn render_conic(poly: &PolyShape, format: ConicFormat) -> String {
    match format {
        ConicFormat::Csv => conics::to_csv(poly),
        ConicFormat::Svg => conics::to_svg(poly),
    }
}

fn report_envelope(
    metric: &Metric,
    samples: usize,
    seed: u64,
    tolerance: f64,
    report: &VerificationReport,
) -> Value {
    json!({
        "p": serde_json::to_value(metric).expect("metric serializes"),
        "samples": samples,
        "seed": seed,
        "tolerance": tolerance,
        "report": serde_json::to_value(report).expect("report serializes"),
    })
}

fn print_json(value: &Value) {
    println!("{value}");
}

/// "inf" (any case) selects the max metric; anything else must parse as a
/// number, which the library then validates.
fn parse_metric(s: &str) -> Result<Metric, Failure> {
    let trimmed = s.trim();
    if trimmed.eq_ignore_ascii_case("inf") || trimmed.eq_ignore_ascii_case("infinity") {
        return Ok(Metric::linf());
    }
    let p: f64 = trimmed
        .parse()
        .map_err(|_| UsageError(format!("cannot parse metric exponent {s:?}")))?;
    Ok(Metric::validate_p(p)?)
}

/// Comma-separated decimals, e.g. "1.5,-2".
fn parse_point(s: &str, dim: usize) -> Result<Point, Failure> {
    let coords: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| UsageError(format!("cannot parse point {s:?}")))?;
    if coords.len() != dim {
        return Err(UsageError(format!(
            "point {s:?} has {} coordinates, expected {dim}",
            coords.len()
        ))
        .into());
    }
    Ok(Point::new(coords)?)
}

/// Semicolon-separated points: "x,y;x,y;x,y".
fn parse_points(s: &str, dim: usize) -> Result<Vec<Point>, Failure> {
    s.split(';').map(|p| parse_point(p, dim)).collect()
}

fn parse_bbox(s: &str) -> Result<BoundingBox, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| UsageError(format!("cannot parse bounding box {s:?}")))?;
    if parts.len() != 4 {
        return Err(UsageError(format!(
            "bounding box {s:?} needs 4 values: minx,miny,maxx,maxy"
        ))
        .into());
    }
    BoundingBox::new(parts[0], parts[1], parts[2], parts[3])
        .map_err(|_| UsageError(format!("bounding box {s:?} is empty or not finite")).into())
}

/// Inline JSON (starts with '{' or '[') or a path to a JSON file.
fn load_json<T: serde::de::DeserializeOwned>(source: &str) -> Result<T, Failure> {
    let trimmed = source.trim();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        trimmed.to_owned()
    } else {
        fs::read_to_string(trimmed)
            .map_err(|e| UsageError(format!("cannot read {trimmed}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| UsageError(format!("invalid JSON input: {e}")).into())
}
