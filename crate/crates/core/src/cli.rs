//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on a numerical failure or a failed check
//! (with a diagnostic JSON document on stdout), 2 on usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{
    cones_intersection_trivial, lur_modulus, minimal_set_bounded, recession_cone, set_is_bounded, slice_diameter,
    strongly_exposes_check, ConeDescription,
};
use crate::lab::{
    example_cone_hyperplane, example_hulls, example_nonconvex, example_two_cones, fact2_suite, lemma_gamma17_suite,
    lemma_hull_inclusion_suite, lemma_recession_suite, prop_bounded_suite, thm_lur_family, thm_stability_suite,
    two_cone_heights, CheckOutcome, FamilyInstance, LurBody, LurCase, ShiftSign,
};
use crate::metrics::{
    brackets_to_csv, excess, format_real, hausdorff, hausdorff_truncated, BracketRow, MetricConfig, AW_GRID,
};
use crate::sets::{parse_set_json, real_to_json, vector_to_json, SetDescription};
use crate::solver::{distance_lower_bound, min_distance_pair, piecewise_min_distance, SolveConfig};
use crate::vector::DenseVector;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "feasilab", version, about = "Minimal-distance pairs, set-convergence metrics and stability checks")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Minimal-distance pair of two sets given as JSON files.
    Solve(SolveArgs),
    /// Excess, Hausdorff or truncated Hausdorff brackets.
    Metrics(MetricsArgs),
    /// Recession, slice and rotundity diagnostics.
    Analyze(AnalyzeArgs),
    /// Tables for the built-in example families.
    Example(ExampleArgs),
    /// Seeded property suites.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 1e-11)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Comma-separated start point.
    #[arg(long)]
    start: Option<String>,
    /// Include the gap trace.
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricKind {
    Hausdorff,
    Excess,
    Aw,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    kind: MetricKind,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Truncation radii for `aw`.
    #[arg(long = "N-grid", alias = "n-grid", value_delimiter = ',')]
    n_grid: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AnalyzeKind {
    Recession,
    BoundedMin,
    Slice,
    Lur,
    Expose,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    kind: AnalyzeKind,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: Option<PathBuf>,
    /// Functional for `slice` and `expose`, comma-separated.
    #[arg(long)]
    f: Option<String>,
    /// Base point for `lur` and `expose`, comma-separated.
    #[arg(long)]
    point: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.02")]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1")]
    eps: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExampleKind {
    Nonconvex,
    Hulls,
    ConeHyperplane,
    TwoCones,
}

#[derive(Debug, Args)]
struct ExampleArgs {
    kind: ExampleKind,
    /// Inclusive index range `lo..hi`.
    #[arg(long, default_value = "2..8")]
    n_range: String,
    /// Ambient truncation: `K` for cone-hyperplane, `N` for two-cones.
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long, default_value = "opposite")]
    shift_sign: ShiftSign,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckKind {
    Fact2,
    LemmaRecession,
    Gamma17,
    HullLemmas,
    ThmStability,
    ThmLur,
    PropBounded,
}

#[derive(Debug, Args)]
struct CheckArgs {
    kind: CheckKind,
    /// Trials, families, instances or samples, depending on the suite.
    #[arg(long)]
    trials: Option<usize>,
    /// Defaults to `FEASILAB_SEED`, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Perturbation steps for the family suites.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,10,50")]
    dims: Vec<usize>,
    /// Blocks for `hull-lemmas`.
    #[arg(long, default_value_t = 16)]
    blocks: usize,
    /// Ambient dimension for `thm-lur`.
    #[arg(long, default_value_t = 20)]
    dim: usize,
    /// Gap for `thm-lur`; tangent when absent.
    #[arg(long)]
    gap: Option<f64>,
    /// Use the cube instead of the ball in `thm-lur`.
    #[arg(long)]
    cube: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// What a command produced.
struct Artifact {
    text: String,
    ok: bool,
}

impl Artifact {
    fn json(v: &Value, ok: bool) -> Self {
        Artifact { text: format!("{}\n", serde_json::to_string_pretty(v).expect("json serializes")), ok }
    }
}

fn seed_or_env(seed: Option<u64>) -> Result<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("FEASILAB_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Error::validation("FEASILAB_SEED", format!("not an unsigned integer: {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn read_set(path: &PathBuf) -> Result<SetDescription> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_set_json(&text)
}

fn parse_vector(text: &str, field: &str) -> Result<DenseVector> {
    let xs: std::result::Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match xs {
        Ok(xs) if !xs.is_empty() && xs.iter().all(|x| x.is_finite()) => Ok(DenseVector::from_vec(xs)),
        _ => Err(Error::validation(field, format!("expected comma-separated finite numbers, got {text:?}"))),
    }
}

fn parse_range(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::validation("n-range", format!("expected `lo..hi` with lo ≤ hi, got {text:?}"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cell(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn solve(args: &SolveArgs) -> Result<Artifact> {
    let (a, b) = (read_set(&args.a)?, read_set(&args.b)?);
    if args.tol <= 0.0 || !args.tol.is_finite() {
        return Err(Error::validation("tol", "must be positive"));
    }
    let start = args.start.as_deref().map(|s| parse_vector(s, "start")).transpose()?;
    let cfg = SolveConfig { tol: args.tol, max_iter: args.max_iter, start, ..SolveConfig::default() };
    let r = min_distance_pair(&a, &b, &cfg)?;
    Ok(Artifact::json(&r.to_json(args.trace), true))
}

fn metrics(args: &MetricsArgs) -> Result<Artifact> {
    let (a, b) = (read_set(&args.a)?, read_set(&args.b)?);
    let cfg = MetricConfig::default();
    let rows = match args.kind {
        MetricKind::Hausdorff => vec![BracketRow { n: None, radius: None, bracket: hausdorff(&a, &b, &cfg)? }],
        MetricKind::Excess => vec![BracketRow { n: None, radius: None, bracket: excess(&a, &b, &cfg)? }],
        MetricKind::Aw => {
            let grid = args.n_grid.clone().unwrap_or_else(|| AW_GRID.to_vec());
            if grid.is_empty() || grid.iter().any(|r| !(*r > 0.0)) {
                return Err(Error::validation("N-grid", "radii must be positive"));
            }
            grid.iter()
                .map(|&r| Ok(BracketRow { n: None, radius: Some(r), bracket: hausdorff_truncated(&a, &b, r, &cfg)? }))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(match args.format {
        Format::Csv => Artifact { text: brackets_to_csv(&rows), ok: true },
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = r.bracket.to_json();
                    v["N"] = r.radius.map(real_to_json).unwrap_or(Value::Null);
                    v
                })
                .collect();
            Artifact::json(&Value::Array(items), true)
        }
    })
}

fn cone_json(c: &ConeDescription) -> Value {
    match c {
        ConeDescription::Generators { dim, generators } => {
            json!({"dim": dim, "generators": generators.iter().map(vector_to_json).collect::<Vec<_>>()})
        }
        ConeDescription::HForm { dim, rows } => json!({"dim": dim, "rows": rows.iter().map(vector_to_json).collect::<Vec<_>>()}),
    }
}

fn need<'a>(x: &'a Option<String>, field: &str) -> Result<&'a str> {
    x.as_deref().ok_or_else(|| Error::validation(field, "required for this analysis"))
}

fn analyze(args: &AnalyzeArgs) -> Result<Artifact> {
    let a = read_set(&args.a)?;
    let b = args.b.as_ref().map(read_set).transpose()?;
    let cfg = MetricConfig::default();
    match args.kind {
        AnalyzeKind::Recession => {
            let ca = recession_cone(&a)?;
            let mut v = json!({"bounded": set_is_bounded(&a)?, "cone": cone_json(&ca)});
            if let Some(b) = &b {
                let cb = recession_cone(b)?;
                v["cone_b"] = cone_json(&cb);
                v["intersection_trivial"] = json!(cones_intersection_trivial(&ca, &cb, 1e-9)?);
            }
            Ok(Artifact::json(&v, true))
        }
        AnalyzeKind::BoundedMin => {
            let b = b.ok_or_else(|| Error::validation("b", "required for bounded-min"))?;
            Ok(Artifact::json(&json!({"minimal_set_bounded": minimal_set_bounded(&a, &b)?}), true))
        }
        AnalyzeKind::Slice => {
            let f = parse_vector(need(&args.f, "f")?, "f")?;
            let rows: Vec<(f64, _)> =
                args.alpha.iter().map(|&al| Ok((al, slice_diameter(&f, al, &a, &cfg)?))).collect::<Result<_>>()?;
            Ok(match args.format {
                Format::Csv => {
                    let mut out = String::from("alpha,lower,upper\n");
                    for (al, d) in &rows {
                        out.push_str(&format!("{},{},{}\n", format_real(*al), format_real(d.lower), format_real(d.upper)));
                    }
                    Artifact { text: out, ok: true }
                }
                Format::Json => {
                    let items: Vec<Value> = rows.iter().map(|(al, d)| json!({"alpha": real_to_json(*al), "diameter": d.to_json()})).collect();
                    Artifact::json(&Value::Array(items), true)
                }
            })
        }
        AnalyzeKind::Lur => {
            let p = parse_vector(need(&args.point, "point")?, "point")?;
            let prof = lur_modulus(&a, &p, &args.eps, &cfg)?;
            Ok(match args.format {
                Format::Csv => Artifact { text: prof.to_csv(), ok: true },
                Format::Json => Artifact::json(
                    &json!({
                        "eps": prof.eps_grid.iter().map(|x| real_to_json(*x)).collect::<Vec<_>>(),
                        "delta": prof.delta_estimates.iter().map(|x| real_to_json(*x)).collect::<Vec<_>>(),
                        "samples": prof.sample_counts,
                    }),
                    true,
                ),
            })
        }
        AnalyzeKind::Expose => {
            let f = parse_vector(need(&args.f, "f")?, "f")?;
            let p = parse_vector(need(&args.point, "point")?, "point")?;
            let t = strongly_exposes_check(&f, &p, &a, &args.alpha, &cfg)?;
            Ok(match args.format {
                Format::Csv => Artifact { text: t.to_csv(), ok: true },
                Format::Json => Artifact::json(
                    &json!({
                        "exposes": t.exposes,
                        "flag": t.flag,
                        "rows": t.rows.iter().map(|(al, d)| json!({"alpha": real_to_json(*al), "diameter": d.to_json()})).collect::<Vec<_>>(),
                    }),
                    true,
                ),
            })
        }
    }
}

/// One table row: header names paired with cells.
type Row = Vec<(&'static str, String)>;

fn example_row(kind: ExampleKind, f: &FamilyInstance, args: &ExampleArgs, big: usize) -> Result<Row> {
    let cfg = SolveConfig::default();
    let expected = cell(f.expected.distance);
    Ok(match kind {
        ExampleKind::Nonconvex | ExampleKind::Hulls => {
            let (r, pieces) = match kind {
                ExampleKind::Nonconvex => {
                    let p = piecewise_min_distance(&f.a_n.pieces(), &f.b_n.pieces(), &cfg)?;
                    (p.report, Some(p.pieces))
                }
                _ => (min_distance_pair(f.a_n.convex().expect("convex"), f.b_n.convex().expect("convex"), &cfg)?, None),
            };
            let mut row = vec![
                ("n", f.n.to_string()),
                ("distance", format_real(r.distance)),
                ("expected_distance", expected),
                ("a_0", format_real(r.a[0])),
                ("a_1", format_real(r.a[1])),
                ("b_0", format_real(r.b[0])),
                ("b_1", format_real(r.b[1])),
                ("norm_a", format_real(r.a.norm())),
            ];
            if let Some((i, j)) = pieces {
                row.push(("piece_a", i.to_string()));
                row.push(("piece_b", j.to_string()));
            }
            row
        }
        ExampleKind::ConeHyperplane => {
            let (a_n, b) = (f.a_n.convex().expect("convex"), f.b_n.convex().expect("convex"));
            let r = min_distance_pair(a_n, b, &cfg)?;
            let lb = distance_lower_bound(b, a_n, &DenseVector::basis(big, 0))?;
            let h = hausdorff(a_n, f.limit_a.convex().expect("convex"), &MetricConfig::default())?;
            vec![
                ("n", f.n.to_string()),
                ("distance", format_real(r.distance)),
                ("lower_bound", format_real(lb.value)),
                ("expected_distance", expected),
                ("norm_a_n", cell(f.expected.bounds.get("norm_a_n").copied())),
                ("hausdorff_upper", format_real(h.upper)),
                ("hausdorff_bound", cell(f.expected.bounds.get("hausdorff_a_n_a").copied())),
            ]
        }
        ExampleKind::TwoCones => {
            let h = hausdorff(f.a_n.convex().expect("convex"), f.limit_a.convex().expect("convex"), &MetricConfig::default())?;
            let heights = two_cone_heights(big, args.shift_sign)?;
            let height = heights.iter().find(|(n, _)| *n == f.n).map(|(_, h)| *h);
            vec![
                ("n", f.n.to_string()),
                ("N", big.to_string()),
                ("shift_sign", args.shift_sign.as_str().to_string()),
                ("block_height", cell(height)),
                ("expected_height", cell(f.expected.bounds.get("block_height").copied())),
                ("hausdorff_upper", format_real(h.upper)),
                ("hausdorff_bound", cell(f.expected.bounds.get("hausdorff_a_n_a").copied())),
            ]
        }
    })
}

fn example(args: &ExampleArgs) -> Result<Artifact> {
    let (lo, hi) = parse_range(&args.n_range)?;
    let (big, build): (usize, Box<dyn Fn(usize) -> Result<FamilyInstance>>) = match args.kind {
        ExampleKind::Nonconvex => (0, Box::new(example_nonconvex)),
        ExampleKind::Hulls => (0, Box::new(example_hulls)),
        ExampleKind::ConeHyperplane => {
            let k = args.truncation.unwrap_or(64);
            (k, Box::new(move |n| example_cone_hyperplane(n, k)))
        }
        ExampleKind::TwoCones => {
            let big = args.truncation.unwrap_or(hi.max(3));
            let sign = args.shift_sign;
            (big, Box::new(move |n| example_two_cones(n, big, sign)))
        }
    };
    let mut rows = Vec::new();
    let mut instances = Vec::new();
    for n in lo..=hi {
        let f = build(n)?;
        rows.push(example_row(args.kind, &f, args, big)?);
        instances.push(f);
    }
    Ok(match args.format {
        Format::Csv => {
            let mut out = rows[0].iter().map(|(k, _)| *k).collect::<Vec<_>>().join(",");
            out.push('\n');
            for r in &rows {
                out.push_str(&r.iter().map(|(_, v)| v.as_str()).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            Artifact { text: out, ok: true }
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .zip(&instances)
                .map(|(r, f)| {
                    let table: serde_json::Map<String, Value> =
                        r.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
                    json!({"row": table, "instance": f.to_json()})
                })
                .collect();
            Artifact::json(&Value::Array(items), true)
        }
    })
}

fn outcome_artifact(out: &CheckOutcome, format: Format) -> Artifact {
    match format {
        Format::Csv => Artifact { text: out.to_csv(), ok: out.passed },
        Format::Json => Artifact::json(&out.to_json(), out.passed),
    }
}

fn check(args: &CheckArgs) -> Result<Artifact> {
    let seed = seed_or_env(args.seed)?;
    let steps = args.steps;
    if args.trials == Some(0) {
        return Err(Error::validation("trials", "must be at least 1"));
    }
    let out = match args.kind {
        CheckKind::Fact2 => fact2_suite(args.trials.unwrap_or(200), steps.unwrap_or(30), seed, 1e-6)?,
        CheckKind::LemmaRecession => lemma_recession_suite(args.trials.unwrap_or(100), seed)?,
        CheckKind::Gamma17 => lemma_gamma17_suite(args.trials.unwrap_or(100_000), &args.dims, seed)?,
        CheckKind::ThmStability => thm_stability_suite(args.trials.unwrap_or(100), seed, steps.unwrap_or(12))?,
        CheckKind::PropBounded => prop_bounded_suite(args.trials.unwrap_or(20), seed, steps.unwrap_or(12))?,
        CheckKind::ThmLur => {
            let case = args.gap.map_or(LurCase::Tangent, LurCase::Gap);
            let body = if args.cube { LurBody::Cube } else { LurBody::Ball };
            thm_lur_family(args.dim, steps.unwrap_or(12), case, body)?.1
        }
        CheckKind::HullLemmas => {
            let grid: Vec<usize> = (1..=args.blocks).collect();
            let outs = lemma_hull_inclusion_suite(args.blocks, &grid, args.trials.unwrap_or(10_000), seed)?;
            let ok = outs.iter().all(|o| o.passed);
            return Ok(match args.format {
                Format::Csv => {
                    let mut text = String::from("check,index,observed,bound,pass\n");
                    for o in &outs {
                        for line in o.to_csv().lines().skip(1) {
                            text.push_str(&format!("{},{line}\n", o.name));
                        }
                    }
                    Artifact { text, ok }
                }
                Format::Json => Artifact::json(&json!({"passed": ok, "checks": outs.iter().map(|o| o.to_json()).collect::<Vec<_>>()}), ok),
            });
        }
    };
    Ok(outcome_artifact(&out, args.format))
}

fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Input(_) => "input",
        Error::Dimension { .. } => "dimension",
        Error::Validation { .. } => "validation",
        Error::Numerical { .. } => "numerical",
        Error::Unsupported(_) => "unsupported",
        Error::Precondition(_) => "precondition",
        Error::Parse { .. } => "parse",
    };
    let mut v = json!({"error": {"kind": kind, "message": e.to_string()}});
    if let Error::Numerical { routine, residual, best, .. } = e {
        v["error"]["routine"] = json!(routine);
        v["error"]["residual"] = real_to_json(*residual);
        v["error"]["best"] = best.as_ref().map(vector_to_json).unwrap_or(Value::Null);
    }
    if let Error::Parse { pointer, .. } = e {
        v["error"]["pointer"] = json!(pointer);
    }
    v
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::Input(_) | Error::Dimension { .. } | Error::Validation { .. } | Error::Parse { .. })
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.cmd {
        Cmd::Solve(a) => solve(a),
        Cmd::Metrics(a) => metrics(a),
        Cmd::Analyze(a) => analyze(a),
        Cmd::Example(a) => example(a),
        Cmd::Check(a) => check(a),
    };
    match result {
        Ok(art) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &art.text).map_err(|e| e.to_string()),
                None => stdout.write_all(art.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "cannot write output: {e}");
                return 1;
            }
            if art.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&error_json(&e)).expect("json serializes"));
            let _ = writeln!(stderr, "feasilab: {e}");
            if is_usage(&e) {
                2
            } else {
                1
            }
        }
    }
}
