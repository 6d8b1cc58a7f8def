//! Command-line front end: file-based input, deterministic JSON or text output.
//!
//! Subcommands: `validate`, `multiply`, `resolve`, `expand`, `bracket`,
//! `enumerate`, `verify`. Inputs are files: `--tri` holds a triangulation
//! document, `--curve` a curve document `{"corners": [...]}` with doubled
//! corner values, `--elem` an element document (a list of
//! `{"coeff": {"v_exponents", "value"}, "curve"}` entries). Output is JSON by
//! default, with term maps in canonical corner-vector order, or aligned text
//! with `--format text`.
//!
//! Exit codes: 0 on success, 1 on domain errors (including invalid curves
//! reported by `validate`), 2 on usage errors, 3 when `verify` finds a
//! failing check. Internal parallelism follows `--threads`; results do not
//! depend on it.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::curve_algebra::{
    edge_degree, pi_projection, resolution, rmc_class, AlgebraElement, CurveAlgebra, Resolved, Sign,
};
use crate::error::{Error, Result};
use crate::goldman_bracket::bracket;
use crate::lambda_expansion::Expander;
use crate::normal_curves::{self, enumerate_reduced, format_corners, format_half, parse_half, ReducedMulticurve};
use crate::quantum_skein::qmultiply;
use crate::strand_oracle::Mode;
use crate::triangulation::Triangulation;
use crate::verification::{run_suite, Report, SuiteConfig, SUITES};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for domain errors.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit code for usage errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for failing verification suites.
pub const EXIT_VERIFY: i32 = 3;

/// Suites that sample randomly and therefore need `--seed`.
const SAMPLING_SUITES: [&str; 5] = ["nonzerodivisor", "localization", "quantum", "bracket", "confluence"];

#[derive(Parser, Debug)]
#[command(
    name = "punctured-skein",
    version,
    about = "Curve algebra and skein algebra of triangulated punctured surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Triangulation document.
    #[arg(long, value_name = "FILE")]
    tri: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for internal parallelism (0 = rayon default).
    #[arg(long, value_name = "N", default_value_t = 0)]
    threads: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check curve vectors against the reduced coordinate conditions.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Curve document (repeatable).
        #[arg(long = "curve", value_name = "FILE", required = true)]
        curves: Vec<PathBuf>,
    },
    /// Multiply elements left to right (the first factor is stacked on top).
    Multiply {
        #[command(flatten)]
        common: Common,
        /// Element document (repeatable, at least one).
        #[arg(long = "elem", value_name = "FILE", required = true)]
        elems: Vec<PathBuf>,
        /// Use the q-deformed product.
        #[arg(long)]
        quantum: bool,
    },
    /// Positive and negative resolutions of `e ∪ α` for an edge `e`.
    #[command(group(ArgGroup::new("which").args(["positive", "negative", "all"])))]
    Resolve {
        #[command(flatten)]
        common: Common,
        /// Edge index.
        #[arg(long, value_name = "ID")]
        edge: usize,
        /// Curve document.
        #[arg(long = "curve", value_name = "FILE")]
        curve: PathBuf,
        /// Only the positive resolution.
        #[arg(long)]
        positive: bool,
        /// Only the negative resolution.
        #[arg(long)]
        negative: bool,
        /// Both resolutions and the full product `e·α` (default).
        #[arg(long)]
        all: bool,
    },
    /// Laurent expansion of an element in the edge variables.
    #[command(group(ArgGroup::new("input").args(["curve", "elem"]).required(true)))]
    Expand {
        #[command(flatten)]
        common: Common,
        /// Curve document.
        #[arg(long, value_name = "FILE")]
        curve: Option<PathBuf>,
        /// Element document.
        #[arg(long, value_name = "FILE")]
        elem: Option<PathBuf>,
    },
    /// Goldman bracket `{a, b}` of two elements.
    Bracket {
        #[command(flatten)]
        common: Common,
        /// Element documents (exactly two).
        #[arg(long = "elem", value_name = "FILE", num_args = 1, required = true)]
        elems: Vec<PathBuf>,
    },
    /// List every reduced multicurve with corners in `[−½, D]`.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Per-corner bound, a half-integer such as `1/2` or `1`.
        #[arg(long, value_name = "D", default_value = "1/2")]
        max_corner: String,
    },
    /// Run verification suites and report failures.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite name, or `all`.
        #[arg(long, value_name = "NAME", default_value = "all")]
        suite: String,
        /// Per-corner bound, a half-integer such as `1/2` or `1`.
        #[arg(long, value_name = "D", default_value = "1/2")]
        max_corner: String,
        /// Seed of the random sampler (required by sampling suites).
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Restrict edge-indexed suites to one edge.
        #[arg(long, value_name = "ID")]
        edge: Option<usize>,
        /// Random trials per edge or sampled tuples.
        #[arg(long, value_name = "N", default_value_t = 200)]
        trials: usize,
    },
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// Process exit code.
    pub code: i32,
    /// Document written to standard output.
    pub stdout: String,
    /// Diagnostics written to standard error.
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let threads = common(&cli.command).threads;
    let result = if threads == 0 {
        dispatch(cli.command)
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(CliError::Domain(Error::Unsupported(format!("thread pool: {e}")))),
        }
    };
    match result {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => {
            Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") }
        }
        Err(CliError::Domain(e)) => {
            Outcome { code: EXIT_DOMAIN, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Validate { common, .. }
        | Command::Multiply { common, .. }
        | Command::Resolve { common, .. }
        | Command::Expand { common, .. }
        | Command::Bracket { common, .. }
        | Command::Enumerate { common, .. }
        | Command::Verify { common, .. } => common,
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_tri(path: &Path) -> Result<Triangulation> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Triangulation::from_json(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_curve(tri: &Triangulation, path: &Path) -> Result<ReducedMulticurve> {
    let w = normal_curves::parse_curve_doc(&read_json(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    normal_curves::validate_reduced(tri, &w)
        .map_err(|v| Error::Coordinates(format!("{}: {} in {}", path.display(), v, format_corners(&w))))
}

/// Reads an element with `nvars` coefficient slots; a classical document is
/// lifted when `quantum_slot` is given.
fn load_elem(tri: &Triangulation, nvars: usize, quantum_slot: Option<usize>, path: &Path) -> Result<AlgebraElement> {
    let doc = read_json(path)?;
    let tag = |e: Error| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::Coordinates(m) => Error::Coordinates(format!("{}: {m}", path.display())),
        other => other,
    };
    match quantum_slot {
        None => AlgebraElement::from_json(tri, nvars, &doc).map_err(tag),
        Some(q) => match AlgebraElement::from_json(tri, nvars + 1, &doc) {
            Ok(x) => Ok(x),
            Err(Error::Arity(_)) => Ok(AlgebraElement::from_json(tri, nvars, &doc).map_err(tag)?.insert_slot(q)),
            Err(e) => Err(tag(e)),
        },
    }
}

fn render(format: Format, doc: Value, text: String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(&doc).unwrap_or_default();
            s.push('\n');
            s
        }
        Format::Text => text,
    }
}

fn resolved_json(r: &Resolved) -> Value {
    json!({"coefficient": r.coefficient.to_json(), "curve": r.curve.to_json()})
}

fn dispatch(command: Command) -> std::result::Result<Outcome, CliError> {
    match command {
        Command::Validate { common, curves } => {
            let tri = load_tri(&common.tri)?;
            let mut results = Vec::new();
            let mut text = String::new();
            let mut all_valid = true;
            for path in &curves {
                let w = normal_curves::parse_curve_doc(&read_json(path)?)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                let name = path.display().to_string();
                match normal_curves::validate_reduced(&tri, &w) {
                    Ok(c) => {
                        let ends = c.end_vertices(&tri);
                        let edges = c.edge_components(&tri);
                        results.push(json!({"file": name, "valid": true, "corners": format_corners(&w),
                                            "end_vertices": ends, "edge_components": edges,
                                            "intersections": normal_curves::corner_to_edge(&tri, &w)}));
                        text.push_str(&format!("{name}: valid {}\n", format_corners(&w)));
                    }
                    Err(v) => {
                        all_valid = false;
                        results
                            .push(json!({"file": name, "valid": false, "corners": format_corners(&w), "violation": v}));
                        text.push_str(&format!("{name}: invalid, {v}\n"));
                    }
                }
            }
            let stdout = render(common.format, json!({"command": "validate", "results": results}), text);
            Ok(Outcome { code: if all_valid { EXIT_OK } else { EXIT_DOMAIN }, stdout, stderr: String::new() })
        }
        Command::Multiply { common, elems, quantum } => {
            let alg = CurveAlgebra::new(load_tri(&common.tri)?);
            let tri = alg.triangulation();
            let n = alg.nvars();
            let slot = quantum.then_some(n);
            let factors: Vec<AlgebraElement> =
                elems.iter().map(|p| load_elem(tri, n, slot, p)).collect::<Result<_>>()?;
            let mut acc = factors[0].clone();
            for f in &factors[1..] {
                acc = if quantum { qmultiply(&alg, &acc, f)? } else { alg.product(Mode::Classical, &acc, f)? };
            }
            let doc = json!({"command": "multiply", "quantum": quantum, "terms": acc.len(), "product": acc.to_json()});
            Ok(Outcome::ok(render(common.format, doc, acc.to_text())))
        }
        Command::Resolve { common, edge, curve, positive, negative, all: _ } => {
            let alg = CurveAlgebra::new(load_tri(&common.tri)?);
            let tri = alg.triangulation();
            if edge >= tri.edge_count() {
                return Err(Error::Index(format!("edge {edge} (triangulation has {} edges)", tri.edge_count())).into());
            }
            let alpha = load_curve(tri, &curve)?;
            let class = rmc_class(tri, edge, &alpha);
            let mut doc =
                json!({"command": "resolve", "edge": edge, "curve": alpha.to_json(), "class": class.to_string()});
            let mut text = format!("edge {edge}, class {class}\n");
            if tri.is_locally_planar() {
                let (px, py) = pi_projection(tri, edge, &alpha)?;
                doc["degree"] = json!(edge_degree(tri, edge, &alpha)?);
                doc["pi"] = json!([format_half(px), format_half(py)]);
            }
            let both = !positive && !negative;
            for (flag, sign, key) in [(positive, Sign::Positive, "positive"), (negative, Sign::Negative, "negative")] {
                if flag || both {
                    let r = resolution(tri, edge, &alpha, sign)?;
                    text.push_str(&format!("{key}: ({})  {}\n", r.coefficient, format_corners(r.curve.corners())));
                    doc[key] = resolved_json(&r);
                }
            }
            if both {
                let prod = alg.multiply_basis(&ReducedMulticurve::edge(tri, edge), &alpha)?;
                text.push_str("product:\n");
                text.push_str(&prod.to_text());
                doc["product"] = prod.to_json();
            }
            Ok(Outcome::ok(render(common.format, doc, text)))
        }
        Command::Expand { common, curve, elem } => {
            let alg = CurveAlgebra::new(load_tri(&common.tri)?);
            let tri = alg.triangulation();
            let x = match (curve, elem) {
                (Some(c), _) => AlgebraElement::basis(load_curve(tri, &c)?, alg.nvars()),
                (None, Some(e)) => load_elem(tri, alg.nvars(), None, &e)?,
                (None, None) => return Err(CliError::Usage("expand needs --curve or --elem".into())),
            };
            if x.terms().values().any(|c| (0..alg.nvars()).any(|v| c.min_exponent(v).is_some_and(|k| k < 0))) {
                return Err(Error::Unsupported(
                    "expand accepts only nonnegative vertex exponents; no Laurent expansion of 1/v in the edge \
                     variables is computed"
                        .into(),
                )
                .into());
            }
            let p = Expander::new(&alg).phi_expand(&x)?;
            let doc = json!({"command": "expand", "variables": "lambda_0..lambda_{E-1}", "terms": p.terms().count(), "expansion": p.to_json()});
            Ok(Outcome::ok(render(common.format, doc, format!("{p}\n"))))
        }
        Command::Bracket { common, elems } => {
            if elems.len() != 2 {
                return Err(CliError::Usage(format!("bracket needs exactly two --elem files, got {}", elems.len())));
            }
            let alg = CurveAlgebra::new(load_tri(&common.tri)?);
            let tri = alg.triangulation();
            let a = load_elem(tri, alg.nvars(), None, &elems[0])?;
            let b = load_elem(tri, alg.nvars(), None, &elems[1])?;
            let br = bracket(&alg, &a, &b)?;
            let doc = json!({"command": "bracket", "terms": br.len(), "bracket": br.to_json()});
            Ok(Outcome::ok(render(common.format, doc, br.to_text())))
        }
        Command::Enumerate { common, max_corner } => {
            let tri = load_tri(&common.tri)?;
            let bound = parse_half(&max_corner).map_err(|e| CliError::Usage(e.to_string()))?;
            let curves = enumerate_reduced(&tri, bound);
            let text: String = curves.iter().map(|c| format!("{}\n", format_corners(c.corners()))).collect();
            let doc = json!({"command": "enumerate", "max_corner": format_half(bound), "count": curves.len(),
                             "curves": curves.iter().map(ReducedMulticurve::to_json).collect::<Vec<_>>()});
            Ok(Outcome::ok(render(common.format, doc, text)))
        }
        Command::Verify { common, suite, max_corner, seed, edge, trials } => {
            let bound = parse_half(&max_corner).map_err(|e| CliError::Usage(e.to_string()))?;
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if let Some(s) = SUITES.iter().find(|s| **s == suite) {
                vec![*s]
            } else {
                return Err(CliError::Usage(format!(
                    "unknown suite '{suite}'; expected all or one of {}",
                    SUITES.join(", ")
                )));
            };
            if seed.is_none() && names.iter().any(|n| SAMPLING_SUITES.contains(n)) {
                return Err(CliError::Usage("the selected suites sample randomly; pass --seed N".into()));
            }
            let alg = CurveAlgebra::new(load_tri(&common.tri)?);
            let cfg = SuiteConfig { bound_doubled: bound, seed: seed.unwrap_or(0), trials, edge };
            let reports: Vec<Report> = names.iter().map(|n| run_suite(&alg, n, &cfg)).collect::<Result<_>>()?;
            let passed = reports.iter().all(Report::passed);
            let text: String = reports
                .iter()
                .map(|r| {
                    format!(
                        "{:<16} {:>4}  instances {:>8}  failures {}\n",
                        r.suite,
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.instances,
                        r.failure_count
                    )
                })
                .collect();
            let doc = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                json!({"command": "verify", "passed": passed, "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>()})
            };
            Ok(Outcome {
                code: if passed { EXIT_OK } else { EXIT_VERIFY },
                stdout: render(common.format, doc, text),
                stderr: String::new(),
            })
        }
    }
}
