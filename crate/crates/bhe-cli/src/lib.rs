//! Command-line front end for the toric structures workspace:
//! construct, verify, sweep, enumerate, and export, with deterministic
//! machine-readable reports.
//!
//! Exit codes: 0 on pass/success, 1 on verification failure, 2 on
//! malformed input or usage errors. Reports go to `--out` (written
//! atomically) or standard output, as JSON (default) or CSV. Repeated
//! runs with identical inputs produce byte-identical artifacts.

mod output;

pub use output::Format;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use exactalg::{format_rational, parse_rational, Rational};
use num_traits::{Signed, ToPrimitive, Zero};
use orthotoric::{FacetLabels, LabelledQuadrilateral, OrthotoricStructure};
use serde_json::json;

use output::{emit, render, CommandOutput, Table};

/// Errors that decide the process exit code: malformed input exits 2,
/// verification failure exits 1.
#[derive(Debug)]
pub enum CmdError {
    Malformed(String),
    Verification(String),
}

#[derive(Parser)]
#[command(
    name = "bhe",
    version,
    about = "Construct, verify, enumerate, and export explicit toric structures",
    disable_help_subcommand = true
)]
struct Cli {
    /// Optional key=value config file merged under the flags (flags win).
    /// Keys: input, grid, quad-order, tol, out, format.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every command (the run configuration). Commands
/// that do not use a field ignore it.
#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// Input file (JSON), where the command reads one.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Sampling grid, written "NxM"; both sides at least 8 [default: 128x128].
    #[arg(long, value_name = "NxM")]
    grid: Option<String>,
    /// Gauss-Legendre quadrature order, at least 8 [default: 96].
    #[arg(long = "quad-order", value_name = "N")]
    quad_order: Option<usize>,
    /// Verification tolerance [default: 1e-10].
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
    /// Output path (atomic write); standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Report format [default: json, csv for sample; a .csv/.json
    /// extension on --out also sets it].
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Three-integer-parameter family on the fixed reference rectangle.
    Cgms,
    /// Integer-vertex labelled quadrilaterals with coprime label pairs.
    Quadrilateral,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a structure file: residual on a grid, curvature positivity.
    Verify {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Construct a three-parameter family member and verify it.
    Cgms {
        /// First family parameter.
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        /// Second family parameter.
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        /// Third family parameter.
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build the structure on a labelled quadrilateral by the
    /// Legendre-dual profile pair and verify it.
    Legendre {
        /// Vertices "y1,y2,x1,x2" as comma-separated rationals.
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        vertices: String,
        /// First facet label (rational "p/q").
        #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
        t1: String,
        /// Second facet label (rational "p/q").
        #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
        t2: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Enumerate a solution family; every row is re-verified.
    Enumerate {
        /// Which family to enumerate.
        #[arg(long, value_enum)]
        family: Family,
        /// cgms: largest allowed parameter value.
        #[arg(long = "max-param", default_value_t = 10)]
        max_param: i64,
        /// quadrilateral: vertex coordinates range over [-bound, bound].
        #[arg(long = "vertex-bound", default_value_t = 4)]
        vertex_bound: i64,
        /// quadrilateral: labels range over 1..=bound (coprime pairs).
        #[arg(long = "label-bound", default_value_t = 4)]
        label_bound: i64,
        /// quadrilateral: stop after this many solutions.
        #[arg(long = "max-results", default_value_t = 100)]
        max_results: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check a fibered profile file: moment integrals against their
    /// closed forms, residual size, and the first-moment balance.
    CalabiCheck {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Moment obstructions for boundary data (k, c, v, w, s).
    Futaki {
        /// Base curvature integer (rational "p/q").
        #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
        k: String,
        /// Fiber degree constant, c > |k| (rational "p/q").
        #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
        c: String,
        /// First orbifold weight (positive integer).
        #[arg(long)]
        v: i64,
        /// Second orbifold weight (positive integer).
        #[arg(long)]
        w: i64,
        /// Base scalar curvature parameter (rational "p/q").
        #[arg(long, value_name = "RAT", allow_hyphen_values = true, default_value = "0")]
        s: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Cohomological pairings of a structure by polytope quadrature,
    /// with the primitivity/closure gate.
    Pairings {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Large-time energy slope from an intersection-number file.
    Slope {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sample a scalar field on the structure's interior grid.
    Sample {
        /// Field to sample: scalar-curvature, residual, or theta-density.
        #[arg(long, value_name = "NAME")]
        field: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

/// Fully resolved run configuration after config-file merge and
/// defaulting.
struct Resolved {
    input: Option<PathBuf>,
    nx: usize,
    ny: usize,
    quad_order: usize,
    tol: f64,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// Run the CLI on the given argv (including the program name) and
/// return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(CmdError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            1
        }
        Err(CmdError::Malformed(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<(), CmdError> {
    let config = cli.config.as_deref();
    let (resolved, built, default_format) = match cli.command {
        Command::Verify { common } => {
            let r = resolve(common, config)?;
            let b = cmd_verify(&r)?;
            (r, b, Format::Json)
        }
        Command::Cgms { a, b, c, common } => {
            let r = resolve(common, config)?;
            let built = cmd_cgms(a, b, c, &r)?;
            (r, built, Format::Json)
        }
        Command::Legendre {
            vertices,
            t1,
            t2,
            common,
        } => {
            let r = resolve(common, config)?;
            let b = cmd_legendre(&vertices, &t1, &t2, &r)?;
            (r, b, Format::Json)
        }
        Command::Enumerate {
            family,
            max_param,
            vertex_bound,
            label_bound,
            max_results,
            common,
        } => {
            let r = resolve(common, config)?;
            let b = cmd_enumerate(family, max_param, vertex_bound, label_bound, max_results, &r)?;
            (r, b, Format::Json)
        }
        Command::CalabiCheck { common } => {
            let r = resolve(common, config)?;
            let b = cmd_calabi_check(&r)?;
            (r, b, Format::Json)
        }
        Command::Futaki {
            k,
            c,
            v,
            w,
            s,
            common,
        } => {
            let r = resolve(common, config)?;
            let b = cmd_futaki(&k, &c, v, w, &s)?;
            (r, b, Format::Json)
        }
        Command::Pairings { common } => {
            let r = resolve(common, config)?;
            let b = cmd_pairings(&r)?;
            (r, b, Format::Json)
        }
        Command::Slope { common } => {
            let r = resolve(common, config)?;
            let b = cmd_slope(&r)?;
            (r, b, Format::Json)
        }
        Command::Sample { field, common } => {
            let r = resolve(common, config)?;
            let b = cmd_sample(&field, &r)?;
            (r, b, Format::Csv)
        }
    };
    let format = resolved
        .format
        .or_else(|| resolved.out.as_deref().and_then(format_from_extension))
        .unwrap_or(default_format);
    let text = render(format, &built);
    emit(&resolved.out, &text)?;
    match built.failure {
        None => Ok(()),
        Some(msg) => Err(CmdError::Verification(msg)),
    }
}

// ---------------------------------------------------------------------------
// Configuration resolution

fn resolve(mut common: CommonOpts, config: Option<&Path>) -> Result<Resolved, CmdError> {
    if let Some(path) = config {
        merge_config(&mut common, path)?;
    }
    let (nx, ny) = match &common.grid {
        Some(g) => parse_grid(g)?,
        None => (128, 128),
    };
    let quad_order = common.quad_order.unwrap_or(96);
    if quad_order < 8 {
        return Err(CmdError::Malformed(format!(
            "quad-order must be at least 8, got {quad_order}"
        )));
    }
    let tol = common.tol.unwrap_or(1e-10);
    if !tol.is_finite() || tol <= 0.0 {
        return Err(CmdError::Malformed(format!(
            "tol must be a positive finite number, got {tol}"
        )));
    }
    Ok(Resolved {
        input: common.input,
        nx,
        ny,
        quad_order,
        tol,
        out: common.out,
        format: common.format,
    })
}

fn parse_grid(s: &str) -> Result<(usize, usize), CmdError> {
    let bad = || {
        CmdError::Malformed(format!(
            "grid must look like \"128x128\" with both sides at least 8, got {s:?}"
        ))
    };
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nx: usize = a.trim().parse().map_err(|_| bad())?;
    let ny: usize = b.trim().parse().map_err(|_| bad())?;
    if nx < 8 || ny < 8 {
        return Err(bad());
    }
    Ok((nx, ny))
}

/// Merge a key=value config file under the flags: only fields the
/// flags left unset are filled in. Blank lines and '#' comments are
/// skipped; unknown keys are rejected.
fn merge_config(common: &mut CommonOpts, path: &Path) -> Result<(), CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::Malformed(format!("cannot read config {}: {e}", path.display())))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |msg: String| {
            CmdError::Malformed(format!("{}:{}: {msg}", path.display(), lineno + 1))
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at(format!("expected key=value, got {raw:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "input" => {
                if common.input.is_none() {
                    common.input = Some(PathBuf::from(value));
                }
            }
            "grid" => {
                if common.grid.is_none() {
                    common.grid = Some(value.to_string());
                }
            }
            "quad-order" | "quad_order" => {
                if common.quad_order.is_none() {
                    let n = value
                        .parse()
                        .map_err(|_| at(format!("quad-order must be an integer, got {value:?}")))?;
                    common.quad_order = Some(n);
                }
            }
            "tol" => {
                if common.tol.is_none() {
                    let t = value
                        .parse()
                        .map_err(|_| at(format!("tol must be a number, got {value:?}")))?;
                    common.tol = Some(t);
                }
            }
            "out" => {
                if common.out.is_none() {
                    common.out = Some(PathBuf::from(value));
                }
            }
            "format" => {
                if common.format.is_none() {
                    let f = Format::from_str(value, true)
                        .map_err(|_| at(format!("format must be json or csv, got {value:?}")))?;
                    common.format = Some(f);
                }
            }
            other => return Err(at(format!("unknown config key {other:?}"))),
        }
    }
    Ok(())
}

fn format_from_extension(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "json" => Some(Format::Json),
        "csv" => Some(Format::Csv),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Shared helpers

fn malformed<E: std::fmt::Display>(e: E) -> CmdError {
    CmdError::Malformed(e.to_string())
}

fn require_input<'a>(r: &'a Resolved, command: &str) -> Result<&'a Path, CmdError> {
    r.input
        .as_deref()
        .ok_or_else(|| CmdError::Malformed(format!("{command} needs --input FILE")))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CmdError::Malformed(format!(
            "{} does not hold a valid {what}: {e}",
            path.display()
        ))
    })
}

/// Load a structure from a file holding either the bare structure JSON
/// or a report that embeds one under a "structure" field, so reports
/// written by the construction commands feed straight back into
/// verify/pairings/sample.
fn load_structure(path: &Path) -> Result<OrthotoricStructure, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    let first = match serde_json::from_str::<OrthotoricStructure>(&text) {
        Ok(s) => return Ok(s),
        Err(e) => e,
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|_| {
        CmdError::Malformed(format!("{}: not a structure file: {first}", path.display()))
    })?;
    let inner = value.get("structure").ok_or_else(|| {
        CmdError::Malformed(format!(
            "{}: not a structure file (and no \"structure\" field to unwrap): {first}",
            path.display()
        ))
    })?;
    serde_json::from_value(inner.clone()).map_err(|e| {
        CmdError::Malformed(format!(
            "{}: embedded structure is invalid: {e}",
            path.display()
        ))
    })
}

fn parse_rat_flag(s: &str, flag: &str) -> Result<Rational, CmdError> {
    parse_rational(s).map_err(|e| CmdError::Malformed(format!("--{flag}: {e}")))
}

fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Verify a structure and assemble the report shape shared by verify
/// and the construction commands.
fn verified_structure_output(
    command: &str,
    extra: serde_json::Value,
    s: &OrthotoricStructure,
    r: &Resolved,
) -> CommandOutput {
    let v = orthotoric::verify_solution(s, r.nx, r.ny, r.tol);
    let mut report = json!({
        "command": command,
        "structure": s,
        "verification": &v,
    });
    if let serde_json::Value::Object(extra_map) = extra {
        let obj = report.as_object_mut().expect("report is an object");
        for (key, value) in extra_map {
            obj.insert(key, value);
        }
    }
    let failure = if v.pass {
        None
    } else {
        let mut reasons = Vec::new();
        if !(v.max_abs_residual <= v.tol * v.residual_scale) {
            reasons.push(format!(
                "max |residual| = {:e} exceeds tol * scale = {:e}",
                v.max_abs_residual,
                v.tol * v.residual_scale
            ));
        }
        if !(v.min_scalar_curvature > 0.0) {
            reasons.push(format!(
                "min scalar curvature = {:e} is not positive",
                v.min_scalar_curvature
            ));
        }
        Some(reasons.join("; "))
    };
    CommandOutput {
        report,
        table: None,
        raw_csv: None,
        failure,
    }
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_verify(r: &Resolved) -> Result<CommandOutput, CmdError> {
    let path = require_input(r, "verify")?;
    let s = load_structure(path)?;
    Ok(verified_structure_output("verify", json!({}), &s, r))
}

fn cmd_cgms(a: i64, b: i64, c: i64, r: &Resolved) -> Result<CommandOutput, CmdError> {
    let s = orthotoric::cgms_family(a, b, c).map_err(malformed)?;
    let extra = json!({ "a": a, "b": b, "c": c });
    Ok(verified_structure_output("cgms", extra, &s, r))
}

fn cmd_legendre(
    vertices: &str,
    t1: &str,
    t2: &str,
    r: &Resolved,
) -> Result<CommandOutput, CmdError> {
    let parts: Vec<&str> = vertices.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CmdError::Malformed(format!(
            "--vertices needs four comma-separated rationals \"y1,y2,x1,x2\", got {vertices:?}"
        )));
    }
    let mut vs = Vec::with_capacity(4);
    for part in parts {
        vs.push(parse_rational(part).map_err(|e| CmdError::Malformed(format!("--vertices: {e}")))?);
    }
    let t1 = parse_rat_flag(t1, "t1")?;
    let t2 = parse_rat_flag(t2, "t2")?;
    let quad = LabelledQuadrilateral::new(
        vs[0].clone(),
        vs[1].clone(),
        vs[2].clone(),
        vs[3].clone(),
        FacetLabels::TwoParameter {
            t1: t1.clone(),
            t2: t2.clone(),
        },
    )
    .map_err(malformed)?;
    let s = orthotoric::legendre_pair(&quad, &t1, &t2).map_err(malformed)?;
    let boundary = orthotoric::boundary_check(&s, &quad).map_err(malformed)?;
    let all_match = boundary.all_match;
    let extra = json!({
        "quadrilateral": &quad,
        "boundary": &boundary,
    });
    let mut out = verified_structure_output("legendre", extra, &s, r);
    if out.failure.is_none() && !all_match {
        out.failure = Some("first-order boundary conditions do not match the labels".into());
    }
    Ok(out)
}

fn cmd_enumerate(
    family: Family,
    max_param: i64,
    vertex_bound: i64,
    label_bound: i64,
    max_results: usize,
    r: &Resolved,
) -> Result<CommandOutput, CmdError> {
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut failures = 0usize;
    let (report, header): (serde_json::Value, Vec<&'static str>) = match family {
        Family::Cgms => {
            for (a, b, c) in orthotoric::cgms_triples(max_param) {
                let s = orthotoric::cgms_family(a, b, c).map_err(malformed)?;
                let v = orthotoric::verify_solution(&s, r.nx, r.ny, r.tol);
                if !v.pass {
                    failures += 1;
                }
                let lambda_sq = format_rational(s.lambda_sq());
                rows.push(vec![
                    a.to_string(),
                    b.to_string(),
                    c.to_string(),
                    lambda_sq.clone(),
                    format!("{:e}", v.max_abs_residual),
                    v.pass.to_string(),
                ]);
                entries.push(json!({
                    "a": a, "b": b, "c": c,
                    "lambda_sq": lambda_sq,
                    "max_abs_residual": v.max_abs_residual,
                    "pass": v.pass,
                }));
            }
            let report = json!({
                "command": "enumerate",
                "family": "cgms",
                "max_param": max_param,
                "grid": [r.nx, r.ny],
                "tol": r.tol,
                "count": entries.len(),
                "solutions": entries,
            });
            (report, vec!["a", "b", "c", "lambda_sq", "max_abs_residual", "pass"])
        }
        Family::Quadrilateral => {
            for e in orthotoric::enumerate_quadrilateral_solutions(
                vertex_bound,
                label_bound,
                max_results,
            ) {
                let s = e.build().map_err(malformed)?;
                let v = orthotoric::verify_solution(&s, r.nx, r.ny, r.tol);
                if !v.pass {
                    failures += 1;
                }
                let q = &e.quadrilateral;
                let lambda_sq = format_rational(&e.lambda_sq);
                rows.push(vec![
                    format_rational(&q.y1),
                    format_rational(&q.y2),
                    format_rational(&q.x1),
                    format_rational(&q.x2),
                    e.t1.to_string(),
                    e.t2.to_string(),
                    lambda_sq.clone(),
                    format!("{:e}", v.max_abs_residual),
                    v.pass.to_string(),
                ]);
                entries.push(json!({
                    "y1": format_rational(&q.y1),
                    "y2": format_rational(&q.y2),
                    "x1": format_rational(&q.x1),
                    "x2": format_rational(&q.x2),
                    "t1": e.t1,
                    "t2": e.t2,
                    "lambda_sq": lambda_sq,
                    "max_abs_residual": v.max_abs_residual,
                    "pass": v.pass,
                }));
            }
            let report = json!({
                "command": "enumerate",
                "family": "quadrilateral",
                "vertex_bound": vertex_bound,
                "label_bound": label_bound,
                "max_results": max_results,
                "grid": [r.nx, r.ny],
                "tol": r.tol,
                "count": entries.len(),
                "solutions": entries,
            });
            (
                report,
                vec![
                    "y1",
                    "y2",
                    "x1",
                    "x2",
                    "t1",
                    "t2",
                    "lambda_sq",
                    "max_abs_residual",
                    "pass",
                ],
            )
        }
    };
    let failure = (failures > 0).then(|| format!("{failures} enumerated solutions failed verification"));
    Ok(CommandOutput {
        report,
        table: Some(Table { header, rows }),
        raw_csv: None,
        failure,
    })
}

fn cmd_calabi_check(r: &Resolved) -> Result<CommandOutput, CmdError> {
    let path = require_input(r, "calabi-check")?;
    let p: calabi::CalabiProfile = load_json(path, "fibered profile")?;
    let i1_closed = p.futaki_1_closed();
    let i2_closed = p.futaki_2_closed();
    let i1_quad = calabi::futaki_integral_1(&p, r.quad_order)
        .map_err(|e| CmdError::Verification(e.to_string()))?;
    let i2_quad = calabi::futaki_integral_2(&p, r.quad_order)
        .map_err(|e| CmdError::Verification(e.to_string()))?;
    // The doubling check inside the moment quadrature certifies the
    // value to QUADRATURE_DOUBLING_REL of its mass scale, so demanding
    // a tighter agreement than that would only compare noise.
    let agree_tol = r.tol.max(calabi::QUADRATURE_DOUBLING_REL);
    let agreement = |closed: &Rational, quad: f64| -> (f64, bool) {
        let cf = rational_to_f64(closed);
        (cf, (quad - cf).abs() <= agree_tol * 1f64.max(cf.abs()))
    };
    let (i1_f, ok1) = agreement(&i1_closed, i1_quad);
    let (i2_f, ok2) = agreement(&i2_closed, i2_quad);
    let nodes = quadrature::chebyshev_interior(r.nx * r.ny, -1.0, 1.0);
    let mut max_res = 0f64;
    for z in &nodes {
        let value = calabi::calabi_residual(&p, *z).map_err(malformed)?;
        max_res = max_res.max(value.abs());
    }
    let lambda_balancing =
        calabi::lambda_sq_from_first_moment(p.k(), p.c(), p.v(), p.w(), p.s_sigma());
    let report = json!({
        "command": "calabi-check",
        "profile": &p,
        "quad_order": r.quad_order,
        "agreement_tol": agree_tol,
        "first_moment": {
            "closed": format_rational(&i1_closed),
            "closed_f64": i1_f,
            "quadrature": i1_quad,
            "agrees": ok1,
        },
        "second_moment": {
            "closed": format_rational(&i2_closed),
            "closed_f64": i2_f,
            "quadrature": i2_quad,
            "agrees": ok2,
        },
        "first_moment_vanishes": i1_closed.is_zero(),
        "lambda_sq_balancing_first_moment": format_rational(&lambda_balancing),
        "residual_nodes": nodes.len(),
        "max_abs_residual": max_res,
    });
    let failure = if ok1 && ok2 {
        None
    } else {
        Some(format!(
            "quadrature disagrees with the closed forms: first moment {i1_quad:e} vs {i1_f:e}, \
             second moment {i2_quad:e} vs {i2_f:e}"
        ))
    };
    Ok(CommandOutput {
        report,
        table: None,
        raw_csv: None,
        failure,
    })
}

fn cmd_futaki(k: &str, c: &str, v: i64, w: i64, s: &str) -> Result<CommandOutput, CmdError> {
    let k = parse_rat_flag(k, "k")?;
    let c = parse_rat_flag(c, "c")?;
    let s = parse_rat_flag(s, "s")?;
    if v < 1 || w < 1 {
        return Err(CmdError::Malformed(format!(
            "orbifold weights must be positive integers, got v = {v}, w = {w}"
        )));
    }
    let echo = |report: &mut serde_json::Value| {
        let obj = report.as_object_mut().expect("report is an object");
        obj.insert("k".into(), json!(format_rational(&k)));
        obj.insert("c".into(), json!(format_rational(&c)));
        obj.insert("v".into(), json!(v));
        obj.insert("w".into(), json!(w));
        obj.insert("s_sigma".into(), json!(format_rational(&s)));
    };
    if k.is_zero() {
        if !c.is_positive() {
            return Err(CmdError::Malformed(format!(
                "need c > 0, got c = {}",
                format_rational(&c)
            )));
        }
        let rep = calabi::futaki_obstruction_k0(&c, v, w, &s);
        let mut report = json!({
            "command": "futaki",
            "curvature_class": "zero",
            "lambda_sq": format_rational(&rep.lambda_sq),
            "consistent": rep.consistent,
            "obstruction": !rep.consistent,
        });
        echo(&mut report);
        Ok(CommandOutput::report_only(report))
    } else {
        if c <= k.abs() {
            return Err(CmdError::Malformed(format!(
                "need c > |k|, got c = {}, k = {}",
                format_rational(&c),
                format_rational(&k)
            )));
        }
        let forced = calabi::futaki_obstruction_k_nonzero(&k, &c, v, w);
        let lambda_first = calabi::lambda_sq_from_first_moment(&k, &c, v, w, &s);
        let mut report = json!({
            "command": "futaki",
            "curvature_class": "nonzero",
            "s_sigma_forced": format_rational(&forced.s_sigma_forced),
            "lambda_sq_forced": format_rational(&forced.lambda_sq_forced),
            "lambda_sq_first_moment": format_rational(&lambda_first),
            "obstruction": forced.lambda_sq_forced.is_negative(),
        });
        echo(&mut report);
        Ok(CommandOutput::report_only(report))
    }
}

fn cmd_pairings(r: &Resolved) -> Result<CommandOutput, CmdError> {
    let path = require_input(r, "pairings")?;
    let s = load_structure(path)?;
    let pairings = orthotoric::polytope_pairings(&s, r.quad_order)
        .map_err(|e| CmdError::Verification(e.to_string()))?;
    let two_pi_sq = {
        let tp = 2.0 * std::f64::consts::PI;
        tp * tp
    };
    let data = invariants::IntersectionData {
        n: 2,
        c1_sq_alpha: pairings.rho_rho / two_pi_sq,
        beta_sq_alpha: pairings.theta_theta / two_pi_sq,
        alpha_top: pairings.omega_omega / two_pi_sq,
        beta_alpha: pairings.theta_omega / two_pi_sq,
    };
    data.validate()
        .map_err(|e| CmdError::Verification(e.to_string()))?;
    let gate = invariants::topology_gate(&data, r.tol)
        .map_err(|e| CmdError::Verification(e.to_string()))?;
    let report = json!({
        "command": "pairings",
        "quad_order": pairings.quad_order,
        "tol": r.tol,
        "pairings": &pairings,
        "intersection": &data,
        "normalizing_constant": invariants::c_alpha_beta(&data),
        "topology": &gate,
    });
    let failure = (!gate.pass).then(|| {
        format!(
            "topology gate failed: primitivity residual {:e}, closure residual {:e}, allowed {:e}",
            gate.primitivity_residual,
            gate.closure_residual,
            r.tol * gate.scale
        )
    });
    Ok(CommandOutput {
        report,
        table: None,
        raw_csv: None,
        failure,
    })
}

fn cmd_slope(r: &Resolved) -> Result<CommandOutput, CmdError> {
    let path = require_input(r, "slope")?;
    let t: invariants::TestConfigData = load_json(path, "test configuration")?;
    let slope = invariants::e_na_slope(&t);
    Ok(CommandOutput::report_only(json!({
        "command": "slope",
        "config": &t,
        "e_na_slope": slope,
    })))
}

fn cmd_sample(field: &str, r: &Resolved) -> Result<CommandOutput, CmdError> {
    let path = require_input(r, "sample")?;
    let s = load_structure(path)?;
    let kind = orthotoric::FieldKind::parse(field).ok_or_else(|| {
        CmdError::Malformed(format!(
            "unknown field {field:?}; expected scalar-curvature, residual, or theta-density"
        ))
    })?;
    let sample = orthotoric::sample_field(&s, kind, r.nx, r.ny);
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut max_abs = 0f64;
    for v in &sample.values {
        min = min.min(*v);
        max = max.max(*v);
        max_abs = max_abs.max(v.abs());
    }
    let raw = sample.to_csv();
    let report = json!({
        "command": "sample",
        "field": &sample.field_name,
        "nx": sample.nx,
        "ny": sample.ny,
        "min_value": min,
        "max_value": max,
        "max_abs_value": max_abs,
        "sample": &sample,
    });
    Ok(CommandOutput {
        report,
        table: None,
        raw_csv: Some(raw),
        failure: None,
    })
}
