//! The `etilde` command line: identity checks, certification, single-point
//! evaluation and grid scans.

pub mod json;
pub mod point;

use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

use etilde::certify::{certify_all, etilde_at};
use etilde::evaluate::{evaluate_at, EvalError, EvalParams};
use etilde::exactnum::{to_decimal_directed, to_f64, Rational};
use etilde::graded::{
    constant_term_deficit, discover_relation_default, divergence_from_printed, printed_relation, sturm_order,
    verify_relation, RelationPoly, DEFAULT_MARGIN,
};
use etilde::qseries::{SeriesId, SUPPORTED_LEVELS};

use point::{parse_point, parse_rational, PointSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const DIGITS: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "etilde", version, about = "Certified zeros of weight-2 Eisenstein series on Γ₀(N)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the graded-ring relation for one level or all of them.
    Identities {
        #[arg(long, value_parser = parse_level)]
        level: Option<u32>,
        /// Number of q-coefficients to compare (default: Sturm order + margin).
        #[arg(long)]
        order: Option<usize>,
        /// Check the tabulated relation instead of the discovered one.
        #[arg(long)]
        as_printed: bool,
    },
    /// Certify every candidate zero of Ẽ_N.
    Certify {
        #[arg(long, value_parser = parse_level)]
        level: u32,
        #[command(flatten)]
        params: ParamArgs,
        /// Write the JSON certificate to a file, or `-` for stdout.
        #[arg(long)]
        json: Option<String>,
    },
    /// Evaluate one series at one point.
    Eval {
        /// E2, E4, E6 or EtildeN.
        #[arg(value_parser = parse_series)]
        series: SeriesId,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: PointSpec,
        #[command(flatten)]
        params: ParamArgs,
        /// Move out-of-region points of Ẽ_N by the translation/Fricke identity.
        #[arg(long)]
        auto_relocate: bool,
    },
    /// Enclose |Ẽ_N| on a rectangular grid and write CSV.
    Scan {
        #[arg(long, value_parser = parse_level)]
        level: u32,
        /// `X0:X1:NX,Y0:Y1:NY`, endpoints inclusive.
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Grid,
        #[command(flatten)]
        params: ParamArgs,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Series truncation order m.
    #[arg(long)]
    terms: Option<usize>,
    /// Working precision in bits.
    #[arg(long)]
    bits: Option<u32>,
    /// Taylor terms for exp.
    #[arg(long)]
    exp_terms: Option<u32>,
    /// Largest admissible sup(|Re q|+|Im q|).
    #[arg(long, value_parser = parse_rational)]
    r_max: Option<Rational>,
}

impl ParamArgs {
    fn build(&self) -> Result<EvalParams, EvalError> {
        let mut p = EvalParams::default();
        if let Some(m) = self.terms {
            p.m = m;
        }
        if let Some(b) = self.bits {
            p.bits = b;
        }
        if let Some(e) = self.exp_terms {
            p.exp_terms = e;
        }
        if let Some(r) = &self.r_max {
            p.r_max = r.clone();
        }
        p.validate()?;
        Ok(p)
    }
}

fn parse_level(s: &str) -> Result<u32, String> {
    let n: u32 = s.parse().map_err(|_| format!("`{s}` is not a level"))?;
    if SUPPORTED_LEVELS.contains(&n) {
        Ok(n)
    } else {
        Err(format!("unsupported level {n} (supported: 2, 3, 5, 7)"))
    }
}

fn parse_series(s: &str) -> Result<SeriesId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    pub from: Rational,
    pub to: Rational,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<Rational> {
        if self.count == 1 {
            return vec![self.from.clone()];
        }
        let step = (&self.to - &self.from) / Rational::from_integer((self.count as i64 - 1).into());
        (0..self.count)
            .map(|j| &self.from + &step * Rational::from_integer((j as i64).into()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub x: Axis,
    pub y: Axis,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [from, to, count] = parts[..] else {
        return Err(format!("axis `{s}` must be FROM:TO:COUNT"));
    };
    let count: usize = count.parse().map_err(|_| format!("bad point count in `{s}`"))?;
    if count == 0 {
        return Err(format!("axis `{s}` has no points"));
    }
    Ok(Axis {
        from: parse_rational(from)?,
        to: parse_rational(to)?,
        count,
    })
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("grid `{s}` must be X0:X1:NX,Y0:Y1:NY"))?;
    let grid = Grid {
        x: parse_axis(x)?,
        y: parse_axis(y)?,
    };
    let zero = Rational::from_integer(0.into());
    if grid.y.from <= zero || grid.y.to <= zero {
        return Err("grid must lie in the upper half plane".to_string());
    }
    Ok(grid)
}

fn decimal_interval(lo: &Rational, hi: &Rational) -> String {
    format!(
        "[{}, {}]",
        to_decimal_directed(lo, DIGITS, true),
        to_decimal_directed(hi, DIGITS, false)
    )
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Identities {
            level,
            order,
            as_printed,
        } => cmd_identities(level, order, as_printed, out),
        Command::Certify { level, params, json } => params
            .build()
            .map_err(usage)
            .and_then(|p| cmd_certify(level, &p, json.as_deref(), out)),
        Command::Eval {
            series,
            point,
            params,
            auto_relocate,
        } => params
            .build()
            .map_err(usage)
            .and_then(|p| cmd_eval(series, &point, &p, auto_relocate, out)),
        Command::Scan {
            level,
            grid,
            params,
            out: path,
        } => params
            .build()
            .map_err(usage)
            .and_then(|p| cmd_scan(level, &grid, &p, path.as_deref(), out)),
    };
    match result {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

type CmdResult = Result<i32, (i32, String)>;

fn usage(e: impl std::fmt::Display) -> (i32, String) {
    (EXIT_USAGE, e.to_string())
}

fn failure(e: impl std::fmt::Display) -> (i32, String) {
    (EXIT_FAILURE, e.to_string())
}

fn io(e: std::io::Error) -> (i32, String) {
    failure(e)
}

fn cmd_identities(level: Option<u32>, order: Option<usize>, as_printed: bool, out: &mut dyn Write) -> CmdResult {
    let levels = match level {
        Some(n) => vec![n],
        None => SUPPORTED_LEVELS.to_vec(),
    };
    let mut code = EXIT_OK;
    for n in levels {
        let discovered = discover_relation_default(n).map_err(failure)?;
        let rel = if as_printed {
            printed_relation(n).map_err(failure)?
        } else {
            discovered.clone()
        };
        let sturm = sturm_order(n).map_err(failure)?;
        let order = order.unwrap_or(sturm + DEFAULT_MARGIN);
        let report = verify_relation(&rel, order);
        let which = if as_printed { "printed" } else { "discovered" };
        writeln!(out, "level {n} ({which} relation)").map_err(io)?;
        writeln!(out, "  {rel}").map_err(io)?;
        for k in 0..=order {
            let (l, r) = (report.lhs.coeff(k), report.rhs.coeff(k));
            let mark = if l == r { "ok" } else { "MISMATCH" };
            writeln!(out, "  q^{k}: lhs {l} rhs {r} {mark}").map_err(io)?;
        }
        if report.below_sturm() {
            writeln!(out, "  warning: order {order} is below the Sturm order {sturm}; agreement proves nothing")
                .map_err(io)?;
        }
        match &report.mismatch {
            None => {
                writeln!(out, "  PASS through q^{order} (Sturm order {sturm})").map_err(io)?;
                if !as_printed {
                    write_divergence(n, &discovered, "differs from printed", out)?;
                }
            }
            Some(m) => {
                code = EXIT_FAILURE;
                writeln!(
                    out,
                    "  FAIL at q^{}: lhs {} rhs {}",
                    m.exponent, m.lhs, m.rhs
                )
                .map_err(io)?;
                let deficit = constant_term_deficit(&rel);
                writeln!(out, "  constant term: coefficient sum falls short of 1 by {deficit}").map_err(io)?;
                write_divergence(n, &discovered, "failing term", out)?;
            }
        }
    }
    Ok(code)
}

fn write_divergence(level: u32, discovered: &RelationPoly, label: &str, out: &mut dyn Write) -> Result<(), (i32, String)> {
    let div = divergence_from_printed(discovered);
    if div.is_empty() {
        writeln!(out, "  printed and discovered relations agree term by term").map_err(io)?;
    }
    for d in div {
        writeln!(
            out,
            "  {label} Ẽ{level}^{}·{}: printed {} discovered {}",
            d.etilde_power, d.monomial, d.printed, d.discovered
        )
        .map_err(io)?;
    }
    Ok(())
}

fn cmd_certify(level: u32, params: &EvalParams, json_path: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let report = certify_all(level, params).map_err(failure)?;
    let to_stdout_json = json_path == Some("-");
    if !to_stdout_json {
        writeln!(out, "level {level}").map_err(io)?;
        writeln!(out, "relation: {} (verified through q^{}, Sturm order {})", report.relation, report.verified_order, report.sturm_order)
            .map_err(io)?;
        writeln!(out, "at the candidates: {}", report.factored).map_err(io)?;
        for c in &report.certificates {
            let reloc = match &c.relocation {
                Some(r) => format!(" via {}", r.target),
                None => String::new(),
            };
            writeln!(out, "  {:<12} {}{}  (rounds {})", c.point.to_string(), c.verdict, reloc, c.rounds).map_err(io)?;
            writeln!(out, "    {}", c.narrative).map_err(io)?;
        }
        let zeros: Vec<String> = report.zeros.iter().map(|p| p.to_string()).collect();
        writeln!(out, "zeros: [{}]", zeros.join(", ")).map_err(io)?;
    }
    if let Some(path) = json_path {
        let text = json::render(&json::report(&report));
        if to_stdout_json {
            out.write_all(text.as_bytes()).map_err(io)?;
        } else {
            fs::write(path, text).map_err(io)?;
        }
    }
    let undecided = report.undecided();
    if undecided.is_empty() {
        Ok(EXIT_OK)
    } else {
        let names: Vec<String> = undecided.iter().map(|p| p.to_string()).collect();
        Err((EXIT_UNDECIDED, format!("undecided after escalation: {}", names.join(", "))))
    }
}

fn cmd_eval(
    series: SeriesId,
    point: &PointSpec,
    params: &EvalParams,
    auto_relocate: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let relocatable = match (series.level(), point) {
        (Some(n), PointSpec::Algebraic(p)) if auto_relocate => Some((n, *p)),
        _ => None,
    };
    let value = if let Some((n, p)) = relocatable {
        let (v, reloc) = etilde_at(n, &p, params).map_err(failure)?;
        if let Some(r) = reloc {
            writeln!(out, "relocated {} -> {}", r.source, r.target).map_err(io)?;
        }
        v
    } else {
        match evaluate_at(series, &point.enclose(params.bits + 4), params) {
            Ok(v) => v,
            Err(EvalError::RegionViolation { r, r_max }) => {
                let hint = if series.level().is_some() && matches!(point, PointSpec::Algebraic(_)) {
                    "hint: rerun with --auto-relocate to evaluate at -1/(ζ+k-N) and pull back"
                } else {
                    "hint: move the point into the fundamental domain, or raise --r-max"
                };
                let msg = format!(
                    "q-region violated: sup(|Re q|+|Im q|) >= {} exceeds r_max = {}\n{hint}",
                    to_decimal_directed(&r, 6, true),
                    r_max
                );
                return Err((EXIT_FAILURE, msg));
            }
            Err(e) => return Err(failure(e)),
        }
    };
    writeln!(out, "{series}({point})").map_err(io)?;
    writeln!(out, "  re {}", decimal_interval(value.re.lo(), value.re.hi())).map_err(io)?;
    writeln!(out, "  im {}", decimal_interval(value.im.lo(), value.im.hi())).map_err(io)?;
    writeln!(out, "  contains 0: {}", value.contains_zero()).map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_scan(level: u32, grid: &Grid, params: &EvalParams, path: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let id = SeriesId::etilde(level).map_err(usage)?;
    let mut csv = String::from("x,y,abs_lo,abs_hi,status\n");
    for y in grid.y.values() {
        for x in grid.x.values() {
            let tau = PointSpec::Rational { re: x.clone(), im: y.clone() }.enclose(params.bits);
            let (lo, hi, status) = match evaluate_at(id, &tau, params) {
                Ok(v) => {
                    let a = v.abs_enclosure(params.bits);
                    (
                        to_decimal_directed(a.lo(), DIGITS, true),
                        to_decimal_directed(a.hi(), DIGITS, false),
                        "OK",
                    )
                }
                Err(EvalError::RegionViolation { .. } | EvalError::TailDiverges { .. }) => {
                    (String::new(), String::new(), "SKIPPED")
                }
                Err(e) => return Err(failure(e)),
            };
            csv.push_str(&format!("{},{},{lo},{hi},{status}\n", to_f64(&x), to_f64(&y)));
        }
    }
    match path {
        Some(p) => fs::write(p, csv).map_err(io)?,
        None => out.write_all(csv.as_bytes()).map_err(io)?,
    }
    Ok(EXIT_OK)
}
