//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 when a
//! command cannot run (bad flags or a solver error).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::ivp::IntegratorConfig;
use crate::phase;
use crate::pipeline::{Solution, SolverConfig};
use crate::profile::{RadialProfile, Regime};
use crate::shooting;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

const DEFAULT_RANGE: (f64, f64) = (-25.0, 10.0);
const DEFAULT_STEP: f64 = 0.01;
const DEFAULT_SAMPLES: usize = 401;

#[derive(Debug, Parser)]
#[command(
    name = "monopole",
    version,
    about = "Global solution of y'' - y' + y = y^3 and the monopole profile"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Critical slope a* by shooting.
    CriticalSlope,
    /// Connection constants a*, b*, c*, d*, A, phi, B.
    Constants,
    /// Table of (x, y*, y*') over a range.
    Profile,
    /// Table of (z, P(z)) on [z0, 1].
    Pz,
    /// Table of f(r) on a log-spaced grid with asymptotic forms.
    Radial,
    /// Run the invariant suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Bisection tolerance for a*.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Shooting window.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub window: Option<f64>,
    /// Picard horizon T.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub horizon: Option<f64>,
    /// Truncation depth for b* and c*.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub trunc_bc: Option<f64>,
    /// Truncation depth for d*.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub trunc_d: Option<f64>,
    /// Start of the P(z) curve.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub z0: Option<f64>,
    /// Largest zero radius for `radial`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r0: Option<f64>,
    /// x-range for `profile`, ln(r/r0)-range for `radial`.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub range: Option<Vec<f64>>,
    /// Row spacing for `profile`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub step: Option<f64>,
    /// Row count for `pz` and `radial`.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Initial shooting bracket.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub bracket: Option<Vec<f64>>,
    /// Use this a* instead of shooting for it.
    #[arg(long = "a-star", global = true, allow_negative_numbers = true)]
    pub a_star: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "format")]
    pub json: bool,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// A flat table; JSON renders it as `{"columns": [...], "rows": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| json!(v)).collect());
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string(self).expect("table serialises");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        // shortest round-trip form, same as the JSON encoder
        Value::Number(n) => n.as_f64().map(|f| format!("{f:?}")).unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Run(e)
    }
}

fn positive_f(name: &str, v: Option<f64>) -> Result<(), Failure> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => Err(Failure::Usage(format!("--{name} must be positive, got {x}"))),
        _ => Ok(()),
    }
}

fn pair(name: &str, v: &Option<Vec<f64>>) -> Result<Option<(f64, f64)>, Failure> {
    match v.as_deref() {
        None => Ok(None),
        Some([lo, hi]) if lo.is_finite() && hi.is_finite() && lo < hi => Ok(Some((*lo, *hi))),
        Some(_) => Err(Failure::Usage(format!("--{name} needs two finite values LO < HI"))),
    }
}

impl Options {
    fn validate(&self) -> Result<(), Failure> {
        for (name, v) in [
            ("tol", self.tol),
            ("window", self.window),
            ("horizon", self.horizon),
            ("trunc-bc", self.trunc_bc),
            ("trunc-d", self.trunc_d),
            ("z0", self.z0),
            ("r0", self.r0),
            ("step", self.step),
            ("a-star", self.a_star),
        ] {
            positive_f(name, v)?;
        }
        if self.samples == Some(0) {
            return Err(Failure::Usage("--samples must be positive".into()));
        }
        pair("range", &self.range)?;
        pair("bracket", &self.bracket)?;
        Ok(())
    }

    fn format(&self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format.unwrap_or(default)
        }
    }

    fn solver_config(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            window: self.window.unwrap_or(d.window),
            bracket: pair("bracket", &self.bracket).ok().flatten().unwrap_or(d.bracket),
            slope_tol: self.tol.unwrap_or(d.slope_tol),
            horizon: self.horizon.unwrap_or(d.horizon),
            trunc_bc: self.trunc_bc.unwrap_or(d.trunc_bc),
            trunc_d: self.trunc_d.unwrap_or(d.trunc_d),
            a_star: self.a_star,
            ..d
        }
    }

    fn range(&self) -> (f64, f64) {
        pair("range", &self.range).ok().flatten().unwrap_or(DEFAULT_RANGE)
    }
}

fn critical_slope(opts: &Options) -> Result<String, Failure> {
    let cfg = opts.solver_config();
    let (lo, hi) = cfg.bracket;
    let c = shooting::find_critical_slope(lo, hi, cfg.slope_tol, cfg.window, &cfg.integrator).map_err(Error::from)?;
    Ok(match opts.format(Format::Json) {
        Format::Json => {
            let v = json!({
                "a_star": c.value,
                "bracket_lo": c.bracket_lo,
                "bracket_hi": c.bracket_hi,
                "iterations": c.iterations,
            });
            format!("{v}\n")
        }
        Format::Csv => format!(
            "a_star,bracket_lo,bracket_hi,iterations\n{:?},{:?},{:?},{}\n",
            c.value, c.bracket_lo, c.bracket_hi, c.iterations
        ),
    })
}

fn constants(opts: &Options) -> Result<String, Failure> {
    let s = Solution::compute(&opts.solver_config())?;
    let c = s.constants;
    Ok(match opts.format(Format::Json) {
        Format::Json => format!("{}\n", serde_json::to_string(&c).expect("constants serialise")),
        Format::Csv => {
            let mut t = Table::new(&["a_star", "b_star", "c_star", "d_star", "amplitude_A", "phase_phi", "coeff_B"]);
            t.push_numbers(&[c.a_star, c.b_star, c.c_star, c.d_star, c.amplitude, c.phase_phi, c.coeff_b]);
            t.render(Format::Csv)
        }
    })
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if n == 1 {
            lo
        } else if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

fn profile(opts: &Options) -> Result<String, Failure> {
    let model = Solution::compute(&opts.solver_config())?.profile()?;
    let (lo, hi) = opts.range();
    let step = opts.step.unwrap_or(DEFAULT_STEP);
    let cells = ((hi - lo) / step).round().max(1.0) as usize;
    let mut t = Table::new(&["x", "y", "dy"]);
    for x in grid(lo, hi, cells + 1) {
        let s = model.evaluate(x);
        t.push_numbers(&[x, s.y, s.dy]);
    }
    Ok(t.render(opts.format(Format::Csv)))
}

fn pz(opts: &Options) -> Result<String, Failure> {
    let z0 = opts.z0.unwrap_or(phase::DEFAULT_Z0);
    let curve = phase::solve_p(z0, &IntegratorConfig::default()).map_err(Error::from)?;
    let mut t = Table::new(&["z", "P"]);
    for (z, p) in curve.samples(opts.samples.unwrap_or(DEFAULT_SAMPLES)) {
        t.push_numbers(&[z, p]);
    }
    Ok(t.render(opts.format(Format::Csv)))
}

fn radial(opts: &Options) -> Result<String, Failure> {
    let model = Solution::compute(&opts.solver_config())?.profile()?;
    let radial = RadialProfile::new(model, opts.r0.unwrap_or(1.0)).map_err(Error::from)?;
    let (lo, hi) = opts.range();
    let mut t = Table::new(&["r", "f", "regime", "small_r", "near_r0", "large_r"]);
    for x in grid(lo, hi, opts.samples.unwrap_or(DEFAULT_SAMPLES)) {
        let r = radial.r0() * x.exp();
        let f = radial.evaluate_f(r).map_err(Error::from)?;
        t.rows.push(vec![
            json!(r),
            json!(f),
            json!(Regime::of(x).label()),
            json!(radial.small_r(r)),
            json!(radial.near_r0(r)),
            json!(radial.large_r(r)),
        ]);
    }
    Ok(t.render(opts.format(Format::Csv)))
}

fn verify_cmd(opts: &Options) -> Result<(String, bool), Failure> {
    let s = Solution::compute(&opts.solver_config())?;
    let z0 = opts.z0.unwrap_or(phase::DEFAULT_Z0);
    let curve = phase::solve_p(z0, &s.config.integrator).map_err(Error::from)?;
    let checks = verify::run_checks(&s, &curve)?;
    let passed = checks.iter().all(|c| c.passed);
    let text = match (opts.json, opts.format) {
        (true, _) | (_, Some(Format::Json)) => {
            format!("{}\n", serde_json::to_string(&checks).expect("checks serialise"))
        }
        (_, Some(Format::Csv)) => {
            let mut out = String::from("name,measured,bound,passed\n");
            for c in &checks {
                let _ = writeln!(out, "{},{:?},{:?},{}", c.name, c.measured, c.bound, c.passed);
            }
            out
        }
        _ => {
            let mut out = String::new();
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{tag} {} measured={:?} bound={:?}", c.name, c.measured, c.bound);
            }
            out
        }
    };
    Ok((text, passed))
}

fn execute(cli: &Cli) -> Result<(String, bool), Failure> {
    cli.opts.validate()?;
    let o = &cli.opts;
    match cli.command {
        Command::CriticalSlope => critical_slope(o).map(|s| (s, true)),
        Command::Constants => constants(o).map(|s| (s, true)),
        Command::Profile => profile(o).map(|s| (s, true)),
        Command::Pz => pz(o).map(|s| (s, true)),
        Command::Radial => radial(o).map(|s| (s, true)),
        Command::Verify => verify_cmd(o),
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = execute(&cli).and_then(|(text, passed)| {
        match &cli.opts.out {
            Some(path) => std::fs::write(path, &text).map_err(Failure::Io)?,
            None => stdout.write_all(text.as_bytes()).map_err(Failure::Io)?,
        }
        Ok(passed)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(f) => {
            let msg = match f {
                Failure::Usage(m) => format!("error: {m}"),
                Failure::Run(e) => format!("error: {e}"),
                Failure::Io(e) => format!("error: {e}"),
            };
            let _ = writeln!(stderr, "{msg}");
            EXIT_ERROR
        }
    }
}
