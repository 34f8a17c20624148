//! The `ffgeom` command-line tool.
//!
//! Every command calls straight into the library and prints `key value`
//! lines (`--output record`, the default) or an aligned table.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dirichlet::{dirichlet_solve, dirichlet_verify, DirichletInstance};
use crate::error::Error;
use crate::field::FieldSpec;
use crate::lattice::{
    covering_oracle, covrad_body, covrad_cube, is_well_rounded, minima, parse_lattice_file, verify_profile,
    ConvexBody, LatticeBasis,
};
use crate::minkmu::{mu_brute_oracle, mu_exact, MuDecider, MuInstance, MuStrategy};
use crate::mordell::{is_admissible, kappa_search, wr_box_certificate, BoxExponents};
use crate::orbit::{search_wellrounded_shift, SearchStage};
use crate::parse::parse_ratfunc;
use crate::ratfunc::{AbsValue, LaurentTail, RatFunc};
use crate::selftest::run_selftest;

pub const WORKERS_ENV: &str = "FFGEOM_WORKERS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Table,
    #[default]
    Record,
}

#[derive(Debug, Parser)]
#[command(name = "ffgeom", version, about = "Exact geometry of numbers over F_q((1/x))")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Lattice file
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Convex body file (same format; its matrix is the body's shape)
    #[arg(long, global = true)]
    pub body: Option<PathBuf>,
    /// Field size (a prime)
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Dimension for `mu` (2 or 3)
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// Rational function; repeat for several Dirichlet targets
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Vec<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Dirichlet degree budget, or box exponent for `mordell`; repeatable
    #[arg(long = "t", global = true, allow_negative_numbers = true)]
    pub t: Vec<i64>,
    /// Threshold for the `mu` decision `μ <= q^-T`
    #[arg(long = "T", global = true, allow_negative_numbers = true)]
    pub threshold: Option<i64>,
    /// Search cap for well-rounded shifts
    #[arg(long, global = true, default_value_t = 10)]
    pub cap: u32,
    /// Exponent window for the κ search
    #[arg(long, global = true, default_value_t = 6, allow_negative_numbers = true)]
    pub window: i64,
    /// Digits for the brute-force oracles
    #[arg(long, global = true)]
    pub precision: Option<i64>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Record)]
    pub output: OutputMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Successive minima and a reduced basis
    Minima,
    /// The decomposition u g h = diag(x^e)
    Decompose,
    /// Covering radius for the unit cube or `--body`
    Covrad,
    /// Well-roundedness test and shift search
    Wellround,
    /// Minkowski function of a unipotent lattice (`--T` for a single decision)
    Mu,
    /// Admissible boxes, κ search, and the well-rounded certificate
    Mordell,
    /// Improved Dirichlet approximation
    Dirichlet,
    /// Runs the built-in invariant checks
    Selftest,
}

/// Failure of a command: usage problems exit with 2, domain errors with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

fn classify(context: &str, e: Error) -> CliError {
    let msg = if context.is_empty() {
        e.to_string()
    } else {
        format!("{context}: {e}")
    };
    match e {
        Error::Parse { .. }
        | Error::LatticeFile { .. }
        | Error::NotPrime(_)
        | Error::ZeroDenominator
        | Error::NotFiniteTail
        | Error::BadThreshold(_) => CliError::Usage(msg),
        _ => CliError::Domain(msg),
    }
}

fn domain(e: Error) -> CliError {
    classify("", e)
}

/// Result lines in output order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn lines(&self) -> &[(String, String)] {
        &self.lines
    }
}

/// `key value` per line.
pub fn emit_record(report: &Report) -> String {
    report
        .lines
        .iter()
        .map(|(k, v)| format!("{k} {v}\n"))
        .collect()
}

fn emit_table(report: &Report) -> String {
    let w = report.lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    report
        .lines
        .iter()
        .map(|(k, v)| format!("{k:<w$}  {v}\n"))
        .collect()
}

fn exps(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn entries(v: &[RatFunc]) -> String {
    v.iter().map(RatFunc::to_string).collect::<Vec<_>>().join(" ")
}

fn load_lattice(path: &Path) -> Result<LatticeBasis, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_lattice_file(&text).map_err(|e| classify(&path.display().to_string(), e))
}

fn need_file(cfg: &CommandConfig) -> Result<LatticeBasis, CliError> {
    let path = cfg.file.as_ref().ok_or_else(|| CliError::Usage("--file is required".into()))?;
    load_lattice(path)
}

fn need_field(cfg: &CommandConfig) -> Result<FieldSpec, CliError> {
    let q = cfg.q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
    FieldSpec::new(q).map_err(|e| classify("--q", e))
}

fn parse_arg(field: FieldSpec, flag: &str, text: &str) -> Result<RatFunc, CliError> {
    parse_ratfunc(field, text).map_err(|e| classify(&format!("{flag} \"{text}\""), e))
}

fn tail_arg(field: FieldSpec, flag: &str, text: &str) -> Result<LaurentTail, CliError> {
    parse_arg(field, flag, text)?
        .tail()
        .map_err(|e| classify(&format!("{flag} \"{text}\""), e))
}

fn cmd_minima(cfg: &CommandConfig, out: &mut Report) -> Result<(), CliError> {
    let lat = need_file(cfg)?;
    let prof = minima(&lat).map_err(domain)?;
    out.push("lambda", exps(&prof.exponents));
    out.push("det_exponent", lat.det_exponent());
    for (j, col) in prof.reduced_basis.columns().iter().enumerate() {
        out.push(format!("reduced_col_{}", j + 1), entries(col));
    }
    Ok(())
}

fn cmd_decompose(cfg: &CommandConfig, out: &mut Report) -> Result<(), CliError> {
    let lat = need_file(cfg)?;
    let prof = minima(&lat).map_err(domain)?;
    out.push("lambda", exps(&prof.exponents));
    for i in 0..lat.dim() {
        out.push(format!("u_row_{}", i + 1), entries(prof.transform_u.row(i)));
    }
    for i in 0..lat.dim() {
        let row: Vec<String> = (0..lat.dim()).map(|j| prof.transform_h[(i, j)].to_string()).collect();
        out.push(format!("h_row_{}", i + 1), row.join(" "));
    }
    match verify_profile(&lat, &prof) {
        Ok(()) => out.push("verified", true),
        Err(m) => return Err(CliError::Domain(format!("decomposition check failed: {m}"))),
    }
    Ok(())
}

fn cmd_covrad(cfg: &CommandConfig, out: &mut Report) -> Result<(), CliError> {
    let lat = need_file(cfg)?;
    let r = match &cfg.body {
        Some(path) => {
            let shape = load_lattice(path)?;
            let body = ConvexBody::new(shape.basis().clone()).map_err(domain)?;
            out.push("body_volume_exponent", body.volume_exponent());
            covrad_body(&lat, &body).map_err(domain)?
        }
        None => covrad_cube(&lat).map_err(domain)?,
    };
    out.push("covrad", r);
    if let (Some(p), None) = (cfg.precision, &cfg.body) {
        let e = r.exponent().expect("covering radius is positive");
        let covers = covering_oracle(&lat, e, p).map_err(domain)?;
        let below = covering_oracle(&lat, e - 1, p).map_err(domain)?;
        out.push("oracle_agrees", covers && !below);
    }
    Ok(())
}

fn cmd_wellround(cfg: &CommandConfig, out: &mut Report) -> Result<(), CliError> {
    let lat = need_file(cfg)?;
    out.push("well_rounded", is_well_rounded(&lat).map_err(domain)?);
    match search_wellrounded_shift(&lat, cfg.cap) {
        Ok(s) => {
            out.push("wr_shift", &s.shift);
            let stage = match s.stage {
                SearchStage::Greedy => "greedy",
                SearchStage::Exhaustive => "exhaustive",
            };
            out.push("wr_stage", stage);
            let shifted = lat.x_scaled(s.shift.entries()).map_err(domain)?;
            out.push("shifted_lambda", exps(&minima(&shifted).map_err(domain)?.exponents));
            Ok(())
        }
        Err(Error::NotFoundAtCap { cap, best }) => {
            out.push("wr_shift", format!("not_found cap {cap}"));
            out.push("wr_best", &best);
            Err(CliError::Domain(format!("no well-rounded shift with |a| <= {cap}")))
        }
        Err(e) => Err(domain(e)),
    }
}

fn mu_instance(cfg: &CommandConfig) -> Result<MuInstance, CliError> {
    let f = need_field(cfg)?;
    let [theta] = cfg.theta.as_slice() else {
        return Err(CliError::Usage("mu needs exactly one --theta".into()));
    };
    let d = cfg.d.unwrap_or(if cfg.phi.is_some() { 3 } else { 2 });
    let theta = tail_arg(f, "--theta", theta)?;
    match (d, &cfg.phi) {
        (2, None) => Ok(MuInstance::dim2(theta)),
        (3, Some(phi)) => MuInstance::dim3(theta, tail_arg(f, "--phi", phi)?).map_err(domain),
        (3, None) => MuInstance::dim3(theta, LaurentTail::zero(f)).map_err(domain),
        (2, Some(_)) => Err(CliError::Usage("--phi needs --d 3".into())),
        (d, _) => Err(CliError::Usage(format!("--d {d}: only dimensions 2 and 3 are supported"))),
    }
}

fn cmd_mu(cfg: &CommandConfig, out: &mut Report) -> Result<(), CliError> {
    let inst = mu_instance(cfg)?;
    if let Some(p) = cfg.precision {
        let p = usize::try_from(p).map_err(|_| CliError::Usage(format!("--precision {p}")))?;
        let r = mu_brute_oracle(&inst, p).map_err(domain)?;
        out.push("mu_oracle", r.value);
        return Ok(());
    }
    match cfg.threshold {
        Some(t) => {
            if t < 0 {
                return Err(classify("--T", Error::BadThreshold(t)));
            }
            let decider = MuDecider::new(&inst, MuStrategy::default()).map_err(domain)?;
            let res = decider.decide(t).map_err(domain)?;
            out.push("mu_le", format!("q^{} {}", -t, res.is_ok()));
            if let Err(w) = res {
                push_witness(out, &w.to_string());
            }
        }
        None => {
            let r = mu_exact(&inst).map_err(domain)?;
            out.push("mu", r.value);
            if let Some(w) = &r.witness {
                push_witness(out, &w.to_string());
            }
        }
    }
    Ok(())
}

fn push_witness(out: &mut Report, text: &str) {
    let (k, v) = text.split_once(' ').expect("witness text has a key");
    out.push(k, v);
}

fn cmd_mordell(cfg: &CommandConfig, out: &mut Report) -> Result<(), CliError> {
    let lat = need_file(cfg)?;
    let d = lat.dim();
    if !cfg.t.is_empty() {
        if cfg.t.len() != d {
            return Err(CliError::Usage(format!("expected {d} box exponents via --t, found {}", cfg.t.len())));
        }
        let b = BoxExponents::new(cfg.t.clone());
        out.push("box", &b);
        out.push("admissible", is_admissible(&lat, &b).map_err(domain)?);
    }
    lat.require_unimodular().map_err(domain)?;
    let b0 = BoxExponents::b0(d, d as i64 - 1);
    out.push("b0_box", &b0);
    out.push("b0_admissible", is_admissible(&lat, &b0).map_err(domain)?);
    let k = kappa_search(&lat, cfg.window).map_err(domain)?;
    match &k.best_box {
        Some(b) => {
            out.push("kappa_exponent", b.volume_exponent());
            out.push("kappa_box", b);
        }
        None => out.push("kappa_exponent", "none_in_window"),
    }
    out.push("bound_confirmed", k.bound_confirmed);
    match wr_box_certificate(&lat, cfg.cap) {
        Ok((a, b)) => {
            out.push("wr_shift", &a);
            out.push("wr_box", &b);
            out.push("wr_box_admissible", is_admissible(&lat, &b).map_err(domain)?);
            Ok(())
        }
        Err(Error::NotFoundAtCap { cap, best }) => {
            out.push("wr_shift", format!("not_found cap {cap}"));
            out.push("wr_best", &best);
            Err(CliError::Domain(format!("no well-rounded shift with |a| <= {cap}")))
        }
        Err(e) => Err(domain(e)),
    }
}

fn cmd_dirichlet(cfg: &CommandConfig, out: &mut Report) -> Result<(), CliError> {
    let f = need_field(cfg)?;
    if cfg.theta.is_empty() {
        return Err(CliError::Usage("dirichlet needs at least one --theta".into()));
    }
    if cfg.t.len() != cfg.theta.len() {
        return Err(CliError::Usage(format!(
            "{} --theta values but {} --t budgets",
            cfg.theta.len(),
            cfg.t.len()
        )));
    }
    let thetas = cfg
        .theta
        .iter()
        .map(|s| {
            let r = parse_arg(f, "--theta", s)?;
            if r.abs() >= AbsValue::ONE {
                return Err(CliError::Usage(format!("--theta \"{s}\": must satisfy |θ| < 1")));
            }
            r.tail().map_err(|e| classify(&format!("--theta \"{s}\""), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ts = cfg
        .t
        .iter()
        .map(|&t| usize::try_from(t).map_err(|_| CliError::Usage(format!("--t {t}: budgets are nonnegative"))))
        .collect::<Result<Vec<_>, _>>()?;
    let inst = DirichletInstance::new(f, thetas, ts).map_err(domain)?;
    let sol = dirichlet_solve(&inst).map_err(domain)?;
    let ok = dirichlet_verify(&inst, &sol).map_err(domain)?;
    out.push("b", sol.bs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
    out.push("a", &sol.a);
    out.push("err", sol.achieved);
    out.push("bound", AbsValue::Power(-(inst.target() as i64)));
    out.push("verified", ok);
    if ok {
        Ok(())
    } else {
        Err(CliError::Domain("solution failed verification".into()))
    }
}

fn cmd_selftest(out: &mut Report) -> Result<(), CliError> {
    let checks = run_selftest(2024);
    let mut all = true;
    for c in &checks {
        all &= c.passed;
        out.push(
            format!("selftest_{}", c.name),
            format!("{} {}", if c.passed { "pass" } else { "fail" }, c.cases),
        );
    }
    if all {
        Ok(())
    } else {
        Err(CliError::Domain("selftest failures".into()))
    }
}

fn workers(cfg: &CommandConfig) -> Result<Option<usize>, CliError> {
    if let Some(w) = cfg.workers {
        return Ok(Some(w));
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{WORKERS_ENV}={v}: expected a worker count"))),
        Err(_) => Ok(None),
    }
}

/// Runs one parsed command, returning its report; on failure the partial
/// report is returned alongside the error.
pub fn execute(cfg: &CommandConfig) -> (Report, Result<(), CliError>) {
    let mut out = Report::default();
    let res = workers(cfg).and_then(|w| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = w {
            if n == 0 {
                return Err(CliError::Usage("--workers must be positive".into()));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Domain(format!("thread pool: {e}")))?;
        pool.install(|| match cfg.command {
            Command::Minima => cmd_minima(cfg, &mut out),
            Command::Decompose => cmd_decompose(cfg, &mut out),
            Command::Covrad => cmd_covrad(cfg, &mut out),
            Command::Wellround => cmd_wellround(cfg, &mut out),
            Command::Mu => cmd_mu(cfg, &mut out),
            Command::Mordell => cmd_mordell(cfg, &mut out),
            Command::Dirichlet => cmd_dirichlet(cfg, &mut out),
            Command::Selftest => cmd_selftest(&mut out),
        })
    });
    (out, res)
}

/// Parses `args` (including the program name), runs the command, writes to
/// stdout/stderr and returns the exit status.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (report, res) = execute(&cfg);
    let text = match cfg.output {
        OutputMode::Record => emit_record(&report),
        OutputMode::Table => emit_table(&report),
    };
    print!("{text}");
    match res {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> (String, i32) {
        let cfg = CommandConfig::try_parse_from(std::iter::once("ffgeom").chain(args.iter().copied())).unwrap();
        let (r, res) = execute(&cfg);
        (emit_record(&r), res.map_or_else(|e| e.exit_code(), |()| 0))
    }

    #[test]
    fn record_lines() {
        let mut r = Report::default();
        r.push("mu", AbsValue::Power(-3));
        r.push("lambda", exps(&[0, 0]));
        assert_eq!(emit_record(&r), "mu q^-3\nlambda 0 0\n");
        assert_eq!(emit_table(&r), "mu      q^-3\nlambda  0 0\n");
    }

    #[test]
    fn mu_commands() {
        let (out, code) = exec(&["mu", "--q", "2", "--theta", "1/x"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("mu q^-2\nuncovered alpha="));
        let (out, _) = exec(&["mu", "--q", "3", "--d", "3", "--theta", "0", "--phi", "0", "--T", "4"]);
        assert!(out.starts_with("mu_le q^-4 false\n"));
        let (out, _) = exec(&["mu", "--q", "2", "--theta", "1/x", "--precision", "3"]);
        assert_eq!(out, "mu_oracle q^-2\n");
        assert_eq!(exec(&["mu", "--q", "4", "--theta", "1/x"]).1, 2);
        assert_eq!(exec(&["mu", "--q", "3", "--theta", "1/(x+1)"]).1, 2);
        assert_eq!(exec(&["mu", "--q", "3", "--theta", "1/x+"]).1, 2);
    }

    #[test]
    fn dirichlet_command() {
        let (out, code) = exec(&["dirichlet", "--q", "2", "--theta", "1/x", "--t", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out, "b 1\na 0\nerr q^-1\nbound q^-1\nverified true\n");
        assert_eq!(exec(&["dirichlet", "--q", "2", "--theta", "x", "--t", "0"]).1, 2);
        assert_eq!(exec(&["dirichlet", "--q", "2", "--theta", "1/x", "--t", "-1"]).1, 2);
    }
}
