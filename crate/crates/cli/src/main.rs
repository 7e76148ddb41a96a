use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellq::cgkit::{
    beta_power_bruteforce, cg_closed_form_variant, k_range, ClosedFormVariant, SingularVectorSpec,
};
use ellq::dynrep::phi_l;
use ellq::report::SuiteReport;
use ellq::rmatrix::{Normalization, RMatrix};
use ellq::series::{check_balanced, elliptic_v, frenkel_turaev_rhs, VSeriesSpec};
use ellq::suites::{run_suite, SuiteConfig, SUITE_NAMES};
use ellq::theta::{bracket, theta_big, DEFAULT_TOL, DEFAULT_TRUNC};
use ellq::{Error, ModularParams, C64};
use serde::Serialize;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ellq",
    version,
    about = "Numerical checks for the elliptic quantum group U_{q,p}(sl2^) at c = 0"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single quantity.
    Eval {
        #[command(subcommand)]
        what: EvalCmd,
    },
    /// Run verification suites and write a report.
    Suite(SuiteArgs),
}

#[derive(Args, Clone, Copy)]
struct Common {
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 3.0)]
    r: f64,
    /// Truncation order of the infinite products.
    #[arg(long, env = "ELLQ_TRUNC", default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
}

impl Common {
    fn params(&self) -> ellq::Result<ModularParams> {
        ModularParams::real(self.q, self.r)?.with_trunc(self.trunc)
    }
}

#[derive(Subcommand)]
enum EvalCmd {
    /// `Θ_p(z)` with `p = q^{2r}`.
    Theta {
        #[arg(long, value_parser = parse_c64)]
        z: C64,
        #[command(flatten)]
        common: Common,
    },
    /// `[u]`, or `[u]*` with `--r-star`.
    Bracket {
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        u: C64,
        #[arg(long)]
        r_star: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Terminating elliptic series.
    Series(SeriesArgs),
    /// `R^+(u, s)` as a 4x4 matrix.
    Rmat {
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        u: C64,
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        s: C64,
        /// Include the scalar factor `ρ^+(u)`.
        #[arg(long)]
        with_rho: bool,
        #[command(flatten)]
        common: Common,
    },
    /// `φ_l(u)`.
    #[command(name = "phi_l")]
    PhiL {
        #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
        u: C64,
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Coefficient of `v_k ⊗ v_{m+s-k}` in the length-`m` β-string on the singular vector.
    Cg(CgArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    #[value(name = "10V9")]
    TenVNine,
    #[value(name = "V")]
    General,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, value_enum, default_value = "10V9")]
    kind: SeriesKind,
    /// Frenkel–Turaev parameters.
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true, default_value = "0.31+0.12i")]
    a: C64,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true, default_value = "-0.27+0.05i")]
    b: C64,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true, default_value = "0.44-0.21i")]
    c: C64,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true, default_value = "0.13+0.33i")]
    d: C64,
    #[arg(long, default_value_t = 3)]
    s: usize,
    /// Also evaluate the product formula and print the residual.
    #[arg(long)]
    ft_check: bool,
    /// `u0` of a general series.
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    u0: Option<C64>,
    /// Numerator parameters of a general series (repeatable).
    #[arg(long = "param", value_parser = parse_c64, allow_hyphen_values = true)]
    params: Vec<C64>,
    #[arg(long, default_value_t = 3.3)]
    r: f64,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, env = "ELLQ_TRUNC", default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
}

#[derive(Args)]
struct CgArgs {
    #[arg(long)]
    l1: usize,
    #[arg(long)]
    l2: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    u: C64,
    #[arg(long = "P", value_parser = parse_c64, allow_hyphen_values = true)]
    p: C64,
    /// Evaluation point of the first module.
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true, default_value = "0.11+0.05i")]
    a: C64,
    /// Also print the brute-force coefficient.
    #[arg(long)]
    brute: bool,
    /// Use the uncorrected closed form (disagrees with brute force).
    #[arg(long)]
    uncorrected: bool,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 3.3)]
    r: f64,
    #[arg(long, env = "ELLQ_TRUNC", default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct SuiteArgs {
    /// Suites to run: theta, series, rmatrix, rll, halfcurrents, hopf, cg, lemmas, submodule, limits, all.
    #[arg(required = true, value_delimiter = ',')]
    names: Vec<String>,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 3.0)]
    r: f64,
    /// `r` for the representation suites; defaults to `r`, or `r + 0.3` when `r` is an integer.
    #[arg(long)]
    r_rep: Option<f64>,
    #[arg(long, env = "ELLQ_TRUNC", default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Record per-suite wall time in the report (makes it non-reproducible).
    #[arg(long)]
    timing: bool,
}

enum Failure {
    Usage(String),
    Domain(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Accepts `1.3`, `0.137i`, `1.3+0.137i`, `-2e-3-1i`.
fn parse_c64(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<C64>()
        .map_err(|_| format!("`{s}` is not a complex number of the form re+imi"))
}

fn fmt_c(z: C64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Command::Eval { what } => eval(what).map(|()| true),
        Command::Suite(args) => suite(args),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn eval(what: EvalCmd) -> Result<(), Failure> {
    match what {
        EvalCmd::Theta { z, common } => println!("{}", fmt_c(theta_big(z, &common.params()?)?)),
        EvalCmd::Bracket { u, r_star, common } => {
            let pm = common.params()?;
            let v = match r_star {
                Some(rs) => bracket(u, &pm.with_r_star(rs)?, true),
                None => bracket(u, &pm, false),
            };
            println!("{}", fmt_c(v));
        }
        EvalCmd::Series(a) => eval_series(a)?,
        EvalCmd::Rmat {
            u,
            s,
            with_rho,
            common,
        } => {
            let norm = if with_rho {
                Normalization::WithRho
            } else {
                Normalization::MatrixOnly
            };
            let m = RMatrix::new(u, s, norm, &common.params()?)?;
            for row in m.entries {
                println!(
                    "{}",
                    row.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join("  ")
                );
            }
        }
        EvalCmd::PhiL { u, l, common } => println!("{}", fmt_c(phi_l(u, l, &common.params()?)?)),
        EvalCmd::Cg(a) => eval_cg(a)?,
    }
    Ok(())
}

fn eval_series(a: SeriesArgs) -> Result<(), Failure> {
    let pm = ModularParams::real(a.q, a.r)?.with_trunc(a.trunc)?;
    let spec = match a.kind {
        SeriesKind::TenVNine => VSeriesSpec::frenkel_turaev(a.a, a.b, a.c, a.d, a.s, pm),
        SeriesKind::General => {
            let u0 =
                a.u0.ok_or_else(|| Failure::Usage("--kind V needs --u0 and --param".into()))?;
            VSeriesSpec::new(u0, a.params.clone(), pm)
        }
    };
    let lhs = elliptic_v(&spec)?;
    let (balanced, defect) = check_balanced(&spec);
    println!("series    {}", fmt_c(lhs));
    println!("balanced  {balanced} (defect {defect:.3e})");
    if a.ft_check {
        if !matches!(a.kind, SeriesKind::TenVNine) {
            return Err(Failure::Usage("--ft-check applies to --kind 10V9".into()));
        }
        let rhs = frenkel_turaev_rhs(a.a, a.b, a.c, a.d, a.s, &pm)?;
        println!("product   {}", fmt_c(rhs));
        println!(
            "residual  {:.3e}",
            (lhs - rhs).norm() / lhs.norm().max(rhs.norm())
        );
    }
    Ok(())
}

fn eval_cg(a: CgArgs) -> Result<(), Failure> {
    let pm = ModularParams::real(a.q, a.r)?.with_trunc(a.trunc)?;
    let spec = SingularVectorSpec::new(a.l1, a.l2, a.s, a.a)?;
    if a.m > spec.l() || !k_range(&spec, a.m).contains(&a.k) {
        return Err(Failure::Domain(format!(
            "no component k={} for m={} with l1={} l2={} s={}",
            a.k, a.m, a.l1, a.l2, a.s
        )));
    }
    let variant = if a.uncorrected {
        ClosedFormVariant::Uncorrected
    } else {
        ClosedFormVariant::Corrected
    };
    let v = cg_closed_form_variant(&spec, a.m, a.k, a.u, a.p, variant, &pm)?;
    println!("closed    {}", fmt_c(v));
    if a.brute {
        let b = beta_power_bruteforce(&spec, a.m, a.u, &pm)?.get(&[a.k, a.m + a.s - a.k], a.p);
        println!("brute     {}", fmt_c(b));
        println!("residual  {:.3e}", (v - b).norm() / v.norm().max(b.norm()));
    }
    Ok(())
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    config: SuiteConfig,
    pass: bool,
    suites: &'a [SuiteReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_s: Option<Vec<(String, f64)>>,
}

fn suite(a: SuiteArgs) -> Result<bool, Failure> {
    let mut names: Vec<&str> = Vec::new();
    for n in &a.names {
        match n.as_str() {
            "all" => names.extend(SUITE_NAMES),
            x if SUITE_NAMES.contains(&x) => names.push(x),
            x => {
                return Err(Failure::Usage(format!(
                    "unknown suite `{x}` (expected one of {}, all)",
                    SUITE_NAMES.join(", ")
                )))
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    names.retain(|n| seen.insert(*n));
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    if !(a.tol > 0.0) {
        return Err(Failure::Domain(format!(
            "--tol must be positive, got {}",
            a.tol
        )));
    }
    let cfg = SuiteConfig {
        q: a.q,
        r: a.r,
        r_rep: a.r_rep.unwrap_or_else(|| SuiteConfig::default_r_rep(a.r)),
        trunc: a.trunc,
        tol: a.tol,
        samples: a.samples,
        seed: a.seed,
    };
    cfg.base()?;
    if !cfg.base()?.with_tol(cfg.tol).truncation_ok() {
        eprintln!(
            "warning: truncation order {} may be too shallow for tol {:e}",
            cfg.trunc, cfg.tol
        );
    }
    let mut reports = Vec::new();
    let mut timing = Vec::new();
    for n in names {
        let t0 = Instant::now();
        let rep = run_suite(n, &cfg)?;
        let secs = t0.elapsed().as_secs_f64();
        let nfail = rep.failures().count();
        eprintln!(
            "{n:<13} {} {:>4} cases {:>3} failed  {secs:.2}s",
            if rep.pass { "PASS" } else { "FAIL" },
            rep.cases.len(),
            nfail
        );
        timing.push((n.to_string(), secs));
        reports.push(rep);
    }
    let pass = reports.iter().all(|r| r.pass);
    let text = match a.format {
        Format::Json => {
            let rep = Report {
                schema: "1",
                config: cfg,
                pass,
                suites: &reports,
                timing_s: a.timing.then_some(timing),
            };
            serde_json::to_string_pretty(&rep).map_err(|e| Failure::Io(e.to_string()))? + "\n"
        }
        Format::Csv => to_csv(&reports)?,
        Format::Table => to_table(&reports, a.timing.then_some(&timing)),
    };
    match &a.out {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(text.as_bytes()))
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(pass)
}

fn to_csv(reports: &[SuiteReport]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(["suite", "name", "residual", "threshold", "pass"])
        .map_err(io_err)?;
    for r in reports {
        for c in &r.cases {
            w.write_record([
                r.suite.as_str(),
                c.name.as_str(),
                &format!("{:e}", c.residual),
                &format!("{:e}", c.threshold),
                &c.pass.to_string(),
            ])
            .map_err(io_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}

fn to_table(reports: &[SuiteReport], timing: Option<&Vec<(String, f64)>>) -> String {
    let width = reports
        .iter()
        .flat_map(|r| r.cases.iter().map(|c| c.name.chars().count()))
        .max()
        .unwrap_or(4)
        .max(4);
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        let t = timing.map_or(String::new(), |t| format!(" ({:.2}s)", t[i].1));
        out += &format!(
            "== {} {}{t}\n",
            r.suite,
            if r.pass { "PASS" } else { "FAIL" }
        );
        for c in &r.cases {
            let rel = if c.expect == ellq::report::Expect::Above {
                '>'
            } else {
                '<'
            };
            out += &format!(
                "{:<4} {:<width$}  {:>10.3e} {rel} {:.0e}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.residual,
                c.threshold
            );
        }
    }
    out
}
