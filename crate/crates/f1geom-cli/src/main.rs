//! Command line front end: spectra, counts, zeta divisors, zero tables,
//! reconstruction CSVs, and the verification suites. Output is canonical:
//! byte-identical across runs and worker counts.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use f1geom::analytic::arith::PrimeSieve;
use f1geom::analytic::constants::constants;
use f1geom::analytic::explicit::{
    density_remark, omega_partial, reconstruction_rows, sup_error, zero_sum_identities,
};
use f1geom::analytic::mellin::mellin_check;
use f1geom::analytic::zeros::{zeros_cached, MAX_ZEROS};
use f1geom::monoid::{parse_monoid_json, FinMonoid, MonoidInput, SymMonoid as MonoidSym};
use f1geom::scheme::{
    counting_polynomial, parse_scheme_json, points_over_f1n, proj_line_points, realize,
    CountingPoly, GeoScheme, P1Chart, SchemeDescriptor, SchemeKind,
};
use f1geom::verify;
use f1geom::zeta::{soule_limit, zeta_from_scheme, SOULE_DEFAULT_EPS};

#[derive(Parser)]
#[command(
    name = "f1geom",
    version,
    about = "Monoid spectra, point counts over F1 extensions and finite fields, \
             zeta divisors, zeros, and the counting reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prime spectrum of a monoid: points, local dimensions, topology.
    Spec {
        /// Monoid JSON file (explicit table, {"f1group":…}, or {"free":N}).
        #[arg(long)]
        monoid: PathBuf,
    },
    /// Point counts over F1 extensions, and N(x) when it is a polynomial.
    Count {
        /// Scheme: P1 | affine:N | torus:R | mu:D | spec:FILE | FILE.json
        #[arg(long)]
        scheme: String,
        /// Count points over F_{1^n} for this single n.
        #[arg(long)]
        n: Option<u64>,
        /// Count for every n from 1 to this bound.
        #[arg(long = "all-upto")]
        all_upto: Option<u64>,
    },
    /// Zeta divisor of a scheme, optionally re-derived as a numeric limit.
    Zeta {
        #[arg(long)]
        scheme: String,
        /// Compare the divisor against the q -> 1 limit at this s.
        #[arg(long = "soule-check")]
        soule_check: Option<f64>,
    },
    /// Projective line over a monoid: point classes and chart table.
    P1 {
        #[arg(long)]
        monoid: PathBuf,
    },
    /// Ordinates of the first zeros on the critical line.
    Zeros {
        /// How many zeros (at most 1000).
        #[arg(long)]
        count: usize,
        /// Cache file, reused when its header and count match.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Exact vs truncated counting function on a grid, written as CSV.
    Explicit {
        /// Zero pairs in the truncation.
        #[arg(long)]
        pairs: usize,
        /// Grid start:stop:step, e.g. 2:10:0.05.
        #[arg(long)]
        grid: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Verification suites; nonzero exit on any tolerance breach.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Zero pairs for the identities suite.
        #[arg(long, default_value_t = 500)]
        pairs: usize,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Identities,
    Mellin,
    Density,
    All,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. `f1geom zeros ... | head`) instead
    // of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Spec { monoid } => cmd_spec(&monoid),
        Cmd::Count { scheme, n, all_upto } => cmd_count(&scheme, n, all_upto),
        Cmd::Zeta { scheme, soule_check } => cmd_zeta(&scheme, soule_check),
        Cmd::P1 { monoid } => cmd_p1(&monoid),
        Cmd::Zeros { count, cache } => cmd_zeros(count, cache.as_deref()),
        Cmd::Explicit { pairs, grid, out, cache } => {
            cmd_explicit(pairs, &grid, &out, cache.as_deref())
        }
        Cmd::Verify { suite, pairs, cache } => cmd_verify(suite, pairs, cache.as_deref()),
    }
}

fn err_str<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn read_to_string(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn monoid_from_file(path: &Path) -> Result<MonoidInput, String> {
    parse_monoid_json(&read_to_string(path)?).map_err(err_str)
}

/// Inline scheme grammar, or a JSON descriptor file.
fn scheme_from_arg(arg: &str) -> Result<SchemeDescriptor, String> {
    if arg == "P1" {
        return Ok(SchemeDescriptor::P1);
    }
    if let Some(rest) = arg.strip_prefix("affine:") {
        let n: usize = rest.parse().map_err(|_| format!("bad dimension {rest:?}"))?;
        return Ok(SchemeDescriptor::Affine(n));
    }
    if let Some(rest) = arg.strip_prefix("torus:") {
        let r: usize = rest.parse().map_err(|_| format!("bad rank {rest:?}"))?;
        return Ok(SchemeDescriptor::Torus(r));
    }
    if let Some(rest) = arg.strip_prefix("mu:") {
        let d: u64 = rest.parse().map_err(|_| format!("bad order {rest:?}"))?;
        return Ok(SchemeDescriptor::Mu(d));
    }
    if let Some(rest) = arg.strip_prefix("spec:") {
        return Ok(SchemeDescriptor::Spec(monoid_from_file(Path::new(rest))?));
    }
    if arg.ends_with(".json") {
        return parse_scheme_json(&read_to_string(Path::new(arg))?).map_err(err_str);
    }
    Err(format!(
        "unrecognized scheme {arg:?}; use P1 | affine:N | torus:R | mu:D | spec:FILE | FILE.json"
    ))
}

fn kind_name(x: &GeoScheme) -> String {
    match &x.kind {
        SchemeKind::P1 => "projective line".to_string(),
        SchemeKind::AffineFin(m) => format!("spectrum of a {}-element monoid", m.size()),
        SchemeKind::AffineSym(MonoidSym::FreeMonoid(n)) => {
            format!("spectrum of the free monoid on {n} generators")
        }
        SchemeKind::AffineSym(MonoidSym::F1Group(g)) => {
            format!("spectrum of the group monoid of {g}")
        }
    }
}

fn cmd_spec(path: &Path) -> Result<ExitCode, String> {
    let x = match monoid_from_file(path)? {
        MonoidInput::Fin(m) => f1geom::scheme::spec_space(&m).map_err(err_str)?,
        MonoidInput::Sym(s) => f1geom::scheme::spec_space_sym(&s).map_err(err_str)?,
    };
    println!("{}: {} points, {} opens", kind_name(&x), x.points.len(), x.opens.len());
    for (i, p) in x.points.iter().enumerate() {
        println!("point {i}: prime {} dim {} units {}", p.label, p.dim(), p.stalk_units);
    }
    let mut line = String::from("opens:");
    for &o in &x.opens {
        let mut set = String::new();
        for i in 0..x.points.len() {
            if o >> i & 1 == 1 {
                if !set.is_empty() {
                    set.push(' ');
                }
                let _ = write!(set, "{i}");
            }
        }
        let _ = write!(line, " {{{set}}}");
    }
    println!("{line}");
    Ok(ExitCode::SUCCESS)
}

fn poly_string(poly: &CountingPoly) -> Option<String> {
    let coeffs = poly.coefficients()?;
    let mut out = String::new();
    for (k, &a) in coeffs.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mag = a.unsigned_abs();
        if out.is_empty() {
            if a < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if a < 0 { " - " } else { " + " });
        }
        let show_coeff = mag != 1 || k == 0;
        if show_coeff {
            let _ = write!(out, "{mag}");
        }
        match k {
            0 => {}
            1 => out.push('x'),
            _ => {
                let _ = write!(out, "x^{k}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    Some(out)
}

fn cmd_count(scheme: &str, n: Option<u64>, all_upto: Option<u64>) -> Result<ExitCode, String> {
    let x = realize(&scheme_from_arg(scheme)?).map_err(err_str)?;
    match (n, all_upto) {
        (Some(k), None) => {
            println!("{}", points_over_f1n(&x, k).map_err(err_str)?);
        }
        (None, Some(bound)) => {
            if bound == 0 {
                return Err("--all-upto needs a bound of at least 1".into());
            }
            for k in 1..=bound {
                println!("n={k} {}", points_over_f1n(&x, k).map_err(err_str)?);
            }
            let poly = counting_polynomial(&x).map_err(err_str)?;
            if let Some(s) = poly_string(&poly) {
                println!("N(x) = {s}");
            }
        }
        _ => return Err("pass exactly one of --n or --all-upto".into()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_zeta(scheme: &str, soule_check: Option<f64>) -> Result<ExitCode, String> {
    let x = realize(&scheme_from_arg(scheme)?).map_err(err_str)?;
    let divisor = zeta_from_scheme(&x).map_err(err_str)?;
    println!("{divisor}");
    if let Some(s) = soule_check {
        let poly = counting_polynomial(&x).map_err(err_str)?;
        let exact = divisor.eval(s).map_err(err_str)?;
        let limit = soule_limit(&poly, s, &SOULE_DEFAULT_EPS).map_err(err_str)?;
        let rel = (limit - exact).abs() / exact.abs();
        let ok = rel <= 1e-3;
        println!(
            "soule s={s}: limit {limit:.10e} divisor {exact:.10e} rel {rel:.3e} {}",
            if ok { "ok" } else { "breach" }
        );
        if !ok {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn chart_name(c: &P1Chart) -> &'static str {
    match c {
        P1Chart::Zero => "zero",
        P1Chart::Unit => "unit",
        P1Chart::Infinity => "infinity",
    }
}

fn cmd_p1(path: &Path) -> Result<ExitCode, String> {
    let m: FinMonoid = match monoid_from_file(path)? {
        MonoidInput::Fin(m) => m,
        MonoidInput::Sym(s) => s.materialize().map_err(err_str)?,
    };
    let report = proj_line_points(&m).map_err(err_str)?;
    let (umask, _) = m.units();
    let units = f1geom::monoid::set_len(umask);
    println!(
        "|M| = {}, units {units}, classes {} = 2*{} - {units}",
        m.size(),
        report.points.len(),
        m.size()
    );
    for (k, range) in report.points.iter().enumerate() {
        println!(
            "class {k}: chart {} range-size {}",
            chart_name(&report.chart[k]),
            range.len()
        );
    }
    println!("overlap classes {}", report.overlap.len());
    println!("all ranges classified: {}", report.all_ranges_classified);
    Ok(ExitCode::SUCCESS)
}

fn cmd_zeros(count: usize, cache: Option<&Path>) -> Result<ExitCode, String> {
    if count == 0 || count > MAX_ZEROS {
        return Err(format!("--count must be between 1 and {MAX_ZEROS}"));
    }
    let table = zeros_cached(count, cache).map_err(err_str)?;
    println!("zeros {} precision {:.0e}", table.len(), table.precision);
    for (k, t) in table.heights.iter().enumerate() {
        println!("{} {t:.10}", k + 1);
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_grid(grid: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid {grid:?} is not start:stop:step"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse().map_err(|_| format!("bad grid number {p:?}")))
        .collect::<Result<_, _>>()?;
    Ok((nums[0], nums[1], nums[2]))
}

fn cmd_explicit(
    pairs: usize,
    grid: &str,
    out: &Path,
    cache: Option<&Path>,
) -> Result<ExitCode, String> {
    if pairs == 0 || pairs > MAX_ZEROS {
        return Err(format!("--pairs must be between 1 and {MAX_ZEROS}"));
    }
    let (lo, hi, step) = parse_grid(grid)?;
    let c = constants().map_err(err_str)?;
    let table = zeros_cached(pairs, cache).map_err(err_str)?;
    let rows = reconstruction_rows(&table.heights[..pairs], &c, lo, hi, step).map_err(err_str)?;
    let mut file = std::io::BufWriter::new(
        fs::File::create(out).map_err(|e| format!("{}: {e}", out.display()))?,
    );
    let emit = |f: &mut dyn std::io::Write| -> std::io::Result<()> {
        writeln!(f, "u,J_exact,J_m,abs_err")?;
        for r in &rows {
            writeln!(f, "{:.10},{:.10},{:.10},{:.10}", r.u, r.exact, r.truncated, r.abs_err)?;
        }
        Ok(())
    };
    emit(&mut file).map_err(|e| format!("{}: {e}", out.display()))?;
    file.flush().map_err(err_str)?;
    println!(
        "wrote {}: {} rows, sup {:.10}",
        out.display(),
        rows.len(),
        sup_error(&rows, 0.0)
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: Suite, pairs: usize, cache: Option<&Path>) -> Result<ExitCode, String> {
    match suite {
        Suite::All => {
            if pairs != 500 {
                return Err("the full suite is pinned at --pairs 500".into());
            }
            let results = verify::run_all(cache);
            let mut ok = true;
            for r in &results {
                println!("{r}");
                ok &= r.pass;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Suite::Identities => {
            if pairs == 0 || pairs > MAX_ZEROS {
                return Err(format!("--pairs must be between 1 and {MAX_ZEROS}"));
            }
            let c = constants().map_err(err_str)?;
            let table = zeros_cached(pairs, cache).map_err(err_str)?;
            let zeros = &table.heights[..pairs];
            let report = zero_sum_identities(zeros, &c);
            let omega = omega_partial(1.0, zeros).map_err(err_str)?;
            let omega_res = (omega - c.omega_one).abs();
            println!("pairs {pairs}");
            let mut ok = true;
            let mut line = |label: &str, partial: f64, target: f64, residual: f64| {
                let pass = residual <= 5e-3;
                ok &= pass;
                println!(
                    "{label:<14} partial {partial:.10} target {target:.10} residual {residual:.3e} {}",
                    if pass { "ok" } else { "breach" }
                );
            };
            line("inv_rho", report.inv_rho.partial, report.inv_rho.target, report.inv_rho.residual);
            line(
                "inv_rho_rho1",
                report.inv_rho_rho1.partial,
                report.inv_rho_rho1.target,
                report.inv_rho_rho1.residual,
            );
            line("inv_rho1", report.inv_rho1.partial, report.inv_rho1.target, report.inv_rho1.residual);
            line("omega_at_one", omega, c.omega_one, omega_res);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Suite::Mellin => {
            let c = constants().map_err(err_str)?;
            let sieve = PrimeSieve::new(10_000_000);
            let mut ok = true;
            for (s, tol) in [(2.0f64, 1e-3), (3.0, 1e-4)] {
                let r = mellin_check(s, 1e5, &c, &sieve).map_err(err_str)?;
                let pass = r.residual <= tol;
                ok &= pass;
                println!(
                    "s={s} lhs {:.10} rhs {:.10} residual {:.3e} tol {tol:.0e} {}",
                    r.lhs,
                    r.rhs,
                    r.residual,
                    if pass { "ok" } else { "breach" }
                );
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Suite::Density => {
            let c = constants().map_err(err_str)?;
            let rows = density_remark(&[1e-2, 1e-4, 1e-6, 1e-8], &c).map_err(err_str)?;
            for r in &rows {
                println!(
                    "eps {:.0e} density {:.6} reference {:.6} ratio {:.6}",
                    r.eps, r.density, r.reference, r.ratio
                );
            }
            let last = rows.last().expect("fixed list").ratio;
            let ok = (0.85..=1.2).contains(&last)
                && rows.windows(2).all(|w| (1.0 - w[1].ratio).abs() < (1.0 - w[0].ratio).abs());
            println!("band [0.85, 1.2] at eps 1e-8: {}", if ok { "ok" } else { "breach" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
