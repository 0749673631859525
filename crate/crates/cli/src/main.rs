//! wzr: exact perturbative solution and Borel-Écalle resummation of the
//! Wess-Zumino two-point function.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 unwritable path,
//! 3 check failure. Diagnostics go to stderr; the summary to stdout.

mod cache;
mod checks;

use cache::CacheFile;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wzresum::averages::{weight_table, AverageSpec, Sign};
use wzresum::borelplane::{gevrey_fit, singularity_scan};
use wzresum::coeffring::zeta::zeta_eval;
use wzresum::coeffring::Rational;
use wzresum::model::{mellin_coeffs, solve_sde};
use wzresum::resum::{ResumConfig, ResumContext};

#[derive(Parser)]
#[command(name = "wzr", version, about = "Wess-Zumino SDE/RGE solver and Borel-Ecalle resummation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Truncation order N of the series solve.
    #[arg(long)]
    order: Option<usize>,
    /// Decimal precision for exact -> numeric evaluation.
    #[arg(long, default_value_t = 64)]
    precision: u32,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the coefficient table, write the cache and a CSV summary.
    Coefficients {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the verification battery against the cache (or a fresh solve).
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// Polydisc radius for the kernel sup (0 < r < 1/2).
        #[arg(long, default_value_t = 0.4)]
        radius: f64,
        /// Run only the named check (repeatable, comma lists accepted).
        #[arg(long)]
        only: Vec<String>,
        /// List the available check names and exit.
        #[arg(long)]
        list_checks: bool,
        /// Seed recorded in the report (the battery is deterministic).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Resummed values of gamma and G over coupling/kinematic grids.
    Resum {
        #[command(flatten)]
        common: CommonOpts,
        /// Average: lateral+, lateral-, median, or catalan:P/Q.
        #[arg(long, default_value = "median")]
        average: String,
        /// Borel-plane truncation radius.
        #[arg(long = "R", default_value_t = 0.6)]
        radius_r: f64,
        /// Relative quadrature tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Kinematic values, comma-separated.
        #[arg(long = "L", value_delimiter = ',', default_value = "0,0.5,1")]
        l_values: Vec<f64>,
        /// Coupling grid, comma-separated.
        #[arg(long = "a-grid", value_delimiter = ',', default_value = "0.01,0.02,0.03,0.05,0.08")]
        a_grid: Vec<f64>,
        /// Also compute RGE residuals at each (a, L).
        #[arg(long)]
        residual: bool,
        /// Also run a domain scan with this many grid points at each L > 0.
        #[arg(long)]
        domain_grid: Option<usize>,
    },
    /// Locate Borel-plane singularities by two-order diagonal Pade scans.
    ScanPoles {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit an average's weight table and its coherence/reality verdicts.
    Averages {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value = "median")]
        average: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

enum CliError {
    Config(String),
    Io(String),
    Check(String),
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

fn parse_average(s: &str) -> Result<AverageSpec, CliError> {
    match s {
        "lateral+" => Ok(AverageSpec::Lateral(Sign::Plus)),
        "lateral-" => Ok(AverageSpec::Lateral(Sign::Minus)),
        "median" => Ok(AverageSpec::Median),
        other => {
            if let Some(alpha) = other.strip_prefix("catalan:") {
                let alpha = parse_rational(alpha)
                    .ok_or_else(|| CliError::Config(format!("bad catalan parameter {alpha:?}")))?;
                AverageSpec::catalan(alpha).map_err(|e| CliError::Config(e.to_string()))
            } else {
                config_err(format!(
                    "unknown average {other:?} (lateral+, lateral-, median, catalan:P/Q)"
                ))
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.parse().ok()?;
        let q: i64 = q.parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(Rational::new(p.into(), q.into()))
    } else {
        let p: i64 = s.parse().ok()?;
        Some(Rational::from_integer(p.into()))
    }
}

fn validate_precision(p: u32) -> Result<(), CliError> {
    if !(30..=200).contains(&p) {
        return config_err(format!("precision {p} outside the supported range 30..=200"));
    }
    Ok(())
}

/// Load the cache if it covers `order`, otherwise solve (and verify the
/// cached prefix stays bit-identical when extending).
fn obtain_tables(order: usize, write_back: bool) -> Result<CacheFile, CliError> {
    let path = cache::cache_path();
    let existing = cache::load(&path).map_err(CliError::Check)?;
    if let Some(existing) = &existing {
        if existing.order >= order {
            return Ok(CacheFile {
                order: existing.order,
                gamma: existing.gamma.clone(),
                table: existing.table.clone(),
            });
        }
    }
    let table = mellin_coeffs(order - 1);
    let gamma = solve_sde(order, &table).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(existing) = &existing {
        // prefix stability: extending the order must not change earlier values
        for n in 1..=existing.order {
            if existing.gamma.coeff(n) != gamma.coeff(n) {
                return Err(CliError::Check(format!(
                    "cache extension mismatch at c_{n}: cached value differs from the fresh solve"
                )));
            }
        }
    }
    let fresh = CacheFile {
        order,
        gamma,
        table,
    };
    if write_back {
        cache::store(&path, &fresh).map_err(CliError::Io)?;
    }
    Ok(fresh)
}

fn write_out(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    cache::write_atomic(&path, bytes).map_err(CliError::Io)?;
    Ok(path)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Coefficients { common } => cmd_coefficients(common),
        Command::Verify {
            common,
            radius,
            only,
            list_checks,
            seed,
        } => cmd_verify(common, radius, only, list_checks, seed),
        Command::Resum {
            common,
            average,
            radius_r,
            tol,
            l_values,
            a_grid,
            residual,
            domain_grid,
        } => cmd_resum(
            common, average, radius_r, tol, l_values, a_grid, residual, domain_grid,
        ),
        Command::ScanPoles { common } => cmd_scan_poles(common),
        Command::Averages {
            common,
            average,
            depth,
        } => cmd_averages(common, average, depth),
    }
}

fn cmd_coefficients(common: CommonOpts) -> Result<ExitCode, CliError> {
    let order = common.order.unwrap_or(25);
    if order < 2 {
        return config_err("coefficients needs --order >= 2");
    }
    validate_precision(common.precision)?;
    let tables = obtain_tables(order, true)?;
    // CSV: n, exact string, numeric, ratio, ratio + (3n+2)
    let mut csv = String::from("n,c_exact,c_numeric,ratio,ratio_plus_3n_plus_2\n");
    let mut numeric = Vec::with_capacity(order + 1);
    numeric.push(0.0f64);
    for n in 1..=order {
        numeric.push(
            zeta_eval(tables.gamma.coeff(n), common.precision)
                .map_err(|e| CliError::Config(e.to_string()))?
                .to_f64(),
        );
    }
    for n in 1..=order {
        let (ratio, rho) = if n < order {
            let r = numeric[n + 1] / numeric[n];
            (format!("{r}"), format!("{}", r + (3 * n + 2) as f64))
        } else {
            (String::new(), String::new())
        };
        csv.push_str(&format!(
            "{n},{},{},{ratio},{rho}\n",
            tables.gamma.coeff(n),
            numeric[n]
        ));
    }
    let path = write_out(&common.out, "coefficients.csv", csv.as_bytes())?;
    println!(
        "solved {order} coefficients (cache at {}); wrote {}",
        cache::cache_path().display(),
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    common: CommonOpts,
    radius: f64,
    only: Vec<String>,
    list_checks: bool,
    seed: u64,
) -> Result<ExitCode, CliError> {
    if list_checks {
        for name in checks::CHECK_NAMES {
            println!("{name}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    validate_precision(common.precision)?;
    if !(radius > 0.0 && radius < 0.5) {
        return config_err(format!("radius {radius} outside (0, 1/2)"));
    }
    // use the cache when it exists (the cache itself is under test);
    // otherwise solve at the requested or default order, without write-back
    let cached = cache::load(&cache::cache_path()).map_err(CliError::Check)?;
    let tables = match cached {
        Some(c) => c,
        None => {
            let order = common.order.unwrap_or(31);
            if order < 12 {
                return config_err("verify needs --order >= 12 without a cache");
            }
            let table = mellin_coeffs(order - 1);
            let gamma = solve_sde(order, &table).map_err(|e| CliError::Config(e.to_string()))?;
            CacheFile {
                order,
                gamma,
                table,
            }
        }
    };
    let selected: Vec<&'static str> = if only.is_empty() {
        checks::CHECK_NAMES.to_vec()
    } else {
        let mut sel = Vec::new();
        for o in &only {
            for part in o.split(',') {
                match checks::CHECK_NAMES.iter().find(|n| **n == part) {
                    Some(name) => sel.push(*name),
                    None => {
                        return config_err(format!(
                            "unknown check {part:?}; valid names: {}",
                            checks::CHECK_NAMES.join(", ")
                        ))
                    }
                }
            }
        }
        sel
    };
    let inputs = checks::VerifyInputs {
        gamma: &tables.gamma,
        table: &tables.table,
        precision: common.precision,
        radius,
    };
    let mut results = Vec::new();
    for name in &selected {
        let r = checks::run_check(name, &inputs);
        let tag = match (r.pass, r.hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "soft-fail",
        };
        println!("{:<14} {tag}  {}", r.name, r.detail);
        results.push(r);
    }
    let report = checks::results_to_json(&results, seed);
    let bytes = serde_json::to_vec_pretty(&report).expect("serialize");
    let path = write_out(&common.out, "verify.json", &bytes)?;
    let hard_failures: Vec<&str> = results
        .iter()
        .filter(|r| r.hard && !r.pass)
        .map(|r| r.name)
        .collect();
    if hard_failures.is_empty() {
        println!("all hard checks pass ({})", path.display());
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Check(format!(
            "hard checks failed: {}",
            hard_failures.join(", ")
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_resum(
    common: CommonOpts,
    average: String,
    radius_r: f64,
    tol: f64,
    l_values: Vec<f64>,
    a_grid: Vec<f64>,
    residual: bool,
    domain_grid: Option<usize>,
) -> Result<ExitCode, CliError> {
    validate_precision(common.precision)?;
    let average = parse_average(&average)?;
    if !(radius_r > 1.0 / 3.0 && radius_r < 2.0 / 3.0) {
        return config_err(format!(
            "truncation radius {radius_r} outside the first singular interval (1/3, 2/3)"
        ));
    }
    if a_grid.iter().any(|&a| a <= 0.0) {
        return config_err("couplings must be positive");
    }
    let order = common.order.unwrap_or(31);
    let tables = obtain_tables(order, false)?;
    let cfg = ResumConfig {
        r: radius_r,
        tol,
        precision: common.precision,
        average,
        order,
        ..Default::default()
    };
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let ctx = ResumContext::from_gamma(cfg, tables.gamma.clone())
        .map_err(|e| CliError::Config(e.to_string()))?;

    // gamma scan
    let mut gamma_csv =
        String::from("a,value,im_value,quad_err,eps_spread,tail_bound,pole_hits,im_clipped,error\n");
    for &a in &a_grid {
        match ctx.resum_gamma(a) {
            Ok(r) => gamma_csv.push_str(&format!(
                "{a},{},{},{},{},{},{},{},\n",
                r.value,
                r.im_value,
                r.quad_error,
                r.eps_spread,
                r.tail_bound,
                r.flags.pole_proximity_hits,
                r.flags.im_clipped
            )),
            Err(e) => gamma_csv.push_str(&format!("{a},,,,,,,,{e}\n")),
        }
    }
    write_out(&common.out, "gamma.csv", gamma_csv.as_bytes())?;

    // G scan + per-L plot data + JSON mirror
    let mut g_csv = String::from(
        "a,L,value,im_value,quad_err,eps_spread,tail_bound,pole_hits,im_clipped,series_tail,error\n",
    );
    let mut g_rows = Vec::new();
    let mut residual_csv = String::from("a,L,residual,h_L,h_a\n");
    for &l in &l_values {
        let gl = match ctx.for_l(l) {
            Ok(g) => g,
            Err(e) => {
                for &a in &a_grid {
                    g_csv.push_str(&format!("{a},{l},,,,,,,,,{e}\n"));
                    g_rows.push(json!({"a": a, "L": l, "error": e.to_string()}));
                }
                continue;
            }
        };
        let mut plot = String::new();
        for &a in &a_grid {
            match gl.resum(a) {
                Ok(r) => {
                    g_csv.push_str(&format!(
                        "{a},{l},{},{},{},{},{},{},{},{},\n",
                        r.value,
                        r.im_value,
                        r.quad_error,
                        r.eps_spread,
                        r.tail_bound,
                        r.flags.pole_proximity_hits,
                        r.flags.im_clipped,
                        r.flags.series_tail_bound
                    ));
                    plot.push_str(&format!("{a}\t{}\n", r.value));
                    g_rows.push(json!({
                        "a": a,
                        "L": l,
                        "value": r.value,
                        "im_value": r.im_value,
                        "quad_err": r.quad_error,
                        "eps_spread": r.eps_spread,
                        "tail_bound": r.tail_bound,
                        "flags": {
                            "pole_hits": r.flags.pole_proximity_hits,
                            "im_clipped": r.flags.im_clipped,
                            "series_tail": r.flags.series_tail_bound,
                        },
                    }));
                }
                Err(e) => {
                    g_csv.push_str(&format!("{a},{l},,,,,,,,,{e}\n"));
                    g_rows.push(json!({"a": a, "L": l, "error": e.to_string()}));
                }
            }
            if residual {
                match ctx.rge_residual(a, l, 1e-3) {
                    Ok(rr) => residual_csv
                        .push_str(&format!("{a},{l},{},{},{}\n", rr.residual, rr.h_l, rr.h_a)),
                    Err(e) => residual_csv.push_str(&format!("{a},{l},{e},,\n")),
                }
            }
        }
        let mut tag = format!("{l}");
        tag.retain(|c| c.is_ascii_alphanumeric());
        write_out(&common.out, &format!("plot_L{tag}.tsv"), plot.as_bytes())?;
    }
    write_out(&common.out, "resum.csv", g_csv.as_bytes())?;
    write_out(
        &common.out,
        "resum.json",
        &serde_json::to_vec_pretty(&json!({"rows": g_rows})).expect("serialize"),
    )?;
    if residual {
        write_out(&common.out, "residual.csv", residual_csv.as_bytes())?;
    }
    if let Some(grid) = domain_grid {
        let mut scan_csv = String::from("L,a,value,im_value,quad_err,tail_bound,finite,error\n");
        for &l in l_values.iter().filter(|&&l| l > 0.0) {
            let scan = ctx
                .domain_scan(l, grid)
                .map_err(|e| CliError::Config(e.to_string()))?;
            for row in &scan.rows {
                scan_csv.push_str(&format!(
                    "{l},{},{},{},{},{},{},{}\n",
                    row.a,
                    row.value,
                    row.im_value,
                    row.quad_error,
                    row.tail_bound,
                    row.finite,
                    row.error.clone().unwrap_or_default()
                ));
            }
        }
        write_out(&common.out, "domain.csv", scan_csv.as_bytes())?;
    }
    println!(
        "resummation scans written to {} ({} couplings x {} kinematic values)",
        common.out.display(),
        a_grid.len(),
        l_values.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan_poles(common: CommonOpts) -> Result<ExitCode, CliError> {
    validate_precision(common.precision)?;
    let order = common.order.unwrap_or(31);
    if order < 12 {
        return config_err("scan-poles needs --order >= 12");
    }
    let tables = obtain_tables(order, false)?;
    let gnum = tables
        .gamma
        .map(|c| zeta_eval(c, common.precision).expect("eval"));
    let ghat = gnum
        .borel_transform()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let scan = singularity_scan(&ghat).map_err(|e| CliError::Check(e.to_string()))?;
    let fit = gevrey_fit(&gnum).map_err(|e| CliError::Check(e.to_string()))?;
    let mut csv = String::from("re,im,residue,stable\n");
    for p in &scan.poles {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            p.location.re, p.location.im, p.residue_mag, p.stable
        ));
    }
    write_out(&common.out, "poles.csv", csv.as_bytes())?;
    let report = json!({
        "orders": {
            "high": [scan.orders.0.0, scan.orders.0.1],
            "low": [scan.orders.1.0, scan.orders.1.1],
        },
        "poles": scan.poles.iter().map(|p| json!({
            "re": p.location.re,
            "im": p.location.im,
            "residue": p.residue_mag,
            "stable": p.stable,
        })).collect::<Vec<_>>(),
        "gevrey": {"A": fit.a, "B": fit.b, "radius": fit.radius},
    });
    let path = write_out(
        &common.out,
        "poles.json",
        &serde_json::to_vec_pretty(&report).expect("serialize"),
    )?;
    let stable = scan.stable_poles().count();
    println!(
        "{} poles ({stable} stable); nearest stable |zeta| = {:.6}; Gevrey radius {:.6} ({})",
        scan.poles.len(),
        scan.stable_poles()
            .map(|p| p.location.norm())
            .fold(f64::INFINITY, f64::min),
        fit.radius,
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_averages(common: CommonOpts, average: String, depth: usize) -> Result<ExitCode, CliError> {
    let spec = parse_average(&average)?;
    if depth > 12 {
        return config_err("depth capped at 12 (2^depth enumeration)");
    }
    let table = weight_table(&spec, depth).map_err(|e| CliError::Config(e.to_string()))?;
    let mut csv = String::from("signature,weight\n");
    for (sig, w) in &table.rows {
        csv.push_str(&format!("{sig},{w}\n"));
    }
    let path = write_out(&common.out, "weights.csv", csv.as_bytes())?;
    let coherence = wzresum::averages::coherence_check(&spec, depth)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let reality = wzresum::averages::reality_check(&spec, depth)
        .map_err(|e| CliError::Config(e.to_string()))?;
    println!(
        "{} at depth {depth}: {} signatures, coherence {}, reality {} ({})",
        spec.name(),
        table.rows.len(),
        if coherence.pass() { "exact" } else { "BROKEN" },
        if reality.pass { "preserved" } else { "not preserved" },
        path.display()
    );
    if !coherence.pass() {
        return Err(CliError::Check(format!(
            "coherence broken for {}",
            spec.name()
        )));
    }
    Ok(ExitCode::SUCCESS)
}
