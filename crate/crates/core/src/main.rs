use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use slt::asymptotics::{asymptotic_s, branch_spacing, classify_case, match_branches};
use slt::characteristic::omega;
use slt::config::load_problem;
use slt::eigenfunctions::sample_eigenfunction;
use slt::eigensolver::{find_eigenvalues, ScanConfig};
use slt::integrator::IntegratorConfig;
use slt::problem::{validate, ValidatedProblem};
use slt::Error;

/// Eigenvalue solver for second-order problems with interior
/// discontinuities and eigenparameter-dependent boundary conditions.
#[derive(Parser)]
#[command(name = "slt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem definition (TOML).
    #[arg(long)]
    problem: PathBuf,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat validation warnings as errors.
    #[arg(long)]
    strict: bool,
    /// Relative tolerance for the adaptive integrator.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance for the adaptive integrator.
    #[arg(long)]
    abs_tol: Option<f64>,
}

#[derive(Args)]
struct ScanArgs {
    /// Upper end of the s range to search.
    #[arg(long, default_value_t = 40.0)]
    smax: f64,
    /// Minimum scan density in grid points per unit of s.
    #[arg(long, default_value_t = 40.0)]
    grid: f64,
    /// Lower end of the lambda scan; defaults to a bound derived from the
    /// coefficients.
    #[arg(long)]
    lambda_min: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a problem definition and report warnings.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample the characteristic function over the scan grids.
    Char {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Compute eigenvalues up to smax^2.
    Eigs {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Tabulate the asymptotic eigenvalue branches.
    Asym {
        #[command(flatten)]
        common: CommonArgs,
        /// Upper end of the s range to tabulate.
        #[arg(long, default_value_t = 40.0)]
        smax: f64,
    },
    /// Compute eigenvalues and match them against the asymptotic branches.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Sample one eigenfunction.
    Efun {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        scan: ScanArgs,
        /// 1-based eigenvalue index.
        #[arg(short)]
        n: usize,
        /// Samples per subinterval.
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(0),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Validation(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn load(common: &CommonArgs) -> Result<ValidatedProblem, Error> {
    let spec = load_problem(&common.problem)?;
    let problem = validate(&spec, common.strict)?;
    for w in problem.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(problem)
}

fn integrator_config(common: &CommonArgs, scanning: bool) -> IntegratorConfig {
    let mut cfg = IntegratorConfig::default();
    if scanning {
        cfg = cfg.scan_tier();
    }
    if let Some(rt) = common.rel_tol {
        cfg.rel_tol = rt;
    }
    if let Some(at) = common.abs_tol {
        cfg.abs_tol = at;
    }
    cfg
}

fn scan_config(common: &CommonArgs, scan: &ScanArgs) -> ScanConfig {
    let mut sc = ScanConfig::new(scan.smax);
    sc.grid_per_unit = scan.grid;
    sc.lambda_min = scan.lambda_min;
    sc.integrator = integrator_config(common, true);
    sc
}

fn writer(common: &CommonArgs) -> Result<Box<dyn Write>, Error> {
    match &common.out {
        Some(path) => {
            let f = std::fs::File::create(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Validate { common } => {
            let problem = load(&common)?;
            println!(
                "ok: {} subinterval(s), {} interior point(s), case {:?}",
                problem.r() + 1,
                problem.r(),
                classify_case(&problem)
            );
            for i in 0..problem.r() {
                let t = &problem.spec().trans[i];
                let d = |j, k| t.delta(j, k).expect("indices in range");
                println!(
                    "interface {}: D12={} D13={} D14={} D23={} D24={} D34={}",
                    i + 1,
                    d(1, 2),
                    d(1, 3),
                    d(1, 4),
                    d(2, 3),
                    d(2, 4),
                    d(3, 4)
                );
            }
            Ok(())
        }
        Command::Char { common, scan } => {
            let problem = load(&common)?;
            let cfg = integrator_config(&common, true);
            let mut out = writer(&common)?;
            writeln!(out, "lambda,s,omega,omega_normalized").map_err(io_err)?;
            let sc = scan_config(&common, &scan);
            for lambda in char_grid(&problem, &sc) {
                let c = omega(&problem, lambda, &cfg)?;
                let s = if lambda > 0.0 {
                    fmt(lambda.sqrt())
                } else {
                    String::new()
                };
                writeln!(
                    out,
                    "{},{},{},{}",
                    fmt(lambda),
                    s,
                    fmt(c.omega),
                    fmt(c.omega_normalized)
                )
                .map_err(io_err)?;
            }
            Ok(())
        }
        Command::Eigs { common, scan } => {
            let problem = load(&common)?;
            let sc = scan_config(&common, &scan);
            let eigs = find_eigenvalues(&problem, &sc)?;
            let mut out = writer(&common)?;
            writeln!(out, "index,lambda,s,residual,simple").map_err(io_err)?;
            for e in &eigs {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    e.index,
                    fmt(e.lambda),
                    e.s.map(fmt).unwrap_or_default(),
                    fmt(e.residual),
                    e.simple
                )
                .map_err(io_err)?;
            }
            Ok(())
        }
        Command::Asym { common, smax } => {
            let problem = load(&common)?;
            let case = classify_case(&problem);
            let mut out = writer(&common)?;
            writeln!(out, "branch,n,s_asymptotic").map_err(io_err)?;
            for j in 1..=problem.r() + 1 {
                let spacing = branch_spacing(&problem, case, j)?;
                let mut n = 1usize;
                loop {
                    let s = asymptotic_s(&problem, case, j, n)?;
                    if s > smax + spacing {
                        break;
                    }
                    if s > 0.0 {
                        writeln!(out, "{j},{n},{}", fmt(s)).map_err(io_err)?;
                    }
                    n += 1;
                }
            }
            Ok(())
        }
        Command::Compare { common, scan } => {
            let problem = load(&common)?;
            let sc = scan_config(&common, &scan);
            let eigs = find_eigenvalues(&problem, &sc)?;
            let matched = match_branches(&eigs, &problem);
            let mut out = writer(&common)?;
            writeln!(
                out,
                "index,s_numeric,branch,n,s_asymptotic,error,error_times_n"
            )
            .map_err(io_err)?;
            for p in &matched.pairs {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    eigs[p.numeric_index].index,
                    fmt(p.s_numeric),
                    p.branch,
                    p.n,
                    fmt(p.s_asymptotic),
                    fmt(p.error),
                    fmt(p.error * p.n as f64)
                )
                .map_err(io_err)?;
            }
            for &idx in &matched.unmatched_numeric {
                eprintln!(
                    "warning: eigenvalue {} (lambda = {}) matched no branch",
                    eigs[idx].index, eigs[idx].lambda
                );
            }
            Ok(())
        }
        Command::Efun {
            common,
            scan,
            n,
            points,
        } => {
            let problem = load(&common)?;
            let sc = scan_config(&common, &scan);
            let eigs = find_eigenvalues(&problem, &sc)?;
            let eig = eigs
                .iter()
                .find(|e| e.index == n)
                .ok_or(Error::IndexOutOfRange(n, eigs.len()))?;
            let cfg = integrator_config(&common, false);
            let ef = sample_eigenfunction(&problem, eig.lambda, points, &cfg)?;
            let mut out = writer(&common)?;
            writeln!(out, "subinterval,side,x,u,du").map_err(io_err)?;
            for s in &ef.samples {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    s.subinterval,
                    s.side.as_str(),
                    fmt(s.x),
                    fmt(s.u),
                    fmt(s.du)
                )
                .map_err(io_err)?;
            }
            Ok(())
        }
    }
}

/// The lambda samples the `char` subcommand writes: the negative-range
/// grid followed by the squared s-grid.
fn char_grid(problem: &ValidatedProblem, sc: &ScanConfig) -> Vec<f64> {
    let lambda_min = sc.lambda_min.unwrap_or_else(|| {
        let mut min_rho2 = f64::INFINITY;
        for i in 0..=problem.r() {
            min_rho2 = min_rho2.min(problem.rho(i).powi(2));
        }
        -(1.0 + problem.max_abs_q() / min_rho2) * 10.0
    });
    let mut grid = Vec::new();
    if lambda_min < 0.0 {
        for k in 0..=200usize {
            grid.push(lambda_min * (1.0 - k as f64 / 200.0));
        }
    }
    let per_unit = sc
        .grid_per_unit
        .max((8.0 * problem.total_phase_scale() / std::f64::consts::PI).ceil());
    let n = (sc.s_max * per_unit).ceil() as usize;
    for k in 1..=n {
        let s = sc.s_max * k as f64 / n as f64;
        grid.push(s * s);
    }
    grid
}

fn io_err(e: std::io::Error) -> Error {
    Error::Parse(e.to_string())
}
