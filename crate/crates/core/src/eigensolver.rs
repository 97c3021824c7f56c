//! Locating roots of the characteristic function: sign-change scanning on
//! a negative-lambda grid plus an s-grid for the oscillatory range, Brent
//! refinement, and a first-order simplicity certificate for each root.

use rayon::prelude::*;

use crate::characteristic::omega;
use crate::integrator::IntegratorConfig;
use crate::{Error, Result, ValidatedProblem};

/// A refined root of the characteristic function.
#[derive(Debug, Clone, Copy)]
pub struct Eigenvalue {
    /// 1-based position in the increasing spectrum that was found.
    pub index: usize,
    pub lambda: f64,
    /// `sqrt(lambda)` when `lambda > 0`.
    pub s: Option<f64>,
    /// |normalized characteristic value| at the refined root.
    pub residual: f64,
    /// True when the derivative estimate clears the simplicity threshold.
    pub simple: bool,
}

/// Search controls for [`find_eigenvalues`].
#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    /// Upper end of the s-grid; eigenvalues up to `s_max^2` are sought.
    pub s_max: f64,
    /// Minimum s-grid density in points per unit of s.
    pub grid_per_unit: f64,
    /// Lower end of the lambda grid. `None` picks
    /// `-(1 + max|q| / min rho_i^2) * 10`.
    pub lambda_min: Option<f64>,
    pub integrator: IntegratorConfig,
}

impl ScanConfig {
    pub fn new(s_max: f64) -> Self {
        ScanConfig {
            s_max,
            grid_per_unit: 40.0,
            lambda_min: None,
            integrator: IntegratorConfig::default().scan_tier(),
        }
    }
}

fn default_lambda_min(problem: &ValidatedProblem) -> f64 {
    let mut min_rho2 = f64::INFINITY;
    for i in 0..=problem.r() {
        min_rho2 = min_rho2.min(problem.rho(i).powi(2));
    }
    -(1.0 + problem.max_abs_q() / min_rho2) * 10.0
}

/// A sign-change interval in lambda.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

fn eval_grid(
    problem: &ValidatedProblem,
    lambdas: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<f64>> {
    lambdas
        .par_iter()
        .map(|&l| omega(problem, l, cfg).map(|c| c.omega_normalized))
        .collect()
}

/// Extract brackets from one sampled grid, recursing with a 4x finer local
/// grid wherever two sign changes land within two cells of each other (a
/// near-double root the base resolution cannot separate).
fn brackets_from_grid(
    problem: &ValidatedProblem,
    lambdas: &[f64],
    values: &[f64],
    cfg: &IntegratorConfig,
    depth: usize,
    out: &mut Vec<Bracket>,
) -> Result<()> {
    let mut change_cells: Vec<usize> = Vec::new();
    for i in 0..lambdas.len() - 1 {
        if values[i] == 0.0 {
            // Exact grid hit: synthesize a tiny bracket around it.
            let h = (lambdas[i + 1] - lambdas[i]) * 1e-6;
            out.push(Bracket {
                lo: lambdas[i] - h,
                hi: lambdas[i] + h,
                f_lo: -values[i + 1].signum(),
                f_hi: values[i + 1].signum(),
            });
            continue;
        }
        if values[i].signum() != values[i + 1].signum() {
            change_cells.push(i);
        }
    }
    for (pos, &i) in change_cells.iter().enumerate() {
        let crowded = (pos > 0 && i - change_cells[pos - 1] < 2)
            || (pos + 1 < change_cells.len() && change_cells[pos + 1] - i < 2);
        if crowded && depth < 4 {
            let fine: Vec<f64> = (0..=8)
                .map(|k| lambdas[i] + (lambdas[i + 1] - lambdas[i]) * k as f64 / 8.0)
                .collect();
            let fv = eval_grid(problem, &fine, cfg)?;
            brackets_from_grid(problem, &fine, &fv, cfg, depth + 1, out)?;
        } else if crowded {
            return Err(Error::GridTooCoarse(lambdas[i]));
        } else {
            out.push(Bracket {
                lo: lambdas[i],
                hi: lambdas[i + 1],
                f_lo: values[i],
                f_hi: values[i + 1],
            });
        }
    }
    Ok(())
}

/// Scan for sign changes of the normalized characteristic function over
/// `[lambda_min, 0]` and over `s in (0, s_max]`.
pub fn scan_brackets(problem: &ValidatedProblem, scan: &ScanConfig) -> Result<Vec<Bracket>> {
    let lambda_min = scan.lambda_min.unwrap_or_else(|| default_lambda_min(problem));
    let mut brackets = Vec::new();

    // Negative / near-zero range on a uniform lambda grid.
    if lambda_min < 0.0 {
        let n = 200usize;
        let lambdas: Vec<f64> = (0..=n)
            .map(|k| lambda_min + (0.0 - lambda_min) * k as f64 / n as f64)
            .collect();
        let values = eval_grid(problem, &lambdas, &scan.integrator)?;
        brackets_from_grid(problem, &lambdas, &values, &scan.integrator, 0, &mut brackets)?;
    }

    // Oscillatory range on a uniform s grid; density tracks the total
    // phase so roughly 8 points land per oscillation of the fastest
    // factor.
    let per_unit = scan
        .grid_per_unit
        .max((8.0 * problem.total_phase_scale() / std::f64::consts::PI).ceil());
    let n = (scan.s_max * per_unit).ceil() as usize;
    let s_grid: Vec<f64> = (1..=n).map(|k| scan.s_max * k as f64 / n as f64).collect();
    let lambdas: Vec<f64> = s_grid.iter().map(|s| s * s).collect();
    let values = eval_grid(problem, &lambdas, &scan.integrator)?;
    brackets_from_grid(problem, &lambdas, &values, &scan.integrator, 0, &mut brackets)?;

    brackets.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    Ok(brackets)
}

/// Brent's method on the normalized characteristic function.
pub fn refine(
    problem: &ValidatedProblem,
    bracket: &Bracket,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let f = |l: f64| -> Result<f64> { Ok(omega(problem, l, cfg)?.omega_normalized) };
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange(a, b));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        let tol = 2.0 * f64::EPSILON * b.abs().max(1.0);
        if fb == 0.0 || (b - a).abs() < tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // Inverse quadratic interpolation.
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let mid = (3.0 * a + b) / 4.0;
        let between = (s > mid.min(b)) && (s < mid.max(b));
        let step_ok = if bisected {
            (s - b).abs() < (b - c).abs() / 2.0
        } else {
            (s - b).abs() < (c - d).abs() / 2.0
        };
        if !between || !step_ok || (b - c).abs() < tol {
            s = (a + b) / 2.0;
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::MaxIterations(200))
}

/// Central-difference derivative certificate: a root counts as simple when
/// `|omega'| * width` dominates the residual by three orders of magnitude.
fn simplicity(
    problem: &ValidatedProblem,
    lambda: f64,
    width: f64,
    residual: f64,
    cfg: &IntegratorConfig,
) -> Result<bool> {
    let h = 1e-6 * lambda.abs().max(1.0);
    let fp = omega(problem, lambda + h, cfg)?.omega_normalized;
    let fm = omega(problem, lambda - h, cfg)?.omega_normalized;
    let deriv = (fp - fm) / (2.0 * h);
    Ok(deriv.abs() * width > 1e3 * residual.abs())
}

/// Full pipeline: scan, refine each bracket at the tight tolerance,
/// deduplicate, sort, and attach 1-based indices.
pub fn find_eigenvalues(problem: &ValidatedProblem, scan: &ScanConfig) -> Result<Vec<Eigenvalue>> {
    let brackets = scan_brackets(problem, scan)?;
    let tight = IntegratorConfig {
        rel_tol: scan.integrator.rel_tol.min(1e-10),
        abs_tol: scan.integrator.abs_tol.min(1e-12),
        ..scan.integrator
    };
    let refined: Vec<Result<(f64, f64)>> = brackets
        .par_iter()
        .map(|b| {
            let lambda = refine(problem, b, &tight)?;
            Ok((lambda, b.hi - b.lo))
        })
        .collect();
    let mut roots: Vec<(f64, f64)> = Vec::with_capacity(refined.len());
    for r in refined {
        roots.push(r?);
    }
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // Deduplicate roots found from both grids near lambda = 0.
    let mut unique: Vec<(f64, f64)> = Vec::new();
    for (lambda, width) in roots {
        match unique.last() {
            Some(&(prev, _)) if (lambda - prev).abs() < 1e-8 * lambda.abs().max(1.0) => {}
            _ => unique.push((lambda, width)),
        }
    }

    let mut out = Vec::with_capacity(unique.len());
    for (k, (lambda, width)) in unique.into_iter().enumerate() {
        let sample = omega(problem, lambda, &tight)?;
        let simple = simplicity(problem, lambda, width, sample.omega_normalized, &tight)?;
        out.push(Eigenvalue {
            index: k + 1,
            lambda,
            s: if lambda > 0.0 { Some(lambda.sqrt()) } else { None },
            residual: sample.omega_normalized.abs(),
            simple,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{validate, ProblemSpec, TransmissionCoefficients};
    use std::f64::consts::PI;

    fn dirichlet_classical() -> ValidatedProblem {
        let spec = ProblemSpec {
            a: 0.0,
            b: 1.0,
            xi: vec![0.5],
            rho: vec![1.0, 1.0],
            q: vec![vec![0.0], vec![0.0]],
            alpha: [1.0, 0.0, 0.0, 0.0],
            beta: [1.0, 0.0, 0.0, 0.0],
            trans: vec![TransmissionCoefficients::identity()],
        };
        validate(&spec, false).unwrap()
    }

    #[test]
    fn classical_dirichlet_spectrum() {
        let p = dirichlet_classical();
        let eigs = find_eigenvalues(&p, &ScanConfig::new(10.0)).unwrap();
        assert_eq!(eigs.len(), 3); // pi, 2pi, 3pi < 10
        for (k, e) in eigs.iter().enumerate() {
            let exact = ((k + 1) as f64 * PI).powi(2);
            assert!(
                (e.lambda - exact).abs() < 1e-8 * exact,
                "lambda[{k}] = {} vs {exact}",
                e.lambda
            );
            assert_eq!(e.index, k + 1);
            assert!(e.simple);
            assert!(e.residual < 1e-9);
        }
    }

    #[test]
    fn refine_demands_sign_change() {
        let p = dirichlet_classical();
        let b = Bracket {
            lo: 1.0,
            hi: 2.0,
            f_lo: 1.0,
            f_hi: 1.0,
        };
        assert!(matches!(
            refine(&p, &b, &IntegratorConfig::default()),
            Err(Error::NoSignChange(_, _))
        ));
    }

    #[test]
    fn brent_refines_bracket_to_root() {
        let p = dirichlet_classical();
        let scan = ScanConfig::new(4.0);
        let brackets = scan_brackets(&p, &scan).unwrap();
        assert_eq!(brackets.len(), 1);
        let lambda = refine(&p, &brackets[0], &IntegratorConfig::default()).unwrap();
        assert!((lambda - PI * PI).abs() < 1e-8);
    }
}
