//! Sampling of eigenfunctions on each subinterval, with one-sided values
//! at the interior discontinuity points, sup-norm normalization and a
//! residual report against the boundary and transmission conditions.

use crate::integrator::{integrate, IntegratorConfig, StateVector};
use crate::solutions::build_phi;
use crate::{Result, ValidatedProblem};

/// Marker for samples taken exactly at an interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSide {
    Interior,
    /// Limit from the left of an interface (or the point `b`).
    Minus,
    /// Limit from the right of an interface (or the point `a`).
    Plus,
}

impl SampleSide {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleSide::Interior => "interior",
            SampleSide::Minus => "left_limit",
            SampleSide::Plus => "right_limit",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Sample {
    /// 1-based subinterval number.
    pub subinterval: usize,
    pub side: SampleSide,
    pub x: f64,
    pub u: f64,
    pub du: f64,
}

#[derive(Debug, Clone)]
pub struct EigenfunctionSamples {
    pub lambda: f64,
    pub samples: Vec<Sample>,
}

/// Sample the eigenfunction for `lambda` with `points` uniformly spaced
/// samples per subinterval (endpoints included). The result is scaled to
/// sup-norm one with the first nonvanishing sample on the first
/// subinterval made positive.
pub fn sample_eigenfunction(
    problem: &ValidatedProblem,
    lambda: f64,
    points: usize,
    cfg: &IntegratorConfig,
) -> Result<EigenfunctionSamples> {
    let points = points.max(2);
    let phi = build_phi(problem, lambda, cfg)?;
    let mut samples = Vec::with_capacity((problem.r() + 1) * points);
    for i in 0..=problem.r() {
        let (left, right) = problem.interval(i);
        let mut state = phi.intervals[i].left;
        let mut x_prev = left;
        for k in 0..points {
            let x = left + (right - left) * k as f64 / (points - 1) as f64;
            if k > 0 {
                state = integrate(problem, i, lambda, x_prev, x, state, cfg)?;
                x_prev = x;
            }
            let side = if k == 0 {
                SampleSide::Plus
            } else if k == points - 1 {
                SampleSide::Minus
            } else {
                SampleSide::Interior
            };
            samples.push(Sample {
                subinterval: i + 1,
                side,
                x,
                u: state.u,
                du: state.du,
            });
        }
    }

    let sup = samples.iter().fold(0.0f64, |m, s| m.max(s.u.abs()));
    let sign = samples
        .iter()
        .filter(|s| s.subinterval == 1)
        .find(|s| s.u != 0.0)
        .map(|s| s.u.signum())
        .unwrap_or(1.0);
    if sup > 0.0 {
        let scale = sign / sup;
        for s in &mut samples {
            s.u *= scale;
            s.du *= scale;
        }
    }
    Ok(EigenfunctionSamples { lambda, samples })
}

/// Relative defects of one candidate eigenfunction: the two boundary forms
/// and both transmission forms at every interface, each divided by the
/// product of coefficient size and local state size.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub boundary_left: f64,
    pub boundary_right: f64,
    /// One `(alpha-form, beta-form)` pair per interface.
    pub transmission: Vec<(f64, f64)>,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        let mut m = self.boundary_left.max(self.boundary_right);
        for &(a, b) in &self.transmission {
            m = m.max(a).max(b);
        }
        m
    }
}

fn relative(raw: f64, coeff_scale: f64, state_scale: f64) -> f64 {
    raw.abs() / (coeff_scale * state_scale).max(f64::MIN_POSITIVE)
}

/// Evaluate the residual report for `lambda` by rebuilding the left
/// fundamental solution and testing every condition it should satisfy.
pub fn residual_report(
    problem: &ValidatedProblem,
    lambda: f64,
    cfg: &IntegratorConfig,
) -> Result<ResidualReport> {
    let spec = problem.spec();
    let phi = build_phi(problem, lambda, cfg)?;
    let r = problem.r();

    let state_scale = |s: &StateVector| s.u.abs() + s.du.abs();

    let at_a = phi.intervals[0].left;
    let c1 = spec.alpha[0] - lambda * spec.alpha[2];
    let c2 = spec.alpha[1] - lambda * spec.alpha[3];
    let boundary_left = relative(
        c1 * at_a.u - c2 * at_a.du,
        c1.abs() + c2.abs(),
        state_scale(&at_a),
    );

    let at_b = phi.intervals[r].right;
    let d1 = spec.beta[0] + lambda * spec.beta[2];
    let d2 = spec.beta[1] + lambda * spec.beta[3];
    let boundary_right = relative(
        d1 * at_b.u - d2 * at_b.du,
        d1.abs() + d2.abs(),
        state_scale(&at_b),
    );

    let mut transmission = Vec::with_capacity(r);
    for i in 0..r {
        let minus = phi.intervals[i].right;
        let plus = phi.intervals[i + 1].left;
        let t = &spec.trans[i];
        let (la, lb) = t.residuals(minus, plus);
        let scale = state_scale(&minus).max(state_scale(&plus));
        let ca = t.ap1.abs() + t.ap0.abs() + t.am1.abs() + t.am0.abs();
        let cb = t.bp1.abs() + t.bp0.abs() + t.bm1.abs() + t.bm0.abs();
        transmission.push((relative(la, ca, scale), relative(lb, cb, scale)));
    }

    Ok(ResidualReport {
        boundary_left,
        boundary_right,
        transmission,
    })
}
