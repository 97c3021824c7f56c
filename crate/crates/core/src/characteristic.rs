//! The characteristic function `omega(lambda)`: the Wronskian of the two
//! fundamental solutions on the first subinterval. Its real zeros are the
//! eigenvalues. Also provides the closed-form leading-term envelopes used
//! to normalize `omega` for root scanning and to verify the asymptotic
//! growth.

use crate::asymptotics::{classify_case, CaseTag};
use crate::integrator::IntegratorConfig;
use crate::solutions::{build_chi, build_phi, evaluate, PiecewiseSolution};
use crate::{Result, ValidatedProblem};

/// One evaluation of the characteristic function.
#[derive(Debug, Clone)]
pub struct CharacteristicSample {
    pub lambda: f64,
    pub omega: f64,
    /// `omega` divided by the leading-term envelope magnitude (clamped
    /// below at 1) so samples stay O(1) during scanning.
    pub omega_normalized: f64,
    /// Per-subinterval Wronskians `omega_1 .. omega_{r+1}` at midpoints.
    pub interval_wronskians: Vec<f64>,
}

/// Wronskian `phi*chi' - phi'*chi` of two stored solutions at `x` inside a
/// subinterval.
pub fn wronskian_at(
    problem: &ValidatedProblem,
    phi: &PiecewiseSolution,
    chi: &PiecewiseSolution,
    x: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let p = evaluate(phi, problem, x, None, cfg)?;
    let c = evaluate(chi, problem, x, None, cfg)?;
    Ok(p.u * c.du - p.du * c.u)
}

/// Wronskian of `(phi_i, chi_i)` evaluated at the midpoint of subinterval
/// `i` (1-based, `1 <= i <= r+1`).
pub fn omega_i(
    problem: &ValidatedProblem,
    lambda: f64,
    i: usize,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let phi = build_phi(problem, lambda, cfg)?;
    let chi = build_chi(problem, lambda, cfg)?;
    let (xl, xr) = problem.interval(i - 1);
    wronskian_at(problem, &phi, &chi, 0.5 * (xl + xr), cfg)
}

/// Full characteristic-function sample at `lambda`.
pub fn omega(
    problem: &ValidatedProblem,
    lambda: f64,
    cfg: &IntegratorConfig,
) -> Result<CharacteristicSample> {
    let phi = build_phi(problem, lambda, cfg)?;
    let chi = build_chi(problem, lambda, cfg)?;
    let mut ws = Vec::with_capacity(problem.r() + 1);
    for i in 0..=problem.r() {
        let (xl, xr) = problem.interval(i);
        ws.push(wronskian_at(problem, &phi, &chi, 0.5 * (xl + xr), cfg)?);
    }
    let omega = ws[0];
    let env = envelope(problem, lambda);
    Ok(CharacteristicSample {
        lambda,
        omega,
        omega_normalized: omega / env.max(1.0),
        interval_wronskians: ws,
    })
}

/// Boundary-form cross-check: `prod(D_j12/D_j34) * [(b1 + l b3) phi(b)
/// - (b2 + l b4) phi'(b)]`. Agrees with the Wronskian definition up to
/// integration error.
pub fn omega_boundary_form(
    problem: &ValidatedProblem,
    lambda: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let phi = build_phi(problem, lambda, cfg)?;
    let end = phi.intervals[problem.r()].right;
    let beta = &problem.spec().beta;
    let value = (beta[0] + lambda * beta[2]) * end.u - (beta[1] + lambda * beta[3]) * end.du;
    let ratio: f64 = problem
        .spec()
        .trans
        .iter()
        .map(|t| t.d(1, 2) / t.d(3, 4))
        .product();
    Ok(ratio * value)
}

fn osc(phase: f64, hyperbolic: bool, cosine: bool) -> f64 {
    match (hyperbolic, cosine) {
        (false, false) => phase.sin(),
        (false, true) => phase.cos(),
        (true, false) => phase.sinh(),
        (true, true) => phase.cosh(),
    }
}

fn leading_inner(problem: &ValidatedProblem, s: f64, hyperbolic: bool) -> f64 {
    let spec = problem.spec();
    let r = problem.r();
    let alpha = &spec.alpha;
    let beta = &spec.beta;
    // l_j = xi_j - xi_{j-1} > 0 for 1-based j; subinterval index j-1.
    let len = |j: usize| problem.length(j - 1);
    let rho = |j: usize| problem.rho(j - 1);
    let sin_factor = |j: usize| osc(s * len(j) / rho(j), hyperbolic, false) / rho(j);
    // Delta ratio prefactor for cases III/IV; 1 when there is no interface.
    let dratio = if r == 0 {
        1.0
    } else {
        spec.trans[0].d(1, 2) / spec.trans[0].d(3, 4)
    };
    let first_len = if r == 0 { spec.b - spec.a } else { spec.xi[0] - spec.a };
    let last_len = if r == 0 {
        spec.b - spec.a
    } else {
        spec.b - spec.xi[r - 1]
    };
    let cos_first = osc(s * first_len / rho(1), hyperbolic, true);
    let cos_last = osc(s * last_len / rho(r + 1), hyperbolic, true);

    match classify_case(problem) {
        CaseTag::I => {
            let prod: f64 = (1..=r + 1).map(sin_factor).product();
            -alpha[3] * beta[3] * s.powi(r as i32 + 5) * prod
        }
        CaseTag::II => {
            let prod: f64 = (1..=r).map(sin_factor).product();
            -alpha[3] * beta[2] * s.powi(r as i32 + 4) * cos_last * prod
        }
        CaseTag::III => {
            let prod: f64 = (2..=r + 1).map(sin_factor).product();
            -alpha[2] * beta[3] * s.powi(r as i32 + 4) * dratio * cos_first * prod
        }
        CaseTag::IV => {
            let prod: f64 = (2..=r)
                .map(|j| osc(s * len(j) / rho(j), hyperbolic, false) / rho(j - 1))
                .product();
            -alpha[2] * beta[2] * s.powi(r as i32 + 3) * dratio * cos_first * cos_last * prod
        }
    }
}

/// Case-dependent leading term of `omega(s^2)` for large s.
pub fn leading_term(problem: &ValidatedProblem, s: f64) -> f64 {
    leading_inner(problem, s, false)
}

/// Magnitude proxy for the leading term, defined for all real lambda
/// (hyperbolic factors for lambda < 0). Used clamped below at 1 as the
/// scan normalization.
pub fn envelope(problem: &ValidatedProblem, lambda: f64) -> f64 {
    if lambda > 0.0 {
        leading_inner(problem, lambda.sqrt(), false).abs()
    } else {
        leading_inner(problem, (-lambda).sqrt(), true).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{validate, ProblemSpec, TransmissionCoefficients};
    use std::f64::consts::PI;

    fn classical_dirichlet() -> ValidatedProblem {
        let spec = ProblemSpec {
            a: 0.0,
            b: 1.0,
            xi: vec![],
            rho: vec![1.0],
            q: vec![vec![0.0]],
            alpha: [1.0, 0.0, 0.0, 0.0],
            beta: [1.0, 0.0, 0.0, 0.0],
            trans: vec![],
        };
        validate(&spec, false).unwrap()
    }

    fn split_dirichlet() -> ValidatedProblem {
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
    fn classical_omega_closed_form() {
        // phi = sin(s x)/s, chi = -sin(s(x-1))/s: omega = sin(s)/s.
        let p = classical_dirichlet();
        let cfg = IntegratorConfig::default();
        let w_pi = omega_i(&p, PI * PI, 1, &cfg).unwrap();
        assert!(w_pi.abs() < 1e-9, "omega(pi^2) = {}", w_pi);

        let s = PI / 2.0;
        let w = omega_i(&p, s * s, 1, &cfg).unwrap();
        assert!((w - 2.0 / PI).abs() < 1e-9, "omega = {}", w);
    }

    #[test]
    fn interval_wronskians_equal_for_identity_transmission() {
        let p = split_dirichlet();
        let cfg = IntegratorConfig::default();
        let sample = omega(&p, 7.7, &cfg).unwrap();
        let [w1, w2] = [sample.interval_wronskians[0], sample.interval_wronskians[1]];
        assert!((w1 - w2).abs() < 1e-10 * w1.abs().max(1e-3), "{} vs {}", w1, w2);
        assert_eq!(sample.omega, w1);
    }

    #[test]
    fn tolerance_tiers_agree() {
        let p = split_dirichlet();
        let fine = IntegratorConfig::default();
        let coarse = fine.scan_tier();
        let a = omega(&p, 33.0, &fine).unwrap().omega;
        let b = omega(&p, 33.0, &coarse).unwrap().omega;
        assert!((a - b).abs() < 1e-6 * a.abs().max(1e-6));
    }

    #[test]
    fn boundary_form_matches_wronskian() {
        let p = split_dirichlet();
        let cfg = IntegratorConfig::default();
        for lambda in [3.0, 40.0, -5.0] {
            let w = omega(&p, lambda, &cfg).unwrap().omega;
            let bf = omega_boundary_form(&p, lambda, &cfg).unwrap();
            assert!((w - bf).abs() < 1e-8 * w.abs().max(1.0), "{} vs {}", w, bf);
        }
    }

    #[test]
    fn case_i_leading_term_single_sine() {
        let spec = ProblemSpec {
            a: 0.0,
            b: 1.0,
            xi: vec![],
            rho: vec![1.0],
            q: vec![vec![0.0]],
            alpha: [1.0, 0.0, 0.0, 1.0],
            beta: [1.0, 0.0, 0.0, 1.0],
            trans: vec![],
        };
        let p = validate(&spec, false).unwrap();
        let s = 2.3;
        let lt = leading_term(&p, s);
        assert!((lt - (-s.powi(5) * s.sin())).abs() < 1e-12 * s.powi(5));
        assert!(leading_term(&p, PI).abs() < 1e-10 * PI.powi(5));
    }

    #[test]
    fn case_iv_and_ii_cosine_zeros() {
        // Case IV with an interior point at 0.5, rho_1 = 1: zeros of the
        // first cosine factor at s = pi, 3 pi, ...
        let spec = ProblemSpec {
            a: 0.0,
            b: 1.0,
            xi: vec![0.5],
            rho: vec![1.0, 1.0],
            q: vec![vec![0.0], vec![0.0]],
            alpha: [0.0, 1.0, 1.0, 0.0],
            beta: [0.0, 1.0, 1.0, 0.0],
            trans: vec![TransmissionCoefficients::identity()],
        };
        let p = validate(&spec, false).unwrap();
        assert!(leading_term(&p, PI).abs() < 1e-9);
        assert!(leading_term(&p, 3.0 * PI).abs() < 1e-9);

        // Case II: zeros of cos(s(b - xi_r)/rho_{r+1}).
        let mut spec2 = p.spec().clone();
        spec2.alpha = [1.0, 0.0, 0.0, 1.0];
        let p2 = validate(&spec2, false).unwrap();
        assert_eq!(classify_case(&p2), CaseTag::II);
        assert!(leading_term(&p2, PI).abs() < 1e-9);
    }
}
