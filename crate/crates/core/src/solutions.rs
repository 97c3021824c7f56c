//! Piecewise fundamental solutions: `phi` initialized at the left endpoint
//! by the eigenparameter-dependent boundary condition, `chi` at the right,
//! each propagated across every subinterval with the interface transfer
//! applied algebraically at the interior points.

use crate::integrator::{integrate, IntegratorConfig, StateVector};
use crate::{Error, Result, ValidatedProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

/// One-sided limit selector at an interface point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// States of one subinterval at its two ends (one-sided limits at
/// interfaces).
#[derive(Debug, Clone, Copy)]
pub struct EndStates {
    pub left: StateVector,
    pub right: StateVector,
}

/// Interface states of `phi` or `chi` for a fixed lambda. Dense values are
/// recomputed on demand from the stored end states.
#[derive(Debug, Clone)]
pub struct PiecewiseSolution {
    pub direction: Direction,
    pub lambda: f64,
    pub intervals: Vec<EndStates>,
}

/// Initial state of `phi` at `x = a`: `(alpha2 - lambda*alpha4,
/// alpha1 - lambda*alpha3)`.
pub fn phi_initial_state(problem: &ValidatedProblem, lambda: f64) -> StateVector {
    let a = &problem.spec().alpha;
    StateVector::new(a[1] - lambda * a[3], a[0] - lambda * a[2])
}

/// Initial state of `chi` at `x = b`: `(beta2 + lambda*beta4,
/// beta1 + lambda*beta3)`.
pub fn chi_initial_state(problem: &ValidatedProblem, lambda: f64) -> StateVector {
    let b = &problem.spec().beta;
    StateVector::new(b[1] + lambda * b[3], b[0] + lambda * b[2])
}

/// Builds `phi`: satisfies the left boundary condition and all transmission
/// conditions by construction.
pub fn build_phi(
    problem: &ValidatedProblem,
    lambda: f64,
    cfg: &IntegratorConfig,
) -> Result<PiecewiseSolution> {
    let r = problem.r();
    let mut intervals = Vec::with_capacity(r + 1);
    let mut state = phi_initial_state(problem, lambda);
    for i in 0..=r {
        let (xl, xr) = problem.interval(i);
        let right = integrate(problem, i, lambda, xl, xr, state, cfg)?;
        intervals.push(EndStates { left: state, right });
        if i < r {
            state = problem.forward(i).apply(right);
        }
    }
    Ok(PiecewiseSolution {
        direction: Direction::LeftToRight,
        lambda,
        intervals,
    })
}

/// Builds `chi`: satisfies the right boundary condition and all
/// transmission conditions by construction.
pub fn build_chi(
    problem: &ValidatedProblem,
    lambda: f64,
    cfg: &IntegratorConfig,
) -> Result<PiecewiseSolution> {
    let r = problem.r();
    let mut intervals = vec![
        EndStates {
            left: StateVector::new(0.0, 0.0),
            right: StateVector::new(0.0, 0.0),
        };
        r + 1
    ];
    let mut state = chi_initial_state(problem, lambda);
    for i in (0..=r).rev() {
        let (xl, xr) = problem.interval(i);
        let left = integrate(problem, i, lambda, xr, xl, state, cfg)?;
        intervals[i] = EndStates { left, right: state };
        if i > 0 {
            state = problem.backward(i - 1).apply(left);
        }
    }
    Ok(PiecewiseSolution {
        direction: Direction::RightToLeft,
        lambda,
        intervals,
    })
}

/// Evaluates a stored solution at `x` by re-integrating from the nearest
/// stored end state of the containing subinterval. At an interface point
/// the caller must pick a side; without one the call is an error.
pub fn evaluate(
    solution: &PiecewiseSolution,
    problem: &ValidatedProblem,
    x: f64,
    side: Option<Side>,
    cfg: &IntegratorConfig,
) -> Result<StateVector> {
    let spec = problem.spec();
    if x < spec.a || x > spec.b {
        return Err(Error::OutOfDomain(x));
    }
    let i = match problem.subinterval_of(x) {
        Some(i) => i,
        None => {
            // x is exactly an interface point xi_k (k = index below).
            let k = spec.xi.iter().position(|&xi| xi == x).unwrap();
            match side {
                Some(Side::Left) => return Ok(solution.intervals[k].right),
                Some(Side::Right) => return Ok(solution.intervals[k + 1].left),
                None => return Err(Error::OutOfDomain(x)),
            }
        }
    };
    let (xl, xr) = problem.interval(i);
    let ends = &solution.intervals[i];
    if x - xl <= xr - x {
        integrate(problem, i, solution.lambda, xl, x, ends.left, cfg)
    } else {
        integrate(problem, i, solution.lambda, xr, x, ends.right, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{validate, ProblemSpec, TransmissionCoefficients};
    use std::f64::consts::PI;

    fn dirichlet_split(rho: Vec<f64>) -> ValidatedProblem {
        let spec = ProblemSpec {
            a: 0.0,
            b: 1.0,
            xi: vec![0.5],
            rho,
            q: vec![vec![0.0], vec![0.0]],
            alpha: [1.0, 0.0, 0.0, 0.0],
            beta: [1.0, 0.0, 0.0, 0.0],
            trans: vec![TransmissionCoefficients::identity()],
        };
        validate(&spec, false).unwrap()
    }

    #[test]
    fn phi_initial_states() {
        let p = dirichlet_split(vec![1.0, 1.0]);
        let s = phi_initial_state(&p, 7.3);
        assert_eq!((s.u, s.du), (0.0, 1.0));

        let mut spec = p.spec().clone();
        spec.alpha = [0.0, 1.0, 0.0, 0.0];
        let p2 = validate(&spec, false).unwrap();
        let s2 = phi_initial_state(&p2, -4.0);
        assert_eq!((s2.u, s2.du), (1.0, 0.0));
    }

    #[test]
    fn chi_initial_states() {
        let p = dirichlet_split(vec![1.0, 1.0]);
        let s = chi_initial_state(&p, 7.3);
        assert_eq!((s.u, s.du), (0.0, 1.0));

        let mut spec = p.spec().clone();
        spec.beta = [0.0, 0.0, 0.0, 1.0];
        let p2 = validate(&spec, false).unwrap();
        let s2 = chi_initial_state(&p2, 4.0);
        assert_eq!((s2.u, s2.du), (4.0, 0.0));
    }

    #[test]
    fn phi_transparent_identity_interface() {
        // Continuity makes the interface invisible: phi = sin(s x)/s.
        let p = dirichlet_split(vec![1.0, 1.0]);
        let cfg = IntegratorConfig::default();
        let s = 2.7;
        let phi = build_phi(&p, s * s, &cfg).unwrap();
        let end = phi.intervals[1].right;
        assert!((end.u - s.sin() / s).abs() < 1e-9);
        assert!((end.du - s.cos()).abs() < 1e-9);
    }

    #[test]
    fn chi_reflected_closed_form() {
        // chi = sin(s(x-1))/s for Dirichlet at b: chi(0) = -sin(s)/s,
        // chi'(0) = cos(s).
        let p = dirichlet_split(vec![1.0, 1.0]);
        let cfg = IntegratorConfig::default();
        let s = 1.9f64;
        let chi = build_chi(&p, s * s, &cfg).unwrap();
        let start = chi.intervals[0].left;
        assert!((start.u + s.sin() / s).abs() < 1e-9);
        assert!((start.du - s.cos()).abs() < 1e-9);
    }

    #[test]
    fn evaluate_matches_initial_state_and_sides() {
        let p = dirichlet_split(vec![1.0, 1.0]);
        let cfg = IntegratorConfig::default();
        let phi = build_phi(&p, 11.0, &cfg).unwrap();
        let at_a = evaluate(&phi, &p, 0.0, None, &cfg).unwrap();
        let init = phi_initial_state(&p, 11.0);
        assert_eq!((at_a.u, at_a.du), (init.u, init.du));

        let left = evaluate(&phi, &p, 0.5, Some(Side::Left), &cfg).unwrap();
        let right = evaluate(&phi, &p, 0.5, Some(Side::Right), &cfg).unwrap();
        let mapped = p.forward(0).apply(left);
        assert!((mapped.u - right.u).abs() < 1e-12);
        assert!((mapped.du - right.du).abs() < 1e-12);

        assert!(evaluate(&phi, &p, 0.5, None, &cfg).is_err());
        assert!(evaluate(&phi, &p, 1.5, None, &cfg).is_err());
    }

    #[test]
    fn evaluate_two_rho_composite_closed_form() {
        // rho = (1, 2), s = 2: on the second subinterval
        // u(x) = sin(0.5 s)/s * cos(s(x-0.5)/2) + (2/s) cos(0.5 s) * sin(s(x-0.5)/2).
        let p = dirichlet_split(vec![1.0, 2.0]);
        let cfg = IntegratorConfig::default();
        let s = 2.0f64;
        let phi = build_phi(&p, s * s, &cfg).unwrap();
        let got = evaluate(&phi, &p, 0.75, None, &cfg).unwrap();
        let t = s * 0.25 / 2.0;
        let expect_u = (0.5 * s).sin() / s * t.cos() + 2.0 / s * (0.5 * s).cos() * t.sin();
        let expect_du =
            -(0.5 * s).sin() / 2.0 * t.sin() + (0.5 * s).cos() * t.cos();
        assert!((got.u - expect_u).abs() < 1e-9, "u: {} vs {}", got.u, expect_u);
        assert!((got.du - expect_du).abs() < 1e-9);
    }

    #[test]
    fn phi_closed_form_at_pi() {
        let p = dirichlet_split(vec![1.0, 1.0]);
        let cfg = IntegratorConfig::default();
        let phi = build_phi(&p, PI * PI, &cfg).unwrap();
        assert!(phi.intervals[1].right.u.abs() < 1e-9);
    }
}
