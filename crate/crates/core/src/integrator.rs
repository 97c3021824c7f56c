//! Adaptive Dormand-Prince 5(4) propagation of `(u, u')` across one
//! subinterval for a fixed real spectral parameter.

use std::sync::Once;

use crate::{Error, Result, ValidatedProblem};

/// Solution value and derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub u: f64,
    pub du: f64,
}

impl StateVector {
    pub fn new(u: f64, du: f64) -> Self {
        StateVector { u, du }
    }

    pub fn scaled(self, c: f64) -> Self {
        StateVector {
            u: c * self.u,
            du: c * self.du,
        }
    }

    pub fn norm(self) -> f64 {
        self.u.abs().max(self.du.abs())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Minimum step as a fraction of the integration span.
    pub min_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 1_000_000,
            min_step: 1e-14,
        }
    }
}

impl IntegratorConfig {
    /// Looser tolerance tier used while scanning for sign changes; roots are
    /// afterwards polished at the full tolerance.
    pub fn scan_tier(&self) -> Self {
        IntegratorConfig {
            rel_tol: self.rel_tol.max(1e-8),
            abs_tol: self.abs_tol.max(1e-10),
            ..*self
        }
    }
}

/// Right-hand side of the first-order system equivalent to
/// `-rho_i^2 u'' + q u = lambda u`: returns `(u', u'')`.
pub fn rhs(
    problem: &ValidatedProblem,
    interval_index: usize,
    x: f64,
    lambda: f64,
    s: StateVector,
) -> (f64, f64) {
    let rho2 = problem.rho(interval_index) * problem.rho(interval_index);
    (s.du, (problem.q_at(interval_index, x) - lambda) * s.u / rho2)
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// y5 - y4 error weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

static PHASE_WARNING: Once = Once::new();

/// Propagates `s0` from `x_from` to `x_to` inside subinterval
/// `interval_index` (either direction) with adaptive step control.
pub fn integrate(
    problem: &ValidatedProblem,
    interval_index: usize,
    lambda: f64,
    x_from: f64,
    x_to: f64,
    s0: StateVector,
    cfg: &IntegratorConfig,
) -> Result<StateVector> {
    let span = x_to - x_from;
    if span == 0.0 {
        return Ok(s0);
    }
    let (il, ir) = problem.interval(interval_index);
    let len = ir - il;
    if lambda > 0.0 {
        let phase = lambda.sqrt() * len / problem.rho(interval_index);
        if phase > 50.0 * std::f64::consts::PI {
            PHASE_WARNING.call_once(|| {
                log::warn!(
                    "oscillation phase s*l/rho = {:.1} exceeds 50*pi; phase accuracy degrades",
                    phase
                );
            });
        }
    }

    let f = |x: f64, y: [f64; 2]| -> [f64; 2] {
        let (d0, d1) = rhs(problem, interval_index, x, lambda, StateVector::new(y[0], y[1]));
        [d0, d1]
    };

    let h_cap = len.abs() / 8.0;
    let dir = span.signum();
    let mut x = x_from;
    let mut y = [s0.u, s0.du];
    let mut h = (span.abs() / 16.0).min(h_cap).max(span.abs() * 1e-6);
    let mut k0 = f(x, y);

    for _ in 0..cfg.max_steps {
        let remaining = (x_to - x).abs();
        if remaining == 0.0 {
            break;
        }
        h = h.min(remaining).min(h_cap);
        if h < cfg.min_step * span.abs() {
            return Err(Error::StepUnderflow(x));
        }
        let hs = dir * h;

        let mut k = [[0.0f64; 2]; 7];
        k[0] = k0;
        for stage in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                yi[0] += hs * A[stage][j] * kj[0];
                yi[1] += hs * A[stage][j] * kj[1];
            }
            k[stage + 1] = f(x + C[stage] * hs, yi);
        }
        // Stage 7 input is the 5th-order solution (FSAL).
        let y_new = {
            let mut yn = y;
            for (j, kj) in k.iter().enumerate().take(6) {
                yn[0] += hs * A[5][j] * kj[0];
                yn[1] += hs * A[5][j] * kj[1];
            }
            yn
        };

        let mut err = 0.0f64;
        for c in 0..2 {
            let e: f64 = (0..7).map(|j| E[j] * k[j][c]).sum::<f64>() * hs;
            let sc = cfg.abs_tol + cfg.rel_tol * y[c].abs().max(y_new[c].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / 2.0).sqrt();

        if err <= 1.0 {
            x += hs;
            y = y_new;
            k0 = k[6];
            if (x_to - x) * dir <= 0.0 {
                break;
            }
        } else {
            k0 = k[0];
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    if (x_to - x) * dir > 0.0 {
        return Err(Error::StepLimitExceeded(cfg.max_steps));
    }
    Ok(StateVector::new(y[0], y[1]))
}
