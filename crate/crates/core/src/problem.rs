//! Problem data: interval decomposition, piecewise coefficients, boundary
//! coefficient vectors and the transmission-condition transfer matrices.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Coefficients of one pair of transmission conditions at an interior
/// point `xi_i`:
///
/// ```text
/// am1*u'(xi-) + am0*u(xi-) + ap1*u'(xi+) + ap0*u(xi+) = 0
/// bm1*u'(xi-) + bm0*u(xi-) + bp1*u'(xi+) + bp0*u(xi+) = 0
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmissionCoefficients {
    pub ap1: f64,
    pub ap0: f64,
    pub am1: f64,
    pub am0: f64,
    pub bp1: f64,
    pub bp0: f64,
    pub bm1: f64,
    pub bm0: f64,
}

impl TransmissionCoefficients {
    /// Continuity of `u` and `u'` written in transmission form.
    pub fn identity() -> Self {
        TransmissionCoefficients {
            ap1: 0.0,
            ap0: 1.0,
            am1: 0.0,
            am0: -1.0,
            bp1: -1.0,
            bp0: 0.0,
            bm1: 1.0,
            bm0: 0.0,
        }
    }

    /// Column k (1-based) of the 2x4 coefficient matrix. Column order is
    /// (ap1, ap0, am1, am0) on the first row and (bp1, bp0, bm1, bm0) on
    /// the second.
    fn column(&self, k: usize) -> (f64, f64) {
        match k {
            1 => (self.ap1, self.bp1),
            2 => (self.ap0, self.bp0),
            3 => (self.am1, self.bm1),
            4 => (self.am0, self.bm0),
            _ => unreachable!("column index checked by caller"),
        }
    }

    /// 2x2 minor of columns j and k, `1 <= j < k <= 4`.
    pub fn delta(&self, j: usize, k: usize) -> Result<f64> {
        if j < 1 || k > 4 || j >= k {
            return Err(Error::IndexOutOfRange(j, k));
        }
        Ok(self.d(j, k))
    }

    pub(crate) fn d(&self, j: usize, k: usize) -> f64 {
        let (aj, bj) = self.column(j);
        let (ak, bk) = self.column(k);
        aj * bk - ak * bj
    }

    /// Linear map sending `(u, u')` at `xi-` to `(u, u')` at `xi+` so that
    /// both transmission conditions hold exactly.
    pub fn forward_transfer(&self) -> Result<TransferMatrix> {
        let d12 = self.d(1, 2);
        if d12 == 0.0 {
            return Err(Error::DegenerateTransmission {
                interface: 0,
                which: "Delta_12",
                value: d12,
            });
        }
        Ok(TransferMatrix {
            m11: -self.d(1, 4) / d12,
            m12: -self.d(1, 3) / d12,
            m21: self.d(2, 4) / d12,
            m22: self.d(2, 3) / d12,
        })
    }

    /// Inverse map, `(u, u')` at `xi+` to `(u, u')` at `xi-`.
    pub fn backward_transfer(&self) -> Result<TransferMatrix> {
        let d34 = self.d(3, 4);
        if d34 == 0.0 {
            return Err(Error::DegenerateTransmission {
                interface: 0,
                which: "Delta_34",
                value: d34,
            });
        }
        Ok(TransferMatrix {
            m11: self.d(2, 3) / d34,
            m12: self.d(1, 3) / d34,
            m21: -self.d(2, 4) / d34,
            m22: -self.d(1, 4) / d34,
        })
    }

    /// Residuals of the two transmission conditions for a pair of one-sided
    /// states.
    pub fn residuals(
        &self,
        minus: crate::StateVector,
        plus: crate::StateVector,
    ) -> (f64, f64) {
        let l = self.am1 * minus.du + self.am0 * minus.u + self.ap1 * plus.du + self.ap0 * plus.u;
        let lf = self.bm1 * minus.du + self.bm0 * minus.u + self.bp1 * plus.du + self.bp0 * plus.u;
        (l, lf)
    }

    /// Largest coefficient magnitude, used to normalize residuals.
    pub fn scale(&self) -> f64 {
        [
            self.ap1, self.ap0, self.am1, self.am0, self.bp1, self.bp0, self.bm1, self.bm0,
        ]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

/// 2x2 real matrix acting on `(u, u')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl TransferMatrix {
    pub fn apply(&self, s: crate::StateVector) -> crate::StateVector {
        crate::StateVector {
            u: self.m11 * s.u + self.m12 * s.du,
            du: self.m21 * s.u + self.m22 * s.du,
        }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }
}

/// Full description of one boundary-value-transmission problem.
///
/// `q` holds one polynomial coefficient list per subinterval, constant term
/// first, in powers of `(x - xi_{i-1})`. `rho[i]` is the square root of the
/// leading coefficient, i.e. `rho(x) = rho[i]^2` on subinterval i.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub xi: Vec<f64>,
    pub rho: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    pub alpha: [f64; 4],
    pub beta: [f64; 4],
    #[serde(default, rename = "transmission")]
    pub trans: Vec<TransmissionCoefficients>,
}

impl ProblemSpec {
    pub fn r(&self) -> usize {
        self.xi.len()
    }
}

/// A `ProblemSpec` that passed [`validate`], with interface transfer
/// matrices precomputed. Immutable after construction.
#[derive(Debug, Clone)]
pub struct ValidatedProblem {
    spec: ProblemSpec,
    forward: Vec<TransferMatrix>,
    backward: Vec<TransferMatrix>,
    warnings: Vec<String>,
}

/// Checks every structural invariant of the problem data. In strict mode,
/// non-positive minors `Delta_jk` for (j,k) outside {(1,2),(3,4)} are
/// errors; otherwise they only produce warnings.
pub fn validate(spec: &ProblemSpec, strict: bool) -> Result<ValidatedProblem> {
    let mut errors: Vec<String> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let r = spec.r();

    if !(spec.a < spec.b) {
        errors.push(Error::NonMonotonePoints(format!("a = {} >= b = {}", spec.a, spec.b)).to_string());
    }
    let mut prev = spec.a;
    for (i, &x) in spec.xi.iter().enumerate() {
        if !(x > prev) || !(x < spec.b) {
            errors.push(
                Error::NonMonotonePoints(format!("xi[{}] = {} not in ({}, {})", i, x, prev, spec.b))
                    .to_string(),
            );
        }
        prev = x;
    }
    if spec.rho.len() != r + 1 {
        errors.push(
            Error::ShapeMismatch(format!("rho has {} entries, expected r+1 = {}", spec.rho.len(), r + 1))
                .to_string(),
        );
    }
    if spec.q.len() != r + 1 {
        errors.push(
            Error::ShapeMismatch(format!("q has {} entries, expected r+1 = {}", spec.q.len(), r + 1))
                .to_string(),
        );
    }
    if spec.trans.len() != r {
        errors.push(
            Error::ShapeMismatch(format!(
                "transmission has {} entries, expected r = {}",
                spec.trans.len(),
                r
            ))
            .to_string(),
        );
    }
    for (i, &rho) in spec.rho.iter().enumerate() {
        if !(rho > 0.0) {
            errors.push(Error::NonPositiveRho(i + 1, rho).to_string());
        }
    }
    if spec.alpha.iter().all(|&c| c == 0.0) {
        errors.push(Error::VacuousBoundaryCondition("x = a").to_string());
    }
    if spec.beta.iter().all(|&c| c == 0.0) {
        errors.push(Error::VacuousBoundaryCondition("x = b").to_string());
    }

    let mut forward = Vec::with_capacity(r);
    let mut backward = Vec::with_capacity(r);
    for (i, t) in spec.trans.iter().enumerate() {
        let d12 = t.d(1, 2);
        let d34 = t.d(3, 4);
        if d12 == 0.0 {
            errors.push(
                Error::DegenerateTransmission {
                    interface: i + 1,
                    which: "Delta_12",
                    value: d12,
                }
                .to_string(),
            );
            continue;
        }
        if d34 == 0.0 {
            errors.push(
                Error::DegenerateTransmission {
                    interface: i + 1,
                    which: "Delta_34",
                    value: d34,
                }
                .to_string(),
            );
            continue;
        }
        for (j, k) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            let d = t.d(j, k);
            if d <= 0.0 {
                let msg = format!("interface {}: Delta_{}{} = {} is not positive", i + 1, j, k, d);
                if strict {
                    errors.push(msg);
                } else {
                    warnings.push(msg);
                }
            }
        }
        forward.push(t.forward_transfer()?);
        backward.push(t.backward_transfer()?);
    }

    if errors.is_empty() {
        Ok(ValidatedProblem {
            spec: spec.clone(),
            forward,
            backward,
            warnings,
        })
    } else {
        Err(Error::Validation(errors.join("\n")))
    }
}

impl ValidatedProblem {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Number of interior points.
    pub fn r(&self) -> usize {
        self.spec.r()
    }

    /// Endpoints of subinterval `i` (0-based), with `xi_0 = a`, `xi_{r+1} = b`.
    pub fn interval(&self, i: usize) -> (f64, f64) {
        let left = if i == 0 { self.spec.a } else { self.spec.xi[i - 1] };
        let right = if i == self.r() { self.spec.b } else { self.spec.xi[i] };
        (left, right)
    }

    pub fn length(&self, i: usize) -> f64 {
        let (l, r) = self.interval(i);
        r - l
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.spec.rho[i]
    }

    /// Potential value on subinterval `i`; Horner evaluation of the
    /// polynomial in `(x - xi_{i-1})`.
    pub fn q_at(&self, i: usize, x: f64) -> f64 {
        let (left, _) = self.interval(i);
        let t = x - left;
        self.spec.q[i].iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn max_abs_q(&self) -> f64 {
        // Coarse bound: sum of |coefficients| times powers of the length.
        (0..=self.r())
            .map(|i| {
                let len = self.length(i);
                self.spec.q[i]
                    .iter()
                    .enumerate()
                    .map(|(p, c)| c.abs() * len.powi(p as i32))
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn forward(&self, i: usize) -> &TransferMatrix {
        &self.forward[i]
    }

    pub fn backward(&self, i: usize) -> &TransferMatrix {
        &self.backward[i]
    }

    /// Subinterval containing x, away from interfaces. `None` when x lies
    /// outside `[a, b]` or exactly on an interface.
    pub fn subinterval_of(&self, x: f64) -> Option<usize> {
        if x < self.spec.a || x > self.spec.b {
            return None;
        }
        for (i, &xi) in self.spec.xi.iter().enumerate() {
            if x == xi {
                return None;
            }
            if x < xi {
                return Some(i);
            }
        }
        Some(self.r())
    }

    /// Sum of `length / rho` over subintervals: the total phase per unit s,
    /// which sets the asymptotic eigenvalue density.
    pub fn total_phase_scale(&self) -> f64 {
        (0..=self.r()).map(|i| self.length(i) / self.rho(i)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dirichlet_two_interval() -> ProblemSpec {
        ProblemSpec {
            a: 0.0,
            b: 1.0,
            xi: vec![0.5],
            rho: vec![1.0, 1.0],
            q: vec![vec![0.0], vec![0.0]],
            alpha: [1.0, 0.0, 0.0, 0.0],
            beta: [1.0, 0.0, 0.0, 0.0],
            trans: vec![TransmissionCoefficients::identity()],
        }
    }

    #[test]
    fn identity_transmission_validates() {
        let vp = validate(&dirichlet_two_interval(), false).unwrap();
        assert_eq!(vp.r(), 1);
    }

    #[test]
    fn out_of_range_interior_point_rejected() {
        let mut spec = dirichlet_two_interval();
        spec.xi = vec![1.5];
        let err = validate(&spec, false).unwrap_err();
        assert!(err.to_string().contains("xi[0]"));
    }

    #[test]
    fn proportional_rows_rejected() {
        let mut spec = dirichlet_two_interval();
        // Second row proportional to the first in columns 1 and 2.
        spec.trans = vec![TransmissionCoefficients {
            ap1: 1.0,
            ap0: 2.0,
            am1: 0.0,
            am0: -1.0,
            bp1: 2.0,
            bp0: 4.0,
            bm1: 1.0,
            bm0: 0.0,
        }];
        let err = validate(&spec, false).unwrap_err();
        assert!(err.to_string().contains("Delta_12"));
    }

    #[test]
    fn identity_deltas() {
        let t = TransmissionCoefficients::identity();
        assert_eq!(t.delta(1, 2).unwrap(), 1.0);
        assert_eq!(t.delta(3, 4).unwrap(), 1.0);
        assert_eq!(t.delta(1, 3).unwrap(), 0.0);
        assert!(t.delta(2, 2).is_err());
        assert!(t.delta(1, 5).is_err());
    }

    #[test]
    fn identity_transfer_matrices() {
        let t = TransmissionCoefficients::identity();
        let f = t.forward_transfer().unwrap();
        let b = t.backward_transfer().unwrap();
        for m in [f, b] {
            assert_eq!((m.m11, m.m12, m.m21, m.m22), (1.0, 0.0, 0.0, 1.0));
        }
    }

    #[test]
    fn forward_transfer_satisfies_transmission_conditions() {
        let t = TransmissionCoefficients {
            ap1: 1.3,
            ap0: -0.4,
            am1: 0.7,
            am0: 2.1,
            bp1: -0.2,
            bp0: 1.9,
            bm1: 0.5,
            bm0: -1.1,
        };
        let m = t.forward_transfer().unwrap();
        let minus = crate::StateVector { u: 0.8, du: -1.7 };
        let plus = m.apply(minus);
        let (l, lf) = t.residuals(minus, plus);
        let scale = t.scale() * 2.0;
        assert!(l.abs() < 1e-12 * scale, "L residual {}", l);
        assert!(lf.abs() < 1e-12 * scale, "Lfrak residual {}", lf);
        // det identity: det(forward) * Delta_12 = Delta_34
        let lhs = m.det() * t.d(1, 2);
        assert!((lhs - t.d(3, 4)).abs() < 1e-12 * t.d(3, 4).abs().max(1.0));
    }

    #[test]
    fn backward_inverts_forward() {
        let t = TransmissionCoefficients {
            ap1: 0.9,
            ap0: 1.4,
            am1: -0.6,
            am0: -1.0,
            bp1: 0.3,
            bp0: 1.0,
            bm1: 1.2,
            bm0: 0.8,
        };
        let f = t.forward_transfer().unwrap();
        let b = t.backward_transfer().unwrap();
        let s = crate::StateVector { u: -2.3, du: 0.9 };
        let round = b.apply(f.apply(s));
        assert!((round.u - s.u).abs() < 1e-12);
        assert!((round.du - s.du).abs() < 1e-12);
        let lhs = b.det() * t.d(3, 4);
        assert!((lhs - t.d(1, 2)).abs() < 1e-12);
    }
}
