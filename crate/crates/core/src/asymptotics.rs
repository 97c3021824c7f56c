//! Four-case asymptotic eigenvalue branches and the case-I asymptotic
//! eigenfunction envelope, plus matching of numerically computed spectra
//! against the branch predictions.

use std::f64::consts::PI;

use crate::eigensolver::Eigenvalue;
use crate::{Error, Result, ValidatedProblem};

/// Which of `alpha_4`, `beta_4` vanish. Determines the shape of every
/// asymptotic formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// alpha4 != 0 and beta4 != 0
    I,
    /// alpha4 != 0 and beta4 == 0
    II,
    /// alpha4 == 0 and beta4 != 0
    III,
    /// alpha4 == 0 and beta4 == 0
    IV,
}

pub fn classify_case(problem: &ValidatedProblem) -> CaseTag {
    let a4 = problem.spec().alpha[3] != 0.0;
    let b4 = problem.spec().beta[3] != 0.0;
    match (a4, b4) {
        (true, true) => CaseTag::I,
        (true, false) => CaseTag::II,
        (false, true) => CaseTag::III,
        (false, false) => CaseTag::IV,
    }
}

fn check_branch(problem: &ValidatedProblem, j: usize) -> Result<()> {
    if j < 1 || j > problem.r() + 1 {
        return Err(Error::BranchOutOfRange(j));
    }
    Ok(())
}

/// Leading asymptotic value `s_n^{(j)}` for branch `j` (1-based) and index
/// `n >= 1`. Interval lengths enter as `l_j = xi_j - xi_{j-1} > 0`.
pub fn asymptotic_s(
    problem: &ValidatedProblem,
    case: CaseTag,
    j: usize,
    n: usize,
) -> Result<f64> {
    check_branch(problem, j)?;
    let r = problem.r();
    let nf = n as f64;
    let len = problem.length(j - 1);
    let rho = problem.rho(j - 1);
    let value = match case {
        CaseTag::I => (nf / 2.0 - 1.0) * rho * PI / len,
        CaseTag::II => {
            if j == r + 1 {
                (nf + 0.5) * rho * PI / len
            } else {
                (nf - 1.0) * rho * PI / (2.0 * len)
            }
        }
        CaseTag::III => {
            if j == 1 {
                (nf + 0.5) * rho * PI / len
            } else {
                (nf - 1.0) * rho * PI / (2.0 * len)
            }
        }
        CaseTag::IV => {
            if j == 1 || j == r + 1 {
                (nf + 0.5) * rho * PI / len
            } else {
                nf * rho * PI / (2.0 * len)
            }
        }
    };
    Ok(value)
}

/// Gap between consecutive branch values, `s_{n+1}^{(j)} - s_n^{(j)}`.
pub fn branch_spacing(problem: &ValidatedProblem, case: CaseTag, j: usize) -> Result<f64> {
    check_branch(problem, j)?;
    let r = problem.r();
    let len = problem.length(j - 1);
    let rho = problem.rho(j - 1);
    let endpoint = match case {
        CaseTag::I => false,
        CaseTag::II => j == r + 1,
        CaseTag::III => j == 1,
        CaseTag::IV => j == 1 || j == r + 1,
    };
    Ok(if endpoint {
        rho * PI / len
    } else {
        rho * PI / (2.0 * len)
    })
}

/// One numeric eigenvalue paired with an asymptotic branch entry.
#[derive(Debug, Clone, Copy)]
pub struct MatchedPair {
    /// Position in the numeric input slice.
    pub numeric_index: usize,
    pub s_numeric: f64,
    /// Branch j (1-based).
    pub branch: usize,
    /// Asymptotic index n.
    pub n: usize,
    /// |s_numeric - s_asymptotic|
    pub error: f64,
    pub s_asymptotic: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BranchMatch {
    pub pairs: Vec<MatchedPair>,
    pub unmatched_numeric: Vec<usize>,
    /// (branch, n) entries below the numeric range that no eigenvalue
    /// claimed.
    pub unmatched_asymptotic: Vec<(usize, usize)>,
}

struct Entry {
    branch: usize,
    n: usize,
    s: f64,
    spacing: f64,
    claimed: bool,
}

/// Greedy nearest-neighbor assignment of numeric eigenvalues (in
/// increasing s) to unclaimed asymptotic values, accepted when the
/// distance is below half the local branch spacing.
pub fn match_branches(numeric: &[Eigenvalue], problem: &ValidatedProblem) -> BranchMatch {
    let case = classify_case(problem);
    let s_max = numeric
        .iter()
        .filter_map(|e| e.s)
        .fold(0.0f64, f64::max);

    let mut entries: Vec<Entry> = Vec::new();
    for j in 1..=problem.r() + 1 {
        let spacing = branch_spacing(problem, case, j).expect("branch in range");
        let mut n = 1usize;
        loop {
            let s = asymptotic_s(problem, case, j, n).expect("branch in range");
            if s > s_max + spacing {
                break;
            }
            if s > 0.0 {
                entries.push(Entry {
                    branch: j,
                    n,
                    s,
                    spacing,
                    claimed: false,
                });
            }
            n += 1;
            if n > 1_000_000 {
                break; // zero-length guard; lengths are validated positive
            }
        }
    }

    let mut result = BranchMatch::default();
    for (idx, eig) in numeric.iter().enumerate() {
        let s_num = match eig.s {
            Some(s) => s,
            None => {
                result.unmatched_numeric.push(idx);
                continue;
            }
        };
        let best = entries
            .iter_mut()
            .filter(|e| !e.claimed)
            .min_by(|a, b| {
                (a.s - s_num)
                    .abs()
                    .partial_cmp(&(b.s - s_num).abs())
                    .unwrap()
            });
        match best {
            Some(e) if (e.s - s_num).abs() < e.spacing / 2.0 => {
                e.claimed = true;
                result.pairs.push(MatchedPair {
                    numeric_index: idx,
                    s_numeric: s_num,
                    branch: e.branch,
                    n: e.n,
                    error: (e.s - s_num).abs(),
                    s_asymptotic: e.s,
                });
            }
            _ => result.unmatched_numeric.push(idx),
        }
    }
    for e in &entries {
        if !e.claimed {
            result.unmatched_asymptotic.push((e.branch, e.n));
        }
    }
    result
}

/// Leading term of the case-I asymptotic eigenfunction `phi_n^{(k)}(x)`.
/// `x` must lie strictly inside a subinterval.
pub fn asymptotic_phi(problem: &ValidatedProblem, n: usize, x: f64, k: usize) -> Result<f64> {
    if classify_case(problem) != CaseTag::I {
        return Err(Error::CaseUnsupported);
    }
    check_branch(problem, k)?;
    let spec = problem.spec();
    let i = problem.subinterval_of(x).ok_or(Error::OutOfDomain(x))?;
    let s = asymptotic_s(problem, CaseTag::I, k, n)?;
    let alpha4 = spec.alpha[3];
    if i == 0 {
        return Ok(-alpha4 * s * s * (s * (x - spec.a) / problem.rho(0)).cos());
    }
    // x in (xi_i, xi_{i+1}) with 1-based interface count i.
    let mut value = if i % 2 == 0 { -alpha4 } else { alpha4 }; // (-1)^{i+1}
    value *= s.powi(i as i32 + 2);
    for j in 1..=i {
        let t = &spec.trans[j - 1];
        let lj = problem.length(j - 1);
        let rho_j = problem.rho(j - 1);
        value *= t.d(2, 4) / (t.d(1, 2) * rho_j) * (s * lj / rho_j).sin();
    }
    value *= (s * (x - spec.xi[i - 1]) / problem.rho(i)).cos();
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{validate, ProblemSpec, TransmissionCoefficients};

    fn problem_with(alpha: [f64; 4], beta: [f64; 4], xi: Vec<f64>, rho: Vec<f64>) -> ValidatedProblem {
        let r = xi.len();
        let spec = ProblemSpec {
            a: 0.0,
            b: 1.0,
            xi,
            rho,
            q: vec![vec![0.0]; r + 1],
            alpha,
            beta,
            trans: vec![TransmissionCoefficients::identity(); r],
        };
        validate(&spec, false).unwrap()
    }

    #[test]
    fn case_classification() {
        let p1 = problem_with([1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 1.0], vec![], vec![1.0]);
        assert_eq!(classify_case(&p1), CaseTag::I);
        let p2 = problem_with([1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0], vec![], vec![1.0]);
        assert_eq!(classify_case(&p2), CaseTag::II);
        let p4 = problem_with([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], vec![], vec![1.0]);
        assert_eq!(classify_case(&p4), CaseTag::IV);
    }

    #[test]
    fn branch_values_match_displayed_formulas() {
        // Case I, r = 0, unit interval and rho: s_n = (n/2 - 1) pi.
        let p1 = problem_with([1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 1.0], vec![], vec![1.0]);
        let s6 = asymptotic_s(&p1, CaseTag::I, 1, 6).unwrap();
        assert!((s6 - 2.0 * PI).abs() < 1e-14);

        // Case IV, first branch with xi_1 - a = 0.5: s_n = (2n + 1) pi.
        let p4 = problem_with(
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            vec![0.5],
            vec![1.0, 1.0],
        );
        let s3 = asymptotic_s(&p4, CaseTag::IV, 1, 3).unwrap();
        assert!((s3 - 7.0 * PI).abs() < 1e-12);

        // Case II end branch with rho_{r+1} = 2, b - xi_r = 0.5.
        let p2 = problem_with(
            [1.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 1.0, 0.0],
            vec![0.5],
            vec![1.0, 2.0],
        );
        let s = asymptotic_s(&p2, CaseTag::II, 2, 3).unwrap();
        assert!((s - 3.5 * 4.0 * PI).abs() < 1e-12);

        assert!(asymptotic_s(&p2, CaseTag::II, 5, 3).is_err());
    }

    #[test]
    fn empty_numeric_input_matches_nothing() {
        let p = problem_with([1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 1.0], vec![], vec![1.0]);
        let m = match_branches(&[], &p);
        assert!(m.pairs.is_empty());
        assert!(m.unmatched_numeric.is_empty());
    }

    #[test]
    fn asymptotic_phi_case_gate_and_endpoint_value() {
        let p = problem_with([1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 1.0], vec![], vec![1.0]);
        let s = asymptotic_s(&p, CaseTag::I, 1, 8).unwrap();
        let x = 0.25;
        let v = asymptotic_phi(&p, 8, x, 1).unwrap();
        assert!((v - (-s * s * (s * x).cos())).abs() < 1e-12 * s * s);

        let p4 = problem_with([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], vec![], vec![1.0]);
        assert!(matches!(asymptotic_phi(&p4, 3, 0.5, 1), Err(Error::CaseUnsupported)));
    }
}
