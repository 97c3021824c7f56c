//! Solver for Sturm-Liouville boundary-value problems with a spectral
//! parameter in both boundary conditions and transmission conditions at
//! finitely many interior discontinuity points.
//!
//! The equation is `-rho(x) u'' + q(x) u = lambda u` on a union of
//! subintervals `(xi_{i-1}, xi_i)`, with boundary conditions whose
//! coefficients depend linearly on `lambda` and linear jump (transmission)
//! conditions coupling the one-sided limits of `(u, u')` at each interior
//! point. Eigenvalues are located as real zeros of the Wronskian
//! characteristic function built from two piecewise fundamental solutions.

pub mod asymptotics;
pub mod characteristic;
pub mod config;
pub mod eigenfunctions;
pub mod eigensolver;
pub mod ensemble;
pub mod integrator;
pub mod problem;
pub mod solutions;

pub use asymptotics::{classify_case, match_branches, CaseTag};
pub use characteristic::{leading_term, omega, CharacteristicSample};
pub use eigenfunctions::{residual_report, sample_eigenfunction, EigenfunctionSamples, ResidualReport};
pub use eigensolver::{find_eigenvalues, refine, scan_brackets, Eigenvalue};
pub use integrator::{IntegratorConfig, StateVector};
pub use problem::{ProblemSpec, TransferMatrix, TransmissionCoefficients, ValidatedProblem};
pub use solutions::{build_chi, build_phi, evaluate, Direction, PiecewiseSolution, Side};

use thiserror::Error;

/// Errors produced across the solver.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("interior points are not strictly increasing inside (a, b): {0}")]
    NonMonotonePoints(String),
    #[error("rho[{0}] must be positive, got {1}")]
    NonPositiveRho(usize, f64),
    #[error("degenerate transmission at interface {interface}: {which} = {value}")]
    DegenerateTransmission {
        interface: usize,
        which: &'static str,
        value: f64,
    },
    #[error("boundary condition at {0} has all four coefficients zero")]
    VacuousBoundaryCondition(&'static str),
    #[error("problem arrays have inconsistent lengths: {0}")]
    ShapeMismatch(String),
    #[error("determinant column indices out of range: ({0}, {1})")]
    IndexOutOfRange(usize, usize),
    #[error("integrator exceeded {0} steps")]
    StepLimitExceeded(usize),
    #[error("integrator step size underflow at x = {0}")]
    StepUnderflow(f64),
    #[error("point x = {0} outside the problem domain (or interface point without a side)")]
    OutOfDomain(f64),
    #[error("bracket ({0}, {1}) does not straddle a sign change")]
    NoSignChange(f64, f64),
    #[error("root refinement failed to converge in {0} iterations")]
    MaxIterations(usize),
    #[error("scan grid too coarse near lambda = {0} even after local refinement")]
    GridTooCoarse(f64),
    #[error("branch index {0} invalid for this problem/case")]
    BranchOutOfRange(usize),
    #[error("asymptotic eigenfunctions implemented only for case I (alpha4 != 0, beta4 != 0)")]
    CaseUnsupported,
    #[error("validation failed:\n{0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
