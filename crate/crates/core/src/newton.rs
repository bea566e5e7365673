//! Damped Newton iteration with Armijo back-tracking, shared by the forward
//! (one `d`-dimensional problem per cell) and inverse (one coupled
//! `Kd`-dimensional problem) operators.

use crate::error::{HysteresisError, Result};
use crate::material::SolverConfig;

/// Trial points are kept at most this fraction of the saturation radius.
pub(crate) const DOMAIN_GUARD: f64 = 1.0 - 1e-9;

/// A smooth strongly convex problem as seen by the Newton driver.
pub(crate) trait NewtonProblem {
    type Point;

    fn gradient(&self, x: &Self::Point) -> Result<Self::Point>;

    fn norm(&self, g: &Self::Point) -> f64;

    fn dot(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// Solves `∇²f(x) d = −g`.
    fn direction(&mut self, x: &Self::Point, g: &Self::Point) -> Result<Self::Point>;

    /// Whether `x + τ d` stays inside the guarded domain.
    fn admissible(&self, x: &Self::Point, d: &Self::Point, tau: f64) -> bool;

    /// `f(x + τ d) − f(x)`, `None` outside the domain.
    fn change(&self, x: &Self::Point, d: &Self::Point, tau: f64) -> Option<f64>;

    fn advance(&self, x: &mut Self::Point, d: &Self::Point, tau: f64);
}

/// One accepted Newton step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub iteration: usize,
    /// Accepted step size `ρ^m`.
    pub tau: f64,
    /// `m`, including reductions forced by the domain guard.
    pub backtracks: usize,
    /// `⟨∇f(x), d⟩`.
    pub slope: f64,
    /// `f(x + τ d) − f(x)`.
    pub change: f64,
    /// `|∇f(x)|` at the start of the step.
    pub grad_norm: f64,
}

impl StepRecord {
    /// The sufficient-decrease inequality `f(x + τd) ≤ f(x) + σ τ ⟨∇f(x), d⟩`.
    pub fn satisfies_armijo(&self, sigma: f64) -> bool {
        self.change <= sigma * self.tau * self.slope
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NewtonOutcome {
    pub iterations: usize,
    pub backtracks: usize,
    pub initial_grad_norm: f64,
    pub final_grad_norm: f64,
}

pub(crate) fn damped_newton<P: NewtonProblem>(
    problem: &mut P,
    x: &mut P::Point,
    cfg: &SolverConfig,
    mut trace: Option<&mut Vec<StepRecord>>,
) -> Result<NewtonOutcome> {
    let mut g = problem.gradient(x)?;
    let g0 = problem.norm(&g);
    let target = (cfg.tol * g0).max(cfg.abs_tol);
    let mut backtracks_total = 0;
    let mut iteration = 0;
    loop {
        let gnorm = problem.norm(&g);
        if gnorm <= cfg.tol * g0 || gnorm <= cfg.abs_tol {
            return Ok(NewtonOutcome {
                iterations: iteration,
                backtracks: backtracks_total,
                initial_grad_norm: g0,
                final_grad_norm: gnorm,
            });
        }
        if iteration == cfg.max_newton {
            return Err(HysteresisError::NotConverged {
                iterations: iteration,
                grad_norm: gnorm,
                target,
            });
        }

        let d = problem.direction(x, &g)?;
        let slope = problem.dot(&g, &d);
        if !(slope < 0.0) {
            // Hessians are positive definite, so only a broken factorization lands here.
            return Err(HysteresisError::Singular);
        }

        let mut tau = 1.0;
        let mut m = 0;
        while !problem.admissible(x, &d, tau) {
            tau *= cfg.rho;
            m += 1;
            if m > cfg.max_backtracks {
                return Err(HysteresisError::LineSearchStall {
                    iteration,
                    backtracks: m,
                });
            }
        }
        let change = loop {
            match problem.change(x, &d, tau) {
                Some(change) if change <= cfg.sigma * tau * slope => break change,
                _ => {}
            }
            tau *= cfg.rho;
            m += 1;
            if m > cfg.max_backtracks {
                return Err(HysteresisError::LineSearchStall {
                    iteration,
                    backtracks: m,
                });
            }
        };

        if let Some(trace) = trace.as_deref_mut() {
            trace.push(StepRecord {
                iteration,
                tau,
                backtracks: m,
                slope,
                change,
                grad_norm: gnorm,
            });
        }
        problem.advance(x, &d, tau);
        backtracks_total += m;
        iteration += 1;
        g = problem.gradient(x)?;
    }
}
