//! Density evolution on the binary erasure channel.
//!
//! The recursion `x_{t+1} = eps * lambda(1 - rho(1 - x_t))` tracks the
//! probability that a belief-propagation message is still erased after `t`
//! decoding iterations, in the infinite-length (tree) limit. This module
//! iterates it, locates the BP threshold `eps_bp` by bisection, evaluates
//! the achievability bound on the threshold, and emits the data behind
//! bifurcation and graphical-threshold plots.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::degree_dist::{design_rate, DegreeDistribution};
use crate::error::Result;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// One run of the recursion at a fixed erasure probability.
#[derive(Debug, Clone)]
pub struct DeTrace {
    /// Channel erasure probability.
    pub epsilon: f64,
    /// Failure probabilities `x_0, x_1, ...` (index = iteration).
    pub x: Vec<f64>,
    /// True when an iterate fell below the tolerance or the sequence
    /// stopped moving by more than the tolerance.
    pub converged: bool,
    /// Number of update steps actually taken.
    pub iterations_used: usize,
}

impl DeTrace {
    pub fn final_x(&self) -> f64 {
        *self.x.last().expect("trace holds at least x0")
    }
}

/// How a candidate erasure probability is tested inside the bisection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMethod {
    /// Require `eps*lambda(1 - rho(1-x)) - x < 0` on a uniform grid.
    Grid,
    /// Require the iterated recursion to fall below a tolerance.
    Iterate,
}

/// Domain of the grid check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDomain {
    /// `(0, eps]` — the recursion started at `x0 = eps` never exceeds it
    /// while the trace is monotone.
    UpToEpsilon,
    /// `(0, 1]`.
    FullUnit,
}

#[derive(Debug, Clone)]
pub struct ThresholdConfig {
    pub method: ThresholdMethod,
    /// Bisection depth over the erasure probability.
    pub bisection_iters: usize,
    /// Number of grid points for [`ThresholdMethod::Grid`].
    pub grid_points: usize,
    pub grid_domain: GridDomain,
    /// Convergence tolerance for [`ThresholdMethod::Iterate`].
    pub iterate_tol: f64,
    pub iterate_max_iters: usize,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            method: ThresholdMethod::Grid,
            bisection_iters: 40,
            grid_points: 10_000,
            grid_domain: GridDomain::UpToEpsilon,
            iterate_tol: 1e-8,
            iterate_max_iters: 2000,
        }
    }
}

impl ThresholdConfig {
    pub fn iterate() -> Self {
        Self { method: ThresholdMethod::Iterate, ..Self::default() }
    }
}

/// Threshold of a distribution pair together with the capacity gap.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Largest erasure probability (up to bisection resolution) at which
    /// decoding still succeeds.
    pub eps_bp: f64,
    /// Shannon limit `1 - R` at the pair's design rate.
    pub eps_sh: f64,
    /// `eps_sh - eps_bp`; the design quality metric.
    pub gap_delta: f64,
    pub method: ThresholdMethod,
}

/// Achievability limit on the BP threshold for given rate and average
/// check-node degree.
#[derive(Debug, Clone, Copy)]
pub struct NoiseBound {
    /// Minimum capacity gap `R^(rho_bar-1)(1-R) / (1 + R^(rho_bar-1)(1-R))`.
    pub delta_min: f64,
    /// Corresponding noise limit `(1 - delta_min - R) / (1 - delta_min)`.
    pub eps_bp_max: f64,
}

// ---------------------------------------------------------------------------
// Core recursion
// ---------------------------------------------------------------------------

/// One update: `eps * lambda(1 - rho(1 - x))`.
pub fn de_step(lambda: &DegreeDistribution, rho: &DegreeDistribution, epsilon: f64, x: f64) -> f64 {
    epsilon * lambda.eval(1.0 - rho.eval(1.0 - x))
}

/// Iterates [`de_step`] from `x0` until the iterate drops below `tol`, the
/// step size drops below `tol`, or `max_iters` updates have run.
pub fn de_run(
    lambda: &DegreeDistribution,
    rho: &DegreeDistribution,
    epsilon: f64,
    x0: f64,
    max_iters: usize,
    tol: f64,
) -> DeTrace {
    let mut x = Vec::with_capacity(max_iters.min(4096) + 1);
    x.push(x0);
    let mut converged = false;
    let mut prev = x0;
    let mut iterations_used = 0;
    for _ in 0..max_iters {
        let next = de_step(lambda, rho, epsilon, prev);
        x.push(next);
        iterations_used += 1;
        if next < tol || (next - prev).abs() < tol {
            converged = true;
            break;
        }
        prev = next;
    }
    DeTrace { epsilon, x, converged, iterations_used }
}

fn grid_accepts(
    lambda: &DegreeDistribution,
    rho: &DegreeDistribution,
    epsilon: f64,
    cfg: &ThresholdConfig,
) -> bool {
    let hi = match cfg.grid_domain {
        GridDomain::UpToEpsilon => epsilon,
        GridDomain::FullUnit => 1.0,
    };
    if hi <= 0.0 {
        return true;
    }
    let g = cfg.grid_points as f64;
    for i in 1..=cfg.grid_points {
        let x = hi * i as f64 / g;
        if de_step(lambda, rho, epsilon, x) - x >= 0.0 {
            return false;
        }
    }
    true
}

fn iterate_accepts(
    lambda: &DegreeDistribution,
    rho: &DegreeDistribution,
    epsilon: f64,
    cfg: &ThresholdConfig,
) -> bool {
    let trace = de_run(lambda, rho, epsilon, epsilon, cfg.iterate_max_iters, cfg.iterate_tol);
    trace.final_x() < cfg.iterate_tol
}

/// BP threshold of a valid pair by bisection over the erasure probability.
pub fn threshold(
    lambda: &DegreeDistribution,
    rho: &DegreeDistribution,
    cfg: &ThresholdConfig,
) -> Result<ThresholdResult> {
    let rate = design_rate(lambda, rho)?;
    let eps_sh = 1.0 - rate;
    let accepts = |eps: f64| match cfg.method {
        ThresholdMethod::Grid => grid_accepts(lambda, rho, eps, cfg),
        ThresholdMethod::Iterate => iterate_accepts(lambda, rho, eps, cfg),
    };
    let eps_bp = if accepts(1.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..cfg.bisection_iters {
            let mid = 0.5 * (lo + hi);
            if accepts(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    // The converse bound eps_bp <= eps_sh holds exactly; keep the reported
    // pair consistent when bisection lands within resolution of it.
    let eps_bp = eps_bp.min(eps_sh);
    Ok(ThresholdResult { eps_bp, eps_sh, gap_delta: eps_sh - eps_bp, method: cfg.method })
}

/// Left-hand side of the stability condition, `lambda'(0) * rho'(1)`.
///
/// The zero fixed point of the recursion at erasure probability `eps`
/// attracts locally iff this product stays below `1/eps`.
pub fn stability_lhs(lambda: &DegreeDistribution, rho: &DegreeDistribution) -> f64 {
    lambda.eval_derivative(0.0) * rho.eval_derivative(1.0)
}

/// Achievability bound on the threshold at rate `rate` for designs with
/// average check-node degree `rho_bar`.
pub fn bp_noise_bound(rate: f64, rho_bar: f64) -> NoiseBound {
    debug_assert!(rate > 0.0 && rate < 1.0);
    debug_assert!(rho_bar > 1.0);
    let t = rate.powf(rho_bar - 1.0) * (1.0 - rate);
    let delta_min = t / (1.0 + t);
    let eps_bp_max = (1.0 - delta_min - rate) / (1.0 - delta_min);
    NoiseBound { delta_min, eps_bp_max }
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

/// One sample of the update-step excess `de_step(x) - x`.
#[derive(Debug, Clone, Copy)]
pub struct GraphicalPoint {
    pub epsilon: f64,
    pub x: f64,
    pub delta: f64,
}

/// Samples `de_step(x) - x` on a uniform grid over `(0, 1]` for each
/// erasure probability. Negative everywhere below the threshold; touching
/// zero marks a decoder halt.
pub fn graphical_threshold_data(
    lambda: &DegreeDistribution,
    rho: &DegreeDistribution,
    eps_list: &[f64],
    grid_points: usize,
) -> Vec<GraphicalPoint> {
    assert!(grid_points >= 2, "need at least two grid points");
    let mut out = Vec::with_capacity(eps_list.len() * grid_points);
    for &eps in eps_list {
        for i in 1..=grid_points {
            let x = i as f64 / grid_points as f64;
            out.push(GraphicalPoint { epsilon: eps, x, delta: de_step(lambda, rho, eps, x) - x });
        }
    }
    out
}

/// Final failure probability of the recursion started at `x0 = eps`.
#[derive(Debug, Clone, Copy)]
pub struct BifurcationPoint {
    pub epsilon: f64,
    pub x_final: f64,
}

/// Runs the recursion at every erasure probability in `eps_grid` and
/// records where it settles. Below the threshold the final point is zero;
/// above capacity it stays near the initial point.
pub fn bifurcation_data(
    lambda: &DegreeDistribution,
    rho: &DegreeDistribution,
    eps_grid: &[f64],
    iters: usize,
) -> Vec<BifurcationPoint> {
    assert!(iters >= 1);
    eps_grid
        .iter()
        .map(|&eps| {
            let trace = de_run(lambda, rho, eps, eps, iters, 1e-12);
            BifurcationPoint { epsilon: eps, x_final: trace.final_x() }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

pub fn write_bifurcation_csv<W: Write>(points: &[BifurcationPoint], w: &mut W) -> Result<()> {
    writeln!(w, "epsilon,x_final")?;
    for p in points {
        writeln!(w, "{},{}", p.epsilon, p.x_final)?;
    }
    Ok(())
}

pub fn write_graphical_csv<W: Write>(points: &[GraphicalPoint], w: &mut W) -> Result<()> {
    writeln!(w, "epsilon,x,delta")?;
    for p in points {
        writeln!(w, "{},{},{}", p.epsilon, p.x, p.delta)?;
    }
    Ok(())
}

pub fn write_trace_csv<W: Write>(trace: &DeTrace, w: &mut W) -> Result<()> {
    writeln!(w, "t,x_t")?;
    for (t, x) in trace.x.iter().enumerate() {
        writeln!(w, "{t},{x}")?;
    }
    Ok(())
}
