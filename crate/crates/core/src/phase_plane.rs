//! Phase-plane integration of the curvature equation
//!
//! ```text
//! h'' = c·e^{(h'² + h²)/2} - h
//! ```
//!
//! on the circle, written as a first-order system in `(h, h')`. Along exact
//! solutions the quantity `E = e^{-(h'² + h²)/2} + c·h` is conserved; its
//! numerical drift is the integration diagnostic. Shooting between
//! consecutive critical points measures the angular half-period directly
//! and serves as the independent oracle for the Θ quadrature.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ode::{locate_event, CrossingDirection, Dopri5, OdeError};
use crate::quad::QuadratureConfig;
use crate::scalar::{self, GoodPair, ScalarError};
use crate::theta::{self, ThetaError, SCAN_COLLAR};

/// Angle cap for the critical-point search: genuine half-periods of good
/// pairs are far below this; past it the orbit is a separatrix.
pub const EVENT_ANGLE_CAP: f64 = 4.0 * std::f64::consts::PI;

/// Size of the analytic Taylor step used to leave a critical point before
/// event detection arms.
const LAUNCH_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("no critical point within {EVENT_ANGLE_CAP} radians (degenerate or divergent orbit)")]
    EventMiss,
    #[error("arrival level {got} does not match expected {expected} (tolerance {tol})")]
    ArrivalMismatch { expected: f64, got: f64, tol: f64 },
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// A point on an orbit: angle, support value, derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeState {
    pub theta: f64,
    pub h: f64,
    pub hp: f64,
}

/// `E(h, h') = e^{-(h'² + h²)/2} + c·h`, conserved along solutions.
#[inline]
pub fn first_integral(c: f64, h: f64, hp: f64) -> f64 {
    (-0.5 * (hp * hp + h * h)).exp() + c * h
}

/// An integrated orbit with conservation diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub c: f64,
    pub samples: Vec<OdeState>,
    /// First-integral value at the initial state.
    pub e0: f64,
    /// Largest observed `|E - E0|` over the samples.
    pub max_drift: f64,
}

fn rhs_for(c: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |_t: f64, y: &[f64; 2]| {
        let (h, hp) = (y[0], y[1]);
        [hp, c * (0.5 * (hp * hp + h * h)).exp() - h]
    }
}

/// Adaptive integration over `[init.theta, init.theta + theta_span]`.
///
/// Samples are recorded at every accepted step. Blow-up (the exponential
/// right side grows without bound off the bounded orbits) surfaces as
/// [`OdeError::StepUnderflow`] carrying the last valid state.
pub fn integrate(
    c: f64,
    init: OdeState,
    theta_span: f64,
    tol: f64,
) -> Result<Trajectory, PhaseError> {
    let rhs = rhs_for(c);
    let mut solver = Dopri5::new(&rhs, init.theta, [init.h, init.hp], tol)?;
    let e0 = first_integral(c, init.h, init.hp);
    let t_end = init.theta + theta_span;
    let mut samples = vec![init];
    let mut max_drift: f64 = 0.0;
    while solver.t < t_end {
        solver.step(t_end)?;
        let state = OdeState {
            theta: solver.t,
            h: solver.y[0],
            hp: solver.y[1],
        };
        max_drift = max_drift.max((first_integral(c, state.h, state.hp) - e0).abs());
        samples.push(state);
    }
    Ok(Trajectory {
        c,
        samples,
        e0,
        max_drift,
    })
}

/// Shoot from a critical point at level `start` to the next critical point.
///
/// Returns the angular distance and the arrival level. The degenerate
/// start (`h' = 0`) is left with one analytic Taylor step
/// `h(δ) = h₀ + a·δ²/2 + a4·δ⁴/24`, `h'(δ) = a·δ + a4·δ³/6` where
/// `a = h''(θ₀) = c·e^{h₀²/2} - h₀`, so the detector never re-fires on the
/// start itself.
pub fn next_critical_point(c: f64, start: f64, tol: f64) -> Result<(f64, f64), PhaseError> {
    let exp_half = (0.5 * start * start).exp();
    let a = c * exp_half - start;
    let a4 = a * (c * exp_half * (a + start) - 1.0);
    let d = LAUNCH_STEP;
    let h_launch = start + 0.5 * a * d * d + a4 * d * d * d * d / 24.0;
    let hp_launch = a * d + a4 * d * d * d / 6.0;
    let direction = if a > 0.0 {
        CrossingDirection::Falling
    } else {
        CrossingDirection::Rising
    };
    let rhs = rhs_for(c);
    let mut solver = Dopri5::new(&rhs, d, [h_launch, hp_launch], tol)?;
    let event = |_t: f64, y: &[f64; 2]| y[1];
    while solver.t < EVENT_ANGLE_CAP {
        let step = solver.step(EVENT_ANGLE_CAP)?;
        if let Some((t_ev, y_ev)) = locate_event(&step, &event, direction) {
            return Ok((t_ev, y_ev[0]));
        }
    }
    Err(PhaseError::EventMiss)
}

/// Angular distance from the pair's minimum to its maximum, by shooting.
///
/// The arrival level must come back as `h0 + r` within `10·tol` at unit
/// conditioning; the band widens by `1/|φ'(h0+r)|` because the arrival
/// level is read off the conserved energy, whose sensitivity to `h`
/// degenerates as the pair approaches `m2`. A mismatch beyond that signals
/// the orbit was not the one the pair describes.
pub fn half_period_shoot(pair: &GoodPair, tol: f64) -> Result<f64, PhaseError> {
    let (angle, arrival) = next_critical_point(pair.c, pair.h0, tol)?;
    let expected = pair.h1();
    let conditioning = scalar::phi_deriv(pair.c, expected).abs().clamp(1e-9, 1.0);
    let band = 10.0 * tol / conditioning;
    if (arrival - expected).abs() > band.max(1e-13 * expected.abs()) {
        return Err(PhaseError::ArrivalMismatch {
            expected,
            got: arrival,
            tol: band,
        });
    }
    Ok(angle)
}

/// All critical points of the orbit through `(start, 0)` within `span`.
pub fn collect_critical_points(
    c: f64,
    start: f64,
    span: f64,
    tol: f64,
) -> Result<Vec<(f64, f64)>, PhaseError> {
    let exp_half = (0.5 * start * start).exp();
    let a = c * exp_half - start;
    let a4 = a * (c * exp_half * (a + start) - 1.0);
    let d = LAUNCH_STEP;
    let h_launch = start + 0.5 * a * d * d + a4 * d * d * d * d / 24.0;
    let hp_launch = a * d + a4 * d * d * d / 6.0;
    let rhs = rhs_for(c);
    let mut solver = Dopri5::new(&rhs, d, [h_launch, hp_launch], tol)?;
    let event = |_t: f64, y: &[f64; 2]| y[1];
    let mut out = Vec::new();
    while solver.t < span {
        let step = solver.step(span)?;
        if let Some((t_ev, y_ev)) = locate_event(&step, &event, CrossingDirection::Any) {
            out.push((t_ev, y_ev[0]));
        }
    }
    Ok(out)
}

/// Configuration for the nonconstant-solution search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodicSearchConfig {
    /// Grid points over the admissible interval per level.
    pub n_h0: usize,
    /// Largest `k` in the target set `{π/k}`.
    pub k_max: u32,
    pub quad: QuadratureConfig,
    /// ODE tolerance for the shooting oracle.
    pub shoot_tol: f64,
    /// A grid Θ within this distance of some `π/k` is flagged as a
    /// nonconstant-solution candidate.
    pub match_eps: f64,
}

impl Default for PeriodicSearchConfig {
    fn default() -> Self {
        PeriodicSearchConfig {
            n_h0: 48,
            k_max: 8,
            quad: QuadratureConfig::default(),
            shoot_tol: 1e-12,
            match_eps: 1e-6,
        }
    }
}

/// A grid point whose Θ matched some `π/k`: the reproducible initial
/// condition of a candidate nonconstant solution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NonconstantCandidate {
    pub c: f64,
    pub h0: f64,
    pub r: f64,
    pub energy: f64,
    pub theta: f64,
    pub k: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicSearchReport {
    pub c_grid: Vec<f64>,
    /// Levels at or above the peak `e^{-1/2}`: classified constant-only
    /// analytically (the profile function is strictly monotone there), not
    /// scanned.
    pub constant_only: Vec<f64>,
    /// Expected empty.
    pub found_nonconstant: Vec<NonconstantCandidate>,
    /// Per scanned level: distance of the grid Θ values from the nearest
    /// π/k (equals `min Θ - π` whenever Θ > π). `+∞` for constant-only
    /// levels, whose good-pair set is empty.
    pub per_c_margin: Vec<f64>,
    /// Largest |quadrature - shooting| gap over all scanned pairs.
    pub max_oracle_gap: f64,
    /// Per-point failures as (c, h0, message).
    pub failures: Vec<(f64, f64, String)>,
}

/// Sweep the good-pair range of every level in `c_grid`, measure Θ with
/// both oracles, and report the distance from the resonance set `{π/k}`.
pub fn search_periodic(
    c_grid: &[f64],
    cfg: &PeriodicSearchConfig,
) -> Result<PeriodicSearchReport, PhaseError> {
    let mut report = PeriodicSearchReport {
        c_grid: c_grid.to_vec(),
        constant_only: Vec::new(),
        found_nonconstant: Vec::new(),
        per_c_margin: Vec::new(),
        max_oracle_gap: 0.0,
        failures: Vec::new(),
    };
    for &c in c_grid {
        if c >= scalar::G_PEAK - scalar::DEGENERATE_BAND {
            report.constant_only.push(c);
            report.per_c_margin.push(f64::INFINITY);
            continue;
        }
        let dom = scalar::h0_domain(c)?;
        let width = dom.m1 - dom.lower;
        let lo = dom.lower + SCAN_COLLAR * width;
        let hi = dom.m1 - SCAN_COLLAR * width;
        let n = cfg.n_h0.max(2);
        let grid: Vec<f64> = (0..n)
            .map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64)
            .collect();
        let evaluated: Vec<Result<(GoodPair, f64, f64), PhaseError>> = grid
            .par_iter()
            .map(|&h0| {
                let pair = scalar::good_pair_from_h0(c, h0)?.ok_or_else(|| {
                    PhaseError::Theta(ThetaError::BadFamily(format!("h0 = {h0} left the domain")))
                })?;
                let by_quad = theta::theta_eval(&pair, &cfg.quad)?;
                let by_shoot = half_period_shoot(&pair, cfg.shoot_tol)?;
                Ok((pair, by_quad.value, by_shoot))
            })
            .collect();

        let mut margin = f64::INFINITY;
        for (idx, item) in evaluated.into_iter().enumerate() {
            match item {
                Ok((pair, tq, ts)) => {
                    report.max_oracle_gap = report.max_oracle_gap.max((tq - ts).abs());
                    for k in 1..=cfg.k_max {
                        let target = std::f64::consts::PI / k as f64;
                        let dist = (tq - target).abs();
                        margin = margin.min(dist);
                        if dist < cfg.match_eps {
                            report.found_nonconstant.push(NonconstantCandidate {
                                c,
                                h0: pair.h0,
                                r: pair.r,
                                energy: pair.energy,
                                theta: tq,
                                k,
                            });
                        }
                    }
                }
                Err(e) => report.failures.push((c, grid[idx], e.to_string())),
            }
        }
        report.per_c_margin.push(margin);
    }
    Ok(report)
}
