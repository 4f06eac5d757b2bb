//! Homotopy-continuation solver for the prescribed Gaussian surface-area
//! measure problem with even positive data.
//!
//! The equation for the support function `h` on the uniform grid is
//!
//! ```text
//! F(h) = h'' + h - 2π·e^{(h'² + h²)/2}·f = 0
//! ```
//!
//! (spectral derivatives), which vanishes iff the measure density of the
//! body with support `h` equals `f` at the nodes. Solutions are continued
//! in `t` along `f_t = (1-t)·c₀ + t·f` from a constant solution of the
//! constant problem at `t = 0`; seeding with the small constant `r₂ < 1`
//! or the large constant `r₁ > 1` produces the two solution branches.
//! Newton steps use the exact dense linearization
//!
//! ```text
//! L·φ = φ'' + φ - 2π·e^{(h'²+h²)/2}·f·(h'·φ' + h·φ),
//! ```
//!
//! which at `h ≡ r`, `f ≡ c/2π` collapses to `φ'' + (1 - r²)·φ`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::geom::{self, GeomError, SupportSamples};
use crate::scalar::{self, ScalarError};
use crate::special::INV_SQRT_2PI;
use crate::spectral;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `‖f‖_{L¹}` bound required of prescribed data: `1/√(2π)`.
pub const L1_BOUND: f64 = INV_SQRT_2PI;

/// Evenness tolerance before exact symmetrization.
pub const EVENNESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("grid size {0} must be even and at least 16")]
    BadGrid(usize),
    #[error("data at node {index} is not positive: {value}")]
    NotPositive { index: usize, value: f64 },
    #[error("data is not even: |f(θ) - f(θ+π)| = {diff} at node {index}")]
    NotEven { index: usize, diff: f64 },
    #[error("L¹ norm {l1} is not below the bound 1/sqrt(2π) = {bound}")]
    L1TooLarge { l1: f64, bound: f64 },
    #[error("Fourier cosine input has a nonzero odd mode at index {index}: {value}")]
    OddFourierMode { index: usize, value: f64 },
    #[error("invalid solver config: {0}")]
    BadConfig(String),
    #[error("continuation stalled at t = {t_reached}: {cause}")]
    ContinuationFailed { t_reached: f64, cause: String },
    #[error("converged iterate lost convexity: h'' + h = {value} at node {index}")]
    ConvexityLost { index: usize, value: f64 },
    #[error("a-priori bound violated: {quantity} = {value} at node {index}")]
    BoundViolation {
        quantity: &'static str,
        index: usize,
        value: f64,
    },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Validated even positive data with an `L¹` norm below `1/√(2π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrescribedData {
    values: Vec<f64>,
    l1_norm: f64,
}

impl PrescribedData {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn l1_norm(&self) -> f64 {
        self.l1_norm
    }
}

/// Validate raw samples: positivity, evenness within [`EVENNESS_TOL`]
/// (then symmetrized exactly by antipodal averaging), and the `L¹` bound.
pub fn validate_f(raw: &[f64]) -> Result<PrescribedData, SolveError> {
    let n = raw.len();
    if n < 16 || n % 2 != 0 {
        return Err(SolveError::BadGrid(n));
    }
    for (index, &value) in raw.iter().enumerate() {
        if !(value > 0.0) {
            return Err(SolveError::NotPositive { index, value });
        }
    }
    let half = n / 2;
    for j in 0..half {
        let diff = (raw[j] - raw[j + half]).abs();
        if diff > EVENNESS_TOL {
            return Err(SolveError::NotEven { index: j, diff });
        }
    }
    let mut values = raw.to_vec();
    for j in 0..half {
        let avg = 0.5 * (values[j] + values[j + half]);
        values[j] = avg;
        values[j + half] = avg;
    }
    let l1_norm = geom::pairwise_sum(&values) * TWO_PI / n as f64;
    if l1_norm >= L1_BOUND {
        return Err(SolveError::L1TooLarge {
            l1: l1_norm,
            bound: L1_BOUND,
        });
    }
    Ok(PrescribedData { values, l1_norm })
}

/// Build data from even cosine modes: entry `k` of `coeffs` multiplies
/// `cos(kθ)`. Nonzero entries at odd `k` are rejected.
pub fn data_from_fourier_cos(coeffs: &[f64], n: usize) -> Result<PrescribedData, SolveError> {
    for (index, &value) in coeffs.iter().enumerate() {
        if index % 2 == 1 && value != 0.0 {
            return Err(SolveError::OddFourierMode { index, value });
        }
    }
    let raw: Vec<f64> = (0..n)
        .map(|j| {
            let theta = TWO_PI * j as f64 / n as f64;
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &a)| a * (k as f64 * theta).cos())
                .sum()
        })
        .collect();
    validate_f(&raw)
}

/// Circular Gaussian smoothing with angular bandwidth `sigma` — the
/// explicit preprocessing step for rough data. The solver itself requires
/// smooth samples.
pub fn mollify(values: &[f64], sigma: f64) -> Vec<f64> {
    assert!(sigma > 0.0, "bandwidth must be positive");
    let n = values.len();
    let dtheta = TWO_PI / n as f64;
    let mut kernel: Vec<f64> = (0..n)
        .map(|m| {
            let d = (m as f64 * dtheta).min(TWO_PI - m as f64 * dtheta);
            (-0.5 * d * d / (sigma * sigma)).exp()
        })
        .collect();
    let norm: f64 = kernel.iter().sum();
    for w in &mut kernel {
        *w /= norm;
    }
    (0..n)
        .map(|j| (0..n).map(|m| kernel[m] * values[(j + n - m) % n]).sum())
        .collect()
}

/// `F(h) = D²h + h - 2π·e^{(h'²+h²)/2}·f` at every node.
///
/// A pure diagnostic map on raw samples: `F(h) = 0` iff the measure
/// density of the body with support `h` equals `f` at the nodes. The data
/// slice is deliberately unvalidated so the map can probe configurations
/// (oversized constants, transient iterates) that the solver's input
/// gate would reject.
pub fn residual_map(h: &[f64], f: &[f64]) -> Vec<f64> {
    assert_eq!(h.len(), f.len(), "grid sizes must match");
    let hp = spectral::derivative(h);
    let hpp = spectral::second_derivative(h);
    (0..h.len())
        .map(|j| {
            let u = 0.5 * (hp[j] * hp[j] + h[j] * h[j]);
            hpp[j] + h[j] - TWO_PI * u.exp() * f[j]
        })
        .collect()
}

/// Dense derivative of [`residual_map`] at `h`.
pub fn linearization(h: &[f64], f: &[f64]) -> DMatrix<f64> {
    let n = h.len();
    assert_eq!(n, f.len(), "grid sizes must match");
    let hp = spectral::derivative(h);
    let d1 = spectral::d1_matrix(n);
    let d2 = spectral::d2_matrix(n);
    let mut out = d2;
    for j in 0..n {
        let u = 0.5 * (hp[j] * hp[j] + h[j] * h[j]);
        let a = TWO_PI * u.exp() * f[j];
        for k in 0..n {
            out[(j, k)] -= a * hp[j] * d1[(j, k)];
        }
        out[(j, j)] += 1.0 - a * h[j];
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Seeded at the small constant `r₂ < 1` (bodies with `γ₂ < 1/2`).
    Small,
    /// Seeded at the large constant `r₁ > 1` (bodies with `γ₂ > 1/2`).
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    pub newton_tol: f64,
    pub max_newton: usize,
    pub t_step_init: f64,
    pub t_step_min: f64,
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            newton_tol: 1e-11,
            max_newton: 30,
            t_step_init: 0.25,
            t_step_min: 1e-4,
            damping: 1.0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<(), SolveError> {
        if self.newton_tol < 1e-13 {
            return Err(SolveError::BadConfig(format!(
                "newton_tol {} below 1e-13",
                self.newton_tol
            )));
        }
        if !(self.t_step_min > 0.0 && self.t_step_min < self.t_step_init && self.t_step_init <= 1.0)
        {
            return Err(SolveError::BadConfig(format!(
                "need 0 < t_step_min < t_step_init <= 1, got {} and {}",
                self.t_step_min, self.t_step_init
            )));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(SolveError::BadConfig(format!(
                "damping {} outside (0, 1]",
                self.damping
            )));
        }
        Ok(())
    }
}

/// A converged branch of the prescribed-measure problem.
#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub branch: Branch,
    pub h: SupportSamples,
    pub residual_inf: f64,
    pub gamma2: f64,
    /// Constant density the homotopy started from.
    pub c0_used: f64,
    pub perimeter: f64,
    /// 1.0 on full continuation.
    pub t_reached: f64,
    pub newton_iterations: usize,
}

enum NewtonFailure {
    NotConverged(f64),
    SingularJacobian,
    ConvexityLost,
    PositivityLost,
}

impl std::fmt::Display for NewtonFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NewtonFailure::NotConverged(r) => write!(f, "Newton stalled at residual {r}"),
            NewtonFailure::SingularJacobian => write!(f, "singular Jacobian"),
            NewtonFailure::ConvexityLost => write!(f, "iterate lost convexity"),
            NewtonFailure::PositivityLost => write!(f, "iterate lost positivity"),
        }
    }
}

fn project_even(h: &mut [f64]) {
    let half = h.len() / 2;
    for j in 0..half {
        let avg = 0.5 * (h[j] + h[j + half]);
        h[j] = avg;
        h[j + half] = avg;
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn iterate_ok(h: &[f64]) -> bool {
    if h.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return false;
    }
    let hpp = spectral::second_derivative(h);
    hpp.iter().zip(h).all(|(&d2, &x)| d2 + x > 0.0)
}

/// Newton iteration at fixed data; enforces evenness, positivity, and
/// convexity on every iterate, retrying with halved damping before giving
/// up on a step.
fn newton_solve(
    h: &mut Vec<f64>,
    f: &[f64],
    cfg: &SolverConfig,
    iterations: &mut usize,
) -> Result<f64, NewtonFailure> {
    let mut res = residual_map(h, f);
    let mut res_norm = inf_norm(&res);
    for _ in 0..cfg.max_newton {
        if res_norm <= cfg.newton_tol {
            return Ok(res_norm);
        }
        let jac = linearization(h, f);
        let rhs = DVector::from_iterator(res.len(), res.iter().map(|x| -x));
        let delta = match jac.lu().solve(&rhs) {
            Some(d) => d,
            None => return Err(NewtonFailure::SingularJacobian),
        };
        let mut factor = cfg.damping;
        let mut accepted = false;
        for _ in 0..6 {
            let mut candidate: Vec<f64> =
                h.iter().zip(delta.iter()).map(|(x, d)| x + factor * d).collect();
            project_even(&mut candidate);
            if iterate_ok(&candidate) {
                *h = candidate;
                accepted = true;
                break;
            }
            factor *= 0.5;
        }
        if !accepted {
            let probe: Vec<f64> = h.iter().zip(delta.iter()).map(|(x, d)| x + d).collect();
            return Err(if probe.iter().any(|&x| !(x > 0.0)) {
                NewtonFailure::PositivityLost
            } else {
                NewtonFailure::ConvexityLost
            });
        }
        *iterations += 1;
        res = residual_map(h, f);
        res_norm = inf_norm(&res);
    }
    if res_norm <= cfg.newton_tol {
        Ok(res_norm)
    } else {
        Err(NewtonFailure::NotConverged(res_norm))
    }
}

/// Continue the chosen branch from the constant solution at `t = 0` to the
/// target data at `t = 1`.
///
/// The starting constant density is `c₀ = min(min f, e^{-1}/(2π))/2`:
/// small enough that both constants exist, the `L¹` bound holds along the
/// whole homotopy, and the constant-level linearization is invertible.
/// Steps halve on Newton failure; step underflow is reported as
/// [`SolveError::ContinuationFailed`] with the reached `t`, never masked.
pub fn solve_branch(
    f: &PrescribedData,
    branch: Branch,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    cfg.validate()?;
    let n = f.n();
    let f_min = f.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let c0 = 0.5 * f_min.min((-1.0f64).exp() / TWO_PI);
    let radii = scalar::critical_radii(TWO_PI * c0)?;
    let start = match branch {
        Branch::Small => radii.m1,
        Branch::Large => radii.m2,
    };
    let mut h = vec![start; n];
    let mut iterations = 0usize;

    let blend = |t: f64| -> Vec<f64> {
        f.values().iter().map(|&v| (1.0 - t) * c0 + t * v).collect()
    };

    let mut t = 0.0;
    // Settle on the exact discrete constant solution first.
    newton_solve(&mut h, &blend(0.0), cfg, &mut iterations).map_err(|e| {
        SolveError::ContinuationFailed {
            t_reached: 0.0,
            cause: e.to_string(),
        }
    })?;

    let mut step = cfg.t_step_init;
    let mut residual_inf = 0.0;
    while t < 1.0 {
        let t_next = (t + step).min(1.0);
        let mut attempt = h.clone();
        match newton_solve(&mut attempt, &blend(t_next), cfg, &mut iterations) {
            Ok(res) => {
                h = attempt;
                t = t_next;
                residual_inf = res;
                step = (step * 2.0).min(cfg.t_step_init);
            }
            Err(failure) => {
                step *= 0.5;
                if step < cfg.t_step_min {
                    return Err(SolveError::ContinuationFailed {
                        t_reached: t,
                        cause: failure.to_string(),
                    });
                }
            }
        }
    }

    let hpp = spectral::second_derivative(&h);
    for (index, (&d2, &x)) in hpp.iter().zip(&h).enumerate() {
        if d2 + x <= 0.0 {
            return Err(SolveError::ConvexityLost {
                index,
                value: d2 + x,
            });
        }
    }
    let perimeter = geom::pairwise_sum(&h) * TWO_PI / n as f64;
    let support = SupportSamples::new(h)?;
    let gamma2 = geom::gaussian_area_support(&support)?;
    Ok(SolveResult {
        branch,
        h: support,
        residual_inf,
        gamma2,
        c0_used: c0,
        perimeter,
        t_reached: 1.0,
        newton_iterations: iterations,
    })
}

/// Report of the a-priori bounds realized by a solution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AprioriReport {
    pub tau: f64,
    /// Empirical constant: the largest of the ratios the bounds control.
    pub tau_prime: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub curvature_min: f64,
    pub curvature_max: f64,
    pub speed_min: f64,
    pub speed_max: f64,
}

/// Verify positivity and two-sided boundedness of `h`, `h'' + h` and
/// `√(h'² + h²)` for a solution of data bounded in `[1/τ, τ]`, and report
/// the empirical `τ'`.
pub fn apriori_check(
    result: &SolveResult,
    f: &PrescribedData,
    tau: f64,
) -> Result<AprioriReport, SolveError> {
    for (index, &value) in f.values().iter().enumerate() {
        if !(value > 1.0 / tau && value < tau) {
            return Err(SolveError::BoundViolation {
                quantity: "data range (1/tau, tau)",
                index,
                value,
            });
        }
    }
    let h = result.h.values();
    for (index, &value) in h.iter().enumerate() {
        if !(value > 0.0) {
            return Err(SolveError::BoundViolation {
                quantity: "h positivity",
                index,
                value,
            });
        }
    }
    let hp = spectral::derivative(h);
    let hpp = spectral::second_derivative(h);
    let mut curv_min = f64::INFINITY;
    let mut curv_max = 0.0f64;
    let mut speed_min = f64::INFINITY;
    let mut speed_max = 0.0f64;
    for (index, ((&x, &dx), &d2)) in h.iter().zip(&hp).zip(&hpp).enumerate() {
        let curv = d2 + x;
        if curv <= 0.0 {
            return Err(SolveError::BoundViolation {
                quantity: "h'' + h positivity",
                index,
                value: curv,
            });
        }
        let speed = (dx * dx + x * x).sqrt();
        curv_min = curv_min.min(curv);
        curv_max = curv_max.max(curv);
        speed_min = speed_min.min(speed);
        speed_max = speed_max.max(speed);
    }
    let h_min = h.iter().cloned().fold(f64::INFINITY, f64::min);
    let h_max = h.iter().cloned().fold(0.0, f64::max);
    let tau_prime = [
        h_max,
        1.0 / h_min,
        curv_max,
        1.0 / curv_min,
        speed_max,
        1.0 / speed_min,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(AprioriReport {
        tau,
        tau_prime,
        h_min,
        h_max,
        curvature_min: curv_min,
        curvature_max: curv_max,
        speed_min,
        speed_max,
    })
}
