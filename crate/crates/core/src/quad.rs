//! Quadrature engines for integrands with inverse-square-root endpoint
//! singularities on (0, 1).
//!
//! Two independent schemes are provided so results can cross-check each
//! other:
//!
//! * **Trigonometric substitution** `t = sin²(ψ/2)`: for an integrand of
//!   the form `p(t)/√(t(1-t)·S(t))` with smooth positive `S`, the
//!   substituted function is a smooth even 2π-periodic function of ψ, so
//!   the midpoint rule on `[0, π]` converges at spectral rate. Midpoints
//!   never touch ψ = 0, π, which sidesteps the 0/0 endpoint limits.
//! * **Double-exponential (tanh-sinh)** `t = (1 + tanh((π/2)·sinh u))/2`:
//!   clusters nodes double-exponentially at the endpoints, integrating
//!   algebraic endpoint singularities without knowing their structure.
//!
//! Both refine by level doubling and report the last inter-level
//! difference as the error estimate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Quadrature scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Scheme {
    /// Midpoint rule after `t = sin²(ψ/2)`. Spectrally convergent for
    /// integrands of the form `p(t)/√(t(1-t)·S(t))` with smooth `S`; only
    /// second order on generic integrands.
    #[default]
    TrigSubstitution,
    /// Tanh-sinh double-exponential nodes on (0, 1).
    DoubleExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub scheme: Scheme,
    /// Number of level doublings to attempt (≤ 14).
    pub max_levels: u32,
    /// Relative tolerance on the inter-level difference.
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            scheme: Scheme::TrigSubstitution,
            max_levels: 12,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(QuadratureError::BadConfig(format!(
                "rel_tol {} outside (0, 1e-2]",
                self.rel_tol
            )));
        }
        if self.max_levels > 14 {
            return Err(QuadratureError::BadConfig(format!(
                "max_levels {} exceeds 14",
                self.max_levels
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature config: {0}")]
    BadConfig(String),
    #[error("tolerance {rel_tol} not reached within {levels} levels (last diff {last_diff})")]
    NotConverged {
        rel_tol: f64,
        levels: u32,
        last_diff: f64,
    },
    #[error("integrand produced a non-finite value")]
    NonFinite,
}

/// Converged estimate with its inter-level error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
    pub levels_used: u32,
    pub evals: usize,
}

/// Integrate `f` over (0, 1) where `f` receives `(t, 1 - t)` with each of
/// the two arguments computed to full relative accuracy near its own
/// endpoint.
pub fn integrate_01(
    f: &dyn Fn(f64, f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadratureError> {
    cfg.validate()?;
    match cfg.scheme {
        Scheme::TrigSubstitution => trig_midpoint(f, cfg),
        Scheme::DoubleExponential => tanh_sinh(f, cfg),
    }
}

/// Midpoint sums of `f(sin²(ψ/2), cos²(ψ/2))·sin(ψ)/2` over ψ ∈ [0, π]
/// with doubling node counts.
fn trig_midpoint(
    f: &dyn Fn(f64, f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadratureError> {
    let mut evals = 0usize;
    let mut prev = f64::NAN;
    let mut last_diff = f64::NAN;
    for level in 0..=cfg.max_levels {
        let n = 16usize << level;
        let h = std::f64::consts::PI / n as f64;
        let mut sum = 0.0;
        for j in 0..n {
            let psi = (j as f64 + 0.5) * h;
            let (s_half, c_half) = (0.5 * psi).sin_cos();
            let t = s_half * s_half;
            let s = c_half * c_half;
            // sin ψ = 2 sin(ψ/2) cos(ψ/2), exact for ψ ∈ (0, π).
            let w = s_half * c_half;
            let v = f(t, s) * w;
            if !v.is_finite() {
                return Err(QuadratureError::NonFinite);
            }
            sum += v;
        }
        evals += n;
        let value = sum * h;
        if level > 0 {
            last_diff = (value - prev).abs();
            if last_diff <= cfg.rel_tol * value.abs().max(f64::MIN_POSITIVE) {
                return Ok(QuadResult {
                    value,
                    est_error: last_diff,
                    levels_used: level,
                    evals,
                });
            }
        }
        prev = value;
    }
    Err(QuadratureError::NotConverged {
        rel_tol: cfg.rel_tol,
        levels: cfg.max_levels,
        last_diff,
    })
}

/// Truncation point for the tanh-sinh variable; beyond this the node
/// weights are below 1e-17 for integrable-singularity integrands.
const TS_U_MAX: f64 = 4.0;

fn tanh_sinh(
    f: &dyn Fn(f64, f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadratureError> {
    let mut evals = 0usize;
    let mut prev = f64::NAN;
    let mut last_diff = f64::NAN;
    for level in 0..=cfg.max_levels {
        let h = 1.0 / (1u64 << level) as f64;
        let m = (TS_U_MAX / h).ceil() as i64;
        let mut sum = 0.0;
        for j in -m..=m {
            let u = j as f64 * h;
            let a = std::f64::consts::FRAC_PI_2 * u.sinh();
            // t and 1-t each computed without cancellation:
            //   t = 1/(1+e^{-2a}),  1-t = 1/(1+e^{2a}).
            let t = 1.0 / (1.0 + (-2.0 * a).exp());
            let s = 1.0 / (1.0 + (2.0 * a).exp());
            if t <= 0.0 || s <= 0.0 {
                continue;
            }
            let cosh_a = a.cosh();
            let w = std::f64::consts::FRAC_PI_4 * u.cosh() / (cosh_a * cosh_a);
            if w < 1e-300 {
                continue;
            }
            let v = f(t, s);
            if !v.is_finite() {
                // The node is deeper into the endpoint than the integrand
                // can be evaluated; its true contribution is below the
                // tolerance, so drop it.
                continue;
            }
            sum += w * v;
            evals += 1;
        }
        let value = sum * h;
        if level > 0 {
            last_diff = (value - prev).abs();
            if last_diff <= cfg.rel_tol * value.abs().max(f64::MIN_POSITIVE) {
                return Ok(QuadResult {
                    value,
                    est_error: last_diff,
                    levels_used: level,
                    evals,
                });
            }
        }
        prev = value;
    }
    Err(QuadratureError::NotConverged {
        rel_tol: cfg.rel_tol,
        levels: cfg.max_levels,
        last_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(scheme: Scheme) -> QuadratureConfig {
        QuadratureConfig {
            scheme,
            ..Default::default()
        }
    }

    #[test]
    fn beta_integral_both_schemes() {
        // ∫₀¹ dt/√(t(1-t)) = π.
        let f = |t: f64, s: f64| 1.0 / (t * s).sqrt();
        for scheme in [Scheme::TrigSubstitution, Scheme::DoubleExponential] {
            let r = integrate_01(&f, &cfg(scheme)).unwrap();
            assert_relative_eq!(r.value, std::f64::consts::PI, max_relative = 1e-12);
        }
    }

    #[test]
    fn smooth_integrand_double_exponential() {
        // ∫₀¹ e^t dt = e - 1. (The trig scheme targets the √-singular
        // family and is only second order on generic smooth integrands.)
        let f = |t: f64, _: f64| t.exp();
        let r = integrate_01(&f, &cfg(Scheme::DoubleExponential)).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::E - 1.0, max_relative = 1e-12);
    }

    #[test]
    fn one_sided_singularity_double_exponential() {
        // ∫₀¹ dt/√t = 2.
        let f = |t: f64, _: f64| 1.0 / t.sqrt();
        let r = integrate_01(&f, &cfg(Scheme::DoubleExponential)).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-11);
    }

    #[test]
    fn weighted_sqrt_singularity_both_schemes() {
        // ∫₀¹ e^t/√(t(1-t)) dt = π·e^{1/2}·I₀(1/2).
        let f = |t: f64, s: f64| t.exp() / (t * s).sqrt();
        for scheme in [Scheme::TrigSubstitution, Scheme::DoubleExponential] {
            let r = integrate_01(&f, &cfg(scheme)).unwrap();
            assert_relative_eq!(r.value, 5.508429773886107, max_relative = 1e-12);
        }
    }

    #[test]
    fn schemes_agree_within_estimates() {
        let f = |t: f64, s: f64| (1.0 + t * t).ln() / (t * s).sqrt();
        let a = integrate_01(&f, &cfg(Scheme::TrigSubstitution)).unwrap();
        let b = integrate_01(&f, &cfg(Scheme::DoubleExponential)).unwrap();
        assert!((a.value - b.value).abs() <= (a.est_error + b.est_error).max(1e-12));
    }

    #[test]
    fn config_validation() {
        let mut c = QuadratureConfig::default();
        c.rel_tol = 0.5;
        assert!(matches!(c.validate(), Err(QuadratureError::BadConfig(_))));
        c = QuadratureConfig::default();
        c.max_levels = 15;
        assert!(matches!(c.validate(), Err(QuadratureError::BadConfig(_))));
    }

    #[test]
    fn non_integrable_divergence_reports_failure() {
        // 1/t is not integrable on (0,1): must not silently "converge".
        let f = |t: f64, _: f64| 1.0 / t;
        let r = integrate_01(&f, &cfg(Scheme::TrigSubstitution));
        assert!(matches!(r, Err(QuadratureError::NotConverged { .. })));
    }
}
