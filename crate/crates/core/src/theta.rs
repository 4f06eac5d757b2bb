//! The angular half-period integral
//!
//! ```text
//! Θ(c, h0, r) = ∫₀¹ r / √( -(t·r + h0)² - 2·ln(e^{-h0²/2} - c·r·t) ) dt
//! ```
//!
//! measuring the angle a solution of the curvature equation needs to climb
//! from its minimum `h0` to its maximum `h0 + r`. A nonconstant 2π-periodic
//! solution exists iff `Θ = π/k` for some positive integer `k`; the scans
//! here certify numerically that `Θ > π` over the whole good-pair range, so
//! no such `k` exists.
//!
//! For a strict good pair the radicand `D(t)` vanishes linearly at both
//! endpoints, giving inverse-square-root singularities. With `u = h0 + tr`
//! and `E` the pair's level, `D` rewrites exactly as
//!
//! ```text
//! D = -2·ln1p(-W),   W(u) = (φ(u) - E)·e^{u²/2},
//! ```
//!
//! and `φ(u) - E` is evaluated through the cancellation-free level
//! difference anchored at the *nearer* endpoint (`φ(u) - φ(h0)` for
//! t ≤ 1/2, `φ(u) - φ(b)` for t > 1/2), each an `expm1` form. The zeros of
//! the radicand then sit on the endpoints structurally instead of
//! inheriting the closure error of the `(c, h0, r)` triple; the upper
//! level is first re-polished to the last bit for the same reason.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::quad::{self, QuadratureConfig, QuadratureError};
use crate::scalar::{self, GoodPair, PairInvalid, ScalarError};

/// Band for classifying a pair as divergent (`h0 + r` on the upper root
/// `m2`, where the t = 1 singularity stops being square-root).
pub const DIVERGENCE_BAND: f64 = 1e-12;

/// Relative collar excluded at each end of the admissible interval in grid
/// scans: at `m1` the pair width collapses, at the lower boundary the pair
/// can hit `m2` exactly and diverge.
pub const SCAN_COLLAR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("not a good pair: {0}")]
    InvalidPair(PairInvalid),
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("every grid point failed; first failure: {0}")]
    AllPointsFailed(String),
    #[error("invalid family parameters: {0}")]
    BadFamily(String),
}

/// Value of Θ with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaResult {
    /// The integral; `+∞` when the pair is divergent.
    pub value: f64,
    /// Inter-level quadrature difference; `None` for the divergent sentinel.
    pub est_error: Option<f64>,
    /// Set when the singularity at t = 0 / t = 1 is stronger than
    /// square-root (the pair touches `m1` / `m2`).
    pub endpoint_flags: (bool, bool),
}

impl ThetaResult {
    pub fn is_divergent(&self) -> bool {
        self.value.is_infinite()
    }
}

/// Radicand evaluator with endpoint-anchored `expm1` forms.
struct Radicand {
    c: f64,
    h0: f64,
    /// Polished upper level: `φ(b) = φ(h0)` to the last bit.
    b: f64,
    r: f64,
    exp_h0: f64,
    exp_b: f64,
}

impl Radicand {
    fn new(c: f64, h0: f64, b: f64) -> Self {
        Radicand {
            c,
            h0,
            b,
            r: b - h0,
            exp_h0: (-0.5 * h0 * h0).exp(),
            exp_b: (-0.5 * b * b).exp(),
        }
    }

    /// `D(t)` given both `t` and `s = 1 - t` at full relative accuracy.
    #[inline]
    fn eval(&self, t: f64, s: f64) -> f64 {
        // u = h0 + t·r computed from the nearer endpoint, and the level gap
        // φ(u) - E anchored there too, so both endpoint zeros are exact.
        let (u, gap) = if t <= s {
            let u = self.h0 + t * self.r;
            let v = t * self.r;
            (
                u,
                self.c * v + self.exp_h0 * (-0.5 * v * (u + self.h0)).exp_m1(),
            )
        } else {
            let u = self.b - s * self.r;
            let v = s * self.r;
            (
                u,
                -self.c * v + self.exp_b * (0.5 * v * (self.b + u)).exp_m1(),
            )
        };
        let w = gap * (0.5 * u * u).exp();
        if w >= 1.0 {
            return f64::NAN;
        }
        -2.0 * (-w).ln_1p()
    }
}

/// Evaluate Θ for a validated good pair.
///
/// Pairs whose upper level sits on `m2` within [`DIVERGENCE_BAND`] are
/// reported as the `+∞` sentinel rather than extrapolated: the t = 1
/// singularity is then order one and no finite value is meaningful.
pub fn theta_eval(pair: &GoodPair, cfg: &QuadratureConfig) -> Result<ThetaResult, ThetaError> {
    let validated = GoodPair::new(pair.c, pair.h0, pair.r, 1e-8 * pair.energy.abs().max(1.0))
        .map_err(ThetaError::InvalidPair)?;
    let radii = scalar::critical_radii(validated.c)?;
    let flags = (
        (validated.h0 - radii.m1).abs() <= DIVERGENCE_BAND,
        (validated.h1() - radii.m2).abs() <= DIVERGENCE_BAND,
    );
    if flags.0 || flags.1 {
        return Ok(ThetaResult {
            value: f64::INFINITY,
            est_error: None,
            endpoint_flags: flags,
        });
    }
    // Re-polish the upper level: the integrand's endpoint zeros demand a
    // closure far tighter than the pair tolerance.
    let b = scalar::polish_upper(
        validated.c,
        validated.h0,
        validated.h1(),
        radii.m1,
        radii.m2,
    );
    let rad = Radicand::new(validated.c, validated.h0, b);
    let r = rad.r;
    let f = move |t: f64, s: f64| {
        let d = rad.eval(t, s);
        if !(d > 0.0) {
            // Interior positivity is exact for good pairs; a nonpositive
            // radicand can only be fp noise inside the endpoint collars.
            if t.min(s) < 1e-6 {
                return f64::INFINITY; // tanh-sinh drops it, midpoint errors out
            }
            return f64::NAN;
        }
        r / d.sqrt()
    };
    let q = quad::integrate_01(&f, cfg)?;
    Ok(ThetaResult {
        value: q.value,
        est_error: Some(q.est_error),
        endpoint_flags: flags,
    })
}

/// The `r → 0` limit of Θ at fixed level: `π/√(1 - m1²)`.
pub fn theta_small_r_limit(c: f64) -> Result<f64, ThetaError> {
    let radii = scalar::critical_radii(c)?;
    Ok(std::f64::consts::PI / (1.0 - radii.m1 * radii.m1).sqrt())
}

/// One evaluated grid point of a Θ scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub h0: f64,
    pub r: f64,
    pub theta: f64,
    pub est_error: f64,
}

/// Grid scan of Θ over the admissible interval at fixed `c`.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaScan {
    pub c: f64,
    pub points: Vec<ScanPoint>,
    /// Grid points whose quadrature failed, with the failure text.
    pub failures: Vec<(usize, String)>,
    pub min_theta: f64,
    pub argmin: GoodPairData,
    /// `min_theta - π`.
    pub margin: f64,
}

/// Plain-data mirror of [`GoodPair`] for serialization.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GoodPairData {
    pub c: f64,
    pub h0: f64,
    pub r: f64,
    pub energy: f64,
}

impl From<GoodPair> for GoodPairData {
    fn from(p: GoodPair) -> Self {
        GoodPairData {
            c: p.c,
            h0: p.h0,
            r: p.r,
            energy: p.energy,
        }
    }
}

impl GoodPairData {
    pub fn as_pair(&self) -> GoodPair {
        GoodPair {
            c: self.c,
            h0: self.h0,
            r: self.r,
            energy: self.energy,
        }
    }
}

/// Sweep Θ over an `n_h0`-point grid of starting levels and locate its
/// minimum. Per-point quadrature failures are recorded, not fatal, as long
/// as at least one point succeeds.
pub fn scan_min_theta(c: f64, n_h0: usize, cfg: &QuadratureConfig) -> Result<ThetaScan, ThetaError> {
    if n_h0 < 2 {
        return Err(ThetaError::BadFamily(format!(
            "scan needs at least 2 grid points, got {n_h0}"
        )));
    }
    let dom = scalar::h0_domain(c)?;
    let width = dom.m1 - dom.lower;
    let lo = dom.lower + SCAN_COLLAR * width;
    let hi = dom.m1 - SCAN_COLLAR * width;
    let grid: Vec<f64> = (0..n_h0)
        .map(|j| lo + (hi - lo) * j as f64 / (n_h0 - 1) as f64)
        .collect();

    let evaluated: Vec<Result<(GoodPair, ThetaResult), ThetaError>> = grid
        .par_iter()
        .map(|&h0| {
            let pair = scalar::good_pair_from_h0(c, h0)?
                .ok_or_else(|| ThetaError::BadFamily(format!("h0 = {h0} left the domain")))?;
            let res = theta_eval(&pair, cfg)?;
            Ok((pair, res))
        })
        .collect();

    let mut points = Vec::with_capacity(n_h0);
    let mut failures = Vec::new();
    let mut min_theta = f64::INFINITY;
    let mut argmin: Option<GoodPair> = None;
    for (idx, item) in evaluated.into_iter().enumerate() {
        match item {
            Ok((pair, res)) => {
                points.push(ScanPoint {
                    h0: pair.h0,
                    r: pair.r,
                    theta: res.value,
                    est_error: res.est_error.unwrap_or(f64::NAN),
                });
                if res.value < min_theta {
                    min_theta = res.value;
                    argmin = Some(pair);
                }
            }
            Err(e) => failures.push((idx, e.to_string())),
        }
    }
    let argmin = argmin.ok_or_else(|| {
        ThetaError::AllPointsFailed(
            failures
                .first()
                .map(|(_, m)| m.clone())
                .unwrap_or_else(|| "empty grid".into()),
        )
    })?;
    Ok(ThetaScan {
        c,
        points,
        failures,
        min_theta,
        argmin: argmin.into(),
        margin: min_theta - std::f64::consts::PI,
    })
}

/// One-parameter families along which Θ is monotone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotonicityMode {
    /// Fixed lower level `h0 ∈ [0, 1)`, widths sweeping `(0, r_max)`; the
    /// level `c(r)` is induced by the pair.
    InWidth { h0: f64 },
    /// Fixed width `r`, levels sweeping `(c_r, c_star]`; requires
    /// `h_star, r ∈ (0,1)`, `h_star + r < 1` and `(h_star, h_star + r)`
    /// good with respect to `c_star`.
    InLevel { r: f64, c_star: f64, h_star: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub mode: String,
    /// The swept parameter (width or level), increasing.
    pub parameter: Vec<f64>,
    pub theta: Vec<f64>,
    pub est_error: Vec<f64>,
    /// Largest observed decrease `theta[j] - theta[j+1]` (negative when the
    /// sequence is strictly increasing).
    pub max_decrease: f64,
    /// Combined quadrature error estimate at the worst adjacent pair.
    pub combined_error_at_max: f64,
}

impl MonotonicityReport {
    /// Contract of the monotonicity lemmas: any observed decrease is within
    /// quadrature error.
    pub fn is_monotone_within_error(&self) -> bool {
        self.max_decrease <= self.combined_error_at_max.max(1e-12)
    }
}

/// Largest width for which `(h0, h0 + r)` stays a good pair for its induced
/// level. Bisects the validity boundary of [`scalar::c_from_pair`].
pub fn max_width(h0: f64) -> Result<f64, ThetaError> {
    if !(0.0..1.0).contains(&h0) {
        return Err(ThetaError::BadFamily(format!("h0 = {h0} outside [0, 1)")));
    }
    let valid = |r: f64| scalar::c_from_pair(h0, r).is_ok();
    let mut lo = 1e-8;
    if !valid(lo) {
        return Err(ThetaError::BadFamily(format!(
            "no valid width at h0 = {h0}"
        )));
    }
    let mut hi = 1.0;
    while valid(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 64.0 {
            return Err(ThetaError::BadFamily("width bound escaped".into()));
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if valid(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Evaluate Θ along a monotone family and report the worst decrease.
pub fn monotonicity_scan(
    mode: MonotonicityMode,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<MonotonicityReport, ThetaError> {
    if n < 2 {
        return Err(ThetaError::BadFamily(format!(
            "family needs at least 2 points, got {n}"
        )));
    }
    let (label, family): (String, Vec<(f64, GoodPair)>) = match mode {
        MonotonicityMode::InWidth { h0 } => {
            let r_max = max_width(h0)?;
            let lo = 1e-3 * r_max;
            let hi = (1.0 - 1e-2) * r_max;
            let pairs = (0..n)
                .map(|j| {
                    let r = lo + (hi - lo) * j as f64 / (n - 1) as f64;
                    let c = scalar::c_from_pair(h0, r).map_err(ThetaError::InvalidPair)?;
                    Ok((
                        r,
                        GoodPair::new(c, h0, r, 1e-9).map_err(ThetaError::InvalidPair)?,
                    ))
                })
                .collect::<Result<Vec<_>, ThetaError>>()?;
            (format!("width sweep at h0 = {h0}"), pairs)
        }
        MonotonicityMode::InLevel { r, c_star, h_star } => {
            if !(h_star > 0.0 && h_star < 1.0 && r > 0.0 && r < 1.0 && h_star + r < 1.0) {
                return Err(ThetaError::BadFamily(format!(
                    "need h_star, r in (0,1) with h_star + r < 1; got h_star = {h_star}, r = {r}"
                )));
            }
            let induced = scalar::c_from_pair(h_star, r).map_err(ThetaError::InvalidPair)?;
            if (induced - c_star).abs() > 1e-8 * c_star.max(1e-8) {
                return Err(ThetaError::BadFamily(format!(
                    "(h_star, h_star + r) is good for c = {induced}, not the given c_star = {c_star}"
                )));
            }
            // Sweep h0 upward; the induced level c(h0) increases with it.
            let pairs = (0..n)
                .map(|j| {
                    let h0 = h_star * (j + 1) as f64 / n as f64;
                    let c = scalar::c_from_pair(h0, r).map_err(ThetaError::InvalidPair)?;
                    Ok((
                        c,
                        GoodPair::new(c, h0, r, 1e-9).map_err(ThetaError::InvalidPair)?,
                    ))
                })
                .collect::<Result<Vec<_>, ThetaError>>()?;
            (format!("level sweep at r = {r}, h_star = {h_star}"), pairs)
        }
    };

    let results: Vec<Result<ThetaResult, ThetaError>> = family
        .par_iter()
        .map(|(_, pair)| theta_eval(pair, cfg))
        .collect();

    let mut parameter = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    let mut est_error = Vec::with_capacity(n);
    for ((p, _), res) in family.iter().zip(results) {
        let res = res?;
        parameter.push(*p);
        theta.push(res.value);
        est_error.push(res.est_error.unwrap_or(f64::NAN));
    }
    let mut max_decrease = f64::NEG_INFINITY;
    let mut combined = 0.0;
    for j in 0..theta.len() - 1 {
        let dec = theta[j] - theta[j + 1];
        if dec > max_decrease {
            max_decrease = dec;
            combined = est_error[j] + est_error[j + 1];
        }
    }
    Ok(MonotonicityReport {
        mode: label,
        parameter,
        theta,
        est_error,
        max_decrease,
        combined_error_at_max: combined,
    })
}

/// Certificate that Θ misses every level `π/k`, `1 ≤ k ≤ k_max`, over the
/// scanned grid. Sufficient because all observed Θ exceed π ≥ π/k.
#[derive(Debug, Clone, Serialize)]
pub struct EmptinessReport {
    pub c: f64,
    pub k_max: u32,
    pub scan: ThetaScan,
    /// `min Θ - π`; positive margin certifies the set empty.
    pub margin: f64,
    /// Smallest distance from any grid Θ to the nearest `π/k`.
    pub min_pi_k_distance: f64,
    pub certified: bool,
}

pub fn pi_over_k_emptiness(
    c: f64,
    n_h0: usize,
    k_max: u32,
    cfg: &QuadratureConfig,
) -> Result<EmptinessReport, ThetaError> {
    if k_max < 1 {
        return Err(ThetaError::BadFamily("k_max must be at least 1".into()));
    }
    let scan = scan_min_theta(c, n_h0, cfg)?;
    let mut min_dist = f64::INFINITY;
    for p in &scan.points {
        for k in 1..=k_max {
            let d = (p.theta - std::f64::consts::PI / k as f64).abs();
            if d < min_dist {
                min_dist = d;
            }
        }
    }
    let margin = scan.margin;
    Ok(EmptinessReport {
        c,
        k_max,
        margin,
        min_pi_k_distance: min_dist,
        certified: margin > 0.0,
        scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Scheme;
    use approx::assert_relative_eq;

    fn de_cfg() -> QuadratureConfig {
        QuadratureConfig {
            scheme: Scheme::DoubleExponential,
            ..Default::default()
        }
    }

    fn pair_05_03() -> GoodPair {
        scalar::good_pair_from_h0(0.5, 0.3).unwrap().unwrap()
    }

    #[test]
    fn value_exceeds_pi_and_schemes_agree() {
        let pair = pair_05_03();
        let a = theta_eval(&pair, &QuadratureConfig::default()).unwrap();
        let b = theta_eval(&pair, &de_cfg()).unwrap();
        assert!(a.value > std::f64::consts::PI);
        assert!(
            (a.value - b.value).abs() <= (a.est_error.unwrap() + b.est_error.unwrap()).max(1e-12),
            "schemes disagree: {} vs {}",
            a.value,
            b.value
        );
    }

    #[test]
    fn small_width_matches_limit() {
        for &c in &[0.1, 0.3, 0.5] {
            let pair = scalar::pair_with_width(c, 1e-3).unwrap().unwrap();
            let theta = theta_eval(&pair, &QuadratureConfig::default()).unwrap();
            let limit = theta_small_r_limit(c).unwrap();
            assert_relative_eq!(theta.value, limit, max_relative = 1e-3);
        }
    }

    #[test]
    fn divergent_pair_reports_sentinel() {
        // Pair anchored at the lower boundary q reaches m2 exactly.
        let dom = scalar::h0_domain(0.5).unwrap();
        assert!(dom.lower > 0.0);
        let pair = GoodPair::new(0.5, dom.lower, dom.r_c, 1e-8).unwrap();
        let res = theta_eval(&pair, &QuadratureConfig::default()).unwrap();
        assert!(res.is_divergent());
        assert!(res.endpoint_flags.1);
        assert!(res.est_error.is_none());
    }

    #[test]
    fn limit_formula_anchors() {
        // m1 → 0 as c → 0, so the limit tends to π.
        assert_relative_eq!(theta_small_r_limit(1e-8).unwrap(), std::f64::consts::PI, max_relative = 1e-10);
        // c = 0.5: m1 = 0.59783..., π/√(1-m1²) = 3.9190...
        assert_relative_eq!(theta_small_r_limit(0.5).unwrap(), 3.919047353404938, max_relative = 1e-12);
        for &c in &[1e-4, 0.01, 0.2, 0.4, 0.6] {
            assert!(theta_small_r_limit(c).unwrap() > std::f64::consts::PI);
        }
    }

    #[test]
    fn invalid_pair_rejected() {
        let junk = GoodPair {
            c: 0.5,
            h0: 0.3,
            r: 2.0,
            energy: 0.0,
        };
        assert!(matches!(
            theta_eval(&junk, &QuadratureConfig::default()),
            Err(ThetaError::InvalidPair(_))
        ));
    }

    #[test]
    fn scan_min_exceeds_pi() {
        for &c in &[0.01, 0.5] {
            let scan = scan_min_theta(c, 64, &QuadratureConfig::default()).unwrap();
            assert!(scan.failures.is_empty(), "failures: {:?}", scan.failures);
            assert!(scan.margin > 0.0, "margin {} at c = {c}", scan.margin);
        }
    }

    #[test]
    fn scan_min_approaches_limit_near_m1() {
        // A grid hugging the collar at m1 must sit near the small-width limit.
        let dom = scalar::h0_domain(0.3).unwrap();
        let width = dom.m1 - dom.lower;
        let h0 = dom.m1 - 2.0 * SCAN_COLLAR * width;
        let pair = scalar::good_pair_from_h0(0.3, h0).unwrap().unwrap();
        let theta = theta_eval(&pair, &QuadratureConfig::default()).unwrap();
        let limit = theta_small_r_limit(0.3).unwrap();
        assert_relative_eq!(theta.value, limit, max_relative = 1e-4);
    }

    #[test]
    fn width_family_is_nondecreasing() {
        let report = monotonicity_scan(
            MonotonicityMode::InWidth { h0: 0.3 },
            32,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(
            report.is_monotone_within_error(),
            "max decrease {} exceeds error {}",
            report.max_decrease,
            report.combined_error_at_max
        );
    }

    #[test]
    fn level_family_is_nondecreasing() {
        let c_star = scalar::c_from_pair(0.5, 0.2).unwrap();
        let report = monotonicity_scan(
            MonotonicityMode::InLevel {
                r: 0.2,
                c_star,
                h_star: 0.5,
            },
            32,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(report.is_monotone_within_error());
        // The swept level must be increasing.
        for w in report.parameter.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn level_family_rejects_bad_hypotheses() {
        assert!(matches!(
            monotonicity_scan(
                MonotonicityMode::InLevel {
                    r: 0.6,
                    c_star: 0.5,
                    h_star: 0.5,
                },
                8,
                &QuadratureConfig::default(),
            ),
            Err(ThetaError::BadFamily(_))
        ));
    }

    #[test]
    fn degenerate_two_point_family_has_zero_variation() {
        // Two evaluations of the same pair differ by nothing.
        let pair = pair_05_03();
        let a = theta_eval(&pair, &QuadratureConfig::default()).unwrap();
        let b = theta_eval(&pair, &QuadratureConfig::default()).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn emptiness_certificate() {
        for &c in &[0.3, 0.5] {
            let report = pi_over_k_emptiness(c, 64, 8, &QuadratureConfig::default()).unwrap();
            assert!(report.certified);
            assert!(report.margin > 0.0);
            assert!(report.min_pi_k_distance > 0.0);
        }
    }

    #[test]
    fn emptiness_with_k1_reduces_to_min_scan() {
        let report = pi_over_k_emptiness(0.5, 16, 1, &QuadratureConfig::default()).unwrap();
        let scan = scan_min_theta(0.5, 16, &QuadratureConfig::default()).unwrap();
        assert_relative_eq!(report.margin, scan.margin, max_relative = 1e-12);
    }

    #[test]
    fn theta_stays_above_limit_along_width_family() {
        // Consequence of the width monotonicity and the r → 0 limit.
        let h0 = 0.3;
        let r_max = max_width(h0).unwrap();
        let mut prev = 0.0;
        for j in 1..=10 {
            let r = r_max * 0.9 * j as f64 / 10.0;
            let c = scalar::c_from_pair(h0, r).unwrap();
            let pair = GoodPair::new(c, h0, r, 1e-9).unwrap();
            let theta = theta_eval(&pair, &QuadratureConfig::default()).unwrap().value;
            let limit = theta_small_r_limit(c).unwrap();
            assert!(theta >= limit - 1e-6, "theta {theta} below limit {limit}");
            assert!(theta >= prev - 1e-9);
            prev = theta;
        }
    }

    #[test]
    fn uniform_bound_over_log_level_grid() {
        let lo: f64 = 1e-4;
        let hi: f64 = scalar::G_PEAK - 1e-4;
        let n = 9;
        for j in 0..n {
            let c = lo * (hi / lo).powf(j as f64 / (n - 1) as f64);
            let scan = scan_min_theta(c, 16, &QuadratureConfig::default()).unwrap();
            assert!(
                scan.margin > 0.0,
                "margin {} not positive at c = {c}",
                scan.margin
            );
        }
    }
}
