//! Gaussian special-function primitives shared by the geometry and solver
//! modules.
//!
//! The error function comes from `libm` (the FDLIBM rational evaluation,
//! bit-stable across platforms). The inverse normal CDF uses Acklam's
//! rational initializer polished by two Newton steps through the
//! erfc-based CDF, which brings it to full double precision.

use std::f64::consts::{PI, SQRT_2};

/// `1/√(2π)`.
pub const INV_SQRT_2PI: f64 = 0.3989422804014327;

/// Standard normal density `ψ(t) = e^{-t²/2}/√(2π)`.
#[inline]
pub fn normal_pdf(t: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * t * t).exp()
}

/// Standard normal distribution function `Ψ(x)`.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// `∫_a^b e^{-s²/2} ds` (no normalization).
#[inline]
pub fn gauss_segment(a: f64, b: f64) -> f64 {
    // √(π/2)·(erf(b/√2) - erf(a/√2))
    (0.5 * PI).sqrt() * (libm::erf(b / SQRT_2) - libm::erf(a / SQRT_2))
}

/// Inverse of [`normal_cdf`] for `p ∈ (0, 1)`.
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile needs p in (0,1), got {p}");
    let x = acklam(p);
    // Two Newton polish steps: the initializer is already ~1e-9 accurate,
    // so this converges to the last bit.
    let mut x = x;
    for _ in 0..2 {
        let err = normal_cdf(x) - p;
        x -= err / normal_pdf(x);
    }
    x
}

/// Acklam's rational approximation of the normal quantile (|rel| < 1.2e-9).
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Composite-Simpson oracle for the segment integral.
    fn simpson_oracle(a: f64, b: f64) -> f64 {
        let n = 20_000;
        let h = (b - a) / n as f64;
        let f = |s: f64| (-0.5 * s * s).exp();
        let mut sum = f(a) + f(b);
        for j in 1..n {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(a + j as f64 * h);
        }
        sum * h / 3.0
    }

    #[test]
    fn segment_matches_simpson() {
        for &(a, b) in &[(-1.0, 1.0), (0.0, 2.5), (-3.0, 0.7), (1.0, 1.0)] {
            assert_relative_eq!(
                gauss_segment(a, b),
                simpson_oracle(a, b),
                epsilon = 1e-12,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn cdf_anchors() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_relative_eq!(normal_cdf(1.0), 0.8413447460685429, max_relative = 1e-14);
        assert_relative_eq!(normal_cdf(-1.96), 0.024997895148220435, max_relative = 1e-12);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &p in &[1e-10, 1e-4, 0.024, 0.3, 0.5, 0.75, 0.976, 1.0 - 1e-6] {
            let x = normal_quantile(p);
            assert_relative_eq!(normal_cdf(x), p, max_relative = 1e-12);
        }
        assert_eq!(normal_quantile(0.5), 0.0);
    }

    #[test]
    fn quantile_round_trip() {
        for j in -40..=40 {
            let x = j as f64 / 10.0;
            let back = normal_quantile(normal_cdf(x));
            assert!((back - x).abs() < 1e-12, "round trip at {x}: {back}");
        }
    }
}
