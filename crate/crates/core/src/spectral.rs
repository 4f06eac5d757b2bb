//! Spectral differentiation on the uniform periodic grid
//! `θ_j = 2πj/n` (n even).
//!
//! The differentiation matrices are the classical circulant forms for the
//! band-limited trigonometric interpolant (first derivative with the
//! Nyquist cosine mode annihilated, second derivative with `-k²` applied
//! through the Nyquist mode):
//!
//! ```text
//! D1[j,k] = ½·(-1)^m · cot(m·h/2),   m = j-k ≠ 0 (mod n),  h = 2π/n
//! D2[j,j] = -n²/12 - 1/6,   D2[j,k] = -(-1)^m / (2·sin²(m·h/2))
//! ```
//!
//! A circular finite-difference second difference is kept as the
//! low-order debug alternative and as the discrete-convexity test used by
//! grid validation.

use nalgebra::DMatrix;

/// First-derivative circulant kernel: `row[m]` multiplies `values[j - m]`.
fn d1_kernel(n: usize) -> Vec<f64> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut v = vec![0.0; n];
    for (m, slot) in v.iter_mut().enumerate().skip(1) {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        *slot = 0.5 * sign / (0.5 * m as f64 * h).tan();
    }
    v
}

/// Second-derivative circulant kernel.
fn d2_kernel(n: usize) -> Vec<f64> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut v = vec![0.0; n];
    v[0] = -(n as f64) * (n as f64) / 12.0 - 1.0 / 6.0;
    for (m, slot) in v.iter_mut().enumerate().skip(1) {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let s = (0.5 * m as f64 * h).sin();
        *slot = -sign / (2.0 * s * s);
    }
    v
}

fn apply_circulant(kernel: &[f64], values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    for j in 0..n {
        let mut acc = 0.0;
        for m in 0..n {
            // kernel index m pairs node j with node j - m (mod n)
            acc += kernel[m] * values[(j + n - m) % n];
        }
        out[j] = acc;
    }
    out
}

/// Spectral first derivative of periodic samples.
pub fn derivative(values: &[f64]) -> Vec<f64> {
    apply_circulant(&d1_kernel(values.len()), values)
}

/// Spectral second derivative of periodic samples.
pub fn second_derivative(values: &[f64]) -> Vec<f64> {
    apply_circulant(&d2_kernel(values.len()), values)
}

/// Dense first-derivative matrix (for Jacobian assembly).
pub fn d1_matrix(n: usize) -> DMatrix<f64> {
    let kernel = d1_kernel(n);
    DMatrix::from_fn(n, n, |j, k| kernel[(j + n - k) % n])
}

/// Dense second-derivative matrix.
pub fn d2_matrix(n: usize) -> DMatrix<f64> {
    let kernel = d2_kernel(n);
    DMatrix::from_fn(n, n, |j, k| kernel[(j + n - k) % n])
}

/// Circular centered second difference `(v[j-1] - 2v[j] + v[j+1])/Δθ²`:
/// the O(Δθ²) debug alternative to [`second_derivative`].
pub fn fd_second_difference(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n)
        .map(|j| (values[(j + n - 1) % n] - 2.0 * values[j] + values[(j + 1) % n]) / (h * h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64)
            .collect()
    }

    #[test]
    fn differentiates_resolved_modes_exactly() {
        let n = 32;
        let theta = grid(n);
        for k in 1..=5usize {
            let f: Vec<f64> = theta.iter().map(|&t| (k as f64 * t).cos()).collect();
            let d1 = derivative(&f);
            let d2 = second_derivative(&f);
            for j in 0..n {
                let want1 = -(k as f64) * (k as f64 * theta[j]).sin();
                let want2 = -(k as f64).powi(2) * (k as f64 * theta[j]).cos();
                assert!((d1[j] - want1).abs() < 1e-11, "k={k} j={j}: {} vs {want1}", d1[j]);
                assert!((d2[j] - want2).abs() < 1e-10, "k={k} j={j}: {} vs {want2}", d2[j]);
            }
        }
    }

    #[test]
    fn constants_are_annihilated() {
        let f = vec![3.25; 24];
        for v in derivative(&f) {
            assert!(v.abs() < 1e-12);
        }
        for v in second_derivative(&f) {
            assert!(v.abs() < 1e-11);
        }
    }

    #[test]
    fn matrices_match_kernel_application() {
        let n = 16;
        let f: Vec<f64> = grid(n).iter().map(|&t| (2.0 * t).sin() + 0.3 * t.cos()).collect();
        let v = nalgebra::DVector::from_column_slice(&f);
        let by_matrix1 = d1_matrix(n) * &v;
        let by_matrix2 = d2_matrix(n) * &v;
        let k1 = derivative(&f);
        let k2 = second_derivative(&f);
        for j in 0..n {
            assert!((by_matrix1[j] - k1[j]).abs() < 1e-13);
            assert!((by_matrix2[j] - k2[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn fd_second_difference_converges_to_spectral() {
        let mut prev_err = f64::INFINITY;
        for &n in &[32usize, 64, 128] {
            let f: Vec<f64> = grid(n).iter().map(|&t| (2.0 * t).cos()).collect();
            let fd = fd_second_difference(&f);
            let sp = second_derivative(&f);
            let err = fd
                .iter()
                .zip(&sp)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < prev_err, "FD error must shrink with n");
            prev_err = err;
        }
        assert!(prev_err < 1e-2);
    }
}
