//! Scalar machinery behind the constant-curvature analysis on the circle.
//!
//! Everything here is driven by two elementary functions of one variable:
//!
//! ```text
//! g(t)   = t·exp(-t²/2)           (the radial Gaussian flux through a line at distance t)
//! φ_c(t) = c·t + exp(-t²/2)       (the first-integral profile at level c)
//! ```
//!
//! `g` increases on [0,1], peaks at `g(1) = e^{-1/2}`, and decreases on
//! [1,∞). For `0 < c < e^{-1/2}` the equation `g(t) = c` has exactly two
//! roots `m1 < 1 < m2` — the radii of the two constant solutions of the
//! curvature equation `e^{-(h'²+h²)/2}(h''+h) = c`. Nonconstant solutions
//! oscillate between levels `a < b` with `φ_c(a) = φ_c(b)`, `φ_c'(a) > 0`,
//! `φ_c'(b) ≤ 0` — a *good pair*. This module classifies constants,
//! locates `m1`/`m2`, and constructs/validates good pairs.

use thiserror::Error;

/// Peak value `g(1) = e^{-1/2}` of `t ↦ t·exp(-t²/2)`.
pub const G_PEAK: f64 = 0.6065306597126334;

/// Equality band for detecting the degenerate level `c = e^{-1/2}`
/// (where the two roots of `g` merge at 1).
pub const DEGENERATE_BAND: f64 = 1e-12;

/// Absolute tolerance for all bracketed root solves in this module.
pub const ROOT_TOL: f64 = 1e-13;

const MAX_ROOT_ITER: usize = 200;

/// Comparison band used when testing `φ(m2)` against `φ(0) = 1` to pick
/// the lower end of the admissible interval.
const BRANCH_BAND: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("constant level must be positive, got {0}")]
    NonPositiveLevel(f64),
    #[error("level c = {0} is outside (0, e^(-1/2)); no two-root regime")]
    LevelOutOfRange(f64),
    #[error("level c is at the degenerate peak e^(-1/2); the roots merge at t = 1")]
    DegenerateLevel,
    #[error("root finder failed to converge on [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },
}

/// Why a `(h0, r)` pair fails to be a good pair for its induced level.
#[derive(Debug, Clone, PartialEq)]
pub enum PairInvalid {
    /// Induced level outside `(0, e^{-1/2})`.
    LevelOutOfRange(f64),
    /// `φ'(h0) ≤ 0`: the lower endpoint is not on the increasing branch.
    NotIncreasingAtStart(f64),
    /// `φ'(h0+r) > 0`: the upper endpoint overshoots `m2`.
    NotDecreasingAtEnd(f64),
}

impl std::fmt::Display for PairInvalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PairInvalid::LevelOutOfRange(c) => {
                write!(f, "induced level c = {c} outside (0, e^(-1/2))")
            }
            PairInvalid::NotIncreasingAtStart(d) => {
                write!(f, "phi'(h0) = {d} is not positive")
            }
            PairInvalid::NotDecreasingAtEnd(d) => {
                write!(f, "phi'(h0+r) = {d} is positive")
            }
        }
    }
}

/// `g(t) = t·exp(-t²/2)`.
#[inline]
pub fn g_eval(t: f64) -> f64 {
    t * (-0.5 * t * t).exp()
}

/// `g'(t) = (1 - t²)·exp(-t²/2)`.
#[inline]
pub fn g_deriv(t: f64) -> f64 {
    (1.0 - t * t) * (-0.5 * t * t).exp()
}

/// `φ_c(t) = c·t + exp(-t²/2)`.
#[inline]
pub fn phi_eval(c: f64, t: f64) -> f64 {
    c * t + (-0.5 * t * t).exp()
}

/// `φ_c'(t) = c - g(t)`.
#[inline]
pub fn phi_deriv(c: f64, t: f64) -> f64 {
    c - g_eval(t)
}

/// `φ_c(b) - φ_c(h0)` without subtractive loss:
/// `c·(b-h0) + e^{-h0²/2}·expm1(-(b-h0)(b+h0)/2)`.
///
/// Near a level closure the naive difference cancels to the last bits of
/// two O(1) values; this form keeps full relative accuracy in the gap, and
/// everything downstream that depends on exact closure (the half-period
/// integrand, pair polishing) goes through it.
#[inline]
pub fn phi_diff(c: f64, h0: f64, b: f64) -> f64 {
    let r = b - h0;
    c * r + (-0.5 * h0 * h0).exp() * (-0.5 * r * (b + h0)).exp_m1()
}

/// Newton-polish the upper level of a pair so that `φ(b) = φ(h0)` holds to
/// the last representable bit. The defect is evaluated through
/// [`phi_diff`], so the polish stays exact even where `φ` is flat to fp
/// resolution (pairs hugging `m1`). Iterates are confined to `[m1, m2]`,
/// where the upper root lives.
pub(crate) fn polish_upper(c: f64, h0: f64, b0: f64, m1: f64, m2: f64) -> f64 {
    let mut b = b0.clamp(m1, m2);
    let initial_defect = phi_diff(c, h0, b).abs();
    let mut best = b;
    let mut best_defect = initial_defect;
    for _ in 0..60 {
        let d = phi_diff(c, h0, b);
        let slope = phi_deriv(c, b);
        if slope.abs() < 1e-300 {
            break;
        }
        let next = (b - d / slope).clamp(m1, m2);
        let defect = phi_diff(c, h0, next).abs();
        if defect < best_defect {
            best = next;
            best_defect = defect;
        }
        if (next - b).abs() <= f64::EPSILON * b.abs() {
            break;
        }
        b = next;
    }
    best
}

/// The two radii `m1 < 1 < m2` with `g(m1) = g(m2) = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalRadii {
    pub c: f64,
    pub m1: f64,
    pub m2: f64,
}

/// Number and values of constant solutions of `e^{-h²/2}·h = c` (as radii).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstantSolutionSet {
    /// `c > e^{-1/2}`: no constant solution.
    None,
    /// `c = e^{-1/2}` (within [`DEGENERATE_BAND`]): the unit disk only.
    One(f64),
    /// `c < e^{-1/2}`: two disks of radii `r2 < 1 < r1`.
    Two { r2: f64, r1: f64 },
}

/// A validated level pair `(h0, h0+r)` with `φ(h0) = φ(h0+r) = E`,
/// `φ'(h0) > 0` and `φ'(h0+r) ≤ 0`. Exactly the (min, max) profile a
/// nonconstant solution of the curvature equation must have.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodPair {
    pub c: f64,
    pub h0: f64,
    pub r: f64,
    /// Common value `E = φ_c(h0) = φ_c(h0+r)`.
    pub energy: f64,
}

impl GoodPair {
    /// Upper level `h0 + r`.
    #[inline]
    pub fn h1(&self) -> f64 {
        self.h0 + self.r
    }

    /// Validate an explicit triple. `r` must close the level set:
    /// `|φ(h0) - φ(h0+r)|` may not exceed `mismatch_tol`.
    pub fn new(c: f64, h0: f64, r: f64, mismatch_tol: f64) -> Result<Self, PairInvalid> {
        if !(c > 0.0 && c < G_PEAK) {
            return Err(PairInvalid::LevelOutOfRange(c));
        }
        let d0 = phi_deriv(c, h0);
        if d0 <= 0.0 {
            return Err(PairInvalid::NotIncreasingAtStart(d0));
        }
        let d1 = phi_deriv(c, h0 + r);
        // Allow roundoff-scale positivity at the top: b = m2 is a legal
        // (divergent) good pair and fp noise must not reject it.
        if d1 > 1e-14 {
            return Err(PairInvalid::NotDecreasingAtEnd(d1));
        }
        if phi_diff(c, h0, h0 + r).abs() > mismatch_tol {
            return Err(PairInvalid::LevelOutOfRange(c));
        }
        Ok(GoodPair {
            c,
            h0,
            r,
            energy: phi_eval(c, h0),
        })
    }
}

/// Admissible starting levels for good pairs at a fixed `c`: the interval
/// `[lower, m1)` together with the largest attainable width `r_c = r(lower)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H0Domain {
    pub lower: f64,
    pub m1: f64,
    /// Width of the pair started at `lower`; widths decrease strictly to 0
    /// as `h0` increases to `m1`.
    pub r_c: f64,
}

/// Bracketed root of a continuous scalar function: bisection with a
/// safeguarded secant step. Requires `f(lo)·f(hi) ≤ 0`.
fn bracket_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64, ScalarError> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(ScalarError::NoConvergence { lo, hi });
    }
    for _ in 0..MAX_ROOT_ITER {
        if (hi - lo).abs() <= ROOT_TOL {
            break;
        }
        // Secant proposal, demoted to bisection when it leaves the bracket
        // or fails to shrink it meaningfully.
        let mid = 0.5 * (lo + hi);
        let mut x = if fhi != flo {
            hi - fhi * (hi - lo) / (fhi - flo)
        } else {
            mid
        };
        let margin = 0.01 * (hi - lo).abs();
        if !(x > lo + margin && x < hi - margin) {
            x = mid;
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Both roots of `g(t) = c` for `0 < c < e^{-1/2}`.
///
/// `m1` is bracketed in `[0, 1]`; `m2` in `[1, T]` where `T` doubles until
/// `g(T) < c`. The degenerate merge point `c = e^{-1/2}` is reported as a
/// distinct error.
pub fn critical_radii(c: f64) -> Result<CriticalRadii, ScalarError> {
    if c <= 0.0 {
        return Err(ScalarError::NonPositiveLevel(c));
    }
    if (c - G_PEAK).abs() <= DEGENERATE_BAND {
        return Err(ScalarError::DegenerateLevel);
    }
    if c > G_PEAK {
        return Err(ScalarError::LevelOutOfRange(c));
    }
    let m1 = bracket_root(|t| g_eval(t) - c, 0.0, 1.0)?;
    let mut hi = 2.0;
    while g_eval(hi) >= c {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(ScalarError::NoConvergence { lo: 1.0, hi });
        }
    }
    let m2 = bracket_root(|t| g_eval(t) - c, 1.0, hi)?;
    Ok(CriticalRadii { c, m1, m2 })
}

/// Classify the constant solutions for a prescribed constant level.
///
/// When `normalized` is false, `c_raw` is the constant of the density form
/// of the equation (which carries a `1/2π`) and is multiplied by `2π`
/// internally; all classification happens on the 2π-free level.
pub fn constant_solutions(c_raw: f64, normalized: bool) -> Result<ConstantSolutionSet, ScalarError> {
    if c_raw <= 0.0 {
        return Err(ScalarError::NonPositiveLevel(c_raw));
    }
    let c = if normalized {
        c_raw
    } else {
        2.0 * std::f64::consts::PI * c_raw
    };
    if (c - G_PEAK).abs() <= DEGENERATE_BAND {
        return Ok(ConstantSolutionSet::One(1.0));
    }
    if c > G_PEAK {
        return Ok(ConstantSolutionSet::None);
    }
    let radii = critical_radii(c)?;
    Ok(ConstantSolutionSet::Two {
        r2: radii.m1,
        r1: radii.m2,
    })
}

/// The admissible interval of lower levels `h0` at level `c`, and the
/// maximal pair width `r_c`.
///
/// `lower = 0` when `φ(m2) ≤ φ(0) = 1`; otherwise `lower = q` solves
/// `φ(q) = φ(m2)` on `[0, m1]`. The comparison uses a small band and
/// resolves ties toward `lower = 0` (the branches agree in the limit).
pub fn h0_domain(c: f64) -> Result<H0Domain, ScalarError> {
    let radii = critical_radii(c)?;
    let phi_m2 = phi_eval(c, radii.m2);
    if phi_m2 <= 1.0 + BRANCH_BAND {
        // r_c solves φ(b) = φ(0) = 1 on (m1, m2].
        let b0 = bracket_root(|t| phi_eval(c, t) - 1.0, radii.m1, radii.m2)?;
        let b = polish_upper(c, 0.0, b0, radii.m1, radii.m2);
        Ok(H0Domain {
            lower: 0.0,
            m1: radii.m1,
            r_c: b,
        })
    } else {
        let q = bracket_root(|t| phi_eval(c, t) - phi_m2, 0.0, radii.m1)?;
        // b(q) = m2 by construction; avoid the ill-conditioned root solve
        // at the flat top of φ.
        Ok(H0Domain {
            lower: q,
            m1: radii.m1,
            r_c: radii.m2 - q,
        })
    }
}

/// The unique good pair starting at `h0`, or `None` when `h0` is outside
/// the admissible interval `[lower, m1)`.
///
/// The upper level comes from a bracketed solve on `[m1, m2]` (where φ
/// decreases strictly from `φ(m1) > E` to `φ(m2) ≤ E`) and is then
/// polished through the cancellation-free level defect. Where `h0` hugs
/// `m1` so closely that `φ(m1) - φ(h0)` is below fp resolution, the
/// bracket degenerates and the symmetric harmonic guess `b = 2m1 - h0`
/// seeds the polish instead.
pub fn good_pair_from_h0(c: f64, h0: f64) -> Result<Option<GoodPair>, ScalarError> {
    let radii = critical_radii(c)?;
    let dom = h0_domain(c)?;
    if h0 < dom.lower || h0 >= radii.m1 {
        return Ok(None);
    }
    let energy = phi_eval(c, h0);
    let bracketed = bracket_root(|t| phi_eval(c, t) - energy, radii.m1, radii.m2).unwrap_or(radii.m1);
    // The well of φ around m1 falls slower on the right (φ''' > 0 there),
    // so the symmetric point is a lower bound for the true partner; it also
    // rescues the seed when φ(m1) - φ(h0) is below fp resolution and the
    // bracket collapses onto m1.
    let harmonic = (2.0 * radii.m1 - h0).min(radii.m2);
    let b = polish_upper(c, h0, bracketed.max(harmonic), radii.m1, radii.m2);
    Ok(Some(GoodPair {
        c,
        h0,
        r: b - h0,
        energy,
    }))
}

/// The level `c` induced by a pair of endpoints, with good-pair validation.
///
/// `c = (e^{-h0²/2} - e^{-(h0+r)²/2}) / r`; the pair is accepted only if
/// `c ∈ (0, e^{-1/2})`, `φ'(h0) > 0`, and `φ'(h0+r) ≤ 0`.
pub fn c_from_pair(h0: f64, r: f64) -> Result<f64, PairInvalid> {
    let b = h0 + r;
    let c = ((-0.5 * h0 * h0).exp() - (-0.5 * b * b).exp()) / r;
    if !(c > 0.0 && c < G_PEAK) {
        return Err(PairInvalid::LevelOutOfRange(c));
    }
    let d0 = phi_deriv(c, h0);
    if d0 <= 0.0 {
        return Err(PairInvalid::NotIncreasingAtStart(d0));
    }
    let d1 = phi_deriv(c, b);
    if d1 > 1e-14 {
        return Err(PairInvalid::NotDecreasingAtEnd(d1));
    }
    Ok(c)
}

/// Locate the `h0` whose pair has width `r` at fixed level `c`.
///
/// Width decreases strictly in `h0`, so this is a bracketed solve over the
/// admissible interval. Returns `None` when `r` exceeds `r_c` or is not
/// positive.
pub fn pair_with_width(c: f64, r: f64) -> Result<Option<GoodPair>, ScalarError> {
    let dom = h0_domain(c)?;
    if r <= 0.0 || r > dom.r_c {
        return Ok(None);
    }
    let width = |h0: f64| -> Result<f64, ScalarError> {
        Ok(good_pair_from_h0(c, h0)?
            .map(|p| p.r)
            .unwrap_or(0.0))
    };
    // width(lower) = r_c ≥ r, width(m1^-) → 0: bisect on h0.
    let mut lo = dom.lower;
    let mut hi = dom.m1;
    for _ in 0..MAX_ROOT_ITER {
        if hi - lo <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if width(mid)? >= r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    good_pair_from_h0(c, 0.5 * (lo + hi))
}
