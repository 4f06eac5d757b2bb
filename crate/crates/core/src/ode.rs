//! Embedded Dormand-Prince 5(4) integrator for two-dimensional systems,
//! with PI step-size control, fifth-order dense output, and root-resolved
//! event detection.
//!
//! The solver is deliberately concrete (state = `[f64; 2]`): the only
//! consumer is the phase-plane module and a generic ODE framework would be
//! noise here.

use thiserror::Error;

/// Step size below which the integration is declared blown up.
pub const MIN_STEP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("required step {step} below {MIN_STEP} at t = {t} (solution blow-up); last state {state:?}")]
    StepUnderflow { t: f64, step: f64, state: [f64; 2] },
    #[error("tolerance {0} outside (1e-14, 1e-4)")]
    BadTolerance(f64),
}

// Dormand-Prince coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Error weights (5th order minus embedded 4th order).
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output weights for the quartic correction term.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[inline]
fn axpyn(y: &[f64; 2], h: f64, terms: &[(f64, &[f64; 2])]) -> [f64; 2] {
    let mut out = *y;
    for i in 0..2 {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// One accepted integration step with everything needed to interpolate.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    pub y0: [f64; 2],
    pub y1: [f64; 2],
    rcont: [[f64; 2]; 5],
}

impl DenseStep {
    /// Interpolated state at `t ∈ [t0, t0 + h]` (fifth-order accurate).
    pub fn eval(&self, t: f64) -> [f64; 2] {
        let theta = (t - self.t0) / self.h;
        let th1 = 1.0 - theta;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = self.rcont[0][i]
                + theta
                    * (self.rcont[1][i]
                        + th1
                            * (self.rcont[2][i]
                                + theta * (self.rcont[3][i] + th1 * self.rcont[4][i])));
        }
        out
    }
}

pub struct Dopri5<'a> {
    rhs: &'a dyn Fn(f64, &[f64; 2]) -> [f64; 2],
    atol: f64,
    rtol: f64,
    /// FSAL slot: derivative at the current point.
    k1: [f64; 2],
    pub t: f64,
    pub y: [f64; 2],
    h: f64,
    err_prev: f64,
    pub n_steps: usize,
    pub n_rejected: usize,
}

impl<'a> Dopri5<'a> {
    pub fn new(
        rhs: &'a dyn Fn(f64, &[f64; 2]) -> [f64; 2],
        t0: f64,
        y0: [f64; 2],
        tol: f64,
    ) -> Result<Self, OdeError> {
        if !(tol > 1e-14 && tol < 1e-4) {
            return Err(OdeError::BadTolerance(tol));
        }
        let k1 = rhs(t0, &y0);
        Ok(Dopri5 {
            rhs,
            atol: tol,
            rtol: tol,
            k1,
            t: t0,
            y: y0,
            h: 1e-3,
            err_prev: 1.0,
            n_steps: 0,
            n_rejected: 0,
        })
    }

    /// Advance by one accepted step, not beyond `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<DenseStep, OdeError> {
        loop {
            let h = self.h.min(t_end - self.t);
            if h <= MIN_STEP {
                return Err(OdeError::StepUnderflow {
                    t: self.t,
                    step: h,
                    state: self.y,
                });
            }
            let (t, y) = (self.t, self.y);
            let k1 = self.k1;
            let f = self.rhs;
            let k2 = f(t + A21 * h, &axpyn(&y, h, &[(A21, &k1)]));
            let k3 = f(t + 0.3 * h, &axpyn(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + 0.8 * h, &axpyn(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                t + 8.0 / 9.0 * h,
                &axpyn(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + h,
                &axpyn(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y1 = axpyn(
                &y,
                h,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let k7 = f(t + h, &y1);

            if !(y1[0].is_finite() && y1[1].is_finite()) {
                self.h = 0.25 * h;
                self.n_rejected += 1;
                continue;
            }

            let mut err_sq = 0.0;
            for i in 0..2 {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let scale = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
                err_sq += (e / scale) * (e / scale);
            }
            let err = (err_sq / 2.0).sqrt().max(1e-30);

            // PI controller (order 5): fac = 0.9 · err^{-0.7/5} · err_prev^{0.4/5}.
            let fac = (0.9 * err.powf(-0.14) * self.err_prev.powf(0.08)).clamp(0.2, 5.0);
            if err <= 1.0 {
                let mut rcont = [[0.0; 2]; 5];
                for i in 0..2 {
                    let ydiff = y1[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    rcont[0][i] = y[i];
                    rcont[1][i] = ydiff;
                    rcont[2][i] = bspl;
                    rcont[3][i] = ydiff - h * k7[i] - bspl;
                    rcont[4][i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                            + D7 * k7[i]);
                }
                let step = DenseStep {
                    t0: t,
                    h,
                    y0: y,
                    y1,
                    rcont,
                };
                self.t = t + h;
                self.y = y1;
                self.k1 = k7; // FSAL
                self.h = h * fac;
                self.err_prev = err;
                self.n_steps += 1;
                return Ok(step);
            }
            self.n_rejected += 1;
            self.h = h * fac.min(1.0);
        }
    }
}

/// Direction of the sign change that triggers an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingDirection {
    Falling,
    Rising,
    Any,
}

/// Locate a root of `g(state[idx])`-style event functions inside an
/// accepted step using the dense interpolant: bisection to fp resolution.
pub fn locate_event(
    step: &DenseStep,
    event: &dyn Fn(f64, &[f64; 2]) -> f64,
    direction: CrossingDirection,
) -> Option<(f64, [f64; 2])> {
    let g0 = event(step.t0, &step.y0);
    let t1 = step.t0 + step.h;
    let g1 = event(t1, &step.y1);
    let crossed = match direction {
        CrossingDirection::Falling => g0 > 0.0 && g1 <= 0.0,
        CrossingDirection::Rising => g0 < 0.0 && g1 >= 0.0,
        CrossingDirection::Any => g0 != 0.0 && g0.signum() != g1.signum(),
    };
    if !crossed {
        return None;
    }
    let mut lo = step.t0;
    let mut hi = t1;
    let mut glo = g0;
    for _ in 0..128 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // fp resolution reached
        }
        let gm = event(mid, &step.eval(mid));
        if gm == 0.0 {
            return Some((mid, step.eval(mid)));
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Some((t, step.eval(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Harmonic oscillator y'' = -y: exact period 2π.
    fn sho(_t: f64, y: &[f64; 2]) -> [f64; 2] {
        [y[1], -y[0]]
    }

    #[test]
    fn integrates_harmonic_oscillator() {
        let rhs = |t: f64, y: &[f64; 2]| sho(t, y);
        let mut solver = Dopri5::new(&rhs, 0.0, [1.0, 0.0], 1e-12).unwrap();
        let t_end = 2.0 * std::f64::consts::PI;
        while solver.t < t_end {
            solver.step(t_end).unwrap();
        }
        assert_relative_eq!(solver.y[0], 1.0, epsilon = 1e-9);
        assert!(solver.y[1].abs() < 1e-9);
    }

    #[test]
    fn dense_output_matches_trajectory() {
        let rhs = |t: f64, y: &[f64; 2]| sho(t, y);
        let mut solver = Dopri5::new(&rhs, 0.0, [1.0, 0.0], 1e-10).unwrap();
        let mut max_err: f64 = 0.0;
        while solver.t < 3.0 {
            let step = solver.step(3.0).unwrap();
            for j in 1..5 {
                let t = step.t0 + step.h * j as f64 / 5.0;
                let y = step.eval(t);
                max_err = max_err.max((y[0] - t.cos()).abs()).max((y[1] + t.sin()).abs());
            }
        }
        assert!(max_err < 1e-9, "dense output error {max_err}");
    }

    #[test]
    fn event_location_finds_quarter_period() {
        // y0 crosses zero (falling y' = velocity? here event = position)
        // at t = π/2 for the cosine solution.
        let rhs = |t: f64, y: &[f64; 2]| sho(t, y);
        let mut solver = Dopri5::new(&rhs, 0.0, [1.0, 0.0], 1e-12).unwrap();
        let event = |_t: f64, y: &[f64; 2]| y[0];
        loop {
            let step = solver.step(10.0).unwrap();
            if let Some((t, y)) = locate_event(&step, &event, CrossingDirection::Falling) {
                assert_relative_eq!(t, std::f64::consts::FRAC_PI_2, epsilon = 1e-10);
                assert!(y[0].abs() < 1e-10);
                return;
            }
        }
    }

    #[test]
    fn blow_up_reports_underflow() {
        // y' = y² from y(0) = 1 blows up at t = 1.
        let rhs = |_t: f64, y: &[f64; 2]| [y[0] * y[0], 0.0];
        let mut solver = Dopri5::new(&rhs, 0.0, [1.0, 0.0], 1e-10).unwrap();
        let result = loop {
            match solver.step(2.0) {
                Ok(_) => {
                    if solver.t >= 2.0 {
                        break Ok(());
                    }
                }
                Err(e) => break Err(e),
            }
        };
        assert!(matches!(result, Err(OdeError::StepUnderflow { .. })));
    }

    #[test]
    fn rejects_bad_tolerance() {
        let rhs = |t: f64, y: &[f64; 2]| sho(t, y);
        assert!(Dopri5::new(&rhs, 0.0, [1.0, 0.0], 1e-3).is_err());
        assert!(Dopri5::new(&rhs, 0.0, [1.0, 0.0], 1e-15).is_err());
    }
}
