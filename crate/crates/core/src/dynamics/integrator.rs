//! Dormand–Prince 5(4) integration of the slow-amplitude equation with PI
//! step-size control. The state is one complex number, treated as two real
//! components for the error norm.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::rwa::{eom_rhs, RwaModel};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus the embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;
const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - 0.75 * BETA;

/// Sampled solution: accepted step end points, starting with the initial
/// condition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<C64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, C64)> {
        Some((*self.times.last()?, *self.states.last()?))
    }
}

/// Adaptive stepper. Holds the current state and the FSAL derivative.
#[derive(Debug, Clone)]
pub struct Stepper<'m> {
    model: &'m RwaModel,
    rtol: f64,
    atol: f64,
    t: f64,
    a: C64,
    k1: C64,
    h: f64,
    err_prev: f64,
    accepted: u64,
    rejected: u64,
}

impl<'m> Stepper<'m> {
    /// `tol` is used as both relative and absolute tolerance.
    pub fn new(model: &'m RwaModel, a0: C64, t0: f64, tol: f64) -> Result<Self> {
        if !(tol > 1e-14 && tol < 1e-3) {
            return Err(Error::invalid("tol", "must lie in (1e-14, 1e-3)"));
        }
        let k1 = eom_rhs(a0, t0, model);
        let scale = tol * (1.0 + a0.norm());
        let h = if k1.norm() > 0.0 {
            (0.01 * scale.powf(0.2) / k1.norm().powf(0.2)).min(0.1 * scale / k1.norm()).max(1e-6)
        } else {
            1e-3
        };
        Ok(Stepper {
            model,
            rtol: tol,
            atol: tol,
            t: t0,
            a: a0,
            k1,
            h,
            err_prev: 1e-4,
            accepted: 0,
            rejected: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> C64 {
        self.a
    }

    pub fn accepted_steps(&self) -> u64 {
        self.accepted
    }

    pub fn rejected_steps(&self) -> u64 {
        self.rejected
    }

    /// Takes one accepted step, never passing `t_max`.
    pub fn step(&mut self, t_max: f64) -> Result<()> {
        let model = self.model;
        let f = |t: f64, a: C64| eom_rhs(a, t, model);
        loop {
            let remaining = t_max - self.t;
            if remaining <= 0.0 {
                return Ok(());
            }
            let mut h = self.h.min(remaining);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h < 1e-14 * self.t.abs().max(1.0) && !last {
                return Err(Error::StepSizeUnderflow { t: self.t, h });
            }

            let (t, a, k1) = (self.t, self.a, self.k1);
            let k2 = f(t + C2 * h, a + h * A21 * k1);
            let k3 = f(t + C3 * h, a + h * (A31 * k1 + A32 * k2));
            let k4 = f(t + C4 * h, a + h * (A41 * k1 + A42 * k2 + A43 * k3));
            let k5 = f(t + C5 * h, a + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
            let k6 = f(
                t + h,
                a + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
            );
            let a_new = a + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
            let k7 = f(t + h, a_new);
            let err_vec = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

            let sc_re = self.atol + self.rtol * a.re.abs().max(a_new.re.abs());
            let sc_im = self.atol + self.rtol * a.im.abs().max(a_new.im.abs());
            let err = (0.5 * ((err_vec.re / sc_re).powi(2) + (err_vec.im / sc_im).powi(2))).sqrt();

            if err.is_finite() && err <= 1.0 {
                let err_c = err.max(1e-10);
                let fac = (SAFETY * err_c.powf(-ALPHA) * self.err_prev.powf(BETA)).clamp(FAC_MIN, FAC_MAX);
                self.err_prev = err_c;
                self.t = if last { t_max } else { t + h };
                self.a = a_new;
                self.k1 = k7;
                if !last || fac < 1.0 {
                    self.h = h * fac;
                }
                self.accepted += 1;
                return Ok(());
            }

            let fac = if err.is_finite() {
                (SAFETY * err.powf(-ALPHA)).clamp(FAC_MIN, 1.0)
            } else {
                FAC_MIN
            };
            self.h = h * fac;
            self.rejected += 1;
            if self.h < 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t: self.t, h: self.h });
            }
        }
    }
}

/// Integrates from `a0` at t = 0 to `t_final`, recording every accepted step.
pub fn integrate(a0: C64, model: &RwaModel, t_final: f64, tol: f64) -> Result<Trajectory> {
    integrate_until(a0, model, t_final, tol, |_, _| false)
}

/// Like [`integrate`], but stops early once `stop(t, a)` returns true.
pub fn integrate_until(
    a0: C64,
    model: &RwaModel,
    t_final: f64,
    tol: f64,
    mut stop: impl FnMut(f64, C64) -> bool,
) -> Result<Trajectory> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::invalid("t_final", "must be positive and finite"));
    }
    let mut stepper = Stepper::new(model, a0, 0.0, tol)?;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![a0],
    };
    while stepper.time() < t_final {
        stepper.step(t_final)?;
        traj.times.push(stepper.time());
        traj.states.push(stepper.state());
        if stop(stepper.time(), stepper.state()) {
            break;
        }
    }
    Ok(traj)
}

/// Final state only, without storing the path.
pub fn integrate_final(a0: C64, model: &RwaModel, t_final: f64, tol: f64) -> Result<C64> {
    let mut stepper = Stepper::new(model, a0, 0.0, tol)?;
    while stepper.time() < t_final {
        stepper.step(t_final)?;
    }
    Ok(stepper.state())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn origin_stays_put() {
        let m = RwaModel::new(3, 0.4, 0.1, 1.0, C64::new(0.7, 0.1)).unwrap();
        let traj = integrate(C64::new(0.0, 0.0), &m, 10.0, 1e-9).unwrap();
        assert!(traj.states.iter().all(|a| *a == C64::new(0.0, 0.0)));
        assert_eq!(traj.last().unwrap().0, 10.0);
    }

    #[test]
    fn exponential_decay() {
        let tol = 1e-9;
        let m = RwaModel::new(2, 0.0, 0.1, 0.0, C64::new(0.0, 0.0)).unwrap();
        let traj = integrate(C64::new(1.0, 0.0), &m, 30.0, tol).unwrap();
        for (t, a) in traj.times.iter().zip(&traj.states) {
            assert!((a.norm() - (-0.1 * t).exp()).abs() < tol, "t={t}");
        }
    }

    #[test]
    fn rotating_decay_matches_closed_form() {
        // ȧ = (iδ − Γ)a
        let m = RwaModel::new(4, 1.3, 0.2, 0.0, C64::new(0.0, 0.0)).unwrap();
        let a0 = C64::new(0.3, 0.4);
        let a = integrate_final(a0, &m, 12.0, 1e-10).unwrap();
        let exact = a0 * (C64::new(-0.2, 1.3) * 12.0).exp();
        assert_relative_eq!((a - exact).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn tolerance_bounds_are_enforced() {
        let m = RwaModel::new(2, 0.0, 0.1, 0.0, C64::new(0.0, 0.0)).unwrap();
        assert!(integrate(C64::new(1.0, 0.0), &m, 1.0, 1e-2).is_err());
        assert!(integrate(C64::new(1.0, 0.0), &m, 1.0, 1e-15).is_err());
        assert!(integrate(C64::new(1.0, 0.0), &m, -1.0, 1e-8).is_err());
    }

    #[test]
    fn blow_up_reports_underflow() {
        // n = 5 with a large pump escapes to infinity in finite time.
        let m = RwaModel::new(5, 0.0, 0.1, 0.0, C64::new(1.0, 0.0)).unwrap();
        let err = integrate(C64::new(3.0, 0.0), &m, 100.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::StepSizeUnderflow { .. }));
    }

    #[test]
    fn early_stop() {
        let m = RwaModel::new(2, 0.0, 0.5, 0.0, C64::new(0.0, 0.0)).unwrap();
        let traj = integrate_until(C64::new(1.0, 0.0), &m, 100.0, 1e-8, |_, a| a.norm() < 0.1).unwrap();
        let (t, a) = traj.last().unwrap();
        assert!(a.norm() < 0.1);
        assert!(t < 10.0);
    }
}
