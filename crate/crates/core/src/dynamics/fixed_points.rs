//! Stationary states of the unprobed slow-amplitude equation and their
//! linear stability.
//!
//! Writing a = r e^{iθ} and ψ = nθ − arg ε, a nontrivial stationary state
//! satisfies
//!
//! ```text
//! Γ₁ r        = |ε| r^{n−1} sin ψ
//! (δ + αr²) r = −|ε| r^{n−1} cos ψ
//! ```
//!
//! so r solves the scalar amplitude equation
//! (δ + αr²)² + Γ₁² = |ε|² r^{2(n−2)} and each root fixes ψ, hence a family
//! of n phases θ₀ + 2πm/n.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rwa::{eom_rhs, RwaModel};

/// Eigenvalue real parts below `-STABILITY_MARGIN` count as decaying.
pub const STABILITY_MARGIN: f64 = 1e-12;
/// Points closer than this in the plane are the same fixed point.
pub const DEDUP_DISTANCE: f64 = 1e-8;
const SCAN_POINTS: usize = 20_000;
/// Smallest scanned amplitude relative to the scan limit.
const SCAN_SPAN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    Saddle,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Saddle => "saddle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub amplitude: f64,
    /// Phase in [0, 2π).
    pub phase: f64,
    pub stability: Stability,
    /// |eom_rhs| at the point.
    pub residual: f64,
}

impl FixedPoint {
    pub fn position(&self) -> C64 {
        C64::from_polar(self.amplitude, self.phase)
    }

    fn at(a: C64, model: &RwaModel) -> Self {
        let phase = if a.norm() == 0.0 { 0.0 } else { a.arg().rem_euclid(TAU) };
        FixedPoint {
            amplitude: a.norm(),
            phase,
            stability: classify(&eigenvalues(&jacobian(a, model))),
            residual: eom_rhs(a, 0.0, model).norm(),
        }
    }
}

/// One n-fold multiplet: shared amplitude, phases spaced by 2π/n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub amplitude: f64,
    pub members: Vec<FixedPoint>,
}

impl Family {
    pub fn stability(&self) -> Stability {
        self.members[0].stability
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSet {
    pub origin: FixedPoint,
    /// Nontrivial families ordered by amplitude.
    pub families: Vec<Family>,
}

impl FixedPointSet {
    pub fn all(&self) -> impl Iterator<Item = &FixedPoint> {
        std::iter::once(&self.origin).chain(self.families.iter().flat_map(|f| f.members.iter()))
    }

    pub fn stable(&self) -> impl Iterator<Item = &FixedPoint> {
        self.all().filter(|p| p.stability == Stability::Stable)
    }

    pub fn stable_families(&self) -> impl Iterator<Item = &Family> {
        self.families.iter().filter(|f| f.stability() == Stability::Stable)
    }

    pub fn origin_stable(&self) -> bool {
        self.origin.stability == Stability::Stable
    }
}

/// Jacobian of eom_rhs over (Re a, Im a).
pub fn jacobian(a: C64, model: &RwaModel) -> [[f64; 2]; 2] {
    let i = C64::i();
    let n = model.order;
    // Wirtinger derivatives ∂f/∂a and ∂f/∂a*.
    let da = i * C64::new(model.delta + 2.0 * model.alpha * a.norm_sqr(), model.gamma1);
    let pump = model.epsilon * (n - 1) as f64 * a.conj().powu(n - 2);
    let dac = i * (model.alpha * a * a + pump);
    let col_x = da + dac;
    let col_y = i * (da - dac);
    [[col_x.re, col_y.re], [col_x.im, col_y.im]]
}

/// Eigenvalues of a real 2×2 matrix.
pub fn eigenvalues(m: &[[f64; 2]; 2]) -> [C64; 2] {
    let half_trace = 0.5 * (m[0][0] + m[1][1]);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = half_trace * half_trace - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [C64::new(half_trace + s, 0.0), C64::new(half_trace - s, 0.0)]
    } else {
        let s = (-disc).sqrt();
        [C64::new(half_trace, s), C64::new(half_trace, -s)]
    }
}

pub fn classify(eigs: &[C64; 2]) -> Stability {
    let (a, b) = (eigs[0].re, eigs[1].re);
    if a < -STABILITY_MARGIN && b < -STABILITY_MARGIN {
        Stability::Stable
    } else if (a < -STABILITY_MARGIN && b > STABILITY_MARGIN) || (b < -STABILITY_MARGIN && a > STABILITY_MARGIN) {
        Stability::Saddle
    } else {
        Stability::Unstable
    }
}

/// Left side minus right side of the amplitude equation.
pub fn amplitude_equation(r: f64, model: &RwaModel) -> f64 {
    let detune = model.delta + model.alpha * r * r;
    detune * detune + model.gamma1 * model.gamma1
        - model.epsilon.norm_sqr() * r.powi(2 * (model.order as i32 - 2))
}

/// Coefficients c₀..c₃ of the amplitude equation as a polynomial in s = r².
fn amplitude_polynomial(model: &RwaModel) -> [f64; 4] {
    let (d, a, g) = (model.delta, model.alpha, model.gamma1);
    let mut c = [d * d + g * g, 2.0 * a * d, a * a, 0.0];
    c[model.order as usize - 2] -= model.epsilon.norm_sqr();
    c
}

/// Upper bound on the amplitude of any nontrivial fixed point, from the
/// Cauchy bound on the roots of the amplitude polynomial in r².
pub fn scan_limit(model: &RwaModel) -> f64 {
    let c = amplitude_polynomial(model);
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let Some(deg) = (1..4).rev().find(|&k| c[k].abs() > 1e-14 * scale) else {
        return 1.0;
    };
    let bound = 1.0 + (0..deg).map(|k| (c[k] / c[deg]).abs()).fold(0.0, f64::max);
    bound.sqrt().min(1e12)
}

fn refine_root(mut lo: f64, mut hi: f64, model: &RwaModel) -> f64 {
    let f_lo = amplitude_equation(lo, model);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = amplitude_equation(mid, model);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of the amplitude equation on (0, r_max], found by a sign-change
/// scan and bisection.
pub fn amplitude_roots(model: &RwaModel) -> Vec<f64> {
    if model.epsilon.norm() == 0.0 {
        return Vec::new();
    }
    // Log-spaced: roots can sit decades apart (n = 5 outer branch).
    let r_max = scan_limit(model);
    let r_min = r_max * SCAN_SPAN;
    let ratio = SCAN_SPAN.recip().powf(1.0 / SCAN_POINTS as f64);
    let mut roots = Vec::new();
    let mut prev_r = r_min;
    let mut prev_f = amplitude_equation(prev_r, model);
    for k in 1..=SCAN_POINTS {
        let r = if k == SCAN_POINTS { r_max } else { r_min * ratio.powi(k as i32) };
        let f = amplitude_equation(r, model);
        if f == 0.0 {
            roots.push(r);
        } else if prev_f != 0.0 && f.signum() != prev_f.signum() {
            roots.push(refine_root(prev_r, r, model));
        }
        prev_r = r;
        prev_f = f;
    }
    roots
}

fn newton_polish(mut a: C64, model: &RwaModel) -> C64 {
    for _ in 0..50 {
        let f = eom_rhs(a, 0.0, model);
        if f.norm() < 1e-14 * (1.0 + a.norm()) {
            break;
        }
        let j = jacobian(a, model);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let dx = (j[1][1] * f.re - j[0][1] * f.im) / det;
        let dy = (-j[1][0] * f.re + j[0][0] * f.im) / det;
        let next = a - C64::new(dx, dy);
        if eom_rhs(next, 0.0, model).norm() >= f.norm() {
            break;
        }
        a = next;
    }
    a
}

/// Origin plus every nontrivial family of the unprobed model.
pub fn find_fixed_points(model: &RwaModel) -> Result<FixedPointSet> {
    if model.probe.is_some() {
        return Err(Error::ProbeActive);
    }
    let origin = FixedPoint::at(C64::new(0.0, 0.0), model);
    let n = model.order;
    let eps_abs = model.epsilon.norm();
    let eps_arg = model.epsilon.arg();

    let mut families: Vec<Family> = Vec::new();
    let mut seen: Vec<C64> = vec![C64::new(0.0, 0.0)];
    for r in amplitude_roots(model) {
        if r <= 0.0 {
            continue;
        }
        let drive = eps_abs * r.powi(n as i32 - 2);
        let sin_psi = model.gamma1 / drive;
        let cos_psi = -(model.delta + model.alpha * r * r) / drive;
        let psi = sin_psi.atan2(cos_psi);
        let theta0 = (psi + eps_arg) / n as f64;

        let mut members = Vec::with_capacity(n as usize);
        for m in 0..n {
            let seed = C64::from_polar(r, theta0 + TAU * m as f64 / n as f64);
            let a = newton_polish(seed, model);
            if seen.iter().any(|s| (s - a).norm() < DEDUP_DISTANCE) {
                continue;
            }
            seen.push(a);
            members.push(FixedPoint::at(a, model));
        }
        if members.len() == n as usize {
            let amplitude = members.iter().map(|p| p.amplitude).sum::<f64>() / n as f64;
            members.sort_by(|a, b| a.phase.partial_cmp(&b.phase).unwrap());
            families.push(Family { amplitude, members });
        }
    }
    families.sort_by(|a, b| a.amplitude.partial_cmp(&b.amplitude).unwrap());
    Ok(FixedPointSet { origin, families })
}

/// Largest eigenvalue real part at the origin.
pub fn origin_growth_rate(model: &RwaModel) -> f64 {
    let eigs = eigenvalues(&jacobian(C64::new(0.0, 0.0), model));
    eigs[0].re.max(eigs[1].re)
}

/// Parametric (n = 2) instability threshold |ε|_th for fixed Γ₁ and δ,
/// located by bisection on the origin's leading eigenvalue to 1e-12
/// relative width.
pub fn threshold_n2(gamma1: f64, delta: f64) -> Result<f64> {
    let probe = |eps: f64| -> Result<f64> {
        Ok(origin_growth_rate(&RwaModel::new(2, delta, gamma1, 0.0, C64::new(eps, 0.0))?))
    };
    let mut lo = 0.0;
    let mut hi = gamma1 + delta.abs();
    while probe(hi)? <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
