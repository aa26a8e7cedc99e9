//! Physical description of the SQUID-terminated quarter-wave resonator.
//!
//! Energies are carried as angular frequencies (E/ħ, rad/s) so ħ never
//! appears numerically. The resonator length and phase velocity enter only
//! through the single frequency scale `v/d`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// von Klitzing constant h/e², ohms.
pub const VON_KLITZING: f64 = 25_812.807_45;

/// Smallest |cos(F/2)| accepted for the static flux.
pub const FLUX_GUARD: f64 = 1e-6;

/// SQUID and line parameters. All energies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// E₊ = (E_J1 + E_J2)/2.
    pub e_plus: f64,
    /// E₋ = (E_J1 − E_J2)/2; zero for a symmetric SQUID.
    pub e_minus: f64,
    /// Characteristic impedance Z₀ = √(L₀/C₀), ohms.
    pub z0: f64,
    /// Cavity inductive energy E_L,cav (enters only through γ).
    pub el_cav: f64,
    /// Normalized DC flux F = 2πΦ_dc/Φ₀, radians.
    pub static_flux: f64,
    pub n_modes: usize,
}

impl DeviceParams {
    pub fn new(
        e_plus: f64,
        e_minus: f64,
        z0: f64,
        el_cav: f64,
        static_flux: f64,
        n_modes: usize,
    ) -> Result<Self> {
        let params = DeviceParams {
            e_plus,
            e_minus,
            z0,
            el_cav,
            static_flux,
            n_modes,
        };
        params.validate()?;
        Ok(params)
    }

    /// A representative working point: E₊/2π = 400 GHz, 5% junction
    /// asymmetry, 50 Ω line, γ = 0.05 at F = 0.6. These are not measured
    /// values of any particular sample.
    pub fn representative() -> Self {
        let e_plus = TAU * 400e9;
        let static_flux: f64 = 0.6;
        DeviceParams {
            e_plus,
            e_minus: 0.05 * e_plus,
            z0: 50.0,
            el_cav: 0.05 * 2.0 * e_plus * (static_flux / 2.0).cos(),
            static_flux,
            n_modes: 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_plus > 0.0 && self.e_plus.is_finite()) {
            return Err(Error::invalid("e_plus", "must be positive and finite"));
        }
        if !(self.e_minus.abs() < self.e_plus) {
            return Err(Error::invalid("e_minus", "|e_minus| must be below e_plus"));
        }
        if !(self.z0 > 0.0 && self.z0.is_finite()) {
            return Err(Error::invalid("z0", "must be positive and finite"));
        }
        if !self.el_cav.is_finite() {
            return Err(Error::invalid("el_cav", "must be finite"));
        }
        if self.n_modes == 0 {
            return Err(Error::invalid("n_modes", "at least one mode is required"));
        }
        if self.cos_half_flux().abs() <= FLUX_GUARD {
            return Err(Error::FluxSingularity {
                flux: self.static_flux,
            });
        }
        Ok(())
    }

    pub fn asymmetry(&self) -> f64 {
        self.e_minus / self.e_plus
    }

    pub fn cos_half_flux(&self) -> f64 {
        (self.static_flux / 2.0).cos()
    }

    pub fn sin_half_flux(&self) -> f64 {
        (self.static_flux / 2.0).sin()
    }

    /// Participation ratio γ = E_L,cav / (2 E₊ cos(F/2)).
    pub fn gamma(&self) -> f64 {
        self.el_cav / (2.0 * self.e_plus * self.cos_half_flux())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    /// 1-based mode index.
    pub index: usize,
    /// Dimensionless wavenumber k_n d.
    pub kd: f64,
    /// Angular frequency ω_n = k_n d · (v/d), rad/s.
    pub omega: f64,
    /// Coupling β_n of the mode to the SQUID phase.
    pub beta: f64,
    /// |kd·tan(kd) − 1/γ| at the returned root.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub gamma: f64,
    /// v/d as an angular frequency, rad/s.
    pub frequency_scale: f64,
    pub modes: Vec<Mode>,
}

impl ModeSpectrum {
    /// Mode by 1-based index.
    pub fn mode(&self, index: usize) -> Option<&Mode> {
        index.checked_sub(1).and_then(|i| self.modes.get(i))
    }

    pub fn fundamental(&self) -> &Mode {
        &self.modes[0]
    }
}

/// Differential inductance of the SQUID relative to its zero-flux value,
/// L_SQ/L_SQ,0 = 1 / [cos(f/2)cos φ − (E₋/E₊) sin(f/2) sin φ].
pub fn squid_inductance(phi: f64, flux: f64, params: &DeviceParams) -> Result<f64> {
    let half = flux / 2.0;
    let denominator = half.cos() * phi.cos() - params.asymmetry() * half.sin() * phi.sin();
    if denominator.abs() < 1e-12 {
        return Err(Error::DivergentInductance { denominator });
    }
    Ok(denominator.recip())
}

/// Static phase drop φ₀ = atan(−(E₋/E₊) tan(F/2)) across the SQUID.
pub fn static_phase(params: &DeviceParams) -> Result<f64> {
    if params.cos_half_flux().abs() <= FLUX_GUARD {
        return Err(Error::FluxSingularity {
            flux: params.static_flux,
        });
    }
    let half = params.static_flux / 2.0;
    Ok((-params.asymmetry() * half.tan()).atan())
}

/// Residual of the spectral equation kd·tan(kd) = 1/γ.
pub fn spectral_residual(kd: f64, gamma: f64) -> f64 {
    (kd * kd.tan() - gamma.recip()).abs()
}

/// Coupling β = γ √(8π Z₀ kd / R_K).
pub fn coupling(gamma: f64, z0: f64, kd: f64) -> f64 {
    gamma * (8.0 * PI * z0 * kd / VON_KLITZING).sqrt()
}

/// Root of kd·tan(kd) = 1/γ on branch `mode` (1-based), inside
/// ((mode−1)π, (2·mode−1)π/2).
///
/// Works on g(x) = x sin x − cos x / γ, which has the same roots on the
/// branch but no poles, with a bisection-safeguarded Newton iteration.
/// The result is the float among the final neighbours that minimises the
/// residual of the original equation.
pub fn spectral_root(gamma: f64, mode: usize) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::GammaOutOfRange { gamma });
    }
    if mode == 0 {
        return Err(Error::invalid("mode", "mode index is 1-based"));
    }
    let c = gamma.recip();
    let g = |x: f64| x * x.sin() - c * x.cos();
    let dg = |x: f64| x.sin() * (1.0 + c) + x * x.cos();

    let mut lo = (mode - 1) as f64 * PI;
    let mut hi = (2 * mode - 1) as f64 * FRAC_PI_2;
    let (g_lo, g_hi) = (g(lo), g(hi));
    if !(g_lo.signum() * g_hi.signum() < 0.0) {
        return Err(Error::RootBracketFailure { mode });
    }
    let rising = g_lo < 0.0;

    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx == 0.0 {
            break;
        }
        if (gx < 0.0) == rising {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - gx / dg(x);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let converged = (next - x).abs() <= f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * hi;
        x = next;
        if converged {
            break;
        }
    }

    let best = (-4i64..=4)
        .map(|k| f64::from_bits((x.to_bits() as i64 + k) as u64))
        .filter(|v| v.is_finite() && *v > (mode - 1) as f64 * PI)
        .min_by(|a, b| {
            spectral_residual(*a, gamma)
                .partial_cmp(&spectral_residual(*b, gamma))
                .unwrap()
        })
        .unwrap_or(x);
    Ok(best)
}

/// Solves the first `params.n_modes` eigenmodes.
pub fn solve_spectrum(params: &DeviceParams, frequency_scale: f64) -> Result<ModeSpectrum> {
    params.validate()?;
    if !(frequency_scale > 0.0 && frequency_scale.is_finite()) {
        return Err(Error::invalid("frequency_scale", "must be positive"));
    }
    let gamma = params.gamma();
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::GammaOutOfRange { gamma });
    }
    let modes = (1..=params.n_modes)
        .map(|index| {
            let kd = spectral_root(gamma, index)?;
            Ok(Mode {
                index,
                kd,
                omega: kd * frequency_scale,
                beta: coupling(gamma, params.z0, kd),
                residual: spectral_residual(kd, gamma),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModeSpectrum {
        gamma,
        frequency_scale,
        modes,
    })
}

/// Frequency scale v/d that places the fundamental mode at `omega1`.
pub fn frequency_scale_for_fundamental(params: &DeviceParams, omega1: f64) -> Result<f64> {
    let kd1 = spectral_root(params.gamma(), 1)?;
    Ok(omega1 / kd1)
}
