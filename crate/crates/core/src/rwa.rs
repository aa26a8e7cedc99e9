//! Coefficients and right-hand side of the slow-amplitude equation
//!
//! ```text
//! i ȧ + (δ + iΓ₁ + α|a|²) a + ε_n (a*)^(n−1) + ζ e^(−iΔt) = 0
//! ```
//!
//! for the fundamental-mode amplitude `a` in the frame rotating at ω = ω₁ + δ
//! under a flux pump at nω. The pump term acts on the conjugate of the
//! fundamental amplitude; this is the form whose stationary states carry the
//! n-fold phase degeneracy (a literal reading with the higher-mode amplitude
//! in that slot would not produce it).
//!
//! Coefficient functions return angular frequencies in rad/s. [`RwaModel`]
//! itself is unit-agnostic: build it in whatever time unit suits the
//! integration (see [`RwaModel::rescaled`]).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::device::{DeviceParams, ModeSpectrum};
use crate::error::{Error, Result};

/// Which flux factor multiplies the even-order pump coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FluxFactor {
    /// ε₂ ∝ cos(F/2).
    #[default]
    Cosine,
    /// ε₂ ∝ sin(F/2), as the flux-modulated term of the SQUID potential suggests.
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpConfig {
    /// Multiplication order n ∈ {2, 3, 4, 5}.
    pub order: u32,
    /// Flux modulation amplitude δf₀ = 2πΦ_ac/Φ₀.
    pub delta_f0: f64,
    /// Phase of the flux modulation, radians.
    pub pump_phase: f64,
    /// Detuning δ = ω − ω₁.
    pub delta: f64,
}

impl PumpConfig {
    /// Above this δf₀ the linear-in-pump treatment is doubtful.
    pub const LINEAR_LIMIT: f64 = 0.5;

    pub fn validate(&self) -> Result<()> {
        if !(2..=5).contains(&self.order) {
            return Err(Error::UnsupportedOrder { order: self.order });
        }
        if !(self.delta_f0 >= 0.0 && self.delta_f0.is_finite()) {
            return Err(Error::invalid("delta_f0", "must be finite and non-negative"));
        }
        if !self.pump_phase.is_finite() || !self.delta.is_finite() {
            return Err(Error::invalid("pump", "phase and detuning must be finite"));
        }
        Ok(())
    }

    pub fn beyond_linear_regime(&self) -> bool {
        self.delta_f0 > Self::LINEAR_LIMIT
    }
}

/// Response of the resonator mode that sits near the pump frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HigherModeConfig {
    /// Complex amplitude given directly.
    Amplitude { re: f64, im: f64 },
    /// Steady-state linear response a = drive/(detuning + i·damping) to a
    /// drive at the pump frequency (direct SQUID drive or line crosstalk).
    Driven {
        drive_amplitude: f64,
        detuning: f64,
        damping: f64,
    },
}

impl HigherModeConfig {
    pub fn amplitude(a: C64) -> Self {
        HigherModeConfig::Amplitude { re: a.re, im: a.im }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            HigherModeConfig::Amplitude { re, im } if !(re.is_finite() && im.is_finite()) => {
                Err(Error::invalid("higher_mode", "amplitude must be finite"))
            }
            HigherModeConfig::Driven { damping, .. } if !(damping > 0.0) => {
                Err(Error::invalid("higher_mode.damping", "must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Mode amplitude; a driven response follows the pump phase.
    pub fn response(&self, pump_phase: f64) -> C64 {
        match *self {
            HigherModeConfig::Amplitude { re, im } => C64::new(re, im),
            HigherModeConfig::Driven {
                drive_amplitude,
                detuning,
                damping,
            } => C64::from_polar(drive_amplitude, pump_phase) / C64::new(detuning, damping),
        }
    }
}

/// Weak coherent probe injected near the measurement frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Complex drive strength ζ (angular frequency units).
    pub amplitude: C64,
    /// Detuning Δ from the measurement frequency.
    pub detuning: f64,
}

impl ProbeConfig {
    pub fn on_resonance(amplitude: C64) -> Self {
        ProbeConfig {
            amplitude,
            detuning: 0.0,
        }
    }
}

/// The reduced single-mode dynamical system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwaModel {
    pub order: u32,
    pub delta: f64,
    pub gamma1: f64,
    pub alpha: f64,
    pub epsilon: C64,
    pub probe: Option<ProbeConfig>,
}

impl RwaModel {
    pub fn new(order: u32, delta: f64, gamma1: f64, alpha: f64, epsilon: C64) -> Result<Self> {
        let model = RwaModel {
            order,
            delta,
            gamma1,
            alpha,
            epsilon,
            probe: None,
        };
        model.validate()?;
        Ok(model)
    }

    /// Model with Γ₁ = 0. Only meaningful for conservation checks; the
    /// dissipative analyses require Γ₁ > 0.
    pub fn lossless(order: u32, delta: f64, alpha: f64, epsilon: C64) -> Result<Self> {
        let model = RwaModel {
            order,
            delta,
            gamma1: 0.0,
            alpha,
            epsilon,
            probe: None,
        };
        model.check_common()?;
        Ok(model)
    }

    /// Builds the model from device parameters. All rates in rad/s.
    pub fn from_device(
        params: &DeviceParams,
        spectrum: &ModeSpectrum,
        pump: &PumpConfig,
        higher_mode: Option<&HigherModeConfig>,
        gamma1: f64,
        flux_factor: FluxFactor,
    ) -> Result<Self> {
        let epsilon = pump_coefficient(params, spectrum, pump, higher_mode, flux_factor)?;
        RwaModel::new(
            pump.order,
            pump.delta,
            gamma1,
            duffing_coefficient(params, spectrum),
            epsilon,
        )
    }

    pub fn with_probe(mut self, probe: ProbeConfig) -> Self {
        self.probe = Some(probe);
        self
    }

    pub fn without_probe(mut self) -> Self {
        self.probe = None;
        self
    }

    pub fn with_epsilon(mut self, epsilon: C64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// Expresses every rate in a new time unit: a model in rad/s rescaled by
    /// `1e-6` runs in microseconds.
    pub fn rescaled(mut self, time_unit: f64) -> Self {
        self.delta *= time_unit;
        self.gamma1 *= time_unit;
        self.alpha *= time_unit;
        self.epsilon *= time_unit;
        if let Some(probe) = self.probe.as_mut() {
            probe.amplitude *= time_unit;
            probe.detuning *= time_unit;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma1 > 0.0 && self.gamma1.is_finite()) {
            return Err(Error::invalid("gamma1", "damping must be positive"));
        }
        self.check_common()
    }

    fn check_common(&self) -> Result<()> {
        if !(2..=5).contains(&self.order) {
            return Err(Error::UnsupportedOrder { order: self.order });
        }
        let finite = self.delta.is_finite()
            && self.alpha.is_finite()
            && self.epsilon.re.is_finite()
            && self.epsilon.im.is_finite();
        if !finite {
            return Err(Error::invalid("model", "coefficients must be finite"));
        }
        if let Some(p) = &self.probe {
            if !(p.amplitude.re.is_finite() && p.amplitude.im.is_finite() && p.detuning.is_finite()) {
                return Err(Error::invalid("probe", "must be finite"));
            }
        }
        Ok(())
    }

    /// Probe drive ζ e^{−iΔt}, zero when no probe is attached.
    #[inline]
    pub fn probe_drive(&self, t: f64) -> C64 {
        match &self.probe {
            Some(p) if p.detuning == 0.0 => p.amplitude,
            Some(p) => p.amplitude * C64::from_polar(1.0, -p.detuning * t),
            None => C64::new(0.0, 0.0),
        }
    }
}

/// Duffing (Kerr) coefficient α = E₊ cos(F/2) β₁⁴.
pub fn duffing_coefficient(params: &DeviceParams, spectrum: &ModeSpectrum) -> f64 {
    let beta1 = spectrum.fundamental().beta;
    params.e_plus * params.cos_half_flux() * beta1.powi(4)
}

fn flux_weight(params: &DeviceParams, factor: FluxFactor) -> f64 {
    match factor {
        FluxFactor::Cosine => params.cos_half_flux(),
        FluxFactor::Sine => params.sin_half_flux(),
    }
}

/// Pump coefficient for even orders: ε₂ = E₊ cos(F/2) β₁² δf₀ e^{iφ_p} and
/// ε₄ = −ε₂ β₁²/2.
pub fn pump_coefficient_even(
    params: &DeviceParams,
    spectrum: &ModeSpectrum,
    pump: &PumpConfig,
    flux_factor: FluxFactor,
) -> Result<C64> {
    let beta1 = spectrum.fundamental().beta;
    let eps2 = C64::from_polar(
        params.e_plus * flux_weight(params, flux_factor) * beta1 * beta1 * pump.delta_f0,
        pump.pump_phase,
    );
    match pump.order {
        2 => Ok(eps2),
        4 => Ok(-eps2 * (beta1 * beta1 / 2.0)),
        order => Err(Error::UnsupportedOrder { order }),
    }
}

/// Spectrum index of the mode near n·ω₁ for odd n (quarter-wave ladder
/// ω_m ≈ (2m−1)ω₁).
pub fn pump_resonant_mode(order: u32) -> usize {
    (order as usize + 1) / 2
}

/// Pump coefficient for odd orders.
///
/// n = 3: ε₃ = (E₋/2) β₁³ δf₀ e^{iφ_p} / cos(F/2) + E₊ cos(F/2) β₁² β_h a_h,
/// where `h` is the mode near 3ω₁. n = 5 multiplies both contributions by
/// β₁² and uses the mode near 5ω₁; this is an extrapolation of the odd-order
/// scaling, not a derived result.
pub fn pump_coefficient_odd(
    params: &DeviceParams,
    spectrum: &ModeSpectrum,
    pump: &PumpConfig,
    higher_mode: Option<&HigherModeConfig>,
) -> Result<C64> {
    let order = pump.order;
    if order != 3 && order != 5 {
        return Err(Error::UnsupportedOrder { order });
    }
    if higher_mode.is_none() && params.e_minus == 0.0 {
        return Err(Error::MissingHigherMode { order });
    }
    let beta1 = spectrum.fundamental().beta;
    let cos_half = params.cos_half_flux();

    let direct = C64::from_polar(
        params.e_minus / 2.0 * beta1.powi(3) * pump.delta_f0 / cos_half,
        pump.pump_phase,
    );
    let cascade = match higher_mode {
        Some(hm) => {
            hm.validate()?;
            let needed = pump_resonant_mode(order);
            let mode = spectrum.mode(needed).ok_or(Error::InsufficientModes {
                order,
                needed,
                available: spectrum.modes.len(),
            })?;
            hm.response(pump.pump_phase) * (params.e_plus * cos_half * beta1 * beta1 * mode.beta)
        }
        None => C64::new(0.0, 0.0),
    };
    let scale = if order == 5 { beta1 * beta1 } else { 1.0 };
    Ok((direct + cascade) * scale)
}

/// Pump coefficient for any supported order.
pub fn pump_coefficient(
    params: &DeviceParams,
    spectrum: &ModeSpectrum,
    pump: &PumpConfig,
    higher_mode: Option<&HigherModeConfig>,
    flux_factor: FluxFactor,
) -> Result<C64> {
    pump.validate()?;
    if pump.order % 2 == 0 {
        pump_coefficient_even(params, spectrum, pump, flux_factor)
    } else {
        pump_coefficient_odd(params, spectrum, pump, higher_mode)
    }
}

/// da/dt = i(δ + iΓ₁ + α|a|²)a + iε(a*)^{n−1} + iζe^{−iΔt}.
#[inline]
pub fn eom_rhs(a: C64, t: f64, model: &RwaModel) -> C64 {
    let i = C64::i();
    let linear = C64::new(model.delta + model.alpha * a.norm_sqr(), model.gamma1);
    i * (linear * a + model.epsilon * a.conj().powu(model.order - 1) + model.probe_drive(t))
}

/// Conserved quantity of the lossless, unprobed flow,
/// H = δ|a|² + (α/2)|a|⁴ + (1/n)(ε(a*)ⁿ + ε* aⁿ), with ȧ = i ∂H/∂a*.
pub fn hamiltonian_value(a: C64, model: &RwaModel) -> f64 {
    let n = model.order;
    let s = a.norm_sqr();
    let pump = model.epsilon * a.conj().powu(n);
    model.delta * s + 0.5 * model.alpha * s * s + 2.0 * pump.re / n as f64
}
