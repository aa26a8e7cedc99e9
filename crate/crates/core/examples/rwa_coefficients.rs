//! Duffing and pump coefficients derived from the device for every order,
//! including the odd orders that need either junction asymmetry or a driven
//! higher mode.

use std::f64::consts::TAU;

use subharmonic::device::{frequency_scale_for_fundamental, solve_spectrum, DeviceParams};
use subharmonic::rwa::{duffing_coefficient, pump_coefficient, FluxFactor, HigherModeConfig, PumpConfig};
use subharmonic::C64;

fn main() -> subharmonic::Result<()> {
    let mut params = DeviceParams::representative();
    params.n_modes = 5;
    let spectrum = solve_spectrum(&params, frequency_scale_for_fundamental(&params, TAU * 5e9)?)?;
    let mhz = |x: f64| x / TAU / 1e6;
    println!("alpha/2pi = {:.4} MHz", mhz(duffing_coefficient(&params, &spectrum)));

    for order in 2..=5 {
        let pump = PumpConfig { order, delta_f0: 0.05, pump_phase: 0.0, delta: 0.0 };
        let eps = pump_coefficient(&params, &spectrum, &pump, None, FluxFactor::Cosine)?;
        println!("n = {order}: |eps|/2pi = {:.6e} MHz", mhz(eps.norm()));
    }

    // A symmetric SQUID cannot pump odd orders on its own.
    let symmetric = DeviceParams { e_minus: 0.0, ..params };
    let pump = PumpConfig { order: 3, delta_f0: 0.05, pump_phase: 0.0, delta: 0.0 };
    match pump_coefficient(&symmetric, &spectrum, &pump, None, FluxFactor::Cosine) {
        Err(e) => println!("symmetric SQUID, n = 3: {e}"),
        Ok(eps) => println!("symmetric SQUID, n = 3: {eps}"),
    }
    let higher = HigherModeConfig::amplitude(C64::new(0.05, 0.0));
    let eps = pump_coefficient(&symmetric, &spectrum, &pump, Some(&higher), FluxFactor::Cosine)?;
    println!("symmetric SQUID with a 3f1 mode amplitude of 0.05: |eps|/2pi = {:.6e} MHz", mhz(eps.norm()));
    Ok(())
}
