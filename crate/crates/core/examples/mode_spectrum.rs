//! Mode spectrum of a SQUID-terminated line for a few participation ratios,
//! and the representative device scaled to a 5 GHz fundamental.

use std::f64::consts::{FRAC_PI_2, TAU};

use subharmonic::device::{
    frequency_scale_for_fundamental, solve_spectrum, spectral_residual, spectral_root, DeviceParams,
};

fn main() -> subharmonic::Result<()> {
    println!("gamma   mode  kd          (2n-1)pi/2  residual");
    for gamma in [0.01, 0.05, 0.1] {
        for mode in 1..=3 {
            let kd = spectral_root(gamma, mode)?;
            let open = (2 * mode - 1) as f64 * FRAC_PI_2;
            println!("{gamma:<7} {mode:<5} {kd:<11.8} {open:<11.8} {:.1e}", spectral_residual(kd, gamma));
        }
    }

    let params = DeviceParams::representative();
    let scale = frequency_scale_for_fundamental(&params, TAU * 5e9)?;
    let spectrum = solve_spectrum(&params, scale)?;
    println!("\nrepresentative device, gamma = {:.4}", spectrum.gamma);
    for m in &spectrum.modes {
        println!(
            "mode {}: f = {:.4} GHz, f/f1 = {:.4}, beta = {:.5}",
            m.index,
            m.omega / TAU / 1e9,
            m.omega / spectrum.fundamental().omega,
            m.beta
        );
    }
    Ok(())
}
