//! Stationary states of the slow-amplitude equation for n = 2..5: the n-fold
//! degenerate families, their stability, and the n = 2 threshold.

use subharmonic::dynamics::{find_fixed_points, threshold_n2};
use subharmonic::rwa::RwaModel;
use subharmonic::C64;

fn main() -> subharmonic::Result<()> {
    let models = [
        RwaModel::new(2, 0.0, 1.0, 0.2, C64::new(3.0, 0.0))?,
        RwaModel::new(3, 0.0, 1.0, 0.15, C64::new(1.5, 0.0))?,
        RwaModel::new(4, -1.0, 1.0, 1.11, C64::new(1.0, 0.0))?,
        RwaModel::new(5, -3.5355339, 1.0, 3.1819805, C64::new(1.0606602, 0.0))?,
    ];
    for m in &models {
        let set = find_fixed_points(m)?;
        println!("n = {}: origin {}", m.order, set.origin.stability.as_str());
        for fam in &set.families {
            let phases: Vec<String> = fam.members.iter().map(|p| format!("{:.3}", p.phase)).collect();
            println!("  r = {:.4} {:<7} phases [{}]", fam.amplitude, fam.stability().as_str(), phases.join(", "));
        }
    }

    println!("\nn = 2 threshold, gamma1 = 1:");
    for delta in [-1.0, 0.0, 0.5, 2.0] {
        println!("  delta = {delta:>4}: |eps|_th = {:.9}", threshold_n2(1.0, delta)?);
    }
    Ok(())
}
