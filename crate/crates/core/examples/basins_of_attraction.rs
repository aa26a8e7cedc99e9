//! Basins of attraction of the n = 3 triplet and the ground state, printed as
//! a character map.

use subharmonic::dynamics::{basin_sample, find_fixed_points, BasinLabel, GridSpec};
use subharmonic::rwa::RwaModel;
use subharmonic::C64;

fn main() -> subharmonic::Result<()> {
    let m = RwaModel::new(3, 0.0, 1.0, 0.2, C64::new(1.02, 0.0))?;
    let set = find_fixed_points(&m)?;
    let extent = 1.4 * set.families.iter().map(|f| f.amplitude).fold(0.0, f64::max);
    let grid = GridSpec { extent, resolution: 41 };
    let basins = basin_sample(&m, grid)?;
    for (k, a) in basins.attractors.iter().enumerate() {
        println!("attractor {k}: {:.3} at {:.3}", a.norm(), a.arg());
    }
    println!("shares: {:?}", basins.shares().iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>());
    let glyph: Vec<char> = basins
        .attractors
        .iter()
        .enumerate()
        .map(|(k, a)| if a.norm() < 1e-6 { 'o' } else { (b'A' + k as u8) as char })
        .collect();
    for iy in (0..grid.resolution).rev() {
        let line: String = (0..grid.resolution)
            .map(|ix| match basins.label(ix, iy) {
                BasinLabel::Attractor(k) => glyph[k],
                BasinLabel::Unresolved => '?',
            })
            .collect();
        println!("{line}");
    }
    Ok(())
}
