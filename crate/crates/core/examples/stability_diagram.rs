//! Stability diagrams over pump amplitude and detuning. For n = 2 the ground
//! state destabilises above sqrt(delta^2 + Gamma1^2); for n = 3 it never does and
//! the triplet coexists with it.

use subharmonic::analysis::{sweep_pump_detuning, Region};
use subharmonic::rwa::RwaModel;
use subharmonic::C64;

fn main() -> subharmonic::Result<()> {
    let eps: Vec<f64> = (0..21).map(|i| 0.15 * i as f64).collect();
    let deltas: Vec<f64> = (0..41).map(|j| -2.0 + 0.1 * j as f64).collect();
    for order in [2, 3] {
        let base = RwaModel::new(order, 0.0, 1.0, 0.5, C64::new(1.0, 0.0))?;
        let diagram = sweep_pump_detuning(&base, &eps, &deltas)?;
        println!("n = {order}: rows |eps| from {} (top) to 0, columns delta from -2 to 2", eps[eps.len() - 1]);
        println!("  . ground only   + coexistence   # excited only   ! unbounded");
        for i in (0..eps.len()).rev() {
            let row: String = (0..deltas.len())
                .map(|j| match diagram.cell(i, j).region {
                    Region::GroundOnly => '.',
                    Region::Coexistence => '+',
                    Region::ExcitedOnly => '#',
                    Region::Unbounded => '!',
                })
                .collect();
            println!("  {:5.2} {row}", eps[i]);
        }
    }
    Ok(())
}
