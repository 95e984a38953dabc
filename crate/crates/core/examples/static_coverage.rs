//! Coverage of a hovering UAV versus SIR threshold, for both association
//! rules and a few array sizes.

use aerocov::analysis::{coverage_static_harp, coverage_static_nearest, Scenario};
use aerocov::antenna::AntennaConfig;
use aerocov::channel::db_to_linear;

fn main() -> aerocov::Result<()> {
    let thresholds = [-25.0, -20.0, -15.0, -10.0, -5.0, 0.0];
    println!("{:>8} {:>4} {:>10} {:>10}", "SIR dB", "N", "nearest", "harp");
    for n in [4, 8, 16] {
        for &db in &thresholds {
            let s = Scenario {
                antenna: AntennaConfig::new(n),
                sir_threshold: db_to_linear(db),
                ..Scenario::table_one()
            };
            let near = coverage_static_nearest(&s)?;
            let harp = coverage_static_harp(&s)?;
            println!("{db:>8.1} {n:>4} {:>10.4} {:>10.4}", near.probability, harp.probability);
        }
    }

    let flat = Scenario {
        antenna: AntennaConfig::flat(),
        ..Scenario::table_one()
    };
    println!("unit-gain antenna, -15 dB: {:.4}", coverage_static_nearest(&flat)?.probability);
    Ok(())
}
