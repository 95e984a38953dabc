//! Coverage of a UAV moving vertically inside a band centred at 150 m, as
//! the band widens. A very thin band should reproduce the hovering UAV.

use aerocov::analysis::{
    coverage_mobile_harp, coverage_mobile_nearest, coverage_static_harp, coverage_static_nearest, MobileProfile,
    Scenario, UavProfile,
};
use aerocov::antenna::AntennaConfig;

fn main() -> aerocov::Result<()> {
    let base = Scenario {
        antenna: AntennaConfig::new(4),
        ..Scenario::table_one()
    };
    let near = coverage_static_nearest(&base)?.probability;
    let harp = coverage_static_harp(&base)?.probability;
    println!("hovering at 150 m: nearest {near:.4}, harp {harp:.4}");
    println!("{:>10} {:>10} {:>10}", "band [m]", "nearest", "harp");
    for half in [0.1, 5.0, 10.0, 20.0, 40.0] {
        let s = Scenario {
            uav: UavProfile::Mobile(MobileProfile {
                h_low: 150.0 - half,
                h_high: 150.0 + half,
                ..MobileProfile::default()
            }),
            ..base
        };
        let n = coverage_mobile_nearest(&s)?;
        let h = coverage_mobile_harp(&s)?;
        println!("{:>10.1} {:>10.4} {:>10.4}", 2.0 * half, n.probability, h.probability);
    }
    Ok(())
}
