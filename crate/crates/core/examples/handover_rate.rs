//! Altitude handover rate and the probability of keeping the serving cell
//! for one second, for a UAV moving between 80 m and 120 m.
//!
//! Usage: handover_rate [epochs]

use aerocov::analysis::{coverage_mobile_harp, mobility_adjusted_coverage, Association, MobileProfile, Scenario, UavProfile};
use aerocov::antenna::AntennaConfig;
use aerocov::montecarlo::{simulate_handover_rate, simulate_no_handover_probability, DEFAULT_TIME_STEP};

fn main() -> aerocov::Result<()> {
    let epochs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let profile = MobileProfile {
        h_low: 80.0,
        h_high: 120.0,
        ..MobileProfile::default()
    };
    println!("{:>4} {:>18} {:>18} {:>9} {:>9} {:>9}", "N", "rate [1/s]", "P(no handover)", "beta=0", "beta=0.5", "beta=1");
    for n in [4, 8, 16] {
        let s = Scenario {
            antenna: AntennaConfig::new(n),
            uav: UavProfile::Mobile(profile),
            ..Scenario::table_one()
        };
        let rate = simulate_handover_rate(&s, Association::Harp, epochs, 7, DEFAULT_TIME_STEP)?;
        let keep = simulate_no_handover_probability(&s, epochs, 7, 1.0)?;
        let p = coverage_mobile_harp(&s)?.probability;
        let adjusted: Vec<f64> = [0.0, 0.5, 1.0]
            .iter()
            .map(|&b| mobility_adjusted_coverage(p, keep.mean, b))
            .collect::<aerocov::Result<_>>()?;
        println!(
            "{n:>4} {:>9.4} +/- {:.4} {:>9.4} +/- {:.4} {:>9.4} {:>9.4} {:>9.4}",
            rate.mean, rate.ci_halfwidth, keep.mean, keep.ci_halfwidth, adjusted[0], adjusted[1], adjusted[2]
        );
    }
    Ok(())
}
