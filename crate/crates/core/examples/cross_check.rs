//! Analytic coverage against the simulator on the same threshold grid.
//!
//! Usage: cross_check [drops] [n_elements] [m]

use aerocov::analysis::{coverage, Association, Scenario};
use aerocov::antenna::AntennaConfig;
use aerocov::channel::db_to_linear;
use aerocov::montecarlo::simulate_coverage_curve;

fn main() -> aerocov::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let drops = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let n = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8);
    let m = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(3);

    let mut base = Scenario::table_one();
    base.antenna = AntennaConfig::new(n);
    base.chan.m_los = m;
    base.chan.m_nlos = m.min(base.chan.m_nlos);

    let grid_db = [-25.0, -20.0, -15.0, -10.0, -5.0, 0.0];
    let grid: Vec<f64> = grid_db.iter().map(|&d| db_to_linear(d)).collect();
    for association in [Association::Nearest, Association::Harp] {
        let mc = simulate_coverage_curve(&base, association, &grid, drops, 2024)?;
        println!("{} (N = {n}, m_l = {m}, {drops} drops)", association.name());
        for (k, &db) in grid_db.iter().enumerate() {
            let s = Scenario {
                sir_threshold: grid[k],
                ..base
            };
            let a = coverage(&s, association)?.probability;
            println!(
                "  {db:>6.1} dB  analytic {a:.4}  simulated {:.4} +/- {:.4}  gap {:+.4}",
                mc[k].mean,
                mc[k].ci_halfwidth,
                a - mc[k].mean
            );
        }
    }
    Ok(())
}
