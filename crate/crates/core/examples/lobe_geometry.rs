//! Nulls, lobe peaks and HARP association zones of the base-station array
//! as seen from a UAV 120 m above the antennas.

use aerocov::antenna::{null_distances, peak_locations, AntennaConfig, Pattern};

fn main() -> aerocov::Result<()> {
    let h = 120.0;
    let alpha = 2.09;
    for n in [2, 4, 8, 16] {
        let cfg = AntennaConfig::new(n);
        println!("N = {n}");
        let nulls = null_distances(&cfg, h)?;
        let shown: Vec<String> = nulls.iter().map(|d| format!("{d:.1}")).collect();
        println!("  null distances [m]: {}", shown.join(" "));
        let geom = peak_locations(&cfg, h, alpha, 8000.0)?;
        for lobe in &geom.lobes {
            let (lo, hi) = lobe.zone();
            println!(
                "  lobe {:>2}: peak {:>7.4} rad at {:>8.1} m, zone [{:.1}, {:.1}] m",
                lobe.index, lobe.peak_angle, lobe.peak_distance, lo, hi
            );
        }
    }

    let pattern = Pattern::new(&AntennaConfig::new(8))?;
    println!("\ngain of an 8-element array versus horizontal distance");
    for r in [10.0, 50.0, 100.0, 150.0, 207.8, 300.0, 464.8, 700.0, 1500.0] {
        println!("  {r:>7.1} m  {:.5}", pattern.gain(r, h));
    }
    Ok(())
}
