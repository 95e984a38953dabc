//! Random-waypoint flight between 140 m and 160 m: waypoints are uniform,
//! but time spent at each altitude follows the parabolic stationary law.

use aerocov::analysis::{altitude_cdf, MobileProfile};
use aerocov::mobility::{generate_trajectory, StationaryAltitude};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

fn main() -> aerocov::Result<()> {
    let uav = MobileProfile::default();
    let epochs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let t = generate_trajectory(&uav, epochs, 1)?;
    println!(
        "{} legs, {:.0} s of flight, time-averaged altitude {:.3} m",
        t.epoch_durations.len(),
        t.total_duration(),
        t.time_weighted_mean()
    );

    let bins = 10;
    let time = t.occupancy_cdf(bins);
    let way = t.waypoint_cdf(bins);
    println!("{:>8} {:>10} {:>10} {:>10}", "z [m]", "time", "stationary", "waypoints");
    for k in 0..=bins {
        let z = uav.h_low + uav.span() * k as f64 / bins as f64;
        println!("{z:>8.1} {:>10.4} {:>10.4} {:>10.4}", time[k], altitude_cdf(z, &uav), way[k]);
    }

    let law = StationaryAltitude::new(uav);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let draws: Vec<f64> = (0..5).map(|_| law.sample(&mut rng)).collect();
    println!("stationary draws: {draws:.2?}");
    Ok(())
}
