//! Vertical random-waypoint motion.
//!
//! The UAV picks waypoints uniformly in `[h_low, h_high]` and flies between
//! them at constant speed with no pauses. Waypoints are uniform, but the
//! time spent at each altitude is not: long legs cross the middle of the
//! band more often, giving the parabolic stationary law of
//! [`altitude_pdf`](crate::analysis::altitude_pdf).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::analysis::{altitude_quantile, MobileProfile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub waypoints: Vec<f64>,
    /// Vertical speed in m/s.
    pub speed: f64,
    /// Flight time of each leg, `|z_{k+1} - z_k| / speed`.
    pub epoch_durations: Vec<f64>,
    h_low: f64,
    h_high: f64,
}

/// Draws `n_epochs` legs of the random-waypoint walk. Legs of zero length
/// are dropped, so the trajectory can hold fewer legs than requested.
pub fn generate_trajectory(uav: &MobileProfile, n_epochs: usize, seed: u64) -> Result<Trajectory> {
    if n_epochs == 0 {
        return Err(Error::domain("a trajectory needs at least one epoch"));
    }
    if !(uav.h_high > uav.h_low && uav.speed > 0.0) {
        return Err(Error::domain("mobile profile needs h_low < h_high and a positive speed"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut waypoints = Vec::with_capacity(n_epochs + 1);
    waypoints.push(rng.random_range(uav.h_low..=uav.h_high));
    let mut epoch_durations = Vec::with_capacity(n_epochs);
    for _ in 0..n_epochs {
        let next = rng.random_range(uav.h_low..=uav.h_high);
        let last = *waypoints.last().unwrap_or(&next);
        if next == last {
            continue;
        }
        epoch_durations.push((next - last).abs() / uav.speed);
        waypoints.push(next);
    }
    Ok(Trajectory {
        waypoints,
        speed: uav.speed,
        epoch_durations,
        h_low: uav.h_low,
        h_high: uav.h_high,
    })
}

impl Trajectory {
    pub fn legs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn total_duration(&self) -> f64 {
        self.epoch_durations.iter().sum()
    }

    /// Time-averaged altitude.
    pub fn time_weighted_mean(&self) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (a, b) in self.legs() {
            let len = (b - a).abs();
            num += len * 0.5 * (a + b);
            den += len;
        }
        num / den
    }

    /// Fraction of flight time spent below each of `bins + 1` equally spaced
    /// altitudes from `h_low` to `h_high`. Exact at those altitudes, since a
    /// leg spends equal time on every metre it crosses.
    pub fn occupancy_cdf(&self, bins: usize) -> Vec<f64> {
        let bins = bins.max(1);
        let width = (self.h_high - self.h_low) / bins as f64;
        // mass[k]: time in bin k; slope/step bookkeeping keeps this O(legs + bins).
        let mut mass = vec![0.0; bins];
        let mut full = vec![0.0; bins + 1];
        let mut total = 0.0;
        let bin_of = |z: f64| (((z - self.h_low) / width).floor().max(0.0) as usize).min(bins - 1);
        for (a, b) in self.legs() {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let len = hi - lo;
            total += len;
            let (kl, kh) = (bin_of(lo), bin_of(hi));
            if kl == kh {
                mass[kl] += len;
                continue;
            }
            mass[kl] += self.h_low + (kl + 1) as f64 * width - lo;
            mass[kh] += hi - (self.h_low + kh as f64 * width);
            // Whole bins strictly between kl and kh each get `width`.
            full[kl + 1] += width;
            full[kh] -= width;
        }
        let mut run = 0.0;
        for k in 0..bins {
            run += full[k];
            mass[k] += run;
        }
        let mut cdf = Vec::with_capacity(bins + 1);
        let mut acc = 0.0;
        cdf.push(0.0);
        for m in mass {
            acc += m;
            cdf.push(acc / total);
        }
        cdf
    }

    /// Fraction of waypoints at or below each of `bins + 1` equally spaced
    /// altitudes.
    pub fn waypoint_cdf(&self, bins: usize) -> Vec<f64> {
        let bins = bins.max(1);
        let width = (self.h_high - self.h_low) / bins as f64;
        let mut sorted = self.waypoints.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        (0..=bins)
            .map(|k| {
                let z = self.h_low + k as f64 * width;
                sorted.partition_point(|&w| w <= z) as f64 / n
            })
            .collect()
    }
}

/// Sampler for the stationary altitude law (inverse of the cubic CDF).
#[derive(Debug, Clone, Copy)]
pub struct StationaryAltitude {
    profile: MobileProfile,
}

impl StationaryAltitude {
    pub fn new(profile: MobileProfile) -> Self {
        Self { profile }
    }
}

impl Distribution<f64> for StationaryAltitude {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // Open interval keeps the draw strictly inside the band.
        let u: f64 = rng.random::<f64>().clamp(f64::EPSILON, 1.0 - f64::EPSILON);
        altitude_quantile(u, &self.profile)
    }
}

/// One altitude from the stationary law, reproducible from `seed`.
pub fn sample_stationary_altitude(uav: &MobileProfile, seed: u64) -> f64 {
    StationaryAltitude::new(*uav).sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::altitude_cdf;

    #[test]
    fn waypoints_stay_in_band_and_repeat() {
        let uav = MobileProfile::default();
        let a = generate_trajectory(&uav, 500, 9).unwrap();
        let b = generate_trajectory(&uav, 500, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.waypoints.iter().all(|&z| (140.0..=160.0).contains(&z)));
        for ((x, y), t) in a.legs().zip(&a.epoch_durations) {
            assert!(((y - x).abs() / uav.speed - t).abs() < 1e-12);
        }
        assert_ne!(a, generate_trajectory(&uav, 500, 10).unwrap());
        assert!(generate_trajectory(&uav, 0, 1).is_err());
    }

    #[test]
    fn occupancy_matches_brute_force() {
        let uav = MobileProfile::default();
        let t = generate_trajectory(&uav, 50, 3).unwrap();
        let cdf = t.occupancy_cdf(40);
        let total: f64 = t.legs().map(|(a, b)| (b - a).abs()).sum();
        for (k, &c) in cdf.iter().enumerate() {
            let z = 140.0 + 0.5 * k as f64;
            let below: f64 = t
                .legs()
                .map(|(a, b)| z.clamp(a.min(b), a.max(b)) - a.min(b))
                .sum();
            assert!((c - below / total).abs() < 1e-12, "bin {k}");
        }
    }

    #[test]
    fn time_and_waypoint_laws_differ() {
        let uav = MobileProfile::default();
        let t = generate_trajectory(&uav, 200_000, 11).unwrap();
        let bins = 200;
        let time = t.occupancy_cdf(bins);
        let way = t.waypoint_cdf(bins);
        let mut ks_time: f64 = 0.0;
        let mut ks_way: f64 = 0.0;
        let mut way_vs_uniform: f64 = 0.0;
        for k in 0..=bins {
            let z = 140.0 + 20.0 * k as f64 / bins as f64;
            ks_time = ks_time.max((time[k] - altitude_cdf(z, &uav)).abs());
            ks_way = ks_way.max((way[k] - altitude_cdf(z, &uav)).abs());
            way_vs_uniform = way_vs_uniform.max((way[k] - k as f64 / bins as f64).abs());
        }
        assert!(ks_time < 0.01, "{ks_time}");
        assert!(way_vs_uniform < 0.01, "{way_vs_uniform}");
        assert!(ks_way > 0.05, "{ks_way}");
    }

    #[test]
    fn stationary_sampler() {
        let uav = MobileProfile::default();
        let z = sample_stationary_altitude(&uav, 5);
        assert!(z > 140.0 && z < 160.0);
        assert_eq!(z, sample_stationary_altitude(&uav, 5));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = StationaryAltitude::new(uav);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        // Var = span^2 / 20 for the parabolic law.
        let se = (400.0f64 / 20.0 / n as f64).sqrt();
        assert!((mean - 150.0).abs() < 3.0 * se, "{mean}");
        let apex = draws.iter().filter(|&&z| (z - 150.0).abs() < 0.5).count() as f64 / n as f64;
        assert!((apex - 0.075).abs() < 0.005, "{apex}");
    }
}
