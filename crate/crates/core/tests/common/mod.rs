//! Independent oracles shared by the integration and acceptance suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use aerocov::analysis::distance::equivalent_3d_tail_radius;
use aerocov::analysis::{equivalent_3d_distance_pdf, Scenario};
use aerocov::antenna::{overall_link_gain, AntennaConfig, Lobe};
use aerocov::mobility::StationaryAltitude;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

/// Maclaurin series `erfi(x) = 2/sqrt(pi) sum x^(2k+1) / (k! (2k+1))`.
pub fn erfi_maclaurin(x: f64, terms: usize) -> f64 {
    let mut term = x;
    let mut sum = 0.0;
    for k in 0..terms {
        sum += term / (2 * k + 1) as f64;
        term *= x * x / (k + 1) as f64;
    }
    2.0 / PI.sqrt() * sum
}

/// Composite trapezoid rule on `points` equally spaced abscissae.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> f64 {
    let h = (b - a) / (points - 1) as f64;
    let inner: f64 = (1..points - 1).map(|k| f(a + k as f64 * h)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

/// Argmax of `L(theta)` over `points` grid nodes strictly inside the lobe.
pub fn grid_peak(lobe: &Lobe, cfg: &AntennaConfig, h: f64, alpha: f64, points: usize) -> f64 {
    let (lo, hi) = (lobe.null_angle, lobe.inner_null_angle);
    let step = (hi - lo) / (points + 1) as f64;
    let mut best = (f64::NEG_INFINITY, lo);
    for k in 1..=points {
        let t = lo + k as f64 * step;
        let v = overall_link_gain(t, cfg, h, alpha).unwrap();
        if v > best.0 {
            best = (v, t);
        }
    }
    best.1
}

/// Draws of `sqrt(R0^2 + (Z - h_BS)^2)` with `R0` the nearest-BS distance of
/// the planar PPP and `Z` from the stationary altitude law.
pub fn sample_3d_distances(s: &Scenario, n: usize, seed: u64) -> Vec<f64> {
    let uav = *s.mobile().unwrap();
    let law = StationaryAltitude::new(uav);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lam = s.deploy.bs_density;
    let mut out: Vec<f64> = (0..n)
        .map(|_| {
            let e: f64 = Exp1.sample(&mut rng);
            let r0 = (e / (PI * lam)).sqrt();
            let z = law.sample(&mut rng) - s.env.bs_height;
            r0.hypot(z)
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Kolmogorov-Smirnov distance between sorted samples and the CDF obtained by
/// integrating the closed-form 3D-distance density on a fine grid. Returns
/// the distance and the integrated mass.
pub fn w0_ks(s: &Scenario, sorted: &[f64], grid: usize) -> (f64, f64) {
    let uav = s.mobile().unwrap();
    let lo = uav.h_low - s.env.bs_height;
    let hi = equivalent_3d_tail_radius(s, 1e-12).unwrap();
    let pdf = |w: f64| equivalent_3d_distance_pdf(w, s).unwrap();
    let n = sorted.len() as f64;
    let width = (hi - lo) / grid as f64;
    let mut cdf = 0.0;
    let mut ks: f64 = 0.0;
    for k in 0..grid {
        let (a, b) = (lo + k as f64 * width, lo + (k + 1) as f64 * width);
        cdf += trapezoid(pdf, a, b, 65);
        let below = sorted.partition_point(|&w| w < b) as f64 / n;
        let upto = sorted.partition_point(|&w| w <= b) as f64 / n;
        ks = ks.max((below - cdf).abs()).max((upto - cdf).abs());
    }
    (ks, cdf)
}
