mod common;

use aerocov::analysis::{
    altitude_pdf, conditional_coverage, coverage, coverage_mobile_harp, Association, InterferenceMode, MobileProfile,
    Scenario, UavProfile,
};
use aerocov::antenna::{peak_locations, simplified_gain, AntennaConfig, Pattern};
use aerocov::channel::db_to_linear;
use aerocov::montecarlo::{simulate_conditional_coverage, simulate_coverage, simulate_no_handover_probability};
use aerocov::numerics::{erfi, integrate, QuadratureSpec};
use common::{erfi_maclaurin, grid_peak, sample_3d_distances, trapezoid, w0_ks};

#[test]
fn erfi_against_series() {
    let oracle = erfi_maclaurin(1.0, 50);
    assert!((oracle - 1.650_425_759).abs() < 1e-9);
    assert!((erfi(1.0).unwrap() - oracle).abs() < 1e-9);
    for x in [0.1, 0.5, 1.7, 2.5] {
        let o = erfi_maclaurin(x, 80);
        assert!((erfi(x).unwrap() - o).abs() <= 1e-12 * o.abs().max(1.0), "x = {x}");
    }
}

#[test]
fn gain_over_distance_squared_matches_trapezoid() {
    let cfg = AntennaConfig::new(8);
    let p = Pattern::new(&cfg).unwrap();
    let f = |r: f64| p.gain(r, 120.0) / (r * r);
    let oracle = trapezoid(f, 10.0, 5000.0, 1_000_000);
    let spec = QuadratureSpec::with_tolerances(1e-10, 1e-300);
    let got = integrate(f, 10.0, 5000.0, &spec).unwrap();
    assert!((got - oracle).abs() <= 1e-5 * oracle, "{got} vs {oracle}");
    assert!((p.gain(300.0, 120.0) - simplified_gain(300.0, 120.0, &cfg).unwrap()).abs() < 1e-15);
}

#[test]
fn peaks_match_grid_argmax() {
    for n in [4, 8] {
        let cfg = AntennaConfig::new(n);
        let geom = peak_locations(&cfg, 120.0, 2.09, 8000.0).unwrap();
        assert_eq!(geom.lobes.len(), n as usize / 2);
        for lobe in &geom.lobes {
            let oracle = grid_peak(lobe, &cfg, 120.0, 2.09, 1_000_000);
            assert!(
                (lobe.peak_angle - oracle).abs() < 1e-6,
                "N = {n}, lobe {}: {} vs {oracle}",
                lobe.index,
                lobe.peak_angle
            );
        }
    }
}

#[test]
fn altitude_law_moments() {
    let uav = MobileProfile::default();
    let spec = QuadratureSpec::with_tolerances(1e-13, 1e-300);
    let mass = integrate(|z| altitude_pdf(z, &uav), uav.h_low, uav.h_high, &spec).unwrap();
    let mean = integrate(|z| z * altitude_pdf(z, &uav), uav.h_low, uav.h_high, &spec).unwrap();
    assert!((mass - 1.0).abs() < 1e-9);
    assert!((mean - 150.0).abs() < 1e-9);
}

#[test]
fn three_d_distance_matches_sampling() {
    let s = Scenario::table_one_mobile();
    let draws = sample_3d_distances(&s, 200_000, 21);
    let (ks, mass) = w0_ks(&s, &draws, 4000);
    assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    assert!(ks < 0.01, "{ks}");
}

fn pinned_check(s: &Scenario, r0: f64, drops: u64) -> (f64, f64) {
    let h = s.height_diff();
    let d = r0.hypot(h);
    let g = simplified_gain(r0, h, &s.antenna).unwrap();
    let varpi = s.sir_threshold * d.powf(s.chan.alpha_los) * f64::from(s.chan.m_los) / (s.chan.a_los * g);
    let analytic = conditional_coverage(varpi, s, InterferenceMode::StaticNearest, Some(r0)).unwrap();
    let mc = simulate_conditional_coverage(s, r0, drops, 13).unwrap();
    // Binomial standard error under the analytic value.
    let se = (analytic * (1.0 - analytic) / drops as f64).sqrt();
    assert!((analytic - mc.mean).abs() <= 3.0 * se, "r0 = {r0}: {analytic} vs {} (se {se})", mc.mean);
    (analytic, mc.mean)
}

#[test]
fn pinned_serving_link() {
    let s = Scenario::table_one();
    // 100 m sits near a pattern null at this height, so coverage is tiny.
    let (p, _) = pinned_check(&s, 100.0, 100_000);
    assert!(p < 1e-6, "{p}");
    let geom = peak_locations(&s.antenna, s.height_diff(), s.chan.alpha_los, s.peak_search_limit()).unwrap();
    let peak = geom.lobes.last().unwrap().peak_distance;
    let (p, _) = pinned_check(&s, peak, 100_000);
    assert!(p > 0.05 && p < 0.999, "{p}");
}

#[test]
fn mobile_nearest_matches_simulation() {
    let s = Scenario::table_one_mobile();
    let analytic = coverage(&s, Association::Nearest).unwrap().probability;
    let mc = simulate_coverage(&s, Association::Nearest, 20_000, 3).unwrap();
    assert!((analytic - mc.mean).abs() <= 0.03, "{analytic} vs {}", mc.mean);
}

fn wide_band(n: u32) -> Scenario {
    Scenario {
        antenna: AntennaConfig::new(n),
        uav: UavProfile::Mobile(MobileProfile {
            h_low: 80.0,
            h_high: 120.0,
            ..MobileProfile::default()
        }),
        ..Scenario::table_one()
    }
}

#[test]
fn mobile_harp_decreases_in_threshold() {
    let mut last = 1.0;
    for db in [-25.0, -20.0, -15.0, -10.0] {
        let s = Scenario {
            sir_threshold: db_to_linear(db),
            ..wide_band(8)
        };
        let p = coverage_mobile_harp(&s).unwrap().probability;
        assert!((0.0..=1.0).contains(&p));
        assert!(p < last, "{db} dB: {p}");
        last = p;
    }
}

#[test]
fn keeping_the_cell_gets_harder_with_more_elements() {
    let p: Vec<f64> = [4, 8, 16]
        .iter()
        .map(|&n| simulate_no_handover_probability(&wide_band(n), 5000, 17, 1.0).unwrap().mean)
        .collect();
    assert!(p.iter().all(|&v| v > 0.0 && v < 1.0));
    assert!(p[0] > p[1] && p[1] > p[2], "{p:?}");
}

#[test]
fn long_trajectory_settles_on_the_band_centre() {
    let uav = MobileProfile::default();
    let t = aerocov::mobility::generate_trajectory(&uav, 1_000_000, 4).unwrap();
    assert!((t.time_weighted_mean() - uav.mean_altitude()).abs() <= 0.1);
    let bins = 1000;
    let ks = t
        .occupancy_cdf(bins)
        .iter()
        .enumerate()
        .map(|(k, c)| (c - aerocov::analysis::altitude_cdf(uav.h_low + uav.span() * k as f64 / bins as f64, &uav)).abs())
        .fold(0.0, f64::max);
    assert!(ks <= 0.01, "{ks}");
}
