//! Coverage probability under nearest and highest-average-power association,
//! for hovering and vertically mobile UAVs.

use crate::antenna::{peak_locations, Pattern};
use crate::error::{Error, Result};
use crate::numerics::{integrate_split, QuadratureSpec};

use super::distance::{
    altitude_pdf, equivalent_3d_distance_pdf, equivalent_3d_tail_radius, harp_distance_pdf,
    harp_integration_zones, nearest_distance_pdf, nearest_distance_tail_radius, TAIL_MASS,
};
use super::laplace::InterferenceField;
use super::scenario::{Scenario, UavProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Association {
    Nearest,
    /// Highest average received power.
    Harp,
}

impl Association {
    pub fn name(&self) -> &'static str {
        match self {
            Association::Nearest => "nearest",
            Association::Harp => "harp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mobility {
    Static,
    Mobile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub probability: f64,
    /// Error estimate of the outer integral.
    pub quadrature_error: f64,
    /// Where the serving-distance integral was cut off.
    pub truncation_radius: f64,
    pub association: Association,
    pub mobility: Mobility,
}

fn outer_spec() -> QuadratureSpec {
    QuadratureSpec::with_tolerances(1e-6, 1e-10)
}

/// Runs an integral whose integrand may fail; the first failure wins over the
/// quadrature's own complaint about the NaN used to stop it.
fn integrate_fallible<F>(mut f: F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure = None;
    let out = integrate_split(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        breakpoints,
        spec,
    );
    match failure {
        Some(e) => Err(e),
        None => out,
    }
}

fn sorted_breakpoints(lo: f64, hi: f64, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v = vec![lo, hi];
    v.extend(extra.into_iter().filter(|&x| x > lo && x < hi));
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Ring boundaries (horizontal) below `limit`.
fn ring_boundaries(scenario: &Scenario, limit: f64) -> impl Iterator<Item = f64> + '_ {
    let env = scenario.env;
    (1u64..)
        .map(move |j| env.ring_start(j))
        .take_while(move |&r| r < limit)
}

/// `theta m_l / zeta_l` for a LoS serving link of large-scale gain
/// `A_l G d^-alpha_l`; infinite when the serving BS sits in a null.
fn serving_argument(scenario: &Scenario, gain: f64, d: f64) -> f64 {
    let c = &scenario.chan;
    let zeta = c.a_los * gain * d.powf(-c.alpha_los);
    if zeta > 0.0 {
        scenario.sir_threshold * f64::from(c.m_los) / zeta
    } else {
        f64::INFINITY
    }
}

fn require_static(scenario: &Scenario) -> Result<f64> {
    scenario.validate()?;
    Ok(scenario.static_altitude()? - scenario.env.bs_height)
}

/// Coverage of a hovering UAV served by its horizontally nearest BS.
pub fn coverage_static_nearest(scenario: &Scenario) -> Result<CoverageResult> {
    let h = require_static(scenario)?;
    let field = InterferenceField::new(scenario, h)?;
    let pattern = Pattern::new(&scenario.antenna)?;
    let top = nearest_distance_tail_radius(&scenario.deploy, TAIL_MASS);
    let bps = sorted_breakpoints(
        0.0,
        top,
        field.nulls().iter().copied().chain(ring_boundaries(scenario, top)),
    );
    let (p, err) = integrate_fallible(
        |r0| {
            let pdf = nearest_distance_pdf(r0, &scenario.deploy);
            if pdf == 0.0 {
                return Ok(0.0);
            }
            let w = serving_argument(scenario, pattern.gain(r0, h), r0.hypot(h));
            Ok(field.conditional_coverage(w, r0)? * pdf)
        },
        &bps,
        &outer_spec(),
    )?;
    Ok(CoverageResult {
        probability: p.clamp(0.0, 1.0),
        quadrature_error: err,
        truncation_radius: top,
        association: Association::Nearest,
        mobility: Mobility::Static,
    })
}

/// HARP coverage at height difference `h`, returning (value, error, cut).
fn harp_at_height(scenario: &Scenario, h: f64, spec: &QuadratureSpec) -> Result<(f64, f64, f64)> {
    let geometry = peak_locations(&scenario.antenna, h, scenario.chan.alpha_los, scenario.peak_search_limit())?;
    let field = InterferenceField::new(scenario, h)?;
    let pattern = Pattern::new(&scenario.antenna)?;
    let zones = harp_integration_zones(&geometry, &scenario.deploy, TAIL_MASS);
    let (mut total, mut error, mut cut) = (0.0, 0.0, 0.0);
    for (lo, hi) in zones {
        if !(hi > lo) {
            continue;
        }
        let bps = sorted_breakpoints(lo, hi, ring_boundaries(scenario, hi));
        let (v, e) = integrate_fallible(
            |r| {
                let pdf = harp_distance_pdf(r, &geometry, &scenario.deploy)?;
                if pdf == 0.0 {
                    return Ok(0.0);
                }
                let w = serving_argument(scenario, pattern.gain(r, h), r.hypot(h));
                Ok(field.conditional_coverage(w, 0.0)? * pdf)
            },
            &bps,
            spec,
        )?;
        total += v;
        error += e;
        cut = hi;
    }
    Ok((total.clamp(0.0, 1.0), error, cut))
}

/// Coverage of a hovering UAV under the lobe-zone approximation of HARP
/// association. Interferers may sit anywhere, including closer than the
/// serving BS.
pub fn coverage_static_harp(scenario: &Scenario) -> Result<CoverageResult> {
    let h = require_static(scenario)?;
    let (p, err, cut) = harp_at_height(scenario, h, &outer_spec())?;
    Ok(CoverageResult {
        probability: p,
        quadrature_error: err,
        truncation_radius: cut,
        association: Association::Harp,
        mobility: Mobility::Static,
    })
}

/// Coverage of a vertically mobile UAV attached to its nearest BS.
///
/// The serving distance is the 3D distance `W0` from the moving UAV; the
/// antenna gain and the interference field are evaluated at the mean
/// altitude, with interferers outside the sphere of radius `W0`.
pub fn coverage_mobile_nearest(scenario: &Scenario) -> Result<CoverageResult> {
    scenario.validate()?;
    let uav = *scenario.mobile()?;
    let h = uav.mean_altitude() - scenario.env.bs_height;
    let field = InterferenceField::new(scenario, h)?;
    let pattern = Pattern::new(&scenario.antenna)?;
    let lo = uav.h_low - scenario.env.bs_height;
    let b = uav.h_high - scenario.env.bs_height;
    let top = equivalent_3d_tail_radius(scenario, TAIL_MASS)?;
    let extra: Vec<f64> = std::iter::once(b)
        .chain(field.nulls().iter().map(|r| r.hypot(h)))
        .chain(ring_boundaries(scenario, top).map(|r| r.hypot(h)))
        .collect();
    let bps = sorted_breakpoints(lo, top, extra);
    let (p, err) = integrate_fallible(
        |w0| {
            let pdf = equivalent_3d_distance_pdf(w0, scenario)?;
            if pdf == 0.0 {
                return Ok(0.0);
            }
            let gain = pattern.gain_sin((h / w0).min(1.0));
            let w = serving_argument(scenario, gain, w0);
            let r_excl = (w0 * w0 - h * h).max(0.0).sqrt();
            Ok(field.conditional_coverage(w, r_excl)? * pdf)
        },
        &bps,
        &outer_spec(),
    )?;
    Ok(CoverageResult {
        probability: p.clamp(0.0, 1.0),
        quadrature_error: err,
        truncation_radius: top,
        association: Association::Nearest,
        mobility: Mobility::Mobile,
    })
}

/// Coverage of a vertically mobile UAV under approximate HARP association:
/// the hovering result averaged over the stationary altitude law, with the
/// lobe geometry rebuilt at every altitude.
pub fn coverage_mobile_harp(scenario: &Scenario) -> Result<CoverageResult> {
    scenario.validate()?;
    let uav = *scenario.mobile()?;
    let inner = QuadratureSpec::with_tolerances(1e-7, 1e-11);
    let mut cut: f64 = 0.0;
    let (p, err) = integrate_fallible(
        |z| {
            let fz = altitude_pdf(z, &uav);
            if fz == 0.0 {
                return Ok(0.0);
            }
            let (v, _, c) = harp_at_height(scenario, z - scenario.env.bs_height, &inner)?;
            cut = cut.max(c);
            Ok(v * fz)
        },
        &[uav.h_low, uav.h_high],
        &QuadratureSpec::with_tolerances(1e-6, 1e-9),
    )?;
    Ok(CoverageResult {
        probability: p.clamp(0.0, 1.0),
        quadrature_error: err,
        truncation_radius: cut,
        association: Association::Harp,
        mobility: Mobility::Mobile,
    })
}

/// Dispatches on the UAV profile.
pub fn coverage(scenario: &Scenario, association: Association) -> Result<CoverageResult> {
    match (scenario.uav, association) {
        (UavProfile::Static { .. }, Association::Nearest) => coverage_static_nearest(scenario),
        (UavProfile::Static { .. }, Association::Harp) => coverage_static_harp(scenario),
        (UavProfile::Mobile(_), Association::Nearest) => coverage_mobile_nearest(scenario),
        (UavProfile::Mobile(_), Association::Harp) => coverage_mobile_harp(scenario),
    }
}

/// Coverage discounted by the handover cost:
/// `(1 - beta) p_cov + beta p_no_handover p_cov`.
pub fn mobility_adjusted_coverage(p_cov: f64, p_no_handover: f64, beta: f64) -> Result<f64> {
    for (name, v) in [("coverage", p_cov), ("no-handover probability", p_no_handover), ("handover cost", beta)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    Ok((1.0 - beta) * p_cov + beta * p_no_handover * p_cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::scenario::MobileProfile;
    use crate::channel::db_to_linear;

    #[test]
    fn handover_cost_combination() {
        assert_eq!(mobility_adjusted_coverage(0.8, 0.6, 0.0).unwrap(), 0.8);
        assert!((mobility_adjusted_coverage(0.8, 0.6, 1.0).unwrap() - 0.48).abs() < 1e-15);
        assert!((mobility_adjusted_coverage(0.8, 0.6, 0.5).unwrap() - 0.64).abs() < 1e-15);
        assert!(mobility_adjusted_coverage(0.8, 0.6, 1.5).is_err());
    }

    #[test]
    fn vanishing_threshold_covers() {
        let mut s = Scenario::table_one();
        s.sir_threshold = 1e-12;
        let p = coverage_static_nearest(&s).unwrap().probability;
        assert!(p > 0.999, "{p}");
        let p = coverage_static_harp(&s).unwrap().probability;
        assert!(p > 0.999, "{p}");
    }

    #[test]
    fn static_nearest_decreases_with_threshold() {
        let mut s = Scenario::table_one();
        let mut last = 1.0;
        for db in [-25.0, -20.0, -15.0, -10.0, -5.0, 0.0] {
            s.sir_threshold = db_to_linear(db);
            let r = coverage_static_nearest(&s).unwrap();
            assert!((0.0..=1.0).contains(&r.probability));
            assert!(r.probability <= last + 1e-9, "{db} dB");
            last = r.probability;
        }
    }

    #[test]
    fn single_lobe_harp_is_finite() {
        let mut s = Scenario::table_one();
        s.antenna.n_elements = 2;
        let r = coverage_static_harp(&s).unwrap();
        assert!((0.0..=1.0).contains(&r.probability));
    }

    #[test]
    fn thin_band_mobile_matches_hovering() {
        let mut hover = Scenario::table_one();
        let band = Scenario {
            uav: UavProfile::Mobile(MobileProfile {
                h_low: 149.9,
                h_high: 150.1,
                ..MobileProfile::default()
            }),
            ..hover
        };
        let a = coverage_mobile_nearest(&band).unwrap().probability;
        let b = coverage_static_nearest(&hover).unwrap().probability;
        assert!((a - b).abs() < 0.01, "{a} vs {b}");

        hover.antenna.n_elements = 4;
        let band = Scenario { antenna: hover.antenna, ..band };
        let a = coverage_mobile_harp(&band).unwrap().probability;
        let b = coverage_static_harp(&hover).unwrap().probability;
        assert!((a - b).abs() < 0.01, "{a} vs {b}");
    }

    #[test]
    fn wrong_profile_is_rejected() {
        assert!(coverage_static_nearest(&Scenario::table_one_mobile()).is_err());
        assert!(coverage_mobile_nearest(&Scenario::table_one()).is_err());
    }
}
