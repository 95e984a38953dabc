//! Serving-distance and altitude laws.

use std::f64::consts::PI;

use crate::antenna::LobeGeometry;
use crate::error::{Error, Result};
use crate::numerics::{dawson, erfi};

use super::scenario::{Deployment, MobileProfile, Scenario};

/// Tail probability left out when an outer integral is truncated.
pub const TAIL_MASS: f64 = 1e-9;

/// Rayleigh density of the distance to the nearest PPP point.
pub fn nearest_distance_pdf(r0: f64, deploy: &Deployment) -> f64 {
    if r0 < 0.0 {
        return 0.0;
    }
    let l = deploy.bs_density;
    2.0 * PI * l * r0 * (-PI * l * r0 * r0).exp()
}

/// Radius beyond which the nearest-distance law keeps mass `tail`.
pub fn nearest_distance_tail_radius(deploy: &Deployment, tail: f64) -> f64 {
    ((1.0 / tail).ln() / (PI * deploy.bs_density)).sqrt()
}

/// Serving-distance density under the lobe-zone approximation of
/// highest-average-power association.
///
/// BSs are thinned to the zones `[peak, far null]` of every lobe with doubled
/// density `2 lambda_b`; the UAV attaches to the nearest surviving BS. The
/// density in the zone of the `k`-th lobe (by distance) is
/// `2 pi lambda r exp(-pi lambda (r^2 - r_p^2))` times the probability that
/// all closer zones are empty, and zero between zones. The outermost zone is
/// unbounded, so the density integrates to one.
pub fn harp_distance_pdf(r_m: f64, geometry: &LobeGeometry, deploy: &Deployment) -> Result<f64> {
    if !(r_m >= 0.0) {
        return Err(Error::domain(format!("serving distance must be >= 0, got {r_m}")));
    }
    let lambda = 2.0 * deploy.bs_density;
    let mut empty_before = 1.0;
    for (rp, rn) in geometry.zones() {
        if r_m < rp {
            return Ok(0.0);
        }
        if r_m <= rn {
            return Ok(2.0 * PI * lambda * r_m * (-PI * lambda * (r_m * r_m - rp * rp)).exp() * empty_before);
        }
        empty_before *= (-PI * lambda * (rn * rn - rp * rp)).exp();
    }
    Ok(0.0)
}

/// Cumulative distribution matching [`harp_distance_pdf`].
pub fn harp_distance_cdf(r_m: f64, geometry: &LobeGeometry, deploy: &Deployment) -> Result<f64> {
    Ok(1.0 - harp_distance_survival(r_m, geometry, deploy)?)
}

/// `1 - F(r_m)`, kept separate because deep zones carry tiny tail masses
/// that `1 - F` cannot resolve.
pub fn harp_distance_survival(r_m: f64, geometry: &LobeGeometry, deploy: &Deployment) -> Result<f64> {
    if !(r_m >= 0.0) {
        return Err(Error::domain(format!("serving distance must be >= 0, got {r_m}")));
    }
    let lambda = 2.0 * deploy.bs_density;
    let mut empty_before = 1.0;
    for (rp, rn) in geometry.zones() {
        if r_m < rp {
            break;
        }
        if r_m <= rn {
            return Ok(empty_before * (-PI * lambda * (r_m * r_m - rp * rp)).exp());
        }
        empty_before *= (-PI * lambda * (rn * rn - rp * rp)).exp();
    }
    Ok(empty_before)
}

/// Zone intervals truncated so the dropped tail of the last (unbounded)
/// zone carries at most `tail` probability.
pub fn harp_integration_zones(geometry: &LobeGeometry, deploy: &Deployment, tail: f64) -> Vec<(f64, f64)> {
    let lambda = 2.0 * deploy.bs_density;
    geometry
        .zones()
        .map(|(rp, rn)| {
            let cut = (rp * rp + (1.0 / tail).ln() / (PI * lambda)).sqrt();
            (rp, rn.min(cut))
        })
        .collect()
}

/// Stationary altitude density of the vertical random-waypoint model,
/// `6 (z - h1)(h2 - z) / (h2 - h1)^3` on `(h1, h2)`.
pub fn altitude_pdf(z: f64, uav: &MobileProfile) -> f64 {
    let (h1, h2) = (uav.h_low, uav.h_high);
    if z <= h1 || z >= h2 {
        return 0.0;
    }
    let span = h2 - h1;
    6.0 * (h1 * z + h2 * z - h1 * h2 - z * z) / (span * span * span)
}

/// `F_Z(z) = 3t^2 - 2t^3` with `t = (z - h1) / (h2 - h1)`.
pub fn altitude_cdf(z: f64, uav: &MobileProfile) -> f64 {
    let t = ((z - uav.h_low) / uav.span()).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Inverse of [`altitude_cdf`].
pub fn altitude_quantile(u: f64, uav: &MobileProfile) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let t = 0.5 - ((1.0 - 2.0 * u).asin() / 3.0).sin();
    uav.h_low + uav.span() * t.clamp(0.0, 1.0)
}

/// `Omega(h1, h2) = integral f_Z(z) exp(pi lambda (z - h_BS)^2) dz` over the
/// whole altitude band, in closed form through `erfi`.
///
/// With `psi(x) = erfi(sqrt(pi lambda) (x - h_BS))`,
/// `varkappa = 2 pi lambda (h1 - h_BS)(h_BS - h2)` and
/// `kappa(x, y) = sqrt(lambda) (x - h_BS) exp(pi lambda (y - h_BS)^2)`:
///
/// `Omega = [(1 + varkappa)(psi(h2) - psi(h1)) + 2 kappa(h1, h2) - 2 kappa(h2, h1)]
///          / (2 pi lambda^(3/2) (h2 - h1)^3 / 3)`.
pub fn altitude_exposure(uav: &MobileProfile, bs_height: f64, deploy: &Deployment) -> Result<f64> {
    let l = deploy.bs_density;
    let psi = |x: f64| erfi((PI * l).sqrt() * (x - bs_height));
    let varkappa = 2.0 * PI * l * (uav.h_low - bs_height) * (bs_height - uav.h_high);
    let kappa = |x: f64, y: f64| {
        let e = (PI * l * (y - bs_height).powi(2)).exp();
        if e.is_finite() {
            Ok(l.sqrt() * (x - bs_height) * e)
        } else {
            Err(Error::Overflow("exp(pi lambda h^2) in the altitude exposure".into()))
        }
    };
    let num = (1.0 + varkappa) * (psi(uav.h_high)? - psi(uav.h_low)?) + 2.0 * kappa(uav.h_low, uav.h_high)?
        - 2.0 * kappa(uav.h_high, uav.h_low)?;
    let span = uav.span();
    let v = num / (2.0 * PI * l.powf(1.5) * span.powi(3) / 3.0);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("altitude exposure".into()))
    }
}

/// Density of the 3D distance `W0 = sqrt(R0^2 + (Z - h_BS)^2)` between a
/// vertically mobile UAV and its nearest BS.
///
/// `f(w) = 2 pi lambda w exp(-pi lambda w^2) Omega(w)` where `Omega(w)` is the
/// altitude-weighted exposure restricted to heights below `w`; above the top
/// of the band it is the constant [`altitude_exposure`]. The closed form is
/// evaluated with Dawson's integral so that `exp(pi lambda h^2)` never
/// appears unscaled.
pub fn equivalent_3d_distance_pdf(w0: f64, scenario: &Scenario) -> Result<f64> {
    let uav = scenario.mobile()?;
    let hb = scenario.env.bs_height;
    let (a, b) = (uav.h_low - hb, uav.h_high - hb);
    if !(w0 > a) {
        return Ok(0.0);
    }
    let k = PI * scenario.deploy.bs_density;
    let sk = k.sqrt();
    let upper = w0.min(b);
    // exp(-k w^2) * antiderivative of (x - a)(b - x) exp(k x^2), at x.
    let scaled = |x: f64| {
        let damp = (k * (x * x - w0 * w0)).exp();
        damp * ((a + b - x) / (2.0 * k) + (1.0 / (2.0 * k) - a * b) * dawson(sk * x) / sk)
    };
    let span = b - a;
    let omega_scaled = 6.0 / (span * span * span) * (scaled(upper) - scaled(a));
    Ok((2.0 * k * w0 * omega_scaled).max(0.0))
}

/// Radius beyond which the 3D nearest distance keeps at most `tail` mass.
pub fn equivalent_3d_tail_radius(scenario: &Scenario, tail: f64) -> Result<f64> {
    let uav = scenario.mobile()?;
    let b = uav.h_high - scenario.env.bs_height;
    Ok((b * b + (1.0 / tail).ln() / (PI * scenario.deploy.bs_density)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::{peak_locations, AntennaConfig};
    use crate::numerics::{integrate, integrate_split, QuadratureSpec};

    #[test]
    fn nearest_pdf_basics() {
        let d = Deployment::default();
        assert_eq!(nearest_distance_pdf(0.0, &d), 0.0);
        let r_max = nearest_distance_tail_radius(&d, 1e-12);
        let v = integrate(|r| nearest_distance_pdf(r, &d), 0.0, r_max, &QuadratureSpec::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        // Mode at 1 / sqrt(2 pi lambda).
        let mode = 1.0 / (2.0 * PI * d.bs_density).sqrt();
        assert!((mode - 56.42).abs() < 0.01);
        let f = |r: f64| nearest_distance_pdf(r, &d);
        assert!(f(mode) > f(mode - 0.5) && f(mode) > f(mode + 0.5));
    }

    fn geometry(n: u32) -> LobeGeometry {
        let s = Scenario::table_one();
        peak_locations(&AntennaConfig::new(n), 120.0, 2.09, s.peak_search_limit()).unwrap()
    }

    #[test]
    fn harp_pdf_zero_outside_zones() {
        let d = Deployment::default();
        let g = geometry(8);
        let first = g.lobes[0];
        assert_eq!(harp_distance_pdf(0.5 * first.peak_distance, &g, &d).unwrap(), 0.0);
        let gap = 0.5 * (g.lobes[1].peak_distance + g.lobes[0].null_distance);
        if g.lobes[0].null_distance < g.lobes[1].peak_distance {
            assert_eq!(harp_distance_pdf(gap, &g, &d).unwrap(), 0.0);
        }
        assert!(harp_distance_pdf(-1.0, &g, &d).is_err());
    }

    #[test]
    fn harp_pdf_normalized() {
        let d = Deployment::default();
        for n in [2, 4, 8] {
            let g = geometry(n);
            let mut total = 0.0;
            for (lo, hi) in harp_integration_zones(&g, &d, 1e-14) {
                let (v, _) = integrate_split(
                    |r| harp_distance_pdf(r, &g, &d).unwrap(),
                    &[lo, hi],
                    &QuadratureSpec::with_tolerances(1e-10, 1e-14),
                )
                .unwrap();
                total += v;
            }
            assert!((total - 1.0).abs() < 1e-6, "N = {n}: {total}");
        }
    }

    #[test]
    fn harp_pdf_is_cdf_derivative() {
        let d = Deployment::default();
        let g = geometry(4);
        // Lobe 1 is the outermost.
        let lobe1 = g.lobes.iter().find(|l| l.index == 1).unwrap();
        let (lo, hi) = harp_integration_zones(&g, &d, 1e-9)[g.lobes.len() - 1];
        assert_eq!(lo, lobe1.peak_distance);
        let mid = 0.5 * (lo + hi);
        let step = 1e-3;
        // The zone lies deep in the tail, so difference the survival function.
        let sf = |r: f64| harp_distance_survival(r, &g, &d).unwrap();
        let fd = (sf(mid - step) - sf(mid + step)) / (2.0 * step);
        let pdf = harp_distance_pdf(mid, &g, &d).unwrap();
        assert!(((fd - pdf) / pdf).abs() < 1e-6, "{fd} vs {pdf} at {mid} in [{lo}, {hi}]");
        assert!((harp_distance_cdf(1e7, &g, &d).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn altitude_law() {
        let uav = MobileProfile::default();
        assert_eq!(altitude_pdf(140.0, &uav), 0.0);
        assert_eq!(altitude_pdf(160.0, &uav), 0.0);
        assert!((altitude_pdf(150.0, &uav) - 0.075).abs() < 1e-15);
        let spec = QuadratureSpec::with_tolerances(1e-13, 1e-15);
        let mass = integrate(|z| altitude_pdf(z, &uav), 140.0, 160.0, &spec).unwrap();
        let mean = integrate(|z| z * altitude_pdf(z, &uav), 140.0, 160.0, &spec).unwrap();
        assert!((mass - 1.0).abs() < 1e-9);
        assert!((mean - 150.0).abs() < 1e-9);
        for &u in &[0.0, 0.1, 0.5, 0.77, 1.0] {
            assert!((altitude_cdf(altitude_quantile(u, &uav), &uav) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn exposure_closed_form_matches_quadrature() {
        let s = Scenario::table_one_mobile();
        let uav = *s.mobile().unwrap();
        let l = s.deploy.bs_density;
        let closed = altitude_exposure(&uav, 30.0, &s.deploy).unwrap();
        let numeric = integrate(
            |z| altitude_pdf(z, &uav) * (PI * l * (z - 30.0).powi(2)).exp(),
            uav.h_low,
            uav.h_high,
            &QuadratureSpec::with_tolerances(1e-12, 1e-15),
        )
        .unwrap();
        assert!(((closed - numeric) / numeric).abs() < 1e-9, "{closed} vs {numeric}");
    }

    #[test]
    fn w0_pdf_support_and_tail_form() {
        let s = Scenario::table_one_mobile();
        assert_eq!(equivalent_3d_distance_pdf(100.0, &s).unwrap(), 0.0);
        assert_eq!(equivalent_3d_distance_pdf(110.0, &s).unwrap(), 0.0);
        let l = s.deploy.bs_density;
        let omega = altitude_exposure(s.mobile().unwrap(), 30.0, &s.deploy).unwrap();
        for &w in &[130.0, 150.0, 300.0] {
            let tail = 2.0 * PI * l * w * omega * (-PI * l * w * w).exp();
            let got = equivalent_3d_distance_pdf(w, &s).unwrap();
            assert!(((got - tail) / tail).abs() < 1e-9, "w = {w}");
        }
    }

    #[test]
    fn w0_pdf_normalized() {
        let s = Scenario::table_one_mobile();
        let top = equivalent_3d_tail_radius(&s, 1e-12).unwrap();
        let (v, _) = integrate_split(
            |w| equivalent_3d_distance_pdf(w, &s).unwrap(),
            &[110.0, 130.0, top],
            &QuadratureSpec::with_tolerances(1e-10, 1e-14),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-8, "{v}");
    }
}
