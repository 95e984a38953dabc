//! Vertical gain of a uniform linear array with half-wavelength spacing.
//!
//! With `N` elements and no down-tilt the array factor at elevation `theta`
//! is `sin^2(N u) / (N sin^2 u)` with `u = (pi/2) sin(theta)`. It has `N/2`
//! nulls in `(0, pi/2]` at `sin(theta) = 2j/N`, which split the elevation
//! range into `N/2` lobes. Lobe `j` spans `(theta_{j-1}, theta_j)`; in
//! horizontal distance the order flips, lobe 1 being the farthest and
//! reaching out to infinity.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, RootSpec};

/// Below this |sin(u)| the array factor is replaced by its limit `N`.
const SINGULAR_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GainModel {
    /// Array factor of the ULA.
    Array,
    /// Unit gain in every direction (the "simple antenna" baseline).
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaConfig {
    pub n_elements: u32,
    /// Down-tilt in radians.
    pub tilt: f64,
    pub model: GainModel,
}

impl AntennaConfig {
    pub fn new(n_elements: u32) -> Self {
        Self {
            n_elements,
            tilt: 0.0,
            model: GainModel::Array,
        }
    }

    pub fn flat() -> Self {
        Self {
            n_elements: 1,
            tilt: 0.0,
            model: GainModel::Flat,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(Error::domain("antenna needs at least one element"));
        }
        if !self.tilt.is_finite() {
            return Err(Error::domain("antenna tilt must be finite"));
        }
        Ok(())
    }

    fn require_lobes(&self) -> Result<()> {
        if self.model != GainModel::Array {
            return Err(Error::domain("lobe geometry needs an array gain pattern"));
        }
        if !self.n_elements.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "lobe geometry needs an even element count, got {}",
                self.n_elements
            )));
        }
        if self.tilt != 0.0 {
            return Err(Error::domain("lobe geometry assumes zero down-tilt"));
        }
        Ok(())
    }

    pub fn lobe_count(&self) -> usize {
        (self.n_elements / 2) as usize
    }
}

impl Default for AntennaConfig {
    fn default() -> Self {
        Self::new(8)
    }
}

/// Array factor for `sin(theta) - sin(tilt) = s`.
#[inline]
fn array_factor_offset(s: f64, n: u32) -> f64 {
    let nf = f64::from(n);
    let u = FRAC_PI_2 * s;
    let den = u.sin();
    if den.abs() < SINGULAR_EPS {
        return nf;
    }
    let num = (nf * u).sin();
    (num * num) / (den * den) / nf
}

/// Array factor `A_f(theta)` including down-tilt; lies in `[0, N]`.
pub fn array_factor(theta: f64, cfg: &AntennaConfig) -> f64 {
    array_factor_offset(theta.sin() - cfg.tilt.sin(), cfg.n_elements)
}

/// Validated zero-tilt gain pattern, cheap to evaluate in inner loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pattern {
    n: u32,
    model: GainModel,
}

impl Pattern {
    pub fn new(cfg: &AntennaConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.tilt != 0.0 {
            return Err(Error::domain("the closed-form gain assumes zero down-tilt"));
        }
        Ok(Self {
            n: cfg.n_elements,
            model: cfg.model,
        })
    }

    /// Gain given `sin(theta) = h / d`.
    #[inline]
    pub fn gain_sin(&self, sin_theta: f64) -> f64 {
        match self.model {
            GainModel::Array => array_factor_offset(sin_theta, self.n),
            GainModel::Flat => 1.0,
        }
    }

    /// Gain towards a point `r` metres away horizontally and `h` above.
    #[inline]
    pub fn gain(&self, r: f64, h: f64) -> f64 {
        let d = r.hypot(h);
        self.gain_sin(if d > 0.0 { h / d } else { 1.0 })
    }

    /// Upper bound of the gain over all directions.
    pub fn max_gain(&self) -> f64 {
        match self.model {
            GainModel::Array => f64::from(self.n),
            GainModel::Flat => 1.0,
        }
    }
}

/// `G(r, h)`: gain of the zero-tilt array towards horizontal distance `r`
/// and height difference `h`. `r = 0` maps to `theta = pi/2`.
pub fn simplified_gain(r: f64, h: f64, cfg: &AntennaConfig) -> Result<f64> {
    if !(r >= 0.0 && h > 0.0) {
        return Err(Error::domain(format!("gain needs r >= 0 and h > 0, got r = {r}, h = {h}")));
    }
    Ok(Pattern::new(cfg)?.gain(r, h))
}

/// Null elevation angles `arcsin(2j/N)` for `j = 0..=N/2`.
pub fn null_angles(cfg: &AntennaConfig) -> Result<Vec<f64>> {
    cfg.require_lobes()?;
    let n = f64::from(cfg.n_elements);
    let half = cfg.n_elements / 2;
    Ok((0..=half)
        .map(|j| {
            if j == half {
                FRAC_PI_2
            } else {
                (2.0 * f64::from(j) / n).asin()
            }
        })
        .collect())
}

/// Horizontal null distances `h / tan(arcsin(2j/N))` indexed by `j = 0..=N/2`.
/// Entry 0 is `f64::INFINITY` (the horizon) and entry `N/2` is exactly 0.
pub fn null_distances(cfg: &AntennaConfig, h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("height difference must be positive, got {h}")));
    }
    let angles = null_angles(cfg)?;
    let last = angles.len() - 1;
    Ok(angles
        .iter()
        .enumerate()
        .map(|(j, &t)| match j {
            0 => f64::INFINITY,
            j if j == last => 0.0,
            _ => h / t.tan(),
        })
        .collect())
}

/// `L(theta) = G(theta) * d^(-alpha)` with `d = h / sin(theta)`.
pub fn overall_link_gain(theta: f64, cfg: &AntennaConfig, h: f64, alpha_v: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(Error::domain(format!(
            "elevation must lie in (0, pi/2], got {theta} (theta = 0 is r = infinity)"
        )));
    }
    if !(h > 0.0) {
        return Err(Error::domain(format!("height difference must be positive, got {h}")));
    }
    let s = theta.sin();
    let g = Pattern::new(cfg)?.gain_sin(s);
    Ok(g * s.powf(alpha_v) / h.powf(alpha_v))
}

/// Stationarity condition of `L(theta)` with the singular factors cleared:
///
/// `(N-1) sin((N+1)u) + (N+1) sin((1-N)u)
///   + alpha (cos((N-1)u) - cos((N+1)u)) / (pi sin(theta))`
///
/// with `u = (pi/2) sin(theta)`. It equals `dL/dtheta` times a factor that
/// keeps one sign inside each lobe, and stays finite at the nulls, where its
/// sign alternates from one null to the next.
pub fn peak_condition(theta: f64, n_elements: u32, alpha_v: f64) -> f64 {
    let n = f64::from(n_elements);
    let s = theta.sin();
    let u = FRAC_PI_2 * s;
    let a = (n - 1.0) * ((n + 1.0) * u).sin() + (n + 1.0) * ((1.0 - n) * u).sin();
    let b = ((n - 1.0) * u).cos() - ((n + 1.0) * u).cos();
    a + alpha_v * b / (PI * s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lobe {
    /// Lobe number in elevation order, `1..=N/2`; 1 is nearest the horizon.
    pub index: usize,
    pub peak_angle: f64,
    pub peak_distance: f64,
    /// Null bounding the zone on the far side, `theta_{index-1}`.
    pub null_angle: f64,
    /// Horizontal distance of that null; infinite for lobe 1.
    pub null_distance: f64,
    /// Null on the near side, `theta_{index}`.
    pub inner_null_angle: f64,
    pub inner_null_distance: f64,
}

impl Lobe {
    /// Zone from the peak out to the far null, `[peak_distance, null_distance]`.
    pub fn zone(&self) -> (f64, f64) {
        (self.peak_distance, self.null_distance)
    }
}

/// Peaks and nulls of `L` for one height difference, ordered by increasing
/// horizontal distance (lobe `N/2` first, lobe 1 last). Zones are disjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct LobeGeometry {
    pub height_diff: f64,
    pub lobes: Vec<Lobe>,
}

impl LobeGeometry {
    pub fn zones(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.lobes.iter().map(Lobe::zone)
    }
}

/// Locates the peak of `L(theta)` inside every lobe.
///
/// Lobe `j` is bracketed between the null angles `theta_{j-1}` and
/// `theta_j`; for lobe 1 the lower end is the elevation seen at horizontal
/// distance `far_limit` instead of the horizon.
pub fn peak_locations(cfg: &AntennaConfig, h: f64, alpha_v: f64, far_limit: f64) -> Result<LobeGeometry> {
    if !(alpha_v > 0.0) {
        return Err(Error::domain(format!("path-loss exponent must be positive, got {alpha_v}")));
    }
    if !(far_limit > 0.0) {
        return Err(Error::domain("far bracket limit must be positive"));
    }
    let angles = null_angles(cfg)?;
    let dists = null_distances(cfg, h)?;
    let n = cfg.n_elements;
    let theta_min = (h / far_limit).atan();

    let mut lobes = Vec::with_capacity(angles.len() - 1);
    for j in (1..angles.len()).rev() {
        let lo = if j == 1 { theta_min } else { angles[j - 1] };
        let hi = angles[j];
        if !(lo < hi) {
            return Err(Error::PeakSearch {
                lobe: j,
                source: Box::new(Error::domain("far limit lies inside the first lobe's null")),
            });
        }
        let peak = find_root_bracketed(|t| peak_condition(t, n, alpha_v), lo, hi, &RootSpec::default())
            .map_err(|e| Error::PeakSearch {
                lobe: j,
                source: Box::new(e),
            })?;
        if !(peak > lo && peak < hi) {
            return Err(Error::PeakSearch {
                lobe: j,
                source: Box::new(Error::domain("peak landed on a bracket end")),
            });
        }
        lobes.push(Lobe {
            index: j,
            peak_angle: peak,
            peak_distance: h / peak.tan(),
            null_angle: angles[j - 1],
            null_distance: dists[j - 1],
            inner_null_angle: angles[j],
            inner_null_distance: dists[j],
        });
    }
    Ok(LobeGeometry { height_diff: h, lobes })
}
