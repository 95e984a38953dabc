//! Blockage-driven line-of-sight probability and large-scale link gain.
//!
//! Buildings occupy a fraction `a` of the land with `eta` buildings per unit
//! area and Rayleigh-distributed heights of scale `c`. A ground link of
//! horizontal length `r` crosses `o = floor(r * sqrt(a * eta))` buildings, so
//! the LoS probability is a step function of `r`: constant on rings
//! `[j, j+1) / sqrt(a * eta)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Visibility {
    Los,
    Nlos,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    /// Fraction of land covered by buildings, `a`.
    pub builtup_fraction: f64,
    /// Buildings per square metre, `eta`.
    pub building_density: f64,
    /// Rayleigh scale of building heights in metres, `c`.
    pub height_scale: f64,
    /// Base-station antenna height in metres.
    pub bs_height: f64,
}

impl EnvironmentParams {
    pub fn new(
        builtup_fraction: f64,
        buildings_per_km2: f64,
        height_scale: f64,
        bs_height: f64,
    ) -> Result<Self> {
        let env = Self {
            builtup_fraction,
            building_density: buildings_per_km2 * 1e-6,
            height_scale,
            bs_height,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.builtup_fraction > 0.0 && self.builtup_fraction < 1.0) {
            return Err(Error::domain("built-up fraction must lie in (0, 1)"));
        }
        if !(self.building_density > 0.0 && self.building_density.is_finite()) {
            return Err(Error::domain("building density must be positive"));
        }
        if !(self.height_scale > 0.0 && self.height_scale.is_finite()) {
            return Err(Error::domain("building height scale must be positive"));
        }
        if !(self.bs_height > 0.0 && self.bs_height.is_finite()) {
            return Err(Error::domain("base-station height must be positive"));
        }
        Ok(())
    }

    /// `sqrt(a * eta)`: rings per metre.
    pub fn ring_rate(&self) -> f64 {
        (self.builtup_fraction * self.building_density).sqrt()
    }

    /// Width of one blockage ring in metres.
    pub fn ring_width(&self) -> f64 {
        1.0 / self.ring_rate()
    }

    /// Inner radius of ring `j`.
    pub fn ring_start(&self, j: u64) -> f64 {
        j as f64 / self.ring_rate()
    }
}

impl Default for EnvironmentParams {
    fn default() -> Self {
        Self {
            builtup_fraction: 0.6,
            building_density: 500e-6,
            height_scale: 30.0,
            bs_height: 30.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    /// Linear path-loss constant at 1 m.
    pub a_los: f64,
    pub a_nlos: f64,
    pub m_los: u32,
    pub m_nlos: u32,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_los > 0.0 && self.alpha_nlos > self.alpha_los) {
            return Err(Error::domain("path-loss exponents must satisfy 0 < alpha_los < alpha_nlos"));
        }
        if !(self.a_los > 0.0 && self.a_nlos > 0.0) {
            return Err(Error::domain("path-loss constants must be positive"));
        }
        if self.m_los == 0 || self.m_nlos == 0 {
            return Err(Error::domain("Nakagami shape parameters must be at least 1"));
        }
        Ok(())
    }

    pub fn exponent(&self, v: Visibility) -> f64 {
        match v {
            Visibility::Los => self.alpha_los,
            Visibility::Nlos => self.alpha_nlos,
        }
    }

    pub fn constant(&self, v: Visibility) -> f64 {
        match v {
            Visibility::Los => self.a_los,
            Visibility::Nlos => self.a_nlos,
        }
    }

    pub fn shape(&self, v: Visibility) -> u32 {
        match v {
            Visibility::Los => self.m_los,
            Visibility::Nlos => self.m_nlos,
        }
    }
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            alpha_los: 2.09,
            alpha_nlos: 3.75,
            a_los: db_to_linear(-41.1),
            a_nlos: db_to_linear(-32.9),
            m_los: 3,
            m_nlos: 1,
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Number of whole blockage rings between the UAV and a BS at horizontal
/// distance `r`. Consistent with [`EnvironmentParams::ring_start`]: ring `j`
/// is `[ring_start(j), ring_start(j + 1))`.
pub fn ring_index(r: f64, env: &EnvironmentParams) -> u64 {
    if !(r > 0.0) {
        return 0;
    }
    let rate = env.ring_rate();
    let mut o = (r * rate).floor() as u64;
    if env.ring_start(o + 1) <= r {
        o += 1;
    } else if o > 0 && env.ring_start(o) > r {
        o -= 1;
    }
    o
}

/// LoS probability after crossing `o` building rings with UAV height
/// difference `h`. Zero rings crossed means an empty product.
pub fn los_probability_rings(o: u64, h: f64, env: &EnvironmentParams) -> f64 {
    if o == 0 {
        return 1.0;
    }
    let of = o as f64;
    let two_c2 = 2.0 * env.height_scale * env.height_scale;
    (0..o)
        .map(|n| {
            let height = env.bs_height + h * (n as f64 + 0.5) / of;
            1.0 - (-(height * height) / two_c2).exp()
        })
        .product()
}

/// Probability that a BS at horizontal distance `r` is in LoS of a UAV
/// `h` metres above the BS antenna.
pub fn los_probability(r: f64, h: f64, env: &EnvironmentParams) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!("horizontal distance must be >= 0, got {r}")));
    }
    if !(h > 0.0) {
        return Err(Error::domain(format!(
            "UAV must fly above the base-station antenna (height difference {h} m)"
        )));
    }
    Ok(los_probability_rings(ring_index(r, env), h, env))
}

/// Ring-indexed LoS probabilities for one height difference, precomputed out
/// to a maximum radius.
#[derive(Debug, Clone)]
pub struct LosTable {
    env: EnvironmentParams,
    h: f64,
    probs: Vec<f64>,
}

impl LosTable {
    pub fn new(env: &EnvironmentParams, h: f64, max_radius: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::domain(format!(
                "UAV must fly above the base-station antenna (height difference {h} m)"
            )));
        }
        let last = ring_index(max_radius.max(0.0), env);
        let probs = (0..=last).map(|o| los_probability_rings(o, h, env)).collect();
        Ok(Self { env: *env, h, probs })
    }

    pub fn ring(&self, j: u64) -> f64 {
        match self.probs.get(j as usize) {
            Some(&p) => p,
            None => los_probability_rings(j, self.h, &self.env),
        }
    }

    pub fn at(&self, r: f64) -> f64 {
        self.ring(ring_index(r, &self.env))
    }

    pub fn visibility_probability(&self, j: u64, v: Visibility) -> f64 {
        match v {
            Visibility::Los => self.ring(j),
            Visibility::Nlos => 1.0 - self.ring(j),
        }
    }

    pub fn height(&self) -> f64 {
        self.h
    }

    pub fn env(&self) -> &EnvironmentParams {
        &self.env
    }
}

/// Path loss times antenna gain, `A_v * gain * (r^2 + h^2)^(-alpha_v / 2)`.
pub fn link_gain(r: f64, h: f64, visibility: Visibility, chan: &ChannelParams, gain: f64) -> f64 {
    let d2 = r * r + h * h;
    chan.constant(visibility) * gain * d2.powf(-0.5 * chan.exponent(visibility))
}
