use std::f64::consts::PI;

use crate::antenna::AntennaConfig;
use crate::channel::{db_to_linear, ChannelParams, EnvironmentParams};
use crate::error::{Error, Result};

/// Base-station deployment: a homogeneous planar PPP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deployment {
    /// BSs per square metre.
    pub bs_density: f64,
}

impl Deployment {
    pub fn per_km2(density: f64) -> Self {
        Self {
            bs_density: density * 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bs_density > 0.0 && self.bs_density.is_finite()) {
            return Err(Error::domain("BS density must be positive"));
        }
        Ok(())
    }

    /// `1 / sqrt(pi * lambda)`: the natural length scale of the network.
    pub fn length_scale(&self) -> f64 {
        1.0 / (PI * self.bs_density).sqrt()
    }

    /// Radius of the simulated world, shared by both engines.
    pub fn world_radius(&self) -> f64 {
        40.0 * self.length_scale()
    }
}

impl Default for Deployment {
    fn default() -> Self {
        Self::per_km2(50.0)
    }
}

/// Vertical random-waypoint motion between two altitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobileProfile {
    pub h_low: f64,
    pub h_high: f64,
    /// Vertical speed in m/s.
    pub speed: f64,
}

impl MobileProfile {
    pub fn span(&self) -> f64 {
        self.h_high - self.h_low
    }

    pub fn mean_altitude(&self) -> f64 {
        0.5 * (self.h_low + self.h_high)
    }

    pub fn validate(&self, bs_height: f64) -> Result<()> {
        if !(self.h_low > bs_height) {
            return Err(Error::domain(format!(
                "lowest altitude {} m must exceed the BS height {bs_height} m",
                self.h_low
            )));
        }
        if !(self.h_high > self.h_low) {
            return Err(Error::domain(format!(
                "altitude band must satisfy h_low < h_high, got [{}, {}]",
                self.h_low, self.h_high
            )));
        }
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(Error::domain("UAV speed must be positive"));
        }
        Ok(())
    }
}

impl Default for MobileProfile {
    fn default() -> Self {
        Self {
            h_low: 140.0,
            h_high: 160.0,
            speed: 20.0 / 3.6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UavProfile {
    Static { altitude: f64 },
    Mobile(MobileProfile),
}

impl UavProfile {
    /// Fixed altitude, or the mean of the band for mobile UAVs.
    pub fn reference_altitude(&self) -> f64 {
        match self {
            UavProfile::Static { altitude } => *altitude,
            UavProfile::Mobile(m) => m.mean_altitude(),
        }
    }
}

/// One complete experiment description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub env: EnvironmentParams,
    pub chan: ChannelParams,
    pub antenna: AntennaConfig,
    pub deploy: Deployment,
    pub uav: UavProfile,
    /// Linear SIR threshold.
    pub sir_threshold: f64,
    pub handover_cost: f64,
}

impl Scenario {
    /// The reference parameter set with a UAV hovering at 150 m.
    pub fn table_one() -> Self {
        Self {
            env: EnvironmentParams::default(),
            chan: ChannelParams::default(),
            antenna: AntennaConfig::default(),
            deploy: Deployment::default(),
            uav: UavProfile::Static { altitude: 150.0 },
            sir_threshold: db_to_linear(-15.0),
            handover_cost: 0.0,
        }
    }

    /// Same parameters with the UAV moving vertically in [140, 160] m.
    pub fn table_one_mobile() -> Self {
        Self {
            uav: UavProfile::Mobile(MobileProfile::default()),
            ..Self::table_one()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.chan.validate()?;
        self.antenna.validate()?;
        self.deploy.validate()?;
        match &self.uav {
            UavProfile::Static { altitude } => {
                if !(*altitude > self.env.bs_height) {
                    return Err(Error::domain(format!(
                        "UAV altitude {altitude} m must exceed the BS height {} m",
                        self.env.bs_height
                    )));
                }
            }
            UavProfile::Mobile(m) => m.validate(self.env.bs_height)?,
        }
        if !(self.sir_threshold > 0.0 && self.sir_threshold.is_finite()) {
            return Err(Error::domain("SIR threshold must be positive"));
        }
        if !(0.0..=1.0).contains(&self.handover_cost) {
            return Err(Error::domain("handover cost must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Height of the UAV above the BS antennas (mean height for mobile UAVs).
    pub fn height_diff(&self) -> f64 {
        self.uav.reference_altitude() - self.env.bs_height
    }

    pub fn mobile(&self) -> Result<&MobileProfile> {
        match &self.uav {
            UavProfile::Mobile(m) => Ok(m),
            UavProfile::Static { .. } => Err(Error::domain("operation needs a mobile UAV profile")),
        }
    }

    pub fn static_altitude(&self) -> Result<f64> {
        match self.uav {
            UavProfile::Static { altitude } => Ok(altitude),
            UavProfile::Mobile(_) => Err(Error::domain("operation needs a static UAV profile")),
        }
    }

    /// Horizontal distance that brackets the outermost lobe peak.
    pub fn peak_search_limit(&self) -> f64 {
        100.0 * self.deploy.length_scale()
    }
}

impl Default for Scenario {
    fn default() -> Self {
        Self::table_one()
    }
}
