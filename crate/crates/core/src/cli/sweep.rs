use std::fmt;
use std::str::FromStr;

use crate::analysis::{Association, Deployment, Scenario, UavProfile};
use crate::channel::db_to_linear;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    SirThresholdDb,
    NElements,
    HandoverCost,
    BsDensityPerKm2,
    AltitudeM,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 5] = [
        SweepParameter::SirThresholdDb,
        SweepParameter::NElements,
        SweepParameter::HandoverCost,
        SweepParameter::BsDensityPerKm2,
        SweepParameter::AltitudeM,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            SweepParameter::SirThresholdDb => "sir_threshold_db",
            SweepParameter::NElements => "n_elements",
            SweepParameter::HandoverCost => "handover_cost",
            SweepParameter::BsDensityPerKm2 => "bs_density_per_km2",
            SweepParameter::AltitudeM => "altitude_m",
        }
    }

    /// Returns `base` with this parameter set to `value`.
    ///
    /// A mobile UAV keeps its band width; `altitude_m` moves the band so
    /// that its midpoint lands on `value`.
    pub fn apply(&self, base: &Scenario, value: f64) -> Result<Scenario> {
        let key = self.key();
        if !value.is_finite() {
            return Err(Error::config(key, "sweep values must be finite"));
        }
        let mut s = *base;
        match self {
            SweepParameter::SirThresholdDb => s.sir_threshold = db_to_linear(value),
            SweepParameter::NElements => {
                if value < 1.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                    return Err(Error::config(key, format!("expected a positive integer, got {value}")));
                }
                s.antenna.n_elements = value as u32;
            }
            SweepParameter::HandoverCost => {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::config(key, format!("must lie in [0, 1], got {value}")));
                }
                s.handover_cost = value;
            }
            SweepParameter::BsDensityPerKm2 => {
                if !(value > 0.0) {
                    return Err(Error::config(key, format!("must be > 0, got {value}")));
                }
                s.deploy = Deployment::per_km2(value);
            }
            SweepParameter::AltitudeM => match &mut s.uav {
                UavProfile::Static { altitude } => *altitude = value,
                UavProfile::Mobile(m) => {
                    let half = 0.5 * m.span();
                    m.h_low = value - half;
                    m.h_high = value + half;
                }
            },
        }
        s.validate().map_err(|e| match e {
            Error::Domain(message) => Error::config(key, message),
            e => e,
        })?;
        Ok(s)
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.key() == s).ok_or_else(|| Error::UnknownKey {
            key: s.to_string(),
            valid: Self::ALL.iter().map(|p| p.key()).collect(),
        })
    }
}

/// One swept parameter and the values it takes, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Inclusive ranges longer than this are rejected as typos.
const MAX_POINTS: usize = 100_000;

impl SweepSpec {
    pub fn new(parameter: SweepParameter, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::config(parameter.key(), "sweep needs at least one value"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::config(parameter.key(), format!("sweep values must be finite, got {v}")));
        }
        Ok(Self { parameter, values })
    }

    /// HARP lobe geometry needs an even element count.
    pub fn check_association(&self, association: Association) -> Result<()> {
        if association == Association::Harp && self.parameter == SweepParameter::NElements {
            if let Some(v) = self.values.iter().find(|&&v| v % 2.0 != 0.0) {
                return Err(Error::config("n_elements", format!("HARP runs need even element counts, got {v}")));
            }
        }
        Ok(())
    }
}

fn parse_value(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::config(key, format!("expected a number, got `{}`", raw.trim())))?;
    if !v.is_finite() {
        return Err(Error::config(key, "sweep values must be finite"));
    }
    Ok(v)
}

impl FromStr for SweepSpec {
    type Err = Error;

    /// `key=start:stop:step` (both ends included) or `key=v1,v2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (key, rest) = s
            .split_once('=')
            .ok_or_else(|| Error::config("--sweep", format!("expected `key=values`, got `{s}`")))?;
        let parameter: SweepParameter = key.trim().parse()?;
        let key = parameter.key();
        let parts: Vec<&str> = rest.split(':').collect();
        let values = match parts.as_slice() {
            [start, stop, step] => {
                let (start, stop, step) = (parse_value(key, start)?, parse_value(key, stop)?, parse_value(key, step)?);
                if step == 0.0 || (stop - start) * step < 0.0 {
                    return Err(Error::config(key, format!("step {step} never reaches {stop} from {start}")));
                }
                // Tolerance absorbs ranges like 0:1:0.1 whose endpoint is off by an ulp.
                let count = ((stop - start) / step + 1e-9).floor();
                if count >= MAX_POINTS as f64 {
                    return Err(Error::config(key, format!("range holds more than {MAX_POINTS} points")));
                }
                (0..=count as usize).map(|k| start + k as f64 * step).collect()
            }
            [list] => list.split(',').map(|v| parse_value(key, v)).collect::<Result<Vec<_>>>()?,
            _ => return Err(Error::config(key, format!("expected start:stop:step or a comma list, got `{rest}`"))),
        };
        Self::new(parameter, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_range() {
        let s: SweepSpec = "sir_threshold_db=-25:0:5".parse().unwrap();
        assert_eq!(s.parameter, SweepParameter::SirThresholdDb);
        assert_eq!(s.values, vec![-25.0, -20.0, -15.0, -10.0, -5.0, 0.0]);
        let s: SweepSpec = "handover_cost=0:1:0.1".parse().unwrap();
        assert_eq!(s.values.len(), 11);
        let s: SweepSpec = "altitude_m=200:100:-50".parse().unwrap();
        assert_eq!(s.values, vec![200.0, 150.0, 100.0]);
    }

    #[test]
    fn explicit_list() {
        let s: SweepSpec = "n_elements=4,8, 16".parse().unwrap();
        assert_eq!(s.values, vec![4.0, 8.0, 16.0]);
        assert!(s.check_association(Association::Harp).is_ok());
        let odd: SweepSpec = "n_elements=3,4".parse().unwrap();
        assert!(odd.check_association(Association::Harp).is_err());
        assert!(odd.check_association(Association::Nearest).is_ok());
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["speed=1,2", "n_elements", "sir_threshold_db=0:5:-1", "sir_threshold_db=1:2:0", "altitude_m=", "altitude_m=1:2"] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn apply_moves_mobile_band() {
        let s = SweepParameter::AltitudeM.apply(&Scenario::table_one_mobile(), 100.0).unwrap();
        let m = s.mobile().unwrap();
        assert_eq!((m.h_low, m.h_high), (90.0, 110.0));
        let err = SweepParameter::AltitudeM.apply(&Scenario::table_one(), 20.0).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "altitude_m"), "{err:?}");
        assert!(SweepParameter::NElements.apply(&Scenario::table_one(), 2.5).is_err());
    }
}
