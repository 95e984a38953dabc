//! Flat `key = value` experiment files.
//!
//! Units live in the key names. Decibel, km/h and per-km² inputs are
//! converted once here; every other module works in linear units, metres,
//! seconds and per-m². Omitted keys keep the reference defaults.

use std::fmt::Write as _;
use std::path::Path;

use crate::analysis::{Deployment, MobileProfile, Scenario, UavProfile};
use crate::antenna::GainModel;
use crate::channel::{db_to_linear, linear_to_db};
use crate::error::{Error, Result};
use crate::montecarlo::DEFAULT_TIME_STEP;

pub const KEYS: &[&str] = &[
    "alpha_los",
    "alpha_nlos",
    "a_los_db",
    "a_nlos_db",
    "m_los",
    "m_nlos",
    "builtup_fraction",
    "building_density_per_km2",
    "building_height_scale_m",
    "bs_height_m",
    "bs_density_per_km2",
    "n_elements",
    "antenna_tilt_deg",
    "antenna_model",
    "uav_mode",
    "altitude_m",
    "h_low_m",
    "h_high_m",
    "speed_kmh",
    "sir_threshold_db",
    "handover_cost",
    "handover_step_s",
];

/// Everything an experiment file can set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// Walking step for handover counting, in seconds.
    pub handover_step_s: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::table_one(),
            handover_step_s: DEFAULT_TIME_STEP,
        }
    }
}

/// Reads a file into a scenario.
pub fn load_config(path: impl AsRef<Path>) -> Result<Scenario> {
    Ok(load_run_config(path)?.scenario)
}

pub fn load_run_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn number(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::config(key, format!("expected a number, got `{raw}`")))?;
    if !v.is_finite() {
        return Err(Error::config(key, "must be finite"));
    }
    Ok(v)
}

fn integer(key: &str, raw: &str) -> Result<u32> {
    raw.parse()
        .map_err(|_| Error::config(key, format!("expected a non-negative integer, got `{raw}`")))
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let s = &mut cfg.scenario;
    let mut mode: Option<String> = None;
    let mut altitude = 150.0;
    let mut mobile = MobileProfile::default();
    let mut seen = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, raw) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}", lineno + 1), format!("expected `key = value`, got `{line}`")))?;
        let (key, raw) = (key.trim(), raw.trim());
        if !KEYS.contains(&key) {
            return Err(Error::UnknownKey {
                key: key.to_string(),
                valid: KEYS.to_vec(),
            });
        }
        if seen.contains(&key) {
            return Err(Error::config(key, "given more than once"));
        }
        seen.push(key);
        match key {
            "alpha_los" => s.chan.alpha_los = number(key, raw)?,
            "alpha_nlos" => s.chan.alpha_nlos = number(key, raw)?,
            "a_los_db" => s.chan.a_los = db_to_linear(number(key, raw)?),
            "a_nlos_db" => s.chan.a_nlos = db_to_linear(number(key, raw)?),
            "m_los" => s.chan.m_los = integer(key, raw)?,
            "m_nlos" => s.chan.m_nlos = integer(key, raw)?,
            "builtup_fraction" => s.env.builtup_fraction = number(key, raw)?,
            "building_density_per_km2" => s.env.building_density = number(key, raw)? * 1e-6,
            "building_height_scale_m" => s.env.height_scale = number(key, raw)?,
            "bs_height_m" => s.env.bs_height = number(key, raw)?,
            "bs_density_per_km2" => s.deploy = Deployment::per_km2(number(key, raw)?),
            "n_elements" => s.antenna.n_elements = integer(key, raw)?,
            "antenna_tilt_deg" => s.antenna.tilt = number(key, raw)?.to_radians(),
            "antenna_model" => {
                s.antenna.model = match raw {
                    "array" => GainModel::Array,
                    "flat" => GainModel::Flat,
                    _ => return Err(Error::config(key, format!("expected `array` or `flat`, got `{raw}`"))),
                }
            }
            "uav_mode" => {
                if raw != "static" && raw != "mobile" {
                    return Err(Error::config(key, format!("expected `static` or `mobile`, got `{raw}`")));
                }
                mode = Some(raw.to_string());
            }
            "altitude_m" => altitude = number(key, raw)?,
            "h_low_m" => mobile.h_low = number(key, raw)?,
            "h_high_m" => mobile.h_high = number(key, raw)?,
            "speed_kmh" => mobile.speed = number(key, raw)? / 3.6,
            "sir_threshold_db" => s.sir_threshold = db_to_linear(number(key, raw)?),
            "handover_cost" => s.handover_cost = number(key, raw)?,
            "handover_step_s" => cfg.handover_step_s = number(key, raw)?,
            _ => unreachable!("key list and match arms disagree"),
        }
    }

    let is_mobile = match mode.as_deref() {
        Some("mobile") => true,
        Some(_) => false,
        // Band keys alone imply a moving UAV.
        None => seen.iter().any(|k| matches!(*k, "h_low_m" | "h_high_m" | "speed_kmh")),
    };
    s.uav = if is_mobile {
        UavProfile::Mobile(mobile)
    } else {
        UavProfile::Static { altitude }
    };
    validate(&cfg)?;
    Ok(cfg)
}

/// Maps scenario validation failures onto the offending key.
fn validate(cfg: &RunConfig) -> Result<()> {
    let s = &cfg.scenario;
    let check = |ok: bool, key: &str, msg: &str| if ok { Ok(()) } else { Err(Error::config(key, msg)) };
    check(s.chan.alpha_los > 0.0, "alpha_los", "must be > 0")?;
    check(s.chan.alpha_nlos > s.chan.alpha_los, "alpha_nlos", "must exceed alpha_los")?;
    check(s.chan.m_los >= 1 && s.chan.m_los <= 8, "m_los", "must lie in 1..=8")?;
    check(s.chan.m_nlos >= 1 && s.chan.m_nlos <= 8, "m_nlos", "must lie in 1..=8")?;
    check(s.env.builtup_fraction > 0.0 && s.env.builtup_fraction < 1.0, "builtup_fraction", "must lie in (0, 1)")?;
    check(s.env.building_density > 0.0, "building_density_per_km2", "must be > 0")?;
    check(s.env.height_scale > 0.0, "building_height_scale_m", "must be > 0")?;
    check(s.env.bs_height > 0.0, "bs_height_m", "must be > 0")?;
    check(s.deploy.bs_density > 0.0, "bs_density_per_km2", "must be > 0")?;
    check(s.antenna.n_elements >= 1, "n_elements", "must be >= 1")?;
    check(s.antenna.tilt == 0.0, "antenna_tilt_deg", "only zero down-tilt is supported")?;
    check(s.sir_threshold > 0.0, "sir_threshold_db", "must be finite")?;
    check((0.0..=1.0).contains(&s.handover_cost), "handover_cost", "must lie in [0, 1]")?;
    check(cfg.handover_step_s > 0.0, "handover_step_s", "must be > 0")?;
    match s.uav {
        UavProfile::Static { altitude } => check(altitude > s.env.bs_height, "altitude_m", "must exceed bs_height_m")?,
        UavProfile::Mobile(m) => {
            check(m.h_low > s.env.bs_height, "h_low_m", "must exceed bs_height_m")?;
            check(m.h_high > m.h_low, "h_high_m", "must exceed h_low_m (h_low_m < h_high_m)")?;
            check(m.speed > 0.0, "speed_kmh", "must be > 0")?;
        }
    }
    s.validate()
}

/// A value whose forward conversion reproduces `target` bit for bit, so
/// that emitted files load back to the identical scenario.
pub(crate) fn exact_preimage(target: f64, forward: impl Fn(f64) -> f64, backward: impl Fn(f64) -> f64) -> f64 {
    let guess = backward(target);
    // Prefer the shortest decimal that maps back exactly.
    for digits in 0..17 {
        if let Ok(short) = format!("{guess:.digits$}").parse::<f64>() {
            if forward(short) == target {
                return short;
            }
        }
    }
    let (mut up, mut down) = (guess, guess);
    for _ in 0..64 {
        if forward(up) == target {
            return up;
        }
        if forward(down) == target {
            return down;
        }
        up = up.next_up();
        down = down.next_down();
    }
    guess
}

/// Renders a configuration that [`parse_config`] maps back to `cfg`.
pub fn emit_config(cfg: &RunConfig) -> String {
    let s = &cfg.scenario;
    let db = |x: f64| exact_preimage(x, db_to_linear, linear_to_db);
    let per_km2 = |x: f64| exact_preimage(x, |v| v * 1e-6, |v| v / 1e-6);
    let mut out = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    put("alpha_los", s.chan.alpha_los.to_string());
    put("alpha_nlos", s.chan.alpha_nlos.to_string());
    put("a_los_db", db(s.chan.a_los).to_string());
    put("a_nlos_db", db(s.chan.a_nlos).to_string());
    put("m_los", s.chan.m_los.to_string());
    put("m_nlos", s.chan.m_nlos.to_string());
    put("builtup_fraction", s.env.builtup_fraction.to_string());
    put("building_density_per_km2", per_km2(s.env.building_density).to_string());
    put("building_height_scale_m", s.env.height_scale.to_string());
    put("bs_height_m", s.env.bs_height.to_string());
    put("bs_density_per_km2", per_km2(s.deploy.bs_density).to_string());
    put("n_elements", s.antenna.n_elements.to_string());
    put(
        "antenna_model",
        match s.antenna.model {
            GainModel::Array => "array",
            GainModel::Flat => "flat",
        }
        .to_string(),
    );
    match s.uav {
        UavProfile::Static { altitude } => {
            put("uav_mode", "static".into());
            put("altitude_m", altitude.to_string());
        }
        UavProfile::Mobile(m) => {
            put("uav_mode", "mobile".into());
            put("h_low_m", m.h_low.to_string());
            put("h_high_m", m.h_high.to_string());
            put("speed_kmh", exact_preimage(m.speed, |v| v / 3.6, |v| v * 3.6).to_string());
        }
    }
    put("sir_threshold_db", db(s.sir_threshold).to_string());
    put("handover_cost", s.handover_cost.to_string());
    put("handover_step_s", cfg.handover_step_s.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_reference_set() {
        let cfg = parse_config("").unwrap();
        let s = cfg.scenario;
        assert_eq!(s, Scenario::table_one());
        assert_eq!(s.chan.alpha_los, 2.09);
        assert_eq!(s.chan.alpha_nlos, 3.75);
        assert!((linear_to_db(s.chan.a_los) + 41.1).abs() < 1e-12);
        assert!((linear_to_db(s.chan.a_nlos) + 32.9).abs() < 1e-12);
        assert_eq!(s.antenna.n_elements, 8);
        assert_eq!((s.chan.m_los, s.chan.m_nlos), (3, 1));
        assert_eq!(s.env.bs_height, 30.0);
        assert_eq!(s.static_altitude().unwrap(), 150.0);
        assert_eq!(s.env.builtup_fraction, 0.6);
        assert!((s.env.building_density - 500e-6).abs() < 1e-18);
        assert_eq!(s.env.height_scale, 30.0);
        assert!((s.deploy.bs_density - 50e-6).abs() < 1e-18);
        assert!((linear_to_db(s.sir_threshold) + 15.0).abs() < 1e-12);
        let m = MobileProfile::default();
        assert_eq!((m.h_low, m.h_high), (140.0, 160.0));
        assert!((m.speed * 3.6 - 20.0).abs() < 1e-12);
    }

    #[test]
    fn zero_db_is_unity() {
        let cfg = parse_config("sir_threshold_db = 0 # comment\n").unwrap();
        assert_eq!(cfg.scenario.sir_threshold, 1.0);
    }

    #[test]
    fn inverted_band_names_the_key() {
        let err = parse_config("uav_mode = mobile\nh_low_m = 160\nh_high_m = 150\n").unwrap_err();
        match err {
            Error::Config { key, message } => {
                assert_eq!(key, "h_high_m");
                assert!(message.contains("h_low_m < h_high_m"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn unknown_key_lists_valid_ones() {
        let err = parse_config("altitude = 100").unwrap_err();
        let text = err.to_string();
        assert!(matches!(err, Error::UnknownKey { .. }));
        assert!(text.contains("altitude_m") && text.contains("sir_threshold_db"));
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_config("n_elements 8").is_err());
        assert!(parse_config("n_elements = eight").is_err());
        assert!(parse_config("n_elements = 8\nn_elements = 4").is_err());
        assert!(parse_config("handover_cost = 1.5").is_err());
    }

    #[test]
    fn band_keys_imply_mobile() {
        let cfg = parse_config("h_low_m = 80\nh_high_m = 120").unwrap();
        assert!(cfg.scenario.mobile().is_ok());
    }

    #[test]
    fn emitted_reference_round_trips() {
        for s in [Scenario::table_one(), Scenario::table_one_mobile()] {
            let cfg = RunConfig {
                scenario: s,
                ..RunConfig::default()
            };
            assert_eq!(parse_config(&emit_config(&cfg)).unwrap(), cfg);
        }
    }
}
