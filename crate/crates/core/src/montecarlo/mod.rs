//! Monte Carlo counterpart of the analysis: explicit PPP networks, random
//! blockage and fading, exact association.
//!
//! Every drop (or handover epoch) draws from its own ChaCha8 stream: the
//! generator is seeded with the master seed and switched to the stream
//! numbered by the drop index. Results therefore do not depend on how drops
//! are spread over threads, and aggregation runs in drop order.

mod network;

pub use network::{BaseStation, NetworkRealization};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::analysis::{Association, MobileProfile, Scenario, UavProfile};
use crate::antenna::Pattern;
use crate::channel::{ChannelParams, LosTable, Visibility};
use crate::error::{Error, Result};
use crate::mobility::StationaryAltitude;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Default vertical step used while walking a handover epoch, in seconds.
pub const DEFAULT_TIME_STEP: f64 = 0.1;

/// Stream offsets keep the different experiments from sharing draws.
const STREAM_COVERAGE: u64 = 0;
const STREAM_PINNED: u64 = 1 << 60;
const STREAM_HANDOVER: u64 = 2 << 60;
const STREAM_NO_HANDOVER: u64 = 3 << 60;

/// Monte Carlo mean with a 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub drops: u64,
    pub seed: u64,
    /// Realizations discarded because they held no BS.
    pub redraws: u64,
}

impl McEstimate {
    fn from_samples(samples: &[f64], seed: u64, redraws: u64) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            ci_halfwidth: Z95 * (var / n).sqrt(),
            drops: samples.len() as u64,
            seed,
            redraws,
        }
    }

    fn from_hits(hits: u64, drops: u64, seed: u64, redraws: u64) -> Self {
        let p = hits as f64 / drops as f64;
        Self {
            mean: p,
            ci_halfwidth: Z95 * (p * (1.0 - p) / drops as f64).sqrt(),
            drops,
            seed,
            redraws,
        }
    }
}

/// Generator for drop `index` of the experiment family `family`.
pub fn stream_rng(seed: u64, family: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(family | index);
    rng
}

fn run_indexed<T, F>(count: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// Unit-mean Gamma power draws for both visibility classes.
#[derive(Debug, Clone, Copy)]
struct Fading {
    los: Gamma<f64>,
    nlos: Gamma<f64>,
}

impl Fading {
    fn new(chan: &ChannelParams) -> Result<Self> {
        let make = |m: u32| {
            let m = f64::from(m);
            Gamma::new(m, 1.0 / m).map_err(|e| Error::domain(format!("fading shape {m}: {e}")))
        };
        Ok(Self {
            los: make(chan.m_los)?,
            nlos: make(chan.m_nlos)?,
        })
    }

    fn sample<R: Rng + ?Sized>(&self, v: Visibility, rng: &mut R) -> f64 {
        match v {
            Visibility::Los => self.los.sample(rng),
            Visibility::Nlos => self.nlos.sample(rng),
        }
    }
}

/// Per-scenario constants shared by all drops.
struct Model {
    scenario: Scenario,
    pattern: Pattern,
    fading: Fading,
    radius: f64,
}

impl Model {
    fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        Ok(Self {
            scenario: *scenario,
            pattern: Pattern::new(&scenario.antenna)?,
            fading: Fading::new(&scenario.chan)?,
            radius: scenario.deploy.world_radius(),
        })
    }

    fn network<R: Rng + ?Sized>(&self, rng: &mut R, inner: f64, redraws: &mut u64) -> NetworkRealization {
        loop {
            let net = NetworkRealization::sample(rng, self.scenario.deploy.bs_density, inner, self.radius);
            if !net.is_empty() {
                return net;
            }
            *redraws += 1;
        }
    }

    fn zeta(&self, r: f64, h: f64, v: Visibility) -> f64 {
        let c = &self.scenario.chan;
        let d2 = r * r + h * h;
        c.constant(v) * self.pattern.gain_sin(h / d2.sqrt()) * d2.powf(-0.5 * c.exponent(v))
    }

    /// Index of the serving BS at height difference `h`.
    fn serving(&self, net: &NetworkRealization, h: f64, association: Association) -> usize {
        match association {
            Association::Nearest => 0,
            Association::Harp => {
                let alpha = self.scenario.chan.alpha_los;
                let ceiling = self.pattern.max_gain();
                let (mut best, mut best_i) = (f64::NEG_INFINITY, 0);
                for (i, b) in net.stations().iter().enumerate() {
                    let d2 = b.r * b.r + h * h;
                    let decay = d2.powf(-0.5 * alpha);
                    // Sorted by distance: nothing further out can win.
                    if ceiling * decay < best {
                        break;
                    }
                    let p = self.pattern.gain_sin(h / d2.sqrt()) * decay;
                    if p > best {
                        best = p;
                        best_i = i;
                    }
                }
                best_i
            }
        }
    }

    /// Serving power and aggregate interference for one drop. The serving
    /// link is LoS; interferers draw their visibility from the ring table.
    fn sir_terms<R: Rng + ?Sized>(
        &self,
        net: &NetworkRealization,
        serving: usize,
        h: f64,
        los: &LosTable,
        rng: &mut R,
    ) -> (f64, f64) {
        let stations = net.stations();
        let s = self.zeta(stations[serving].r, h, Visibility::Los) * self.fading.sample(Visibility::Los, rng);
        let mut interference = 0.0;
        for (i, b) in stations.iter().enumerate() {
            if i == serving {
                continue;
            }
            let v = if rng.random::<f64>() < los.at(b.r) {
                Visibility::Los
            } else {
                Visibility::Nlos
            };
            interference += self.zeta(b.r, h, v) * self.fading.sample(v, rng);
        }
        (s, interference)
    }
}

/// Coverage estimates at several thresholds from the same drops.
pub fn simulate_coverage_curve(
    scenario: &Scenario,
    association: Association,
    thresholds: &[f64],
    drops: u64,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    if drops == 0 {
        return Err(Error::domain("at least one drop is required"));
    }
    if thresholds.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::domain("SIR thresholds must be positive"));
    }
    let model = Model::new(scenario)?;
    let bs_height = scenario.env.bs_height;
    let static_table = match scenario.uav {
        UavProfile::Static { altitude } => Some(LosTable::new(&scenario.env, altitude - bs_height, model.radius)?),
        UavProfile::Mobile(_) => None,
    };
    let outcomes = run_indexed(drops, |d| {
        let mut rng = stream_rng(seed, STREAM_COVERAGE, d);
        let mut redraws = 0;
        let (h, owned) = match scenario.uav {
            UavProfile::Static { altitude } => (altitude - bs_height, None),
            UavProfile::Mobile(m) => {
                let z = StationaryAltitude::new(m).sample(&mut rng);
                let h = z - bs_height;
                (h, Some(LosTable::new(&scenario.env, h, model.radius)?))
            }
        };
        let table = owned.as_ref().or(static_table.as_ref()).expect("LoS table");
        let net = model.network(&mut rng, 0.0, &mut redraws);
        let serving = model.serving(&net, h, association);
        let (s, i) = model.sir_terms(&net, serving, h, table, &mut rng);
        Ok((s, i, redraws))
    })?;
    let redraws = outcomes.iter().map(|o| o.2).sum();
    Ok(thresholds
        .iter()
        .map(|&t| {
            let hits = outcomes.iter().filter(|(s, i, _)| *s > t * *i).count() as u64;
            McEstimate::from_hits(hits, drops, seed, redraws)
        })
        .collect())
}

/// Coverage at the scenario's own threshold.
pub fn simulate_coverage(scenario: &Scenario, association: Association, drops: u64, seed: u64) -> Result<McEstimate> {
    Ok(simulate_coverage_curve(scenario, association, &[scenario.sir_threshold], drops, seed)?[0])
}

/// Coverage with the serving BS pinned in LoS at horizontal distance `r0`
/// and interferers drawn outside that radius.
pub fn simulate_conditional_coverage(scenario: &Scenario, r0: f64, drops: u64, seed: u64) -> Result<McEstimate> {
    if drops == 0 {
        return Err(Error::domain("at least one drop is required"));
    }
    if !(r0 >= 0.0) {
        return Err(Error::domain("serving distance must be >= 0"));
    }
    let model = Model::new(scenario)?;
    let h = scenario.static_altitude()? - scenario.env.bs_height;
    let table = LosTable::new(&scenario.env, h, model.radius)?;
    let serving_gain = model.zeta(r0, h, Visibility::Los);
    let t = scenario.sir_threshold;
    let hits = run_indexed(drops, |d| {
        let mut rng = stream_rng(seed, STREAM_PINNED, d);
        let s = serving_gain * model.fading.sample(Visibility::Los, &mut rng);
        // The annulus may legitimately be empty here: no redraw.
        let net = NetworkRealization::sample(&mut rng, scenario.deploy.bs_density, r0, model.radius);
        let mut interference = 0.0;
        for b in net.stations() {
            let v = if rng.random::<f64>() < table.at(b.r) {
                Visibility::Los
            } else {
                Visibility::Nlos
            };
            interference += model.zeta(b.r, h, v) * model.fading.sample(v, &mut rng);
        }
        Ok(u64::from(s > t * interference))
    })?;
    Ok(McEstimate::from_hits(hits.iter().sum(), drops, seed, 0))
}

/// Serving indices along a vertical path (height differences), counting
/// changes of serving BS.
fn count_changes(model: &Model, net: &NetworkRealization, heights: impl Iterator<Item = f64>, a: Association) -> u64 {
    let mut last = None;
    let mut changes = 0;
    for h in heights {
        let s = model.serving(net, h, a);
        if let Some(prev) = last {
            if prev != s {
                changes += 1;
            }
        }
        last = Some(s);
    }
    changes
}

/// Heights visited when flying from `from` to `to` in steps of `step`
/// metres, both ends included.
fn path(from: f64, to: f64, step: f64) -> impl Iterator<Item = f64> {
    let len = (to - from).abs();
    let dir = (to - from).signum();
    let n = (len / step).ceil() as u64;
    (0..=n).map(move |k| if k == n { to } else { from + dir * step * k as f64 })
}

/// Altitude handover rate in handovers per second.
///
/// Each epoch draws a fresh network and one random-waypoint leg, walks it in
/// steps of `time_step` seconds and records serving changes per metre; the
/// mean over epochs times the speed is the rate.
pub fn simulate_handover_rate(
    scenario: &Scenario,
    association: Association,
    n_epochs: u64,
    seed: u64,
    time_step: f64,
) -> Result<McEstimate> {
    if n_epochs == 0 {
        return Err(Error::domain("at least one epoch is required"));
    }
    if !(time_step > 0.0) {
        return Err(Error::domain("time step must be positive"));
    }
    let model = Model::new(scenario)?;
    let uav: MobileProfile = *scenario.mobile()?;
    let hb = scenario.env.bs_height;
    let step = uav.speed * time_step;
    let outcomes = run_indexed(n_epochs, |e| {
        let mut rng = stream_rng(seed, STREAM_HANDOVER, e);
        let mut redraws = 0;
        let a = rng.random_range(uav.h_low..=uav.h_high);
        let b = rng.random_range(uav.h_low..=uav.h_high);
        let net = model.network(&mut rng, 0.0, &mut redraws);
        let len = (b - a).abs();
        if len == 0.0 {
            return Ok((0.0, redraws));
        }
        let changes = count_changes(&model, &net, path(a - hb, b - hb, step), association);
        Ok((changes as f64 / len, redraws))
    })?;
    let ratios: Vec<f64> = outcomes.iter().map(|o| o.0 * uav.speed).collect();
    let redraws = outcomes.iter().map(|o| o.1).sum();
    Ok(McEstimate::from_samples(&ratios, seed, redraws))
}

/// Probability that the serving BS is unchanged after one second of
/// vertical flight, from a stationary starting state.
///
/// The starting leg is drawn with probability proportional to its length
/// and the start point uniformly on it, which is the stationary state of
/// the random-waypoint walk. The UAV then flies for `unit_time` seconds,
/// taking new waypoints as it reaches them.
pub fn simulate_no_handover_probability(
    scenario: &Scenario,
    drops: u64,
    seed: u64,
    unit_time: f64,
) -> Result<McEstimate> {
    if drops == 0 {
        return Err(Error::domain("at least one drop is required"));
    }
    if !(unit_time >= 0.0) {
        return Err(Error::domain("unit time must be >= 0"));
    }
    let model = Model::new(scenario)?;
    let uav: MobileProfile = *scenario.mobile()?;
    let hb = scenario.env.bs_height;
    let outcomes = run_indexed(drops, |d| {
        let mut rng = stream_rng(seed, STREAM_NO_HANDOVER, d);
        let mut redraws = 0;
        let (mut a, mut b);
        loop {
            a = rng.random_range(uav.h_low..=uav.h_high);
            b = rng.random_range(uav.h_low..=uav.h_high);
            if rng.random::<f64>() * uav.span() < (b - a).abs() {
                break;
            }
        }
        let mut z = a + rng.random::<f64>() * (b - a);
        let start = z;
        let mut left = uav.speed * unit_time;
        while left > 0.0 {
            let gap = (b - z).abs();
            if gap >= left {
                z += (b - z).signum() * left;
                left = 0.0;
            } else {
                z = b;
                left -= gap;
                b = rng.random_range(uav.h_low..=uav.h_high);
            }
        }
        let net = model.network(&mut rng, 0.0, &mut redraws);
        let same = model.serving(&net, start - hb, Association::Harp) == model.serving(&net, z - hb, Association::Harp);
        Ok((u64::from(same), redraws))
    })?;
    let hits = outcomes.iter().map(|o| o.0).sum();
    let redraws = outcomes.iter().map(|o| o.1).sum();
    Ok(McEstimate::from_hits(hits, drops, seed, redraws))
}
