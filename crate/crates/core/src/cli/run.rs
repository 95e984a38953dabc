use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analysis::{coverage, mobility_adjusted_coverage, Association, Scenario, UavProfile};
use crate::channel::{db_to_linear, linear_to_db};
use crate::cli::config::{exact_preimage, RunConfig};
use crate::cli::sweep::{SweepParameter, SweepSpec};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate_coverage, simulate_handover_rate, simulate_no_handover_probability};

pub const DEFAULT_DROPS: u64 = 10_000;

/// Flight time over which the serving cell must not change, in seconds.
pub const NO_HANDOVER_WINDOW: f64 = 1.0;

pub const CSV_HEADER_TAIL: &str = "association,engine,value,ci_halfwidth,seed,drops";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Closed-form coverage.
    Coverage,
    /// Monte Carlo coverage.
    Simulate,
    /// Altitude handover rate, simulated.
    Handover,
    /// Coverage from both engines side by side.
    Sweep,
}

impl Command {
    pub fn default_engine(&self) -> Engine {
        match self {
            Command::Coverage => Engine::Analytic,
            Command::Simulate | Command::Handover => Engine::MonteCarlo,
            Command::Sweep => Engine::Both,
        }
    }

    pub fn default_association(&self) -> Association {
        match self {
            Command::Handover => Association::Harp,
            _ => Association::Nearest,
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coverage" => Ok(Command::Coverage),
            "simulate" => Ok(Command::Simulate),
            "handover" => Ok(Command::Handover),
            "sweep" => Ok(Command::Sweep),
            _ => Err(Error::config("command", format!("expected coverage, simulate, handover or sweep, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    MonteCarlo,
    Both,
}

impl Engine {
    fn parts(&self) -> &'static [EngineKind] {
        match self {
            Engine::Analytic => &[EngineKind::Analytic],
            Engine::MonteCarlo => &[EngineKind::MonteCarlo],
            Engine::Both => &[EngineKind::Analytic, EngineKind::MonteCarlo],
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "mc" | "montecarlo" => Ok(Engine::MonteCarlo),
            "both" => Ok(Engine::Both),
            _ => Err(Error::config("engine", format!("expected analytic, mc or both, got `{s}`"))),
        }
    }
}

/// The engine behind a single CSV row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Analytic,
    MonteCarlo,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Analytic => "analytic",
            EngineKind::MonteCarlo => "mc",
        })
    }
}

pub fn parse_association(s: &str) -> Result<Association> {
    match s {
        "nearest" => Ok(Association::Nearest),
        "harp" => Ok(Association::Harp),
        _ => Err(Error::config("association", format!("expected nearest or harp, got `{s}`"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub command: Command,
    pub sweep: Option<SweepSpec>,
    pub association: Option<Association>,
    pub engine: Option<Engine>,
    /// Drops per point, or epochs for handover rates.
    pub drops: u64,
    pub seed: Option<u64>,
}

impl RunOptions {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            sweep: None,
            association: None,
            engine: None,
            drops: DEFAULT_DROPS,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub engine: EngineKind,
    pub value: f64,
    pub ci_halfwidth: Option<f64>,
    pub seed: Option<u64>,
    pub drops: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    /// Value of the swept parameter, in the units of its key.
    pub value: f64,
    pub scenario: Scenario,
    pub rows: Vec<Row>,
    pub wall_clock: Duration,
}

/// Everything a run produced, including timings that stay out of the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub base: RunConfig,
    pub parameter: SweepParameter,
    pub association: Association,
    pub engine: Engine,
    pub points: Vec<PointRecord>,
}

/// 17 significant digits, enough to round-trip any `f64`.
fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

struct Plan {
    parameter: SweepParameter,
    association: Association,
    engine: Engine,
    seed: Option<u64>,
    drops: u64,
    handover_step: f64,
    points: Vec<(f64, Scenario)>,
}

fn plan(opts: &RunOptions, cfg: &RunConfig) -> Result<Plan> {
    let association = opts.association.unwrap_or(opts.command.default_association());
    let engine = opts.engine.unwrap_or(opts.command.default_engine());
    let sweep = match &opts.sweep {
        Some(s) => s.clone(),
        None => {
            let db = exact_preimage(cfg.scenario.sir_threshold, db_to_linear, linear_to_db);
            SweepSpec::new(SweepParameter::SirThresholdDb, vec![db])?
        }
    };
    sweep.check_association(association)?;
    if opts.drops == 0 {
        return Err(Error::config("drops", "must be >= 1"));
    }
    if opts.command == Command::Handover && engine != Engine::MonteCarlo {
        return Err(Error::config("engine", "handover rates come from the Monte Carlo engine only"));
    }
    let points = sweep
        .values
        .iter()
        .map(|&v| Ok((v, sweep.parameter.apply(&cfg.scenario, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let needs_mc = engine != Engine::Analytic
        || opts.command == Command::Handover
        || points.iter().any(|(_, s)| uses_handover_cost(s));
    if needs_mc && opts.seed.is_none() {
        return Err(Error::config("seed", "--seed is required for Monte Carlo runs"));
    }
    for (_, s) in &points {
        if opts.command == Command::Handover {
            s.mobile().map_err(|_| Error::config("uav_mode", "handover runs need a mobile UAV"))?;
        }
        if association == Association::Harp && !s.antenna.n_elements.is_multiple_of(2) {
            return Err(Error::config("n_elements", "HARP runs need an even element count"));
        }
    }
    Ok(Plan {
        parameter: sweep.parameter,
        association,
        engine,
        seed: opts.seed,
        drops: opts.drops,
        handover_step: cfg.handover_step_s,
        points,
    })
}

fn uses_handover_cost(s: &Scenario) -> bool {
    matches!(s.uav, UavProfile::Mobile(_)) && s.handover_cost > 0.0
}

fn evaluate(p: &Plan, command: Command, s: &Scenario) -> Result<Vec<Row>> {
    let seed = p.seed.unwrap_or(0);
    if command == Command::Handover {
        let e = simulate_handover_rate(s, p.association, p.drops, seed, p.handover_step)?;
        return Ok(vec![Row {
            engine: EngineKind::MonteCarlo,
            value: e.mean,
            ci_halfwidth: Some(e.ci_halfwidth),
            seed: Some(seed),
            drops: Some(e.drops),
        }]);
    }
    let keep = if uses_handover_cost(s) {
        Some(simulate_no_handover_probability(s, p.drops, seed, NO_HANDOVER_WINDOW)?.mean)
    } else {
        None
    };
    let discount = |v: f64| match keep {
        Some(k) => mobility_adjusted_coverage(v, k, s.handover_cost),
        None => Ok(v),
    };
    p.engine
        .parts()
        .iter()
        .map(|kind| match kind {
            EngineKind::Analytic => Ok(Row {
                engine: *kind,
                value: discount(coverage(s, p.association)?.probability)?,
                ci_halfwidth: None,
                seed: keep.map(|_| seed),
                drops: keep.map(|_| p.drops),
            }),
            EngineKind::MonteCarlo => {
                let e = simulate_coverage(s, p.association, p.drops, seed)?;
                let value = discount(e.mean)?;
                // The coverage factor carries the sampling error; scale it alongside.
                let scale = if e.mean > 0.0 { value / e.mean } else { 1.0 };
                Ok(Row {
                    engine: *kind,
                    value,
                    ci_halfwidth: Some(e.ci_halfwidth * scale),
                    seed: Some(seed),
                    drops: Some(e.drops),
                })
            }
        })
        .collect()
}

/// Validates, evaluates every sweep point in parallel, then writes the CSV
/// in sweep order.
///
/// Rows are flushed up to the first failing point, followed by a quoted
/// status row naming it; the error is then returned. Bad input fails
/// before anything is written.
pub fn run<W: Write>(opts: &RunOptions, cfg: &RunConfig, out: &mut W) -> Result<RunRecord> {
    let p = plan(opts, cfg)?;
    let results: Vec<Result<PointRecord>> = p
        .points
        .par_iter()
        .map(|&(value, scenario)| {
            let start = Instant::now();
            let rows = evaluate(&p, opts.command, &scenario).map_err(|e| Error::SweepPoint {
                parameter: p.parameter.key(),
                value,
                source: Box::new(e),
            })?;
            Ok(PointRecord {
                value,
                scenario,
                rows,
                wall_clock: start.elapsed(),
            })
        })
        .collect();

    writeln!(out, "{},{CSV_HEADER_TAIL}", p.parameter.key())?;
    let mut points = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(point) => {
                for row in &point.rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        point.value,
                        p.association.name(),
                        row.engine,
                        full_precision(row.value),
                        opt(row.ci_halfwidth.map(full_precision)),
                        opt(row.seed),
                        opt(row.drops),
                    )?;
                }
                points.push(point);
            }
            Err(e) => {
                writeln!(out, "status,,,{},,,", csv_quote(&format!("failed {e}")))?;
                out.flush()?;
                return Err(e);
            }
        }
    }
    out.flush()?;
    Ok(RunRecord {
        base: *cfg,
        parameter: p.parameter,
        association: p.association,
        engine: p.engine,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mc_needs_seed() {
        let err = run(&RunOptions::new(Command::Simulate), &RunConfig::default(), &mut Vec::new()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("seed"));
    }

    #[test]
    fn single_point_uses_config_threshold() {
        let mut out = Vec::new();
        let rec = run(&RunOptions::new(Command::Coverage), &RunConfig::default(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "sir_threshold_db,association,engine,value,ci_halfwidth,seed,drops");
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("-15,nearest,analytic,"), "{}", lines[1]);
        assert!(lines[1].ends_with(",,,"));
        assert_eq!(rec.points.len(), 1);
    }

    #[test]
    fn handover_rejects_static_and_analytic() {
        let mut opts = RunOptions::new(Command::Handover);
        opts.seed = Some(1);
        assert!(run(&opts, &RunConfig::default(), &mut Vec::new()).is_err());
        let cfg = RunConfig {
            scenario: Scenario::table_one_mobile(),
            ..RunConfig::default()
        };
        opts.engine = Some(Engine::Analytic);
        assert_eq!(run(&opts, &cfg, &mut Vec::new()).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_quote("a \"b\", c"), "\"a \"\"b\"\", c\"");
        assert_eq!(full_precision(0.1), "1.0000000000000001e-1");
        assert_eq!(full_precision(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
