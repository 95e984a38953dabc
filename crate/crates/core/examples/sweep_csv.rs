//! Drives the CSV sweep machinery from code: element-count sweep for a
//! mobile UAV, both engines, written to standard output.

use aerocov::analysis::Association;
use aerocov::cli::{emit_config, parse_config, run, Command, RunOptions};

fn main() -> aerocov::Result<()> {
    let cfg = parse_config(
        "uav_mode = mobile
         h_low_m = 80
         h_high_m = 120
         sir_threshold_db = -15",
    )?;
    eprint!("{}", emit_config(&cfg));

    let mut opts = RunOptions::new(Command::Sweep);
    opts.sweep = Some("n_elements=4,8,16".parse()?);
    opts.association = Some(Association::Harp);
    opts.drops = 5000;
    opts.seed = Some(42);
    let record = run(&opts, &cfg, &mut std::io::stdout().lock())?;
    for p in &record.points {
        eprintln!("n_elements = {}: {:.2?}", p.value, p.wall_clock);
    }
    Ok(())
}
