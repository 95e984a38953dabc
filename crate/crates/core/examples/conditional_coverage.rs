//! Coverage given the serving BS distance, the interference exponent behind
//! it, and a check against the simulator with the serving BS pinned.

use aerocov::analysis::{conditional_coverage, InterferenceField, InterferenceMode, Scenario};
use aerocov::antenna::Pattern;
use aerocov::channel::Visibility;
use aerocov::montecarlo::simulate_conditional_coverage;

fn main() -> aerocov::Result<()> {
    let s = Scenario::table_one();
    let h = s.height_diff();
    let field = InterferenceField::for_scenario(&s)?;
    let pattern = Pattern::new(&s.antenna)?;
    println!(
        "{:>8} {:>10} {:>12} {:>12} {:>10} {:>18}",
        "r0 [m]", "gain", "gamma LoS", "gamma NLoS", "P(cov|r0)", "simulated"
    );
    for r0 in [20.0, 40.0, 60.0, 80.0, 120.0, 200.0, 300.0] {
        let g = pattern.gain(r0, h);
        let d = r0.hypot(h);
        let varpi = s.sir_threshold * d.powf(s.chan.alpha_los) * f64::from(s.chan.m_los) / (s.chan.a_los * g);
        let gl = field.gamma(varpi, Visibility::Los, r0)?;
        let gn = field.gamma(varpi, Visibility::Nlos, r0)?;
        let p = conditional_coverage(varpi, &s, InterferenceMode::StaticNearest, Some(r0))?;
        let mc = simulate_conditional_coverage(&s, r0, 5000, 3)?;
        println!(
            "{r0:>8.0} {g:>10.4} {gl:>12.4e} {gn:>12.4e} {p:>10.4} {:>10.4} +/- {:.4}",
            mc.mean, mc.ci_halfwidth
        );
    }
    Ok(())
}
