//! Laplace transform of the aggregate interference and its derivatives.
//!
//! Interferers of visibility `v` form a thinned PPP with intensity
//! `lambda_b P_v(r)`. By the PGFL,
//!
//! `L_v(w) = exp(-gamma_v(w))`,
//! `gamma_v(w) = 2 pi lambda_b sum_j P_v(ring j) int_ring (1 - (m / (m + w zeta_v(r)))^m) r dr`.
//!
//! `P_v` is constant on each blockage ring, so the sum is exact. Derivatives
//! in `w` are taken under the integral sign and combined through the
//! recursion for derivatives of `exp(-gamma)`. Everything is carried in
//! scaled form `w^k d^k/dw^k` which keeps the terms of comparable size.

use std::f64::consts::PI;

use crate::antenna::Pattern;
use crate::channel::{ring_index, ChannelParams, EnvironmentParams, LosTable, Visibility};
use crate::error::{Error, Result};
use crate::numerics::{binomial, factorial, integrate_array, pochhammer, QuadratureSpec};

use super::scenario::Scenario;

/// Largest supported derivative order (Nakagami shapes up to 8).
pub const MAX_ORDER: usize = 7;

/// A ring whose contribution is below this share of the running sum counts
/// as negligible; two in a row end the sum.
const RING_SHARE_STOP: f64 = 1e-8;

/// At the hard cap the sum is rejected when the last ring still holds more
/// than `RING_SHARE_FAIL` of it and would move `exp(-gamma)` by more than
/// `RING_IMPACT_FAIL`.
const RING_SHARE_FAIL: f64 = 1e-2;
const RING_IMPACT_FAIL: f64 = 1e-3;

/// Allowed excursion outside `[0, 1]` before a coverage value is treated as
/// a numerical failure.
const RANGE_SLACK: f64 = 1e-6;

/// Where interferers start and which distance the lower limit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterferenceMode {
    /// Horizontal exclusion disk of radius `r0` around the UAV.
    StaticNearest,
    /// No exclusion; rings start at the origin.
    Harp,
    /// Exclusion `w >= w0` in 3D distance from the mean altitude.
    MobileNearest,
}

/// Interference geometry for one UAV height above the BS antennas.
#[derive(Debug, Clone)]
pub struct InterferenceField {
    env: EnvironmentParams,
    chan: ChannelParams,
    pattern: Pattern,
    los: LosTable,
    bs_density: f64,
    h: f64,
    cap: f64,
    nulls: Vec<f64>,
    spec: QuadratureSpec,
}

impl InterferenceField {
    /// Field seen by a UAV `h` metres above the BS antennas.
    pub fn new(scenario: &Scenario, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::domain(format!(
                "UAV must fly above the base-station antenna (height difference {h} m)"
            )));
        }
        let cap = scenario.deploy.world_radius();
        let pattern = Pattern::new(&scenario.antenna)?;
        Ok(Self {
            env: scenario.env,
            chan: scenario.chan,
            pattern,
            los: LosTable::new(&scenario.env, h, cap)?,
            bs_density: scenario.deploy.bs_density,
            h,
            cap,
            nulls: pattern_nulls(scenario, h),
            spec: QuadratureSpec::with_tolerances(1e-9, 1e-12),
        })
    }

    /// Field at the scenario's reference height (mean height when mobile).
    pub fn for_scenario(scenario: &Scenario) -> Result<Self> {
        Self::new(scenario, scenario.height_diff())
    }

    pub fn height(&self) -> f64 {
        self.h
    }

    /// Radius at which the ring sum stops regardless of convergence.
    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// Horizontal distances where the antenna gain vanishes, ascending.
    pub fn nulls(&self) -> &[f64] {
        &self.nulls
    }

    /// Horizontal exclusion radius implied by a mode and its lower limit.
    pub fn exclusion_radius(&self, mode: InterferenceMode, lower: Option<f64>) -> Result<f64> {
        let limit = lower.unwrap_or(0.0);
        if !(limit >= 0.0) {
            return Err(Error::domain(format!("lower limit must be >= 0, got {limit}")));
        }
        Ok(match mode {
            InterferenceMode::StaticNearest => limit,
            InterferenceMode::Harp => 0.0,
            InterferenceMode::MobileNearest => (limit * limit - self.h * self.h).max(0.0).sqrt(),
        })
    }

    /// Large-scale gain `zeta_v(r)` of an interferer at horizontal distance `r`.
    #[inline]
    pub fn zeta(&self, r: f64, v: Visibility) -> f64 {
        let d2 = r * r + self.h * self.h;
        let s = self.h / d2.sqrt();
        self.chan.constant(v) * self.pattern.gain_sin(s) * d2.powf(-0.5 * self.chan.exponent(v))
    }

    /// LoS probability table used for the ring weights.
    pub fn los_table(&self) -> &LosTable {
        &self.los
    }

    /// Scaled exponent derivatives `w^k gamma^(k)(w)` for `k = 0..=order`,
    /// with interferers beyond horizontal distance `r_excl`.
    pub fn scaled_gamma(&self, varpi: f64, v: Visibility, r_excl: f64, order: usize) -> Result<Vec<f64>> {
        if !(varpi >= 0.0 && varpi.is_finite()) {
            return Err(Error::domain(format!("Laplace argument must be finite and >= 0, got {varpi}")));
        }
        if order > MAX_ORDER {
            return Err(Error::domain(format!(
                "derivative order {order} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        if varpi == 0.0 {
            return Ok(vec![0.0; order + 1]);
        }
        macro_rules! dispatch {
            ($($n:literal),*) => {
                match order + 1 {
                    $($n => self.ring_sum::<$n>(varpi, v, r_excl).map(|a| a.to_vec()),)*
                    _ => unreachable!(),
                }
            };
        }
        dispatch!(1, 2, 3, 4, 5, 6, 7, 8)
    }

    /// `gamma_v(w)` alone.
    pub fn gamma(&self, varpi: f64, v: Visibility, r_excl: f64) -> Result<f64> {
        Ok(self.scaled_gamma(varpi, v, r_excl, 0)?[0])
    }

    /// Scaled Laplace derivatives `w^n L^(n)(w)` for `n = 0..=order`.
    pub fn scaled_laplace(&self, varpi: f64, v: Visibility, r_excl: f64, order: usize) -> Result<Vec<f64>> {
        let g = self.scaled_gamma(varpi, v, r_excl, order)?;
        Ok(exp_derivatives(&g))
    }

    /// Probability that a LoS serving link with argument `varpi_l =
    /// theta m_l / zeta_serving` beats the interference outside `r_excl`.
    ///
    /// With unit-mean Gamma fading of integer shape `m_l` the coverage is
    /// `sum_{i < m_l} (-w)^i / i! d^i/dw^i [L_n L_l](w)`, and the product rule
    /// splits each derivative between the two visibility classes.
    pub fn conditional_coverage(&self, varpi_l: f64, r_excl: f64) -> Result<f64> {
        if !(varpi_l > 0.0) {
            return Err(Error::domain(format!("Laplace argument must be positive, got {varpi_l}")));
        }
        // Serving link at an antenna null (or numerically zero gain).
        if !(varpi_l < 1e250) {
            return Ok(0.0);
        }
        let m = self.chan.m_los as usize;
        if m - 1 > MAX_ORDER {
            return Err(Error::domain(format!("LoS Nakagami shape {m} is above the supported maximum")));
        }
        let ll = self.scaled_laplace(varpi_l, Visibility::Los, r_excl, m - 1)?;
        let ln = self.scaled_laplace(varpi_l, Visibility::Nlos, r_excl, m - 1)?;
        let mut total = 0.0;
        for i in 0..m {
            let mut inner = 0.0;
            for il in 0..=i {
                inner += binomial(i as u32, il as u32) * ln[i - il] * ll[il];
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * inner / factorial(i as u32);
        }
        if !(total > -RANGE_SLACK && total < 1.0 + RANGE_SLACK) {
            return Err(Error::Inconsistent {
                what: "conditional coverage",
                value: total,
            });
        }
        Ok(total.clamp(0.0, 1.0))
    }

    fn ring_sum<const N: usize>(&self, varpi: f64, v: Visibility, r_excl: f64) -> Result<[f64; N]> {
        let m = self.chan.shape(v);
        let mf = f64::from(m);
        let alpha = self.chan.exponent(v);
        let a_v = self.chan.constant(v);
        let h = self.h;
        let mut poch = [0.0; N];
        for (k, p) in poch.iter_mut().enumerate() {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *p = sign * pochhammer(m, k as u32);
        }
        let integrand = |r: f64| -> [f64; N] {
            let d2 = r * r + h * h;
            let zeta = a_v * self.pattern.gain_sin(h / d2.sqrt()) * d2.powf(-0.5 * alpha);
            let x = varpi * zeta;
            let t = x / (mf + x);
            let log_q = (-t).ln_1p();
            let mut out = [0.0; N];
            out[0] = -(mf * log_q).exp_m1() * r;
            if N > 1 {
                let qm = (mf * log_q).exp();
                let mut tk = 1.0;
                for k in 1..N {
                    tk *= t;
                    out[k] = poch[k] * qm * tk * r;
                }
            }
            out
        };

        let mut acc = [0.0; N];
        let mut quiet = 0;
        let mut j = ring_index(r_excl, &self.env);
        let mut bps = Vec::with_capacity(8);
        loop {
            let start = self.env.ring_start(j).max(r_excl);
            let end = self.env.ring_start(j + 1).min(self.cap);
            if start >= self.cap {
                break;
            }
            let weight = self.los.visibility_probability(j, v);
            let mut contrib = [0.0; N];
            if weight > 0.0 && end > start {
                bps.clear();
                bps.push(start);
                bps.extend(self.nulls.iter().copied().filter(|&n| n > start && n < end));
                bps.push(end);
                let est = integrate_array(integrand, &bps, &self.spec)?;
                for k in 0..N {
                    contrib[k] = weight * est.value[k];
                }
            }
            let mut negligible = true;
            for k in 0..N {
                acc[k] += contrib[k];
                if !(acc[k] != 0.0 && contrib[k].abs() <= RING_SHARE_STOP * acc[k].abs()) {
                    negligible = false;
                }
            }
            quiet = if negligible { quiet + 1 } else { 0 };
            if quiet >= 2 {
                break;
            }
            if end >= self.cap {
                // The cap is the edge of the modelled world. Reject only when
                // the last ring still holds a visible share of the sum and
                // would move exp(-gamma) noticeably.
                let scale = 2.0 * PI * self.bs_density;
                let damping = (-scale * acc[0]).exp();
                let impact = (0..N).map(|k| scale * contrib[k].abs() * damping).fold(0.0, f64::max);
                let share = (0..N)
                    .filter(|&k| acc[k] != 0.0)
                    .map(|k| (contrib[k] / acc[k]).abs())
                    .fold(0.0, f64::max);
                if share > RING_SHARE_FAIL && impact > RING_IMPACT_FAIL {
                    return Err(Error::RingSumNotConverged {
                        partial: scale * acc[0],
                        radius: self.cap,
                        last_share: share,
                    });
                }
                break;
            }
            j += 1;
        }
        for a in acc.iter_mut() {
            *a *= 2.0 * PI * self.bs_density;
        }
        Ok(acc)
    }
}

/// Horizontal null distances of the serving/interfering pattern at height
/// `h`, ascending and finite. Works for odd element counts too.
fn pattern_nulls(scenario: &Scenario, h: f64) -> Vec<f64> {
    use crate::antenna::GainModel;
    if scenario.antenna.model != GainModel::Array {
        return Vec::new();
    }
    let n = scenario.antenna.n_elements;
    let mut out: Vec<f64> = (1..=n / 2)
        .map(|j| {
            let s = 2.0 * f64::from(j) / f64::from(n);
            if s >= 1.0 {
                0.0
            } else {
                h * (1.0 - s * s).sqrt() / s
            }
        })
        .filter(|&r| r > 0.0)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Scaled derivatives of `exp(-gamma)` from scaled derivatives of `gamma`:
/// `l_0 = exp(-g_0)`, `l_n = -sum_k C(n-1, k) g_{k+1} l_{n-1-k}`.
pub fn exp_derivatives(g: &[f64]) -> Vec<f64> {
    let mut l = Vec::with_capacity(g.len());
    l.push((-g[0]).exp());
    for n in 1..g.len() {
        let mut s = 0.0;
        for k in 0..n {
            s += binomial((n - 1) as u32, k as u32) * g[k + 1] * l[n - 1 - k];
        }
        l.push(-s);
    }
    l
}

fn field_for(scenario: &Scenario) -> Result<InterferenceField> {
    scenario.validate()?;
    InterferenceField::for_scenario(scenario)
}

/// `gamma_v(varpi)` for the scenario's reference height.
pub fn gamma_exponent(
    varpi: f64,
    visibility: Visibility,
    lower_limit: Option<f64>,
    scenario: &Scenario,
    mode: InterferenceMode,
) -> Result<f64> {
    let field = field_for(scenario)?;
    let r = field.exclusion_radius(mode, lower_limit)?;
    field.gamma(varpi, visibility, r)
}

/// `[L, L', ..., L^(max_order)]` at `varpi` (unscaled derivatives).
pub fn laplace_with_derivatives(
    varpi: f64,
    max_order: usize,
    visibility: Visibility,
    lower_limit: Option<f64>,
    scenario: &Scenario,
    mode: InterferenceMode,
) -> Result<Vec<f64>> {
    if !(varpi > 0.0) {
        return Err(Error::domain(format!("Laplace argument must be positive, got {varpi}")));
    }
    let needed = (scenario.chan.m_los + scenario.chan.m_nlos - 2) as usize;
    if max_order > needed {
        return Err(Error::domain(format!(
            "order {max_order} exceeds what the fading shapes need ({needed})"
        )));
    }
    let field = field_for(scenario)?;
    let r = field.exclusion_radius(mode, lower_limit)?;
    let scaled = field.scaled_laplace(varpi, visibility, r, max_order)?;
    Ok(scaled
        .iter()
        .enumerate()
        .map(|(n, l)| l / varpi.powi(n as i32))
        .collect())
}

/// Coverage given the serving link's Laplace argument `varpi_l`.
pub fn conditional_coverage(
    varpi_l: f64,
    scenario: &Scenario,
    mode: InterferenceMode,
    lower_limit: Option<f64>,
) -> Result<f64> {
    let field = field_for(scenario)?;
    let r = field.exclusion_radius(mode, lower_limit)?;
    field.conditional_coverage(varpi_l, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::simplified_gain;
    use crate::channel::los_probability;
    use crate::numerics::integrate_split;

    fn serving_varpi(s: &Scenario, r0: f64) -> f64 {
        let h = s.height_diff();
        let d = r0.hypot(h);
        let g = simplified_gain(r0, h, &s.antenna).unwrap();
        s.sir_threshold * d.powf(s.chan.alpha_los) * f64::from(s.chan.m_los) / (s.chan.a_los * g)
    }

    #[test]
    fn zero_argument_gives_zero_exponent() {
        let s = Scenario::table_one();
        let g = gamma_exponent(0.0, Visibility::Los, Some(100.0), &s, InterferenceMode::StaticNearest).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn exponent_grows_with_argument() {
        let s = Scenario::table_one();
        let f = field_for(&s).unwrap();
        for v in [Visibility::Los, Visibility::Nlos] {
            let a = f.gamma(1.0, v, 100.0).unwrap();
            let b = f.gamma(2.0, v, 100.0).unwrap();
            assert!(b >= a && a > 0.0, "{v:?}: {a} {b}");
        }
    }

    // Independent oracle: one adaptive quadrature over the whole range with
    // the blockage probability looked up pointwise, so the ring jumps are
    // left to the adaptivity.
    fn unsplit_gamma(s: &Scenario, varpi: f64, v: Visibility, r0: f64) -> f64 {
        let h = s.height_diff();
        let m = f64::from(s.chan.shape(v));
        let cap = s.deploy.world_radius();
        let (val, _) = integrate_split(
            |r| {
                let pl = los_probability(r, h, &s.env).unwrap();
                let p = if v == Visibility::Los { pl } else { 1.0 - pl };
                let zeta = s.chan.constant(v)
                    * simplified_gain(r, h, &s.antenna).unwrap()
                    * (r * r + h * h).powf(-s.chan.exponent(v) / 2.0);
                p * (1.0 - (m / (m + varpi * zeta)).powf(m)) * r
            },
            &[r0, cap],
            &QuadratureSpec {
                relative_tolerance: 1e-8,
                absolute_tolerance: 1e-12,
                max_subdivisions: 1 << 18,
            },
        )
        .unwrap();
        2.0 * PI * s.deploy.bs_density * val
    }

    #[test]
    fn ring_sum_matches_unsplit_integral() {
        let s = Scenario::table_one();
        let varpi = serving_varpi(&s, 100.0);
        for v in [Visibility::Los, Visibility::Nlos] {
            let ring = gamma_exponent(varpi, v, Some(100.0), &s, InterferenceMode::StaticNearest).unwrap();
            let oracle = unsplit_gamma(&s, varpi, v, 100.0);
            assert!(((ring - oracle) / oracle).abs() < 1e-5, "{v:?}: {ring} vs {oracle}");
        }
    }

    // Central differences of L = exp(-gamma), written so that the tiny
    // differences near L = 1 are not lost to cancellation.
    fn fd_laplace(f: &InterferenceField, v: Visibility, r0: f64, varpi: f64) -> (f64, f64) {
        let step = 1e-4 * varpi;
        let g = |w: f64| f.gamma(w, v, r0).unwrap();
        let (gm, g0, gp) = (g(varpi - step), g(varpi), g(varpi + step));
        let (up, down) = ((-(gp - g0)).exp_m1(), (-(gm - g0)).exp_m1());
        let l0 = (-g0).exp();
        (l0 * (up - down) / (2.0 * step), l0 * (up + down) / (step * step))
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let s = Scenario::table_one();
        let f = field_for(&s).unwrap();
        // At w = 0.5 every w zeta is about 1e-9, so the second difference
        // sits below double-precision resolution; check it at physically
        // relevant arguments instead.
        for (varpi, orders) in [(0.5, 1), (serving_varpi(&s, 60.0), 2), (serving_varpi(&s, 100.0), 2)] {
            for v in [Visibility::Los, Visibility::Nlos] {
                let l =
                    laplace_with_derivatives(varpi, 2, v, Some(100.0), &s, InterferenceMode::StaticNearest).unwrap();
                let (d1, d2) = fd_laplace(&f, v, 100.0, varpi);
                assert!(((l[1] - d1) / d1).abs() < 1e-4, "{v:?} d1 {} vs {d1}", l[1]);
                if orders == 2 {
                    assert!(((l[2] - d2) / d2).abs() < 1e-4, "{v:?} d2 {} vs {d2}", l[2]);
                }
            }
        }
    }

    #[test]
    fn rayleigh_needs_no_derivatives() {
        let mut s = Scenario::table_one();
        s.chan.m_los = 1;
        s.chan.m_nlos = 1;
        let l = laplace_with_derivatives(0.5, 0, Visibility::Los, None, &s, InterferenceMode::Harp).unwrap();
        assert_eq!(l.len(), 1);
        assert!(laplace_with_derivatives(0.5, 1, Visibility::Los, None, &s, InterferenceMode::Harp).is_err());

        // Coverage is then the plain product of the two transforms.
        let f = field_for(&s).unwrap();
        let cov = f.conditional_coverage(0.5, 50.0).unwrap();
        let prod = (-f.gamma(0.5, Visibility::Los, 50.0).unwrap()).exp()
            * (-f.gamma(0.5, Visibility::Nlos, 50.0).unwrap()).exp();
        assert!((cov - prod).abs() < 1e-15);
    }

    #[test]
    fn tiny_argument_covers() {
        let s = Scenario::table_one();
        let l = laplace_with_derivatives(1e-12, 2, Visibility::Los, Some(100.0), &s, InterferenceMode::StaticNearest)
            .unwrap();
        assert!((l[0] - 1.0).abs() < 1e-6);
        let c = conditional_coverage(1e-12, &s, InterferenceMode::StaticNearest, Some(100.0)).unwrap();
        assert!((c - 1.0).abs() < 1e-6);
    }

    #[test]
    fn mobile_exclusion_is_horizontal_projection() {
        let s = Scenario::table_one_mobile();
        let f = field_for(&s).unwrap();
        assert_eq!(f.height(), 120.0);
        let r = f.exclusion_radius(InterferenceMode::MobileNearest, Some(130.0)).unwrap();
        assert!((r - 50.0).abs() < 1e-12);
        assert_eq!(f.exclusion_radius(InterferenceMode::MobileNearest, Some(100.0)).unwrap(), 0.0);
        assert_eq!(f.exclusion_radius(InterferenceMode::Harp, Some(100.0)).unwrap(), 0.0);
    }

    #[test]
    fn exp_recursion_on_a_known_function() {
        // gamma(w) = w^2: w^k gamma^(k) = [w^2, 2w^2, 2w^2, 0].
        let w = 0.7f64;
        let g = [w * w, 2.0 * w * w, 2.0 * w * w, 0.0];
        let l = exp_derivatives(&g);
        let e = (-w * w).exp();
        let exact = [e, w * (-2.0 * w * e), w * w * ((4.0 * w * w - 2.0) * e), w.powi(3) * ((12.0 * w - 8.0 * w.powi(3)) * e)];
        for k in 0..4 {
            assert!((l[k] - exact[k]).abs() < 1e-14, "{k}");
        }
    }
}
