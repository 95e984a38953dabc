//! Globally adaptive Gauss–Kronrod (7/15) quadrature over finite intervals.
//!
//! The integrator bisects the sub-interval with the largest error estimate
//! until the summed estimate meets `max(rel * |I|, abs)`. Callers that know
//! where the integrand has kinks or jumps (antenna nulls, ring boundaries)
//! pass them as breakpoints so that the initial partition already separates
//! them. Vector-valued integrands share abscissae across components; every
//! component must meet the tolerance independently.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and effort limit for [`integrate`] and friends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-6,
            absolute_tolerance: 1e-12,
            max_subdivisions: 1 << 16,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(relative: f64, absolute: f64) -> Self {
        Self {
            relative_tolerance: relative,
            absolute_tolerance: absolute,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.absolute_tolerance > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Integral value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
}

/// Integrates `f` over `[lower, upper]`.
pub fn integrate<F>(mut f: F, lower: f64, upper: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let est = integrate_array(|x| [f(x)], &[lower, upper], spec)?;
    Ok(est.value[0])
}

/// Integrates `f` over the span of `breakpoints`, seeding the adaptive
/// partition with every breakpoint. Returns value and error estimate.
pub fn integrate_split<F>(mut f: F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let est = integrate_array(|x| [f(x)], breakpoints, spec)?;
    Ok((est.value[0], est.error[0]))
}

struct Piece<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: [f64; N],
    priority: f64,
}

impl<const N: usize> PartialEq for Piece<N> {
    fn eq(&self, other: &Self) -> bool {
        self.priority.total_cmp(&other.priority) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Piece<N> {}
impl<const N: usize> PartialOrd for Piece<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Piece<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

/// Vector-valued adaptive quadrature. `breakpoints` must be non-decreasing
/// and hold at least the two end points; repeated points are skipped.
pub fn integrate_array<const N: usize, F>(
    mut f: F,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    spec.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::domain("quadrature needs at least two breakpoints"));
    }
    if breakpoints.iter().any(|b| !b.is_finite()) {
        return Err(Error::domain("quadrature limits must be finite"));
    }
    if breakpoints.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("quadrature breakpoints must be non-decreasing"));
    }

    let mut total = [0.0; N];
    let mut total_err = [0.0; N];
    let mut raw = Vec::with_capacity(breakpoints.len());
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            let (v, e) = kronrod15(&mut f, w[0], w[1])?;
            for i in 0..N {
                total[i] += v[i];
                total_err[i] += e[i];
            }
            raw.push((w[0], w[1], v, e));
        }
    }

    let mut heap = BinaryHeap::with_capacity(raw.len() * 4);
    for (lo, hi, value, error) in raw {
        let priority = normalized(&error, &total, spec);
        heap.push(Piece {
            lo,
            hi,
            value,
            error,
            priority,
        });
    }
    let mut frozen_err = [0.0; N];
    let mut pieces = heap.len();

    loop {
        if converged(&total, &total_err, spec) {
            return Ok(Estimate {
                value: total,
                error: total_err,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        // Cannot bisect further in floating point: keep its error as is.
        if !(mid > worst.lo && mid < worst.hi) || (worst.hi - worst.lo) < 1e-14 * mid.abs().max(1.0)
        {
            for i in 0..N {
                frozen_err[i] += worst.error[i];
            }
            continue;
        }
        if pieces >= spec.max_subdivisions {
            heap.push(worst);
            break;
        }
        let (lv, le) = kronrod15(&mut f, worst.lo, mid)?;
        let (rv, re) = kronrod15(&mut f, mid, worst.hi)?;
        for i in 0..N {
            total[i] += lv[i] + rv[i] - worst.value[i];
            total_err[i] += le[i] + re[i] - worst.error[i];
        }
        pieces += 1;
        heap.push(Piece {
            lo: worst.lo,
            hi: mid,
            value: lv,
            error: le,
            priority: normalized(&le, &total, spec),
        });
        heap.push(Piece {
            lo: mid,
            hi: worst.hi,
            value: rv,
            error: re,
            priority: normalized(&re, &total, spec),
        });
    }

    // Recompute the error sum from scratch to shed accumulated rounding.
    let mut err = frozen_err;
    for p in heap.iter() {
        for i in 0..N {
            err[i] += p.error[i];
        }
    }
    if converged(&total, &err, spec) {
        return Ok(Estimate {
            value: total,
            error: err,
        });
    }
    let worst = (0..N)
        .max_by(|&a, &b| {
            let ra = err[a] / tolerance(total[a], spec);
            let rb = err[b] / tolerance(total[b], spec);
            ra.total_cmp(&rb)
        })
        .unwrap_or(0);
    Err(Error::QuadratureNotConverged {
        estimate: total[worst],
        error_bound: err[worst],
        subdivisions: pieces,
    })
}

fn tolerance(value: f64, spec: &QuadratureSpec) -> f64 {
    (spec.relative_tolerance * value.abs()).max(spec.absolute_tolerance)
}

fn converged<const N: usize>(total: &[f64; N], err: &[f64; N], spec: &QuadratureSpec) -> bool {
    (0..N).all(|i| err[i] <= tolerance(total[i], spec))
}

fn normalized<const N: usize>(err: &[f64; N], total: &[f64; N], spec: &QuadratureSpec) -> f64 {
    (0..N)
        .map(|i| err[i] / tolerance(total[i], spec))
        .fold(0.0, f64::max)
}

fn kronrod15<const N: usize, F>(f: &mut F, lo: f64, hi: f64) -> Result<([f64; N], [f64; N])>
where
    F: FnMut(f64) -> [f64; N],
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let mut eval = |x: f64| -> Result<[f64; N]> {
        let v = f(x);
        if v.iter().all(|c| c.is_finite()) {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { abscissa: x })
        }
    };

    let fc = eval(centre)?;
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let mut abs_sum = [0.0; N];
    let mut samples = [[0.0; N]; 15];
    samples[14] = fc;
    for i in 0..N {
        kron[i] = WGK[7] * fc[i];
        gauss[i] = WG[3] * fc[i];
        abs_sum[i] = WGK[7] * fc[i].abs();
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(centre - dx)?;
        let f2 = eval(centre + dx)?;
        samples[2 * j] = f1;
        samples[2 * j + 1] = f2;
        for i in 0..N {
            kron[i] += WGK[j] * (f1[i] + f2[i]);
            abs_sum[i] += WGK[j] * (f1[i].abs() + f2[i].abs());
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * (f1[i] + f2[i]);
            }
        }
    }

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for i in 0..N {
        let mean = 0.5 * kron[i];
        let mut asc = WGK[7] * (fc[i] - mean).abs();
        for j in 0..7 {
            asc += WGK[j] * ((samples[2 * j][i] - mean).abs() + (samples[2 * j + 1][i] - mean).abs());
        }
        let res_abs = abs_sum[i] * half.abs();
        let res_asc = asc * half.abs();
        value[i] = kron[i] * half;
        error[i] = rescale_error((kron[i] - gauss[i]) * half, res_abs, res_asc);
    }
    Ok((value, error))
}

// QUADPACK's heuristic rescaling of the raw Gauss/Kronrod difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}
