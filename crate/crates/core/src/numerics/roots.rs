//! Bracketed root finding (Brent's method).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    /// Absolute width of the final sign-change bracket. `None` means
    /// `1e-10` times the initial bracket width.
    pub abscissa_tolerance: Option<f64>,
    pub max_iterations: usize,
}

impl Default for RootSpec {
    fn default() -> Self {
        Self {
            abscissa_tolerance: None,
            max_iterations: 200,
        }
    }
}

/// Finds a root of `f` inside `[lo, hi]` where `f(lo)` and `f(hi)` differ in
/// sign. Iterates never leave the bracket; inverse quadratic and secant steps
/// are only accepted while they beat bisection.
pub fn find_root_bracketed<F>(mut f: F, lo: f64, hi: f64, spec: &RootSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let tol = match spec.abscissa_tolerance {
        Some(t) if t > 0.0 => t,
        Some(t) => return Err(Error::domain(format!("root tolerance must be positive, got {t}"))),
        None => 1e-10 * (hi - lo),
    };

    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..spec.max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b.clamp(lo, hi));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NonFiniteIntegrand { abscissa: b });
        }
    }
    let (x, y) = if b < c { (b, c) } else { (c, b) };
    Err(Error::RootNotConverged {
        lo: x,
        hi: y,
        iterations: spec.max_iterations,
    })
}
