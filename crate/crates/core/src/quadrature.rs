//! Adaptive Simpson quadrature with interval bisection.

use crate::error::{Error, Result};
use crate::real::Real;

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: usize = 1_000_000;

const MAX_DEPTH: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig<T> {
    /// Requested relative accuracy.
    pub rel_tol: T,
    /// Maximum number of subintervals examined.
    pub budget: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        QuadConfig { rel_tol: T::lit(DEFAULT_REL_TOL), budget: DEFAULT_BUDGET }
    }
}

impl<T: Real> QuadConfig<T> {
    pub fn with_tol(rel_tol: T) -> Self {
        QuadConfig { rel_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    /// Sum of the local Richardson error estimates.
    pub error_estimate: T,
    pub intervals: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    eps: T,
    depth: u32,
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

/// Integrates a fallible integrand over `[a, b]`.
pub fn integrate_fallible<T, F>(mut f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(cfg.rel_tol > T::zero()) {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    if a == b {
        return Ok(Integral { value: T::zero(), error_estimate: T::zero(), intervals: 0 });
    }
    if b < a {
        let r = integrate_fallible(f, b, a, cfg)?;
        return Ok(Integral { value: -r.value, ..r });
    }
    let two = T::lit(2.0);
    let fifteen = T::lit(15.0);

    // Magnitude scout on a uniform grid so the absolute target is relative.
    let scout_panels = 32;
    let h = (b - a) / T::int(scout_panels);
    let mut scout = T::zero();
    let mut nodes = Vec::with_capacity(2 * scout_panels as usize + 1);
    for i in 0..=(2 * scout_panels) {
        let x = a + h * T::int(i) / two;
        nodes.push(f(x)?);
    }
    for i in 0..scout_panels as usize {
        scout = scout + h / T::lit(6.0) * (nodes[2 * i] + T::lit(4.0) * nodes[2 * i + 1] + nodes[2 * i + 2]).abs();
    }
    let eps_total = if scout > T::zero() { cfg.rel_tol * scout } else { cfg.rel_tol };

    let mut stack = Vec::new();
    let fm0 = nodes[scout_panels as usize];
    let (fa0, fb0) = (nodes[0], nodes[2 * scout_panels as usize]);
    stack.push(Panel { a, b, fa: fa0, fm: fm0, fb: fb0, whole: simpson(a, b, fa0, fm0, fb0), eps: eps_total, depth: 0 });

    let mut value = T::zero();
    let mut error_estimate = T::zero();
    let mut intervals = 0usize;
    while let Some(p) = stack.pop() {
        intervals += 1;
        if intervals > cfg.budget {
            return Err(Error::Convergence { intervals, estimate: error_estimate.to_f64_lossy() });
        }
        let m = (p.a + p.b) / two;
        let lm = (p.a + m) / two;
        let rm = (m + p.b) / two;
        let (flm, frm) = (f(lm)?, f(rm)?);
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let diff = left + right - p.whole;
        if !diff.is_finite() {
            return Err(Error::Convergence { intervals, estimate: f64::INFINITY });
        }
        if diff.abs() <= fifteen * p.eps {
            value = value + left + right + diff / fifteen;
            error_estimate = error_estimate + diff.abs() / fifteen;
        } else if p.depth >= MAX_DEPTH {
            return Err(Error::Convergence { intervals, estimate: (diff.abs() / fifteen).to_f64_lossy() });
        } else {
            let eps = p.eps / two;
            let depth = p.depth + 1;
            stack.push(Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right, eps, depth });
            stack.push(Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left, eps, depth });
        }
    }
    Ok(Integral { value, error_estimate, intervals })
}

pub fn integrate<T, F>(f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_fallible(|x| Ok(f(x)), a, b, cfg)
}

/// Iterated integral over the rectangle `[x0, x1] x [y0, y1]`, inner in `y`.
pub fn integrate_2d<T, F>(f: F, (x0, x1): (T, T), (y0, y1): (T, T), cfg: &QuadConfig<T>) -> Result<Integral<T>>
where
    T: Real,
    F: Fn(T, T) -> T,
{
    let mut inner_intervals = 0;
    let mut outer = integrate_fallible(
        |x| {
            let inner = integrate(|y| f(x, y), y0, y1, cfg)?;
            inner_intervals += inner.intervals;
            Ok(inner.value)
        },
        x0,
        x1,
        cfg,
    )?;
    outer.intervals += inner_intervals;
    Ok(outer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let cfg = QuadConfig::<f64>::default();
        let r = integrate(|x| x * x * x - 2.0 * x, 0.0, 3.0, &cfg).unwrap();
        assert!((r.value - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn reversed_and_empty_ranges() {
        let cfg = QuadConfig::<f64>::default();
        let r = integrate(f64::exp, 1.0, 0.0, &cfg).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-9);
        assert_eq!(integrate(f64::exp, 2.0, 2.0, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn relative_tolerance_is_met() {
        let cfg = QuadConfig::with_tol(1e-10);
        let r = integrate(|x: f64| 1.0 / (1.0 + x * x), 0.0, 1.0, &cfg).unwrap();
        assert!(((r.value - std::f64::consts::FRAC_PI_4) / std::f64::consts::FRAC_PI_4).abs() < 1e-10);
        assert!(r.error_estimate < 1e-10);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadConfig { rel_tol: 1e-12, budget: 10 };
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &cfg).unwrap_err();
        assert!(err.is_convergence());
    }

    #[test]
    fn singular_integrand_fails_cleanly() {
        let cfg = QuadConfig::<f64>::default();
        let err = integrate(|x: f64| 1.0 / x, 0.0, 1.0, &cfg).unwrap_err();
        assert!(err.is_convergence());
        assert!(integrate(|x: f64| x, 0.0, 1.0, &QuadConfig { rel_tol: 0.0, budget: 10 }).is_err());
    }

    #[test]
    fn two_dimensional() {
        let cfg = QuadConfig::<f64>::default();
        let r = integrate_2d(|x, y| x * y.cos(), (0.0, 2.0), (0.0, 1.0), &cfg).unwrap();
        assert!((r.value - 2.0 * 1f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn single_precision() {
        let cfg = QuadConfig::<f32>::with_tol(1e-5);
        let r = integrate(|x: f32| x.sin(), 0.0, std::f32::consts::PI, &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-4);
    }
}
