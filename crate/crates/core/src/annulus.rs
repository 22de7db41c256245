//! Euclidean and hyperbolic geometry of flat annuli.
//!
//! An annulus of modulus `2m` is the strip `|y| < m` modulo `z -> z + 1`.
//! Its complete hyperbolic density is `pi/(2m) sec(pi y / 2m)`, obtained by
//! mapping the strip to the upper half plane with `z -> i exp(pi z / 2m)`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, ratio, QuadExt, Rational};
use crate::quadrature::{integrate, integrate_2d, QuadConfig};
use crate::real::Real;

/// Smallest twisting coefficient for which a good solid torus exists.
pub const MIN_TAU: i64 = 9;

fn positive_modulus<T: Real>(m: T) -> Result<()> {
    if m > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(format!("modulus must be positive, got {m}")))
    }
}

/// Hyperbolic density of the strip `|y| < m`.
pub fn hyp_density<T: Real>(y: T, m: T) -> Result<T> {
    positive_modulus(m)?;
    if y.abs() >= m {
        return Err(Error::domain(format!("point y = {y} lies outside the strip |y| < {m}")));
    }
    let scale = T::PI() / (T::lit(2.0) * m);
    Ok(scale / (scale * y).cos())
}

/// Hyperbolic area `pi/m` of the middle sub-annulus `|y| <= m/2`.
pub fn middle_area_closed<T: Real>(m: T) -> Result<T> {
    positive_modulus(m)?;
    Ok(T::PI() / m)
}

/// Same area by iterated quadrature of the squared density over the
/// fundamental domain `[0, 1] x [-m/2, m/2]`.
pub fn middle_area_quadrature<T: Real>(m: T, cfg: &QuadConfig<T>) -> Result<T> {
    positive_modulus(m)?;
    let half = m / T::lit(2.0);
    let scale = T::PI() / (T::lit(2.0) * m);
    let density_sq = |_x: T, y: T| {
        let s = scale / (scale * y).cos();
        s * s
    };
    Ok(integrate_2d(density_sq, (T::zero(), T::one()), (-half, half), cfg)?.value)
}

/// Closed form `(pi/m) tan(a pi / 2)` for the sub-annulus `|y| <= a m`.
pub fn sub_annulus_area_closed<T: Real>(a: T, m: T) -> Result<T> {
    check_fraction(a)?;
    positive_modulus(m)?;
    Ok(T::PI() / m * (a * T::FRAC_PI_2()).tan())
}

fn check_fraction<T: Real>(a: T) -> Result<()> {
    if a > T::zero() && a < T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("strip fraction must lie in (0, 1), got {a}")))
    }
}

/// Hyperbolic area of the sub-annulus `|y| <= a m`, by quadrature in `y`.
pub fn sub_annulus_area<T: Real>(a: T, m: T, cfg: &QuadConfig<T>) -> Result<T> {
    check_fraction(a)?;
    positive_modulus(m)?;
    let scale = T::PI() / (T::lit(2.0) * m);
    let density_sq = |y: T| {
        let s = scale / (scale * y).cos();
        s * s
    };
    Ok(integrate(density_sq, -a * m, a * m, cfg)?.value)
}

/// Modulus `m0 / cosh(2t)` of a flat annulus flowed for time `t` from balance.
pub fn solv_modulus_flow<T: Real>(m0: T, t: T) -> Result<T> {
    positive_modulus(m0)?;
    Ok(m0 / (T::lit(2.0) * t).cosh())
}

/// Beltrami-coefficient norm `tanh(2h)` of the time-`2h` Teichmuller map.
pub fn qc_dilatation_norm<T: Real>(h: T) -> Result<T> {
    if h < T::zero() {
        return Err(Error::domain(format!("flow half-length must be nonnegative, got {h}")));
    }
    Ok((T::lit(2.0) * h).tanh())
}

/// Beltrami-coefficient norm `|r| / sqrt(r^2 + 4)` of the shear `x + iy -> x + ry + iy`.
pub fn shear_beltrami_norm<T: Real>(r: T) -> T {
    r.abs() / (r * r + T::lit(4.0)).sqrt()
}

/// Guaranteed half-length floor `acosh(tau/2 - 3) / 2`.
pub fn h_min<T: Real>(tau: i64) -> Result<T> {
    check_tau(tau)?;
    Ok((T::int(tau) / T::lit(2.0) - T::lit(3.0)).acosh() / T::lit(2.0))
}

fn check_tau(tau: i64) -> Result<()> {
    if tau < MIN_TAU {
        return Err(Error::hypothesis(format!(
            "twisting coefficient tau_alpha = {tau}; the construction requires tau_alpha >= {MIN_TAU}"
        )));
    }
    Ok(())
}

/// Invariants of the flat solid torus about a curve with twisting `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceData<T> {
    pub tau: i64,
    /// Modulus at balance time, `sqrt(n^2 + 1)`.
    pub m0: QuadExt,
    /// `n = sqrt(m0^2 - 1)`, an integer.
    pub root: i64,
    pub h: T,
    /// Relative twist `2n` (positive representative).
    pub r: i64,
    pub qc_norm: T,
}

pub fn balance_data<T: Real>(tau: i64) -> Result<BalanceData<T>> {
    check_tau(tau)?;
    // floor(sqrt(x)) = isqrt(floor(x)) for rational x >= 0
    let shifted = ratio(tau, 2) - int(2);
    let x: Rational = &shifted * &shifted - int(1);
    let n: BigInt = x.floor().to_integer().sqrt();
    let root = n.to_i64().ok_or_else(|| Error::domain("twisting coefficient too large"))?;
    let m0 = QuadExt::sqrt_of((&n * &n + 1u32).to_biguint().expect("positive"));
    let m0_f: T = m0.to_real();
    let h = m0_f.acosh() / T::lit(2.0);
    Ok(BalanceData { tau, m0, root, h, r: 2 * root, qc_norm: T::int(root) / m0_f })
}

impl<T: Real> BalanceData<T> {
    /// Exact check of `tau/2 - 3 <= m0 <= tau/2 - 2`.
    pub fn bracket_holds(&self) -> bool {
        let lo = QuadExt::rational(ratio(self.tau, 2) - int(3));
        let hi = QuadExt::rational(ratio(self.tau, 2) - int(2));
        let ge = |x: &QuadExt, y: &QuadExt| x.try_cmp(y).map(|o| o.is_ge()).unwrap_or(false);
        ge(&self.m0, &lo) && ge(&hi, &self.m0)
    }

    /// Exact check that `m0^2 - 1` is the square of the stored integer root.
    pub fn root_is_exact(&self) -> bool {
        let sq = self.m0.checked_mul(&self.m0).ok();
        let n = QuadExt::from_int(self.root);
        sq.and_then(|s| s.checked_sub(&QuadExt::one()).ok()) == n.checked_mul(&n).ok()
    }
}
