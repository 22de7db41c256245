//! Leaf-wise conformal families on solid tori `A x J`, represented by the
//! squared norm of their tangent field, `s -> integral |mu_s sigma_s|^2`,
//! together with the Dehn twist they induce across the interval.
//!
//! * pinch: modulus `t` at time `t >= 1`, field `1/t` on the middle annulus;
//! * repar: the pinch family run at constant speed over `[0, h)`;
//! * twist: an affine shear of the middle sub-annulus of a modulus-`2m` annulus;
//! * glued: repar on `[-h, -eps_k]`, twist on `[-eps_k, eps_k]`, mirrored repar
//!   on `[eps_k, h]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annulus::middle_area_closed;
use crate::error::{Error, Result};
use crate::real::Real;

/// Label used for the core curve of a model annulus.
pub const CORE: &str = "core";
/// Label used for the drilled curve in surgery bookkeeping.
pub const ALPHA: &str = "alpha";

/// Margin by which the chosen half-modulus exceeds the twist threshold.
pub const MODULUS_MARGIN: f64 = 1.01;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twist {
    pub label: String,
    pub power: i64,
}

impl Twist {
    pub fn new(label: impl Into<String>, power: i64) -> Self {
        Twist { label: label.into(), power }
    }
}

/// Freely reduced product of Dehn twist powers, leftmost applied last.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Twist>", into = "Vec<Twist>")]
pub struct TwistLedger {
    entries: Vec<Twist>,
}

/// Sums adjacent powers of equal labels and drops zero powers.
pub fn free_reduce(entries: impl IntoIterator<Item = Twist>) -> Vec<Twist> {
    let mut out: Vec<Twist> = Vec::new();
    for t in entries {
        if t.power == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.label == t.label => {
                last.power += t.power;
                if last.power == 0 {
                    out.pop();
                }
            }
            _ => out.push(t),
        }
    }
    out
}

impl TwistLedger {
    pub fn new(entries: impl IntoIterator<Item = Twist>) -> Self {
        TwistLedger { entries: free_reduce(entries) }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(label: impl Into<String>, power: i64) -> Self {
        Self::new([Twist::new(label, power)])
    }

    pub fn entries(&self) -> &[Twist] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The word `self` followed by `rhs`.
    pub fn compose(&self, rhs: &TwistLedger) -> TwistLedger {
        Self::new(self.entries.iter().chain(&rhs.entries).cloned())
    }

    /// Net exponent of `label` across the word.
    pub fn total_power(&self, label: &str) -> i64 {
        self.entries.iter().filter(|t| t.label == label).map(|t| t.power).sum()
    }
}

impl From<Vec<Twist>> for TwistLedger {
    fn from(entries: Vec<Twist>) -> Self {
        Self::new(entries)
    }
}

impl From<TwistLedger> for Vec<Twist> {
    fn from(l: TwistLedger) -> Self {
        l.entries
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == 1 {
            write!(f, "T_{}", self.label)
        } else {
            write!(f, "T_{}^{}", self.label, self.power)
        }
    }
}

impl fmt::Display for TwistLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("id");
        }
        let words: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        f.write_str(&words.join(" "))
    }
}

fn check_pinch_time<T: Real>(t: T) -> Result<()> {
    if t >= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("pinching time must be >= 1, got {t}")))
    }
}

fn check_repar<T: Real>(s: T, h: T) -> Result<()> {
    if !(h > T::zero()) {
        return Err(Error::domain(format!("reparameterization length must be positive, got {h}")));
    }
    if s < T::zero() || s >= h {
        return Err(Error::domain(format!("parameter {s} outside [0, {h})")));
    }
    Ok(())
}

fn sqrt_8pi<T: Real>() -> T {
    (T::lit(8.0) * T::PI()).sqrt()
}

/// `2 pi / t^3`: field `1/t` on the middle annulus of `tA`, whose
/// hyperbolic area is `pi / (t/2)`.
pub fn pinch_integrand<T: Real>(t: T) -> Result<T> {
    check_pinch_time(t)?;
    Ok(middle_area_closed(t / T::lit(2.0))? / (t * t))
}

/// Arclength `sqrt(8 pi)(1 - t^-1/2)` of the pinch family from time 1 to `t`;
/// `t = inf` gives the total `sqrt(8 pi)`.
pub fn pinch_arclength<T: Real>(t: T) -> Result<T> {
    check_pinch_time(t)?;
    Ok(sqrt_8pi::<T>() * (T::one() - t.sqrt().recip()))
}

/// Inverse of [`pinch_arclength`]: `8 pi / (sqrt(8 pi) - s)^2`.
pub fn pinch_time_at_arclength<T: Real>(s: T) -> Result<T> {
    let total = sqrt_8pi::<T>();
    if s < T::zero() || s >= total {
        return Err(Error::domain(format!("arclength {s} outside [0, sqrt(8 pi))")));
    }
    let gap = total - s;
    Ok(T::lit(8.0) * T::PI() / (gap * gap))
}

/// Constant-speed reparameterization `g : [0, h) -> [1, inf)`.
pub fn repar_map<T: Real>(s: T, h: T) -> Result<T> {
    check_repar(s, h)?;
    // pinch_time_at_arclength(sqrt(8 pi) s / h) = (1 - s/h)^-2
    let gap = T::one() - s / h;
    Ok((gap * gap).recip())
}

/// `g'(s) = 2 g(s)^{3/2} / h`.
pub fn repar_derivative<T: Real>(s: T, h: T) -> Result<T> {
    let g = repar_map(s, h)?;
    Ok(T::lit(2.0) * g * g.sqrt() / h)
}

/// Pulled-back integrand `g'(s)^2 * pinch_integrand(g(s))`, identically `8 pi / h^2`.
pub fn repar_integrand<T: Real>(s: T, h: T) -> Result<T> {
    let g = repar_map(s, h)?;
    let dg = repar_derivative(s, h)?;
    Ok(dg * dg * pinch_integrand(g)?)
}

fn check_twist<T: Real>(eps: T, other: T, what: &str) -> Result<()> {
    if !(eps > T::zero()) {
        return Err(Error::domain(format!("twist half-width must be positive, got {eps}")));
    }
    if !(other > T::zero()) {
        return Err(Error::domain(format!("{what} must be positive, got {other}")));
    }
    Ok(())
}

/// Half-modulus `m_k = cbrt(k^2 pi / (16 delta eps^2))` above which the
/// twisting integrand stays below `delta`.
pub fn twist_threshold<T: Real>(k: i64, eps: T, delta: T) -> Result<T> {
    check_twist(eps, delta, "integrand bound delta")?;
    let k = T::int(k);
    Ok((k * k * T::PI() / (T::lit(16.0) * delta * eps * eps)).cbrt())
}

/// `k^2 pi / (16 eps^2 m^3)`: shear field `c/2` with `c = k / (2 eps m)` on
/// the middle sub-annulus of a modulus-`2m` annulus.
pub fn twist_integrand<T: Real>(k: i64, eps: T, m: T) -> Result<T> {
    check_twist(eps, m, "half-modulus m")?;
    let c = T::int(k) / (T::lit(2.0) * eps * m);
    Ok(c * c / T::lit(4.0) * middle_area_closed(m)?)
}

/// The shear flow across `[-eps, eps]` is the `k`-th power of the core twist.
pub fn twist_flow_count(k: i64) -> TwistLedger {
    TwistLedger::single(CORE, k)
}

/// One admissible instantiation of the gluing constants for given `(k, h, rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlueParams<T> {
    pub k: i64,
    pub h: T,
    pub rho: T,
    /// Half-width of the model twist interval, `h (1 - rho^{-1/2})`.
    pub eps: T,
    /// Integrand ceiling `8 rho pi / h^2`.
    pub delta: T,
    /// Half-modulus used while twisting.
    pub m: T,
    /// Half-width of the twisting segment inside `[-h, h]`.
    pub eps_k: T,
}

pub fn glue_parameters<T: Real>(k: i64, h: T, rho: T) -> Result<GlueParams<T>> {
    if !(h > T::zero()) {
        return Err(Error::domain(format!("solid torus half-length must be positive, got {h}")));
    }
    if !(rho > T::one()) {
        return Err(Error::domain(format!("rho must exceed 1, got {rho}")));
    }
    let eps = h * (T::one() - rho.sqrt().recip());
    let delta = T::lit(8.0) * rho * T::PI() / (h * h);
    let m_k = twist_threshold(k, eps, delta)?;
    let m = T::lit(MODULUS_MARGIN) * m_k.max(T::one());
    // smallest eps_k whose pinch-side modulus reaches 2m
    let eps_k = eps + (h - eps) / (T::lit(2.0) * m).sqrt();
    let params = GlueParams { k, h, rho, eps, delta, m, eps_k };
    params.validate()?;
    Ok(params)
}

impl<T: Real> GlueParams<T> {
    /// Checks `0 < eps < eps_k < h`, `h^2 <= rho (h - eps)^2` and `m > m_k`.
    pub fn validate(&self) -> Result<()> {
        let slack = T::one() + T::lit(1e-12);
        let gap = self.h - self.eps;
        let ok = self.eps > T::zero()
            && self.eps < self.eps_k
            && self.eps_k < self.h
            && self.h * self.h <= self.rho * gap * gap * slack
            && self.m > twist_threshold(self.k, self.eps, self.delta)?;
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("inconsistent gluing parameters {self:?}")))
        }
    }

    fn pinch_length(&self) -> T {
        self.h - self.eps
    }

    /// Distance `s' = h - |s|` into the pinch segment, if `s` lies on one.
    fn pinch_offset(&self, s: T) -> Option<T> {
        (s.abs() >= self.eps_k).then(|| self.h - s.abs())
    }

    fn check(&self, s: T) -> Result<()> {
        if s.abs() > self.h || s.is_nan() {
            return Err(Error::domain(format!("parameter {s} outside [-{0}, {0}]", self.h)));
        }
        Ok(())
    }
}

/// Piecewise integrand of the glued family at `s in [-h, h]`.
pub fn glued_integrand<T: Real>(s: T, p: &GlueParams<T>) -> Result<T> {
    p.check(s)?;
    match p.pinch_offset(s) {
        Some(offset) => repar_integrand(offset, p.pinch_length()),
        None => {
            // pulled back along the affine map [-eps_k, eps_k] -> [-eps, eps]
            let slope = p.eps / p.eps_k;
            Ok(slope * slope * twist_integrand(p.k, p.eps, p.m)?)
        }
    }
}

/// Modulus of the annulus over `s` in the glued family.
pub fn glued_modulus<T: Real>(s: T, p: &GlueParams<T>) -> Result<T> {
    p.check(s)?;
    match p.pinch_offset(s) {
        Some(offset) => repar_map(offset, p.pinch_length()),
        None => Ok(T::lit(2.0) * p.m),
    }
}

/// Net twist after gluing the `k`-twisting torus in place of a flat torus
/// whose own return map twists by `r`.
pub fn glued_twist_composition(k: i64, r: i64) -> TwistLedger {
    TwistLedger::single(ALPHA, k).compose(&TwistLedger::single(ALPHA, -r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyKind<T> {
    Pinch,
    Repar { h: T },
    Twist { k: i64, eps: T, m: T, delta: T },
    Glued(GlueParams<T>),
}

/// A leaf-wise conformal family over a closed parameter interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeafwiseFamily<T> {
    pub kind: FamilyKind<T>,
    lo: T,
    hi: T,
}

impl<T: Real> LeafwiseFamily<T> {
    /// Pinching over `[1, t_max]`.
    pub fn pinch(t_max: T) -> Result<Self> {
        check_pinch_time(t_max)?;
        Self::new(FamilyKind::Pinch, T::one(), t_max)
    }

    /// Reparameterized pinching over `[lo, hi]` with `0 <= lo <= hi < h`.
    pub fn repar(h: T, lo: T, hi: T) -> Result<Self> {
        check_repar(lo, h)?;
        check_repar(hi, h)?;
        Self::new(FamilyKind::Repar { h }, lo, hi)
    }

    /// Twisting over `[-eps, eps]`; requires `m > m_k(k, eps, delta)`.
    pub fn twist(k: i64, eps: T, m: T, delta: T) -> Result<Self> {
        let m_k = twist_threshold(k, eps, delta)?;
        if !(m > m_k) {
            return Err(Error::domain(format!("half-modulus {m} must exceed the threshold {m_k}")));
        }
        Self::new(FamilyKind::Twist { k, eps, m, delta }, -eps, eps)
    }

    pub fn glued(params: GlueParams<T>) -> Result<Self> {
        params.validate()?;
        Self::new(FamilyKind::Glued(params), -params.h, params.h)
    }

    fn new(kind: FamilyKind<T>, lo: T, hi: T) -> Result<Self> {
        if !(lo <= hi) || !hi.is_finite() {
            return Err(Error::domain(format!("empty or unbounded interval [{lo}, {hi}]")));
        }
        Ok(LeafwiseFamily { kind, lo, hi })
    }

    pub fn interval(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn len(&self) -> T {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    fn check(&self, s: T) -> Result<()> {
        if s < self.lo || s > self.hi || s.is_nan() {
            return Err(Error::domain(format!("parameter {s} outside [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }

    /// `integral |mu_s sigma_s|^2` over the annulus at parameter `s`.
    pub fn integrand(&self, s: T) -> Result<T> {
        self.check(s)?;
        match self.kind {
            FamilyKind::Pinch => pinch_integrand(s),
            FamilyKind::Repar { h } => repar_integrand(s, h),
            FamilyKind::Twist { k, eps, m, .. } => twist_integrand(k, eps, m),
            FamilyKind::Glued(ref p) => glued_integrand(s, p),
        }
    }

    pub fn modulus(&self, s: T) -> Result<T> {
        self.check(s)?;
        match self.kind {
            FamilyKind::Pinch => Ok(s),
            FamilyKind::Repar { h } => repar_map(s, h),
            FamilyKind::Twist { m, .. } => Ok(T::lit(2.0) * m),
            FamilyKind::Glued(ref p) => glued_modulus(s, p),
        }
    }

    /// Twist induced by the return map across the whole interval.
    pub fn twist_ledger(&self) -> TwistLedger {
        match self.kind {
            FamilyKind::Twist { k, .. } => twist_flow_count(k),
            FamilyKind::Glued(ref p) => twist_flow_count(p.k),
            FamilyKind::Pinch | FamilyKind::Repar { .. } => TwistLedger::empty(),
        }
    }

    /// `n + 1` equally spaced samples `(s, integrand)` over the interval.
    pub fn sample(&self, n: usize) -> Result<Vec<(T, T)>> {
        let n = n.max(1);
        (0..=n)
            .map(|i| {
                let s = if i == n { self.hi } else { self.lo + self.len() * T::int(i as i64) / T::int(n as i64) };
                self.integrand(s).map(|v| (s, v))
            })
            .collect()
    }
}
