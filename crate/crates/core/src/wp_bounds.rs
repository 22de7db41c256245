//! Weil-Petersson translation-length bounds.
//!
//! Every bound here is an upper bound on `||phi||_wp` obtained by integrating
//! the norm of a tangent field along one period `[0, L]` of an invariant path,
//! `L = ||phi||_T`. The flat (singular-solv) path has constant squared norm
//! `2 pi |chi|`; a twisted monodromy adds at most `3|chi|/2` glued solid tori,
//! each contributing at most `8 rho pi / h^2`.

use serde::Serialize;

use crate::annulus::{balance_data, h_min};
use crate::error::{Error, Result};
use crate::exactnum::{ratio, QuadExt};
use crate::families::LeafwiseFamily;
use crate::flat_surface::{eigen_slopes, entropy_cone_bound, genus2_example, Slope};
use crate::quadrature::{integrate_fallible, QuadConfig};
use crate::real::Real;

/// Twisting coefficient of the genus-2 example curve.
pub const FAMILY_TAU: i64 = 11;
/// Rounded value of `4 ln(lambda)` quoted for the genus-2 example.
pub const ENTROPY_CEILING: f64 = 14.95;
/// Normalized WP length reached by the genus-2 family.
pub const FAMILY_L: f64 = 124.0;
pub const DEFAULT_MAX_GENUS: u32 = 10;

fn abs_chi(chi: i64) -> Result<i64> {
    if chi >= 0 {
        return Err(Error::domain(format!("Euler characteristic must be negative, got {chi}")));
    }
    Ok(-chi)
}

/// `L sqrt(2 pi |chi|)`.
pub fn linch_bound<T: Real>(teich_length: T, chi: i64) -> Result<T> {
    let n = abs_chi(chi)?;
    if teich_length < T::zero() {
        return Err(Error::domain(format!("Teichmuller length must be nonnegative, got {teich_length}")));
    }
    Ok(teich_length * (T::lit(2.0) * T::PI() * T::int(n)).sqrt())
}

/// `(3/2) sqrt(2 pi |chi|) wp_upper`, a volume bound for the mapping torus.
pub fn volume_upper<T: Real>(chi: i64, wp_upper: T) -> Result<T> {
    let n = abs_chi(chi)?;
    if wp_upper < T::zero() {
        return Err(Error::domain(format!("WP length bound must be nonnegative, got {wp_upper}")));
    }
    Ok(T::lit(1.5) * (T::lit(2.0) * T::PI() * T::int(n)).sqrt() * wp_upper)
}

/// Membership of the normalized length `sqrt|chi| * wp_upper` below `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiMembership<T> {
    pub member: bool,
    pub normalized: T,
}

pub fn in_phi<T: Real>(l: T, chi: i64, wp_upper: T) -> PhiMembership<T> {
    let normalized = T::int(chi.abs()).sqrt() * wp_upper;
    PhiMembership { member: normalized <= l, normalized }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentKind<T> {
    /// Constant squared norm, e.g. `2 pi |chi|` for the flat structure.
    SolvConstant { area: T },
    Family { family: LeafwiseFamily<T> },
    /// Base area plus the integrands of several solid tori.
    Sum { base_area: T, families: Vec<LeafwiseFamily<T>> },
}

/// One piece `[lo, hi]` of the period; families are entered at their own
/// interval start and run at unit speed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment<T> {
    pub lo: T,
    pub hi: T,
    pub kind: SegmentKind<T>,
}

/// Fiberwise squared tangent-field norm over one period `[0, L]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrandModel<T> {
    segments: Vec<Segment<T>>,
}

fn same_length<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(1e-12) * a.abs().max(T::one())
}

impl<T: Real> IntegrandModel<T> {
    pub fn new(segments: Vec<Segment<T>>) -> Result<Self> {
        let Some(first) = segments.first() else {
            return Err(Error::domain("integrand model needs at least one segment"));
        };
        if first.lo != T::zero() {
            return Err(Error::domain(format!("first segment must start at 0, got {}", first.lo)));
        }
        for pair in segments.windows(2) {
            if pair[0].hi != pair[1].lo {
                return Err(Error::domain(format!("segments leave a gap or overlap at {}", pair[0].hi)));
            }
        }
        for seg in &segments {
            if !(seg.hi > seg.lo) {
                return Err(Error::domain(format!("empty segment [{}, {}]", seg.lo, seg.hi)));
            }
            let families: &[LeafwiseFamily<T>] = match &seg.kind {
                SegmentKind::SolvConstant { area } | SegmentKind::Sum { base_area: area, .. }
                    if *area < T::zero() =>
                {
                    return Err(Error::domain(format!("negative base area {area}")));
                }
                SegmentKind::SolvConstant { .. } => &[],
                SegmentKind::Family { family } => std::slice::from_ref(family),
                SegmentKind::Sum { families, .. } => families,
            };
            if let Some(f) = families.iter().find(|f| !same_length(f.len(), seg.hi - seg.lo)) {
                return Err(Error::domain(format!(
                    "family interval length {} does not match segment length {}",
                    f.len(),
                    seg.hi - seg.lo
                )));
            }
        }
        Ok(IntegrandModel { segments })
    }

    /// Constant flat integrand `2 pi |chi|` over `[0, L]`.
    pub fn solv(teich_length: T, chi: i64) -> Result<Self> {
        let area = T::lit(2.0) * T::PI() * T::int(abs_chi(chi)?);
        Self::new(vec![Segment { lo: T::zero(), hi: teich_length, kind: SegmentKind::SolvConstant { area } }])
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn period(&self) -> T {
        self.segments.last().expect("nonempty").hi
    }

    fn segment_integrand(seg: &Segment<T>, u: T) -> Result<T> {
        let at = |f: &LeafwiseFamily<T>| {
            let s = (f.interval().0 + (u - seg.lo)).min(f.interval().1);
            f.integrand(s)
        };
        match &seg.kind {
            SegmentKind::SolvConstant { area } => Ok(*area),
            SegmentKind::Family { family } => at(family),
            SegmentKind::Sum { base_area, families } => {
                families.iter().try_fold(*base_area, |acc, f| Ok(acc + at(f)?))
            }
        }
    }

    /// Squared tangent-field norm at time `u`.
    pub fn integrand(&self, u: T) -> Result<T> {
        let seg = self
            .segments
            .iter()
            .find(|s| u >= s.lo && u <= s.hi)
            .ok_or_else(|| Error::domain(format!("time {u} outside [0, {}]", self.period())))?;
        Self::segment_integrand(seg, u)
    }
}

/// `integral_0^L sqrt(integrand(t)) dt`, an upper bound on the WP length.
pub fn length_bound_eval<T: Real>(model: &IntegrandModel<T>, cfg: &QuadConfig<T>) -> Result<T> {
    model.segments.iter().try_fold(T::zero(), |acc, seg| {
        let piece = integrate_fallible(
            |u| IntegrandModel::segment_integrand(seg, u).map(|v| v.sqrt()),
            seg.lo,
            seg.hi,
            cfg,
        )?;
        Ok(acc + piece.value)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams<T> {
    pub chi: i64,
    pub tau: i64,
    pub teich_length: T,
    /// `1` stands for the `rho -> 1` limit.
    pub rho: T,
    pub h_min: T,
    pub h_constructed: T,
    /// `2 pi (1 + 6 / h_min^2)`.
    pub c: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport<T> {
    pub linch: T,
    pub twisted_safe: T,
    pub twisted_constructed: T,
    pub twistbound_rho: T,
    pub normalized: T,
    pub volume_upper: T,
    pub params: BoundParams<T>,
}

fn twisted_value<T: Real>(teich_length: T, n: i64, h: T) -> T {
    teich_length * (T::lit(2.0) * T::PI() * T::int(n) * (T::one() + T::lit(6.0) / (h * h))).sqrt()
}

/// `L sqrt(2 pi |chi| + (8 rho pi / h^2)(3/2)|chi|)`.
pub fn twistbound_rho<T: Real>(teich_length: T, chi: i64, h: T, rho: T) -> Result<T> {
    let n = T::int(abs_chi(chi)?);
    let per_torus = T::lit(8.0) * rho * T::PI() / (h * h);
    Ok(teich_length * (T::lit(2.0) * T::PI() * n + per_torus * T::lit(1.5) * n).sqrt())
}

/// Bounds for `||T_alpha^k phi||_wp`, uniform in `k`. `rho = 1` evaluates
/// the `rho -> 1` limit.
pub fn twisted_bound<T: Real>(teich_length: T, chi: i64, tau: i64, rho: T) -> Result<BoundReport<T>> {
    let n = abs_chi(chi)?;
    if !(teich_length > T::zero()) {
        return Err(Error::domain(format!("Teichmuller length must be positive, got {teich_length}")));
    }
    if !(rho >= T::one()) {
        return Err(Error::domain(format!("rho must be at least 1, got {rho}")));
    }
    let h_floor = h_min::<T>(tau)?;
    let h_built = balance_data::<T>(tau)?.h;
    let twisted_safe = twisted_value(teich_length, n, h_floor);
    Ok(BoundReport {
        linch: linch_bound(teich_length, chi)?,
        twisted_safe,
        twisted_constructed: twisted_value(teich_length, n, h_built),
        twistbound_rho: twistbound_rho(teich_length, chi, h_floor, rho)?,
        normalized: T::int(n).sqrt() * twisted_safe,
        volume_upper: volume_upper(chi, twisted_safe)?,
        params: BoundParams {
            chi,
            tau,
            teich_length,
            rho,
            h_min: h_floor,
            h_constructed: h_built,
            c: T::lit(2.0) * T::PI() * (T::one() + T::lit(6.0) / (h_floor * h_floor)),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check<T> {
    pub name: String,
    pub value: T,
    pub threshold: T,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenusRow<T> {
    pub genus: u32,
    pub chi: i64,
    /// `4 ln(lambda) / |chi|`.
    pub teich_bound: T,
    /// `sqrt(c) 4 ln(lambda) / sqrt|chi|`.
    pub wp_bound: T,
    /// `124 / sqrt|chi|`.
    pub wp_ceiling: T,
    pub normalized: T,
    pub in_phi: bool,
}

/// Reproduction of the genus-`g` family with bounded normalized WP length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenusFamilyReport<T> {
    pub lambda: QuadExt,
    pub lambda_float: f64,
    pub lambda_error: f64,
    pub expanding_slope: Slope,
    pub contracting_slope: Slope,
    pub tau: i64,
    pub four_log_lambda: T,
    pub h: T,
    pub c: T,
    /// `sqrt(c) * 4 ln(lambda)`.
    pub normalized_wp: T,
    /// `sqrt(c) * 14.95`.
    pub normalized_wp_rounded: T,
    pub checks: Vec<Check<T>>,
    pub genus_table: Vec<GenusRow<T>>,
}

impl<T> GenusFamilyReport<T> {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn slope_check<T: Real>(name: &str, slope: &Slope, threshold: QuadExt) -> Result<Check<T>> {
    let s = slope.finite().ok_or_else(|| Error::domain(format!("{name}: eigenline is vertical")))?;
    Ok(Check {
        name: name.to_string(),
        value: s.to_real(),
        threshold: threshold.to_real(),
        pass: s.try_cmp(&threshold)?.is_le(),
    })
}

pub fn genus_family_report<T: Real>(max_genus: u32) -> Result<GenusFamilyReport<T>> {
    if max_genus < 2 {
        return Err(Error::domain(format!("genus table needs max genus >= 2, got {max_genus}")));
    }
    let example = genus2_example();
    let lambda = example.lambda.clone();
    let approx = lambda.to_f64_bounded();
    let (up, down) = eigen_slopes(&example.matrix)?;

    let four_log_lambda = entropy_cone_bound::<T>(&lambda, -4)?.normalized;
    let h = h_min::<T>(FAMILY_TAU)?;
    let c = T::lit(2.0) * T::PI() * (T::one() + T::lit(6.0) / (h * h));
    let normalized_wp = c.sqrt() * four_log_lambda;
    let normalized_wp_rounded = c.sqrt() * T::lit(ENTROPY_CEILING);
    let l = T::lit(FAMILY_L);

    let checks = vec![
        slope_check("expanding slope <= 1/2", &up, QuadExt::rational(ratio(1, 2)))?,
        slope_check("contracting slope <= -20", &down, QuadExt::from_int(-20))?,
        Check {
            name: "4 ln(lambda) <= 14.95".into(),
            value: four_log_lambda,
            threshold: T::lit(ENTROPY_CEILING),
            pass: four_log_lambda <= T::lit(ENTROPY_CEILING),
        },
        Check {
            name: "sqrt(c) * 4 ln(lambda) <= 124".into(),
            value: normalized_wp,
            threshold: l,
            pass: normalized_wp <= l,
        },
        Check {
            name: "sqrt(c) * 14.95 <= 124".into(),
            value: normalized_wp_rounded,
            threshold: l,
            pass: normalized_wp_rounded <= l,
        },
    ];

    let genus_table = (2..=max_genus)
        .map(|genus| {
            let chi = 2 - 2 * i64::from(genus);
            let n = T::int(-chi);
            let wp_bound = normalized_wp / n.sqrt();
            let membership = in_phi(l, chi, wp_bound);
            GenusRow {
                genus,
                chi,
                teich_bound: four_log_lambda / n,
                wp_bound,
                wp_ceiling: l / n.sqrt(),
                normalized: membership.normalized,
                in_phi: membership.member,
            }
        })
        .collect();

    Ok(GenusFamilyReport {
        lambda,
        lambda_float: approx.value,
        lambda_error: approx.error,
        expanding_slope: up,
        contracting_slope: down,
        tau: FAMILY_TAU,
        four_log_lambda,
        h,
        c,
        normalized_wp,
        normalized_wp_rounded,
        checks,
        genus_table,
    })
}
