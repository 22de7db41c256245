//! Mapping tori and fibered Dehn surgery bookkeeping.
//!
//! Monodromies are words `T_{c1}^{n1} ... T_{ck}^{nk} phi`: a freely reduced
//! twist prefix followed by the base pseudo-Anosov. Filling the torus drilled
//! about a marked curve with parameter `k` prepends `T_alpha^{k - r}`, where `r`
//! is the relative twist of the flat solid torus about that curve.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annulus::{balance_data, BalanceData};
use crate::error::{Error, Result};
use crate::families::{free_reduce, Twist, TwistLedger};
use crate::real::Real;
use crate::wp_bounds::{twisted_bound, BoundReport};

pub const DEFAULT_BASE: &str = "phi";

/// A curve in the fiber with its twisting coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMarkedCurve<T>", bound = "T: Real + Serialize + for<'a> Deserialize<'a>")]
pub struct MarkedCurve<T> {
    label: String,
    tau: i64,
    balance: BalanceData<T>,
    /// Free-form tag such as "level" or "transverse".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    role: Option<String>,
}

#[derive(Deserialize)]
struct RawMarkedCurve<T> {
    label: String,
    tau: i64,
    #[serde(default = "Option::default")]
    balance: Option<BalanceData<T>>,
    #[serde(default)]
    role: Option<String>,
}

impl<T: Real> TryFrom<RawMarkedCurve<T>> for MarkedCurve<T> {
    type Error = Error;
    fn try_from(raw: RawMarkedCurve<T>) -> Result<Self> {
        let curve = MarkedCurve::new(raw.label, raw.tau)?.with_role(raw.role);
        if let Some(b) = raw.balance {
            if b.m0 != curve.balance.m0 || b.r != curve.balance.r {
                return Err(Error::domain(format!(
                    "stored balance data for {:?} does not match tau = {}",
                    curve.label, curve.tau
                )));
            }
        }
        Ok(curve)
    }
}

impl<T: Real> MarkedCurve<T> {
    pub fn new(label: impl Into<String>, tau: i64) -> Result<Self> {
        Ok(MarkedCurve { label: label.into(), tau, balance: balance_data(tau)?, role: None })
    }

    pub fn with_role(mut self, role: Option<String>) -> Self {
        self.role = role;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tau(&self) -> i64 {
        self.tau
    }

    pub fn balance(&self) -> &BalanceData<T> {
        &self.balance
    }

    pub fn role(&self) -> Option<&str> {
        self.role.as_deref()
    }
}

/// A monodromy word: twist letters and powers of the base map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonodromyWord {
    letters: Vec<Twist>,
    base: String,
}

impl MonodromyWord {
    pub fn new(letters: impl IntoIterator<Item = Twist>, base: impl Into<String>) -> Self {
        MonodromyWord { letters: free_reduce(letters), base: base.into() }
    }

    pub fn from_prefix(prefix: &TwistLedger, base: &str) -> Self {
        let letters = prefix.entries().iter().cloned().chain([Twist::new(base, 1)]);
        Self::new(letters, base)
    }

    pub fn letters(&self) -> &[Twist] {
        &self.letters
    }

    /// Free reduction with the first and last letters also merged.
    pub fn cyclically_reduced(&self) -> Vec<Twist> {
        let mut w = self.letters.clone();
        while w.len() >= 2 && w[0].label == w[w.len() - 1].label {
            let last = w.pop().expect("len >= 2");
            w[0].power += last.power;
            w = free_reduce(w);
        }
        w
    }

    /// Equality up to cyclic rotation, i.e. conjugacy by a subword.
    pub fn cyclically_equal(&self, other: &MonodromyWord) -> bool {
        let a = self.cyclically_reduced();
        let b = other.cyclically_reduced();
        if a.len() != b.len() {
            return false;
        }
        a.is_empty() || (0..a.len()).any(|shift| a.iter().cycle().skip(shift).take(a.len()).eq(b.iter()))
    }
}

impl fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|t| match (t.label == self.base, t.power) {
                (true, 1) => self.base.clone(),
                (true, p) => format!("{}^{p}", self.base),
                (false, _) => t.to_string(),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Normal form of a word: adjacent equal labels merged, zero powers removed.
pub fn ledger_reduce(word: &MonodromyWord) -> MonodromyWord {
    MonodromyWord::new(word.letters.clone(), word.base.clone())
}

/// Mapping torus of `prefix . phi` with marked curves in the fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMappingTorus<T>", bound = "T: Real + Serialize + for<'a> Deserialize<'a>")]
pub struct MappingTorus<T> {
    fiber_chi: i64,
    base: String,
    monodromy: TwistLedger,
    curves: Vec<MarkedCurve<T>>,
    teich_length: T,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real + Serialize + for<'a> Deserialize<'a>")]
struct RawMappingTorus<T> {
    fiber_chi: i64,
    #[serde(default = "default_base")]
    base: String,
    #[serde(default)]
    monodromy: TwistLedger,
    curves: Vec<MarkedCurve<T>>,
    teich_length: T,
}

fn default_base() -> String {
    DEFAULT_BASE.to_string()
}

impl<T: Real> TryFrom<RawMappingTorus<T>> for MappingTorus<T> {
    type Error = Error;
    fn try_from(raw: RawMappingTorus<T>) -> Result<Self> {
        let torus = MappingTorus::new(raw.fiber_chi, raw.teich_length, raw.curves)?;
        Ok(MappingTorus { base: raw.base, monodromy: raw.monodromy, ..torus })
    }
}

impl<T: Real> MappingTorus<T> {
    pub fn new(fiber_chi: i64, teich_length: T, curves: Vec<MarkedCurve<T>>) -> Result<Self> {
        if fiber_chi > -2 {
            return Err(Error::domain(format!("fiber Euler characteristic must be <= -2, got {fiber_chi}")));
        }
        if !(teich_length > T::zero()) {
            return Err(Error::domain(format!("Teichmuller translation length must be positive, got {teich_length}")));
        }
        Ok(MappingTorus { fiber_chi, base: default_base(), monodromy: TwistLedger::empty(), curves, teich_length })
    }

    pub fn fiber_chi(&self) -> i64 {
        self.fiber_chi
    }

    pub fn teich_length(&self) -> T {
        self.teich_length
    }

    pub fn monodromy(&self) -> &TwistLedger {
        &self.monodromy
    }

    pub fn curves(&self) -> &[MarkedCurve<T>] {
        &self.curves
    }

    pub fn curve(&self, label: &str) -> Result<&MarkedCurve<T>> {
        self.curves.iter().find(|c| c.label == label).ok_or_else(|| Error::UnknownCurve(label.to_string()))
    }

    pub fn word(&self) -> MonodromyWord {
        MonodromyWord::from_prefix(&self.monodromy, &self.base)
    }

    /// Fill the solid torus drilled about `label` with parameter `k`.
    /// The monodromy gains `T_label^{k - r}`; the input is left untouched.
    pub fn surger(&self, label: &str, k: i64) -> Result<MappingTorus<T>> {
        let r = self.curve(label)?.balance.r;
        let monodromy = TwistLedger::single(label, k - r).compose(&self.monodromy);
        Ok(MappingTorus { monodromy, ..self.clone() })
    }

    /// Bounds on the WP translation length of any filling along `label`.
    pub fn bound_report(&self, label: &str, rho: T) -> Result<BoundReport<T>> {
        twisted_bound(self.teich_length, self.fiber_chi, self.curve(label)?.tau, rho)
    }
}

pub fn surger<T: Real>(torus: &MappingTorus<T>, curve_label: &str, k: i64) -> Result<MappingTorus<T>> {
    torus.surger(curve_label, k)
}
