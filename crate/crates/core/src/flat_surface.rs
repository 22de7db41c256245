//! Cylinder data of translation surfaces, affine multitwists and their
//! derivatives, and the exact dilatation of the genus-2 example.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, ratio, QuadExt, Rational};
use crate::real::Real;

mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exactnum::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "h", alias = "horizontal")]
    Horizontal,
    #[serde(rename = "v", alias = "vertical")]
    Vertical,
}

/// A Euclidean cylinder: `height` across, `circumference` along the core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCylinder", into = "RawCylinder")]
pub struct Cylinder {
    direction: Direction,
    height: Rational,
    circumference: Rational,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct RawCylinder {
    dir: Direction,
    #[serde(with = "rational_str")]
    height: Rational,
    #[serde(with = "rational_str")]
    circ: Rational,
    label: String,
}

impl TryFrom<RawCylinder> for Cylinder {
    type Error = Error;
    fn try_from(raw: RawCylinder) -> Result<Self> {
        Cylinder::new(raw.dir, raw.height, raw.circ, raw.label)
    }
}

impl From<Cylinder> for RawCylinder {
    fn from(c: Cylinder) -> Self {
        RawCylinder { dir: c.direction, height: c.height, circ: c.circumference, label: c.label }
    }
}

impl Cylinder {
    pub fn new(
        direction: Direction,
        height: Rational,
        circumference: Rational,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !height.is_positive() || !circumference.is_positive() {
            return Err(Error::domain(format!(
                "cylinder needs positive height and circumference, got {height} and {circumference}"
            )));
        }
        Ok(Cylinder { direction, height, circumference, label: label.into() })
    }

    pub fn horizontal(height: Rational, circumference: Rational, label: &str) -> Result<Self> {
        Self::new(Direction::Horizontal, height, circumference, label)
    }

    pub fn vertical(height: Rational, circumference: Rational, label: &str) -> Result<Self> {
        Self::new(Direction::Vertical, height, circumference, label)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn height(&self) -> &Rational {
        &self.height
    }

    pub fn circumference(&self) -> &Rational {
        &self.circumference
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn modulus(&self) -> Rational {
        &self.height / &self.circumference
    }
}

/// Conformal modulus `height / circumference`.
pub fn cylinder_modulus(c: &Cylinder) -> Rational {
    c.modulus()
}

/// Product of powers of Dehn twists in parallel cylinders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMultiTwist")]
pub struct MultiTwist {
    cylinders: Vec<Cylinder>,
    powers: Vec<i64>,
}

#[derive(Deserialize)]
struct RawMultiTwist {
    cylinders: Vec<Cylinder>,
    powers: Vec<i64>,
}

impl TryFrom<RawMultiTwist> for MultiTwist {
    type Error = Error;
    fn try_from(raw: RawMultiTwist) -> Result<Self> {
        MultiTwist::new(raw.cylinders, raw.powers)
    }
}

impl MultiTwist {
    pub fn new(cylinders: Vec<Cylinder>, powers: Vec<i64>) -> Result<Self> {
        let Some(first) = cylinders.first() else {
            return Err(Error::domain("multitwist needs at least one cylinder"));
        };
        if cylinders.len() != powers.len() {
            return Err(Error::domain(format!(
                "{} cylinders but {} twist powers",
                cylinders.len(),
                powers.len()
            )));
        }
        if cylinders.iter().any(|c| c.direction != first.direction) {
            return Err(Error::domain("multitwist cylinders must share one direction"));
        }
        Ok(MultiTwist { cylinders, powers })
    }

    pub fn direction(&self) -> Direction {
        self.cylinders[0].direction
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    pub fn powers(&self) -> &[i64] {
        &self.powers
    }

    /// Common shear `power / modulus`, if all cylinders agree.
    pub fn shear(&self) -> Result<Rational> {
        let mut ratios = self
            .cylinders
            .iter()
            .zip(&self.powers)
            .map(|(c, &n)| int(n) / c.modulus());
        let mu = ratios.next().expect("nonempty by construction");
        for other in ratios {
            if other != mu {
                return Err(Error::NotAffine(mu.to_string(), other.to_string()));
            }
        }
        Ok(mu)
    }
}

/// 2x2 matrix over a real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2 {
    pub e11: QuadExt,
    pub e12: QuadExt,
    pub e21: QuadExt,
    pub e22: QuadExt,
}

impl Mat2 {
    pub fn new(e11: QuadExt, e12: QuadExt, e21: QuadExt, e22: QuadExt) -> Self {
        Mat2 { e11, e12, e21, e22 }
    }

    pub fn from_ints(e11: i64, e12: i64, e21: i64, e22: i64) -> Self {
        Self::new(e11.into(), e12.into(), e21.into(), e22.into())
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> Result<QuadExt> {
        self.e11.checked_mul(&self.e22)?.checked_sub(&self.e12.checked_mul(&self.e21)?)
    }

    pub fn trace(&self) -> Result<QuadExt> {
        self.e11.checked_add(&self.e22)
    }

    pub fn compose(&self, rhs: &Mat2) -> Result<Mat2> {
        let dot = |a: &QuadExt, b: &QuadExt, c: &QuadExt, d: &QuadExt| -> Result<QuadExt> {
            a.checked_mul(b)?.checked_add(&c.checked_mul(d)?)
        };
        Ok(Mat2 {
            e11: dot(&self.e11, &rhs.e11, &self.e12, &rhs.e21)?,
            e12: dot(&self.e11, &rhs.e12, &self.e12, &rhs.e22)?,
            e21: dot(&self.e21, &rhs.e11, &self.e22, &rhs.e21)?,
            e22: dot(&self.e21, &rhs.e12, &self.e22, &rhs.e22)?,
        })
    }

    /// Inverse by the adjugate formula.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det()?;
        if det.is_zero() {
            return Err(Error::domain("singular matrix has no inverse"));
        }
        let inv = |x: QuadExt| x.checked_div(&det);
        Ok(Mat2 {
            e11: inv(self.e22.clone())?,
            e12: inv(-self.e12.clone())?,
            e21: inv(-self.e21.clone())?,
            e22: inv(self.e11.clone())?,
        })
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.e11, self.e12, self.e21, self.e22)
    }
}

pub fn mat_compose(a: &Mat2, b: &Mat2) -> Result<Mat2> {
    a.compose(b)
}

/// Derivative of an affine multitwist: a unipotent shear by the common
/// `power / modulus` ratio, upper triangular for horizontal cylinders and
/// lower triangular for vertical ones.
pub fn multitwist_derivative(mt: &MultiTwist) -> Result<Mat2> {
    let mu = QuadExt::rational(mt.shear()?);
    let (one, zero) = (QuadExt::one(), QuadExt::zero());
    Ok(match mt.direction() {
        Direction::Horizontal => Mat2::new(one.clone(), mu, zero, one),
        Direction::Vertical => Mat2::new(one.clone(), zero, mu, one),
    })
}

/// Checks `det = 1` and `|trace| > 2`, returning the rational trace.
fn hyperbolic_trace(m: &Mat2) -> Result<Rational> {
    let det = m.det()?;
    if det != QuadExt::one() {
        return Err(Error::domain(format!("determinant must be 1, got {det}")));
    }
    let trace = m.trace()?;
    let Some(t) = trace.as_rational() else {
        return Err(Error::domain(format!("trace {trace} is irrational; eigenvalues leave the quadratic field")));
    };
    if t.abs() <= int(2) {
        return Err(Error::NotPseudoAnosov(t.abs().to_string()));
    }
    Ok(t.clone())
}

/// Larger eigenvalue `(|tr| + sqrt(tr^2 - 4)) / 2` of a hyperbolic `SL(2)` matrix.
pub fn dilatation(m: &Mat2) -> Result<QuadExt> {
    let t = hyperbolic_trace(m)?;
    let disc = QuadExt::sqrt_rational(&(&t * &t - int(4)))?;
    QuadExt::rational(t.abs()).checked_add(&disc).map(|s| s.scale(&ratio(1, 2)))
}

/// Slope `y/x` of an eigenline; vertical eigenlines have no finite slope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slope {
    Finite(QuadExt),
    Vertical,
}

impl Slope {
    pub fn finite(&self) -> Option<&QuadExt> {
        match self {
            Slope::Finite(s) => Some(s),
            Slope::Vertical => None,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(s) => write!(f, "{s}"),
            Slope::Vertical => f.write_str("inf"),
        }
    }
}

fn eigenline_slope(m: &Mat2, eigenvalue: &QuadExt) -> Result<Slope> {
    // Row one: (e11 - l) x + e12 y = 0.
    if !m.e12.is_zero() {
        return Ok(Slope::Finite(eigenvalue.checked_sub(&m.e11)?.checked_div(&m.e12)?));
    }
    // Lower triangular: l = e11 has eigenline e21 x + (e22 - l) y = 0, l = e22 is vertical.
    let gap = eigenvalue.checked_sub(&m.e22)?;
    if eigenvalue.try_cmp(&m.e11)? == Ordering::Equal {
        Ok(Slope::Finite(m.e21.checked_div(&gap)?))
    } else {
        Ok(Slope::Vertical)
    }
}

/// Slopes of the expanding and contracting eigenlines.
pub fn eigen_slopes(m: &Mat2) -> Result<(Slope, Slope)> {
    let t = hyperbolic_trace(m)?;
    let lambda = dilatation(m)?;
    let (expanding, contracting) = if t.is_negative() {
        (-lambda.clone(), -lambda.recip()?)
    } else {
        (lambda.clone(), lambda.recip()?)
    };
    Ok((eigenline_slope(m, &expanding)?, eigenline_slope(m, &contracting)?))
}

/// The genus-2 square-tiled example: twist word `T_a' T_a^9 T_b^-1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Genus2Example {
    pub surface: Vec<Cylinder>,
    pub horizontal_twist: MultiTwist,
    /// Derivative of the `T_b^-1` factor, fixed by the orientation convention.
    pub vertical_factor: Mat2,
    pub matrix: Mat2,
    pub lambda: QuadExt,
    pub chi: i64,
}

pub fn genus2_example() -> Genus2Example {
    let alpha = Cylinder::horizontal(int(9), int(2), "alpha").expect("positive");
    let alpha_prime = Cylinder::horizontal(int(1), int(2), "alpha'").expect("positive");
    let surface = vec![alpha, alpha_prime];
    let horizontal_twist = MultiTwist::new(surface.clone(), vec![9, 1]).expect("valid multitwist");
    let vertical_factor = Mat2::from_ints(1, 0, 20, 1);
    let matrix = multitwist_derivative(&horizontal_twist)
        .and_then(|h| h.compose(&vertical_factor))
        .expect("rational matrices compose");
    let lambda = dilatation(&matrix).expect("trace 42 is hyperbolic");
    Genus2Example { surface, horizontal_twist, vertical_factor, matrix, lambda, chi: -2 }
}

/// Teichmuller-length bound `4 ln(lambda) / |chi|` for the fibers of the
/// genus family built over a base map of dilatation `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyBound<T> {
    pub teich_bound: T,
    /// `|chi| * teich_bound = 4 ln(lambda)`.
    pub normalized: T,
}

pub fn entropy_cone_bound<T: Real>(lambda_base: &QuadExt, chi_target: i64) -> Result<EntropyBound<T>> {
    if lambda_base.try_cmp(&QuadExt::one())? != Ordering::Greater {
        return Err(Error::domain(format!("dilatation must exceed 1, got {lambda_base}")));
    }
    if chi_target > -2 {
        return Err(Error::domain(format!("Euler characteristic must be <= -2, got {chi_target}")));
    }
    let normalized = T::lit(4.0) * lambda_base.to_real::<T>().ln();
    Ok(EntropyBound { teich_bound: normalized / T::int(-chi_target), normalized })
}
