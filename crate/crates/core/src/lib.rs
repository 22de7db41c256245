//! Exact and numerical tools for bounding Weil-Petersson translation lengths
//! of pseudo-Anosov maps obtained by Dehn twisting along flat cylinders.
//!
//! The numerical modules are generic over the scalar via [`Real`]; the
//! aliases below fix `f64` for ordinary use.

// Range checks are written `!(x > 0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annulus;
pub mod error;
pub mod exactnum;
pub mod families;
pub mod flat_surface;
pub mod quadrature;
pub mod real;
pub mod suspension;
pub mod wp_bounds;

pub use error::{Error, Result};
pub use exactnum::{QuadExt, Rational};
pub use real::Real;

pub type BalanceData64 = annulus::BalanceData<f64>;
pub type GlueParams64 = families::GlueParams<f64>;
pub type LeafwiseFamily64 = families::LeafwiseFamily<f64>;
pub type QuadConfig64 = quadrature::QuadConfig<f64>;
pub type MarkedCurve64 = suspension::MarkedCurve<f64>;
pub type MappingTorus64 = suspension::MappingTorus<f64>;
pub type IntegrandModel64 = wp_bounds::IntegrandModel<f64>;
pub type BoundReport64 = wp_bounds::BoundReport<f64>;
pub type GenusFamilyReport64 = wp_bounds::GenusFamilyReport<f64>;

pub type BoundReport32 = wp_bounds::BoundReport<f32>;
pub type LeafwiseFamily32 = families::LeafwiseFamily<f32>;

#[doc = include_str!("../../../README.md")]
#[cfg(doctest)]
struct ReadmeDoctests;
