//! Rational points of bounded height on Hirzebruch-Kleinschmidt varieties over the rationals.
//!
//! The crate is split by role:
//!
//! * [`geometry`]: the varieties, their fans, line bundle classes, exponents and stratifications.
//! * [`heights`]: exact anticanonical-type heights of rational points.
//! * [`enumerate`]: exact counting and enumeration of points of bounded height.
//! * [`constants`]: special functions and the leading constants of the counting functions.
//! * [`arakelov`]: theta invariants of one-dimensional lattices and the integral identities built on them.

pub mod arakelov;
pub mod constants;
pub mod enumerate;
pub mod geometry;
pub mod heights;
pub mod literal;
pub mod quad;

pub use geometry::{HkVariety, LineBundleClass, PoleCase};
pub use heights::{HkRationalPoint, ProjectivePoint, Region};
