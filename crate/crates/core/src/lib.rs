//! Exact computation of generic asymptotic Poincaré-Reeb trees and snake
//! permutations for small level curves of a bivariate polynomial near a
//! strict local minimum at the origin.
//!
//! The pipeline is:
//!
//! 1. [`genericity`] certifies that the vertical projection of the (rotated)
//!    polynomial is generic: the polar curve `∂f/∂y = 0` is reduced and the
//!    map `(x, y) ↦ (x, f(x, y))` separates the polar branches.
//! 2. [`sweep`] locates the tangency events of the polar curve with the level
//!    curve `f = ε`, classifies them as crests or valleys and threads the
//!    fiber intervals of the disk around the origin along the x-axis.
//! 3. [`tree`] assembles the union of the negative and positive trees and
//!    checks the complete-binary / total-order / monotone-geodesic structure.
//! 4. [`snake`] reads the events along the curve and by abscissa and returns
//!    the alternating permutation relating the two orders.
//!
//! All geometry is done over the rationals; floating point only shows up in
//! the SVG renderer.

pub mod direction;
pub mod emit;
pub mod error;
pub mod generator;
pub mod genericity;
pub mod par;
pub mod poly;
pub mod rational;
pub mod snake;
pub mod sweep;
pub mod tree;

pub use direction::UnitDirection;
pub use error::{Error, Result};
pub use poly::{BivariatePolynomial, IsolatingInterval, UnivariatePolynomial, Var};
pub use rational::Rational;
