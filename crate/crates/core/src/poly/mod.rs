//! Exact polynomial arithmetic over the rationals.

mod bivariate;
pub mod interval;
mod intpoly;
mod parse;
mod resultant;
pub mod roots;
mod univariate;

pub use bivariate::{BivariatePolynomial, Var};
pub use interval::Interval;
pub use parse::parse_polynomial;
pub use resultant::{bivariate_exact_div, bivariate_gcd, resultant_y};
pub use roots::{isolate_roots, refine, sign_at_root, IsolatingInterval, RootIsolator};
pub use univariate::UnivariatePolynomial;
