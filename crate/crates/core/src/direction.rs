//! Projection directions as rational points of the unit circle.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{exact_serde, fmt_exact, int, Rational};

/// `(cos θ, sin θ)` with `c² + s² = 1` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitDirection {
    #[serde(with = "exact_serde")]
    c: Rational,
    #[serde(with = "exact_serde")]
    s: Rational,
}

impl UnitDirection {
    pub fn new(c: Rational, s: Rational) -> Result<Self> {
        if &c * &c + &s * &s != Rational::one() {
            return Err(Error::InvalidDirection {
                c: fmt_exact(&c),
                s: fmt_exact(&s),
            });
        }
        Ok(Self { c, s })
    }

    pub fn identity() -> Self {
        Self {
            c: Rational::one(),
            s: Rational::zero(),
        }
    }

    /// Tangent half-angle parametrisation `t ↦ ((1−t²)/(1+t²), 2t/(1+t²))`.
    /// `t ∈ [−1, 1]` sweeps a full set of projection directions.
    pub fn from_half_angle(t: &Rational) -> Self {
        let t2 = t * t;
        let den = Rational::one() + &t2;
        Self {
            c: (Rational::one() - &t2) / &den,
            s: (int(2) * t) / den,
        }
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn inverse(&self) -> Self {
        Self {
            c: self.c.clone(),
            s: -&self.s,
        }
    }

    /// `R_d(x, y) = (c·x − s·y, s·x + c·y)`.
    pub fn apply(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        (
            &self.c * x - &self.s * y,
            &self.s * x + &self.c * y,
        )
    }
}
