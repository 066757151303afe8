//! Closed rational intervals, used to certify signs on small boxes.

use num_traits::{Signed, Zero};

use super::{BivariatePolynomial, UnivariatePolynomial};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign of every point, if it is the same nonzero sign throughout.
    pub fn certified_sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::point(Rational::from_integer(1.into()));
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 {
            return Self::new(a, b);
        }
        if self.contains_zero() {
            Self::new(Rational::zero(), a.max(b))
        } else if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn eval_univariate(p: &UnivariatePolynomial, x: &Self) -> Self {
        let mut acc = Self::point(Rational::zero());
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&x.pow(i as u32).scale(c));
            }
        }
        acc
    }

    pub fn eval_bivariate(f: &BivariatePolynomial, x: &Self, y: &Self) -> Self {
        let mut acc = Self::point(Rational::zero());
        for (&(a, b), c) in f.terms() {
            acc = acc.add(&x.pow(a).mul(&y.pow(b)).scale(c));
        }
        acc
    }
}
