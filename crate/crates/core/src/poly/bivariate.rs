use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::resultant::{bivariate_exact_div, bivariate_gcd};
use super::univariate::UnivariatePolynomial;
use crate::direction::UnitDirection;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
}

/// Sparse polynomial in `x, y` with rational coefficients, keyed by
/// `(deg_x, deg_y)`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, dx: u32, dy: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((dx, dy), c);
        }
        Self { terms }
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, k: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> Rational {
        self.terms.get(&(dx, dy)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(a, b)| if v == Var::X { a } else { b })
            .max()
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.y_coeffs()
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * y + c.eval(x))
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(&(a, b), c)| match v {
            Var::X if a > 0 => Some(((a - 1, b), c * int(a as i64))),
            Var::Y if b > 0 => Some(((a, b - 1), c * int(b as i64))),
            _ => None,
        }))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (e, c * k)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f ∘ R_d` with `R_d(x, y) = (c·x − s·y, s·x + c·y)`.
    pub fn rotate(&self, d: &UnitDirection) -> Self {
        let (c, s) = (d.c(), d.s());
        let xr = Self::from_terms([((1, 0), c.clone()), ((0, 1), -s)]);
        let yr = Self::from_terms([((1, 0), s.clone()), ((0, 1), c.clone())]);
        self.substitute(&xr, &yr)
    }

    /// `f(p(x, y), q(x, y))`.
    pub fn substitute(&self, p: &Self, q: &Self) -> Self {
        let dx = self.degree_in(Var::X).unwrap_or(0) as usize;
        let dy = self.degree_in(Var::Y).unwrap_or(0) as usize;
        let mut ppow = vec![Self::constant(Rational::one())];
        for i in 0..dx {
            ppow.push(&ppow[i] * p);
        }
        let mut qpow = vec![Self::constant(Rational::one())];
        for i in 0..dy {
            qpow.push(&qpow[i] * q);
        }
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            let m = (&ppow[a as usize] * &qpow[b as usize]).scale(c);
            out = &out + &m;
        }
        out
    }

    /// `f(−x, y)`.
    pub fn mirror_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(&(a, b), c)| ((a, b), if a % 2 == 1 { -c } else { c.clone() })),
        )
    }

    /// Coefficients of `y^0, y^1, …` as polynomials in `x`.
    pub fn y_coeffs(&self) -> Vec<UnivariatePolynomial> {
        let Some(dy) = self.degree_in(Var::Y) else {
            return Vec::new();
        };
        let dx = self.degree_in(Var::X).unwrap_or(0) as usize;
        let mut rows = vec![vec![Rational::zero(); dx + 1]; dy as usize + 1];
        for (&(a, b), c) in &self.terms {
            rows[b as usize][a as usize] = c.clone();
        }
        rows.into_iter().map(UnivariatePolynomial::new).collect()
    }

    pub fn from_y_coeffs(cs: &[UnivariatePolynomial]) -> Self {
        Self::from_terms(cs.iter().enumerate().flat_map(|(j, p)| {
            p.coeffs()
                .iter()
                .enumerate()
                .map(move |(i, c)| ((i as u32, j as u32), c.clone()))
        }))
    }

    /// `f(x₀, y)` as a polynomial in `y`.
    pub fn subs_x(&self, x: &Rational) -> UnivariatePolynomial {
        UnivariatePolynomial::new(self.y_coeffs().iter().map(|c| c.eval(x)).collect())
    }

    /// `f(x, y₀)` as a polynomial in `x`.
    pub fn subs_y(&self, y: &Rational) -> UnivariatePolynomial {
        self.y_coeffs()
            .iter()
            .rev()
            .fold(UnivariatePolynomial::zero(), |acc, c| {
                &acc.scale(y) + c
            })
    }

    /// Leading coefficient in `y`, as a polynomial in `x`.
    pub fn lc_y(&self) -> UnivariatePolynomial {
        self.y_coeffs().pop().unwrap_or_default()
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.squarefree_defect()?.total_degree() == Some(0))
    }

    /// `f / gcd(f, ∂f/∂x, ∂f/∂y)`, normalised to leading coefficient 1 in
    /// the term order `(deg_y, deg_x)`.
    pub fn squarefree_part(&self) -> Result<Self> {
        let g = self.squarefree_defect()?;
        let q = bivariate_exact_div(self, &g).expect("gcd divides f");
        Ok(q.normalized())
    }

    fn squarefree_defect(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = bivariate_gcd(self, &self.partial(Var::X));
        Ok(bivariate_gcd(&g, &self.partial(Var::Y)))
    }

    /// Scaled so the coefficient of the largest `(deg_y, deg_x)` term is 1.
    pub fn normalized(&self) -> Self {
        let lead = self
            .terms
            .iter()
            .max_by_key(|(&(a, b), _)| (b, a))
            .map(|(_, c)| c.clone());
        match lead {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&k, c) in &o.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&k, c) in &o.terms {
            out.add_term(k, -c);
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(self.terms.iter().map(|(&k, c)| (k, -c)))
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &o.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl FromStr for BivariatePolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_polynomial(s)
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest total degree first, then by x-degree
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by_key(|(&(a, b), _)| (std::cmp::Reverse(a + b), std::cmp::Reverse(a)));
        for (n, (&(a, b), c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts = Vec::new();
            if !abs.is_one() || (a == 0 && b == 0) {
                parts.push(if abs.is_integer() {
                    abs.numer().to_string()
                } else {
                    format!("{}/{}", abs.numer(), abs.denom())
                });
            }
            for (v, e) in [("x", a), ("y", b)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for BivariatePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BivariatePolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(s: &str) -> BivariatePolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let coste = p("x^2+(y^2-x)^2");
        assert_eq!(coste.eval(&int(0), &int(0)), int(0));
        assert_eq!(coste.eval(&int(1), &int(1)), int(1));
        assert_eq!(p("x^2+y^2").eval(&rat(3, 5), &rat(4, 5)), int(1));
    }

    #[test]
    fn partial_examples() {
        assert_eq!(p("x^2+(y^2-x)^2").partial(Var::Y), p("4*y^3-4*x*y"));
        assert_eq!(
            p("x^10+y^6/6-3*x*y^4/4+x^2*y^2").partial(Var::Y),
            p("y^5-3*x*y^3+2*x^2*y")
        );
        assert_eq!(
            p("x^10+y^6/6-3*x*y^4/4+x^2*y^2").partial(Var::Y),
            p("y*(x-y^2)*(2*x-y^2)")
        );
        assert!(p("7/3").partial(Var::X).is_zero());
        assert!(p("7/3").partial(Var::Y).is_zero());
    }

    #[test]
    fn rotate_examples() {
        let id = UnitDirection::new(int(1), int(0)).unwrap();
        let f = p("x^3 - 2*x*y + y^4");
        assert_eq!(f.rotate(&id), f);
        let d = UnitDirection::new(rat(3, 5), rat(4, 5)).unwrap();
        assert_eq!(p("x^2+y^2").rotate(&d), p("x^2+y^2"));
        assert_eq!(p("x").rotate(&d), p("3/5*x - 4/5*y"));
    }

    #[test]
    fn squarefree_examples() {
        let f = p("y^2*(y-x^2)");
        assert!(!f.is_squarefree().unwrap());
        assert_eq!(f.squarefree_part().unwrap(), p("y*(y-x^2)").normalized());
        assert!(p("y*(y^2-x)*(y^2-2*x)").is_squarefree().unwrap());
        assert!(p("y").is_squarefree().unwrap());
        assert!(p("x*y").is_squarefree().unwrap());
        assert!(!p("x^2*y").is_squarefree().unwrap());
        assert!(!p("(x+y^2)^3*(x-y)").is_squarefree().unwrap());
        assert_eq!(
            p("(x+y^2)^3*(x-y)").squarefree_part().unwrap(),
            p("(x+y^2)*(x-y)").normalized()
        );
        assert_eq!(BivariatePolynomial::zero().is_squarefree(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn display_parses_back() {
        for s in ["x^10+y^6/6-3*x*y^4/4+x^2*y^2", "-x + 1/3", "x^2*y - 7"] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{f}");
        }
    }

    #[test]
    fn coefficient_views_agree() {
        let f = p("x^3*y^2 - 2*x*y + 5*y^4 - 1/2");
        assert_eq!(BivariatePolynomial::from_y_coeffs(&f.y_coeffs()), f);
        let x0 = rat(2, 3);
        let y0 = rat(-5, 7);
        assert_eq!(f.subs_x(&x0).eval(&y0), f.eval(&x0, &y0));
        assert_eq!(f.subs_y(&y0).eval(&x0), f.eval(&x0, &y0));
        assert_eq!(f.mirror_x().eval(&x0, &y0), f.eval(&-&x0, &y0));
    }
}
