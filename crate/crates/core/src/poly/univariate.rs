use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::intpoly;
use crate::error::{Error, Result};
use crate::rational::{int, sign, Rational};

/// Dense univariate polynomial, lowest degree first. The zero polynomial has
/// no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Rational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn var() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        intpoly::sign_at(&intpoly::to_ints(self), x)
    }

    /// Sign as x → +∞ (`positive = true`) or −∞.
    pub fn sign_at_infinity(&self, positive: bool) -> i8 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = sign(&self.lc());
                if positive || d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    /// `p(-x)`.
    pub fn mirror(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(a + h·t)` as a polynomial in `t`.
    pub fn affine_substitute(&self, a: &Rational, h: &Rational) -> Self {
        let lin = Self::new(vec![a.clone(), h.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
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

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Division that must be exact.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        intpoly::from_ints(&intpoly::gcd(&intpoly::to_ints(self), &intpoly::to_ints(other))).monic()
    }

    pub fn squarefree_part(&self) -> Result<Self> {
        Ok(intpoly::from_ints(&self.squarefree_ints()?).monic())
    }

    /// Squarefree part as coprime integers with positive leading coefficient.
    pub(crate) fn squarefree_ints(&self) -> Result<intpoly::IntCoeffs> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = intpoly::to_ints(self);
        let g = intpoly::gcd(&p, &intpoly::derivative(&p));
        let q = intpoly::exact_div(&p, &g).expect("gcd divides");
        Ok(if q.last().is_some_and(|c| c.is_negative()) {
            q.into_iter().map(|c| -c).collect()
        } else {
            q
        })
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative()).is_constant())
    }

    /// Scales by a positive rational so the coefficients are coprime integers.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = crate::rational::lcm_denominators(self.coeffs.iter());
        let ints: Vec<_> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(num_bigint::BigInt::zero(), |acc, c| num_integer::Integer::gcd(&acc, c));
        Self::new(
            ints.into_iter()
                .map(|c| Rational::new(c, g.clone()))
                .collect(),
        )
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Add for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn add(self, o: &UnivariatePolynomial) -> UnivariatePolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        UnivariatePolynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn sub(self, o: &UnivariatePolynomial) -> UnivariatePolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        UnivariatePolynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn neg(self) -> UnivariatePolynomial {
        UnivariatePolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn mul(self, o: &UnivariatePolynomial) -> UnivariatePolynomial {
        if self.is_zero() || o.is_zero() {
            return UnivariatePolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePolynomial::new(out)
    }
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    type P = UnivariatePolynomial;

    #[test]
    fn division_identity() {
        let a = P::from_ints(&[3, -2, 0, 5, 1]);
        let b = P::from_ints(&[1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_and_squarefree() {
        // (t-1)^2 (t+2)
        let p = &P::from_ints(&[-1, 1]).pow(2) * &P::from_ints(&[2, 1]);
        assert!(!p.is_squarefree().unwrap());
        assert_eq!(p.squarefree_part().unwrap(), P::from_ints(&[-2, 1, 1]));
        assert!(P::from_ints(&[0, 1]).is_squarefree().unwrap());
        assert_eq!(P::zero().squarefree_part(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn affine_substitution_agrees_with_eval() {
        let p = P::from_ints(&[1, -3, 0, 2]);
        let a = rat(1, 3);
        let h = rat(-2, 5);
        let q = p.affine_substitute(&a, &h);
        for t in [rat(0, 1), rat(1, 1), rat(7, 4)] {
            assert_eq!(q.eval(&t), p.eval(&(&a + &h * &t)));
        }
    }

    #[test]
    fn sign_at_infinity() {
        let p = P::from_ints(&[0, 0, 0, -1]);
        assert_eq!(p.sign_at_infinity(true), -1);
        assert_eq!(p.sign_at_infinity(false), 1);
    }
}
