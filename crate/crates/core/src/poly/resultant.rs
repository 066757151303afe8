//! Elimination of `y`: subresultant resultants and primitive gcds over `Q[x][y]`.

use super::bivariate::{BivariatePolynomial, Var};
use super::univariate::UnivariatePolynomial as UPoly;
use crate::error::{Error, Result};
use crate::rational::{lcm_denominators, Rational};

/// A polynomial in `y` whose coefficients are polynomials in `x`.
#[derive(Debug, Clone, PartialEq)]
struct YPoly(Vec<UPoly>);

impl YPoly {
    fn from_bivariate(f: &BivariatePolynomial) -> Self {
        Self(f.y_coeffs()).trimmed()
    }

    fn to_bivariate(&self) -> BivariatePolynomial {
        BivariatePolynomial::from_y_coeffs(&self.0)
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lc(&self) -> &UPoly {
        self.0.last().expect("nonzero")
    }

    fn scale(&self, k: &UPoly) -> Self {
        Self(self.0.iter().map(|c| c * k).collect()).trimmed()
    }

    fn exact_div_coeffs(&self, k: &UPoly) -> Self {
        Self(
            self.0
                .iter()
                .map(|c| c.exact_div(k).expect("exact coefficient division"))
                .collect(),
        )
        .trimmed()
    }

    /// `self - k·y^shift·other`
    fn sub_shifted(&self, k: &UPoly, shift: usize, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len() + shift);
        let mut out = self.0.clone();
        out.resize(n, UPoly::zero());
        for (j, c) in other.0.iter().enumerate() {
            out[j + shift] = &out[j + shift] - &(c * k);
        }
        Self(out).trimmed()
    }

    /// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`.
    fn prem(&self, b: &Self) -> Self {
        let db = b.degree().expect("nonzero divisor");
        let Some(da) = self.degree() else {
            return self.clone();
        };
        if da < db {
            return self.clone();
        }
        let l = b.lc().clone();
        let mut r = self.clone();
        let mut e = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc().clone();
            r = r.scale(&l).sub_shifted(&lr, dr - db, b);
            e -= 1;
        }
        r.scale(&l.pow(e as u32))
    }

    fn content(&self) -> UPoly {
        self.0
            .iter()
            .fold(UPoly::zero(), |acc, c| acc.gcd(c))
    }

    fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.exact_div_coeffs(&self.content())
    }
}

/// Resultant with respect to `y`, computed by the subresultant PRS over
/// `Q[x]`. Returns a polynomial in `x`.
pub fn resultant_y(f: &BivariatePolynomial, g: &BivariatePolynomial) -> Result<UPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // integer inputs keep the PRS free of fractions; undo the scaling at the end
    let (cf, cg) = (integer_scale(f), integer_scale(g));
    let r = resultant_integral(&f.scale(&cf), &g.scale(&cg))?;
    let (ef, eg) = (f.degree_in(Var::Y).unwrap(), g.degree_in(Var::Y).unwrap());
    let k = num_traits::pow(cf, eg as usize) * num_traits::pow(cg, ef as usize);
    Ok(r.scale(&k.recip()))
}

/// Positive factor that clears all denominators of `f`.
fn integer_scale(f: &BivariatePolynomial) -> Rational {
    Rational::from_integer(lcm_denominators(f.terms().map(|(_, c)| c)))
}

fn resultant_integral(f: &BivariatePolynomial, g: &BivariatePolynomial) -> Result<UPoly> {
    let a = YPoly::from_bivariate(f);
    let b = YPoly::from_bivariate(g);
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    match (da, db) {
        (0, 0) => return Err(Error::BothConstantInY),
        (_, 0) => return Ok(b.0[0].pow(da as u32)),
        (0, _) => return Ok(a.0[0].pow(db as u32)),
        _ => {}
    }
    let (mut a, mut b, mut negate) = if da < db {
        (b, a, da % 2 == 1 && db % 2 == 1)
    } else {
        (a, b, false)
    };
    let mut g = UPoly::one();
    let mut h = UPoly::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = a.prem(&b);
        a = b;
        if r.is_zero() {
            return Ok(UPoly::zero());
        }
        b = r.exact_div_coeffs(&(&g * &h.pow(delta as u32)));
        g = a.lc().clone();
        if delta > 0 {
            h = g
                .pow(delta as u32)
                .exact_div(&h.pow(delta as u32 - 1))
                .expect("subresultant division");
        }
        if b.degree() == Some(0) {
            break;
        }
    }
    let da = a.degree().unwrap() as u32;
    let res = b.lc()
        .pow(da)
        .exact_div(&h.pow(da - 1))
        .expect("subresultant division");
    Ok(if negate { -&res } else { res })
}

/// Gcd in `Q[x, y]`, normalised as in [`BivariatePolynomial::normalized`].
pub fn bivariate_gcd(f: &BivariatePolynomial, g: &BivariatePolynomial) -> BivariatePolynomial {
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    let mut a = YPoly::from_bivariate(f);
    let mut b = YPoly::from_bivariate(g);
    let c = a.content().gcd(&b.content());
    a = a.primitive_part();
    b = b.primitive_part();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        if b.degree() == Some(0) {
            a = YPoly(vec![UPoly::one()]);
            break;
        }
        let r = a.prem(&b);
        a = b;
        b = r.primitive_part();
    }
    a.scale(&c).to_bivariate().normalized()
}

/// Exact quotient `f / g` in `Q[x, y]`, or `None` if `g` does not divide `f`.
pub fn bivariate_exact_div(
    f: &BivariatePolynomial,
    g: &BivariatePolynomial,
) -> Option<BivariatePolynomial> {
    let b = YPoly::from_bivariate(g);
    let db = b.degree()?;
    let mut r = YPoly::from_bivariate(f);
    let mut q = vec![UPoly::zero(); r.0.len().saturating_sub(db).max(1)];
    while let Some(dr) = r.degree() {
        if dr < db {
            return None;
        }
        let t = r.lc().exact_div(b.lc())?;
        r = r.sub_shifted(&t, dr - db, &b);
        q[dr - db] = t;
    }
    Some(YPoly(q).trimmed().to_bivariate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, Rational};

    fn p(s: &str) -> BivariatePolynomial {
        s.parse().unwrap()
    }

    fn proportional(a: &UPoly, b: &UPoly) -> bool {
        a.monic() == b.monic()
    }

    #[test]
    fn resultant_examples() {
        let r = resultant_y(&p("y^2-x"), &p("y")).unwrap();
        assert!(proportional(&r, &UPoly::from_ints(&[0, 1])));
        let r = resultant_y(&p("y-1"), &p("y+1")).unwrap();
        assert!(r.is_constant() && !r.is_zero());
        // circle: Res_y(x^2+y^2-1, 2y) vanishes exactly at x = ±1
        let f = p("x^2+y^2-1");
        let r = resultant_y(&f, &f.partial(crate::Var::Y)).unwrap();
        assert!(proportional(&r, &UPoly::from_ints(&[-1, 0, 1])));
        assert_eq!(
            resultant_y(&p("x"), &p("x^2")),
            Err(Error::BothConstantInY)
        );
    }

    #[test]
    fn resultant_with_constant_in_y() {
        // Res(y^2 + x, x-1) = (x-1)^2
        let r = resultant_y(&p("y^2+x"), &p("x-1")).unwrap();
        assert_eq!(r, UPoly::from_ints(&[1, -2, 1]));
    }

    #[test]
    fn gcd_examples() {
        let g = bivariate_gcd(&p("(y-x^2)*(x+y)^2"), &p("(x+y)*(y^3-x)"));
        assert_eq!(g, p("x+y").normalized());
        let g = bivariate_gcd(&p("x*(y-1)"), &p("x^2*(y+1)"));
        assert_eq!(g, p("x"));
        assert_eq!(bivariate_gcd(&p("y^2+1"), &p("x")), p("1"));
    }

    #[test]
    fn exact_division() {
        let a = p("(x*y-3)*(y^2+x)");
        assert_eq!(bivariate_exact_div(&a, &p("y^2+x")), Some(p("x*y-3")));
        assert_eq!(bivariate_exact_div(&p("y^2+1"), &p("y+x")), None);
        let c = bivariate_exact_div(&p("4*x*y"), &p("2*x")).unwrap();
        assert_eq!(c, BivariatePolynomial::monomial(Rational::from(int(2)), 0, 1));
    }
}
