//! Integer-coefficient kernels behind the rational polynomial type: sign
//! evaluation without fractions and primitive pseudo-remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::univariate::UnivariatePolynomial as UPoly;
use crate::rational::{lcm_denominators, Rational};

/// Dense integer coefficients, lowest degree first, no trailing zeros.
pub(crate) type IntCoeffs = Vec<BigInt>;

fn trim(mut v: IntCoeffs) -> IntCoeffs {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Divides out the (positive) content.
pub(crate) fn primitive(v: IntCoeffs) -> IntCoeffs {
    let v = trim(v);
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// `p` times a positive rational, as coprime integers.
pub(crate) fn to_ints(p: &UPoly) -> IntCoeffs {
    let l = lcm_denominators(p.coeffs().iter());
    primitive(
        p.coeffs()
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect(),
    )
}

pub(crate) fn from_ints(v: &[BigInt]) -> UPoly {
    UPoly::new(v.iter().cloned().map(Rational::from_integer).collect())
}

/// Sign of the polynomial at `x = n/d`, computed as the sign of
/// `Σ cᵢ nⁱ d^(k−i)` with `d > 0`.
pub(crate) fn sign_at(v: &[BigInt], x: &Rational) -> i8 {
    let Some(top) = v.last() else { return 0 };
    let (n, d) = (x.numer(), x.denom());
    let mut acc = top.clone();
    if d.is_one() {
        for c in v.iter().rev().skip(1) {
            acc = acc * n + c;
        }
    } else {
        let mut dp = BigInt::one();
        for c in v.iter().rev().skip(1) {
            dp *= d;
            acc = acc * n + c * &dp;
        }
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`.
pub(crate) fn prem(a: &[BigInt], b: &[BigInt]) -> IntCoeffs {
    let (m, n) = (a.len(), b.len());
    assert!(n > 0, "division by zero polynomial");
    if m < n {
        return a.to_vec();
    }
    let lb = &b[n - 1];
    let mut r = a.to_vec();
    for i in (0..=m - n).rev() {
        let t = r[i + n - 1].clone();
        for c in r.iter_mut().take(i + n) {
            *c *= lb;
        }
        if !t.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                r[i + j] -= &t * bc;
            }
        }
    }
    r.truncate(n - 1);
    trim(r)
}

/// Primitive gcd of two integer polynomials (positive leading coefficient).
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> IntCoeffs {
    let (mut a, mut b) = (primitive(a.to_vec()), primitive(b.to_vec()));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = primitive(prem(&a, &b));
        a = b;
        b = r;
    }
    if a.last().is_some_and(|c| c.is_negative()) {
        a = a.into_iter().map(|c| -c).collect();
    }
    a
}

/// Exact quotient `a / b` over the integers, if it exists.
pub(crate) fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<IntCoeffs> {
    let (m, n) = (a.len(), b.len());
    assert!(n > 0, "division by zero polynomial");
    if m < n {
        return a.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let lb = &b[n - 1];
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); m - n + 1];
    for i in (0..=m - n).rev() {
        let (t, rem) = r[i + n - 1].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &t * bc;
        }
        q[i] = t;
    }
    r.iter().all(|c| c.is_zero()).then(|| trim(q))
}

/// Derivative of an integer polynomial.
pub(crate) fn derivative(v: &[BigInt]) -> IntCoeffs {
    v.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Sturm sequence of `p` with every member scaled by a positive factor.
pub(crate) fn sturm(p: IntCoeffs) -> Vec<IntCoeffs> {
    let dp = primitive(derivative(&p));
    let mut seq = vec![p, dp];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            return seq;
        }
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        let delta = a.len() - b.len();
        let lb = b.last().unwrap();
        // prem = lc(b)^(δ+1)·(a mod b); the true Sturm term is −(a mod b)
        let r = prem(a, b);
        let factor_negative = lb.is_negative() && delta % 2 == 0;
        let r = if factor_negative {
            r
        } else {
            r.into_iter().map(|c| -c).collect()
        };
        seq.push(primitive(r));
        if seq[n].is_empty() {
            seq.pop();
            return seq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> IntCoeffs {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn sign_matches_rational_eval() {
        let p = ints(&[-6, 11, -6, 1]);
        for (n, d) in [(0, 1), (3, 2), (5, 2), (7, 3), (-1, 5)] {
            let x = crate::rational::rat(n, d);
            let want = crate::rational::sign(&from_ints(&p).eval(&x));
            assert_eq!(sign_at(&p, &x), want, "x = {x}");
        }
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x+2) and (x-1)(2x+3)
        let g = gcd(&ints(&[-2, 1, 1]), &ints(&[-3, 1, 2]));
        assert_eq!(g, ints(&[-1, 1]));
    }

    #[test]
    fn exact_division() {
        let q = exact_div(&ints(&[-2, 1, 1]), &ints(&[-1, 1])).unwrap();
        assert_eq!(q, ints(&[2, 1]));
        assert!(exact_div(&ints(&[1, 0, 1]), &ints(&[-1, 1])).is_none());
    }
}
