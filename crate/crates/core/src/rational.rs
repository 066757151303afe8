//! Rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-k` as an exact rational.
pub fn pow2_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64; scale down by bits
        let nb = q.numer().bits() as i64;
        let db = q.denom().bits() as i64;
        let shift = (nb.max(db) - 900).max(0) as usize;
        let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
        if d == 0.0 {
            0.0
        } else {
            n / d
        }
    })
}

/// Always `"p/q"`, including integers (`"3/1"`).
pub fn fmt_exact(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.25"`.
pub fn parse_exact(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: {t:?}"),
    };
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| err("bad denominator"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        let n: BigInt = digits.parse().map_err(|_| err("bad decimal"))?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = t.parse().map_err(|_| err("bad integer"))?;
    Ok(Rational::from_integer(n))
}

/// The rational with smallest denominator (then smallest magnitude) strictly
/// inside the open interval `(lo, hi)`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi, &-lo);
    }
    // 0 <= lo < hi
    let fl = lo.floor();
    let next = &fl + Rational::one();
    if next < *hi {
        return next;
    }
    // no integer strictly inside: lo, hi share the integer part fl (or hi == fl+1)
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inv_lo_hi = hi_frac.recip();
    let inner = if lo_frac.is_zero() {
        inv_lo_hi.floor() + Rational::one()
    } else {
        simplest_between(&inv_lo_hi, &lo_frac.recip())
    };
    fl + inner.recip()
}

pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplest_examples() {
        assert_eq!(simplest_between(&rat(-1, 3), &rat(1, 2)), int(0));
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&rat(3, 2), &rat(7, 2)), int(2));
        assert_eq!(simplest_between(&rat(-7, 2), &rat(-3, 2)), int(-2));
        assert_eq!(simplest_between(&int(0), &rat(1, 10)), rat(1, 11));
        assert_eq!(simplest_between(&rat(1, 4), &rat(1, 3)), rat(2, 7));
    }

    #[test]
    fn simplest_is_strictly_inside() {
        let pts = [rat(1, 7), rat(2, 13), rat(100, 701), rat(5, 3), rat(-9, 4)];
        for a in &pts {
            for b in &pts {
                if a < b {
                    let m = simplest_between(a, b);
                    assert!(a < &m && &m < b, "{a} {m} {b}");
                }
            }
        }
    }

    #[test]
    fn exact_format_roundtrip() {
        for q in [rat(3, 1), rat(-5, 7), int(0)] {
            assert_eq!(parse_exact(&fmt_exact(&q)).unwrap(), q);
        }
        assert_eq!(parse_exact("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_exact("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_exact("1/0").is_err());
    }
}

/// Serde adapter writing rationals as exact `"p/q"` strings.
pub mod exact_serde {
    use super::{fmt_exact, parse_exact, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_exact(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_exact(&s).map_err(serde::de::Error::custom)
    }
}
