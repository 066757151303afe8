//! Certified real root isolation with Sturm sequences and bisection.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::intpoly::{self, IntCoeffs};
use super::univariate::UnivariatePolynomial as UPoly;
use crate::error::{Error, Result};
use crate::rational::{exact_serde, int, midpoint, Rational};

/// An open interval `(lo, hi)` holding exactly one simple real root of the
/// polynomial it was computed for; the polynomial is nonzero at both ends with
/// opposite signs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsolatingInterval {
    #[serde(with = "exact_serde")]
    pub lo: Rational,
    #[serde(with = "exact_serde")]
    pub hi: Rational,
    pub sign_left: i8,
    pub sign_right: i8,
}

impl IsolatingInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        midpoint(&self.lo, &self.hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.lo < o.hi && o.lo < self.hi
    }

    pub fn as_interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    /// The interval for the root `−r` of `p(−x)`.
    pub fn mirrored(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
            sign_left: self.sign_right,
            sign_right: self.sign_left,
        }
    }
}

/// Squarefree polynomial together with its Sturm sequence.
#[derive(Debug, Clone)]
pub struct RootIsolator {
    poly: UPoly,
    sturm: Vec<IntCoeffs>,
}

impl RootIsolator {
    pub fn new(p: &UPoly) -> Result<Self> {
        let q = p.squarefree_ints()?;
        Ok(Self {
            poly: intpoly::from_ints(&q).monic(),
            sturm: intpoly::sturm(q),
        })
    }

    /// The monic squarefree polynomial whose roots are isolated.
    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    fn sign(&self, x: &Rational) -> i8 {
        intpoly::sign_at(&self.sturm[0], x)
    }

    fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    fn variations(&self, x: &Rational) -> usize {
        Self::count_changes(self.sturm.iter().map(|p| intpoly::sign_at(p, x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::count_changes(self.sturm.iter().map(|p| {
            let s = if p.last().is_some_and(|c| c.is_negative()) { -1 } else { 1 };
            if positive || p.len() % 2 == 1 {
                s
            } else {
                -s
            }
        }))
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    pub fn count_in(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo >= hi {
            return 0;
        }
        let at_hi = usize::from(self.sign(hi) == 0);
        self.variations(lo) - self.variations(hi) - at_hi
    }

    /// Number of distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Every real root lies in `(−B, B)`.
    pub fn root_bound(&self) -> Rational {
        let p = self.poly();
        let lc = p.lc().abs();
        let m = p.coeffs()[..p.coeffs().len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + int(1)
    }

    pub fn isolate_all(&self) -> Vec<IsolatingInterval> {
        let b = self.root_bound();
        self.isolate(&-&b, &b)
    }

    /// Isolating intervals of all roots in `(lo, hi)`, ascending.
    pub fn isolate(&self, lo: &Rational, hi: &Rational) -> Vec<IsolatingInterval> {
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            let n = self.count_in(&a, &b);
            if n == 0 {
                continue;
            }
            let (sa, sb) = (self.sign(&a), self.sign(&b));
            if n == 1 && sa != 0 && sb != 0 {
                out.push(IsolatingInterval {
                    lo: a,
                    hi: b,
                    sign_left: sa,
                    sign_right: sb,
                });
                continue;
            }
            let m = self.split_point(&a, &b);
            // right half pushed first so the left half is processed first
            stack.push((m.clone(), b));
            stack.push((a, m));
        }
        out
    }

    /// A point strictly inside `(a, b)` that is not a root.
    fn split_point(&self, a: &Rational, b: &Rational) -> Rational {
        let mut m = midpoint(a, b);
        while self.sign(&m) == 0 {
            m = midpoint(a, &m);
        }
        m
    }

    /// Bisects until `hi − lo ≤ width`.
    pub fn refine(&self, iv: &IsolatingInterval, width: &Rational) -> IsolatingInterval {
        let mut iv = iv.clone();
        while &iv.width() > width {
            let m = iv.midpoint();
            match self.sign(&m) {
                0 => {
                    // exact rational root: shrink symmetrically around it
                    let lo = midpoint(&iv.lo, &m);
                    let hi = midpoint(&m, &iv.hi);
                    iv.sign_left = self.sign(&lo);
                    iv.sign_right = self.sign(&hi);
                    iv.lo = lo;
                    iv.hi = hi;
                }
                s if s == iv.sign_left => iv.lo = m,
                _ => iv.hi = m,
            }
        }
        iv
    }

    /// Halves the width once.
    pub fn bisect(&self, iv: &IsolatingInterval) -> IsolatingInterval {
        self.refine(iv, &(iv.width() / int(2)))
    }

    /// Exact sign of `q` at the root isolated by `iv`.
    pub fn sign_at_root(&self, iv: &IsolatingInterval, q: &UPoly) -> i8 {
        if q.is_zero() {
            return 0;
        }
        let g = self.poly().gcd(q);
        if !g.is_constant() {
            let gi = RootIsolator::new(&g).expect("nonzero gcd");
            if gi.count_in(&iv.lo, &iv.hi) > 0 {
                return 0;
            }
        }
        let mut iv = iv.clone();
        loop {
            if let Some(s) = Interval::eval_univariate(q, &iv.as_interval()).certified_sign() {
                return s;
            }
            iv = self.bisect(&iv);
        }
    }

    /// Shrinks `iv` until `q` has a certified sign on it; returns the sign and
    /// the refined interval. `q` must not vanish at the root.
    pub fn certify_sign_of(&self, iv: &IsolatingInterval, q: &UPoly) -> (i8, IsolatingInterval) {
        let s = self.sign_at_root(iv, q);
        assert!(s != 0, "q vanishes at the root");
        let mut iv = iv.clone();
        loop {
            if Interval::eval_univariate(q, &iv.as_interval()).certified_sign() == Some(s) {
                return (s, iv);
            }
            iv = self.bisect(&iv);
        }
    }
}

/// Isolating intervals for the real roots of `p` in the open range
/// `(lo, hi)`. The intervals refer to the squarefree part of `p`.
pub fn isolate_roots(p: &UPoly, range: (&Rational, &Rational)) -> Result<Vec<IsolatingInterval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(RootIsolator::new(p)?.isolate(range.0, range.1))
}

/// Bisects `iv` (an isolating interval of a root of `p`) down to `width`.
pub fn refine(iv: &IsolatingInterval, p: &UPoly, width: &Rational) -> IsolatingInterval {
    match RootIsolator::new(p) {
        Ok(iso) => iso.refine(iv, width),
        Err(_) => iv.clone(),
    }
}

/// Exact sign of `q` at the root of `p` isolated by `iv`.
pub fn sign_at_root(p: &UPoly, iv: &IsolatingInterval, q: &UPoly) -> Result<i8> {
    Ok(RootIsolator::new(p)?.sign_at_root(iv, q))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn isolate_examples() {
        let p = UPoly::from_ints(&[-1, 0, 1]);
        let ivs = isolate_roots(&p, (&int(-2), &int(2))).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].contains(&int(-1)) && ivs[1].contains(&int(1)));

        let p = UPoly::from_ints(&[0, -1, 0, 1]);
        let ivs = isolate_roots(&p, (&int(0), &int(2))).unwrap();
        assert_eq!(ivs.len(), 1);
        assert!(ivs[0].contains(&int(1)));

        assert_eq!(
            isolate_roots(&UPoly::zero(), (&int(0), &int(1))),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn coste_fiber_quartic() {
        // f(9/100, y) - 1/100 for f = x^2 + (y^2 - x)^2
        let f: crate::BivariatePolynomial = "x^2+(y^2-x)^2".parse().unwrap();
        let p = &f.subs_x(&rat(9, 100)) - &UPoly::constant(rat(1, 100));
        let iso = RootIsolator::new(&p).unwrap();
        let ivs = iso.isolate_all();
        assert_eq!(ivs.len(), 4);
        let w = rat(1, 10000);
        let approx: Vec<f64> = ivs
            .iter()
            .map(|iv| crate::rational::to_f64(&iso.refine(iv, &w).midpoint()))
            .collect();
        // roots of (y^2 - 9/100)^2 = 19/10^4
        let r1 = (0.09f64 - 0.0019f64.sqrt()).sqrt();
        let r2 = (0.09f64 + 0.0019f64.sqrt()).sqrt();
        let expected = [-r2, -r1, r1, r2];
        for (a, e) in approx.iter().zip(expected) {
            assert!((a - e).abs() < 1e-3, "{a} vs {e}");
        }
        assert!((r1 - 0.2154).abs() < 1e-3 && (r2 - 0.3655).abs() < 1e-3);
    }

    #[test]
    fn refine_examples() {
        let p = UPoly::from_ints(&[-1, 0, 1]);
        let iv = IsolatingInterval { lo: int(0), hi: int(2), sign_left: -1, sign_right: 1 };
        let r = refine(&iv, &p, &rat(1, 8));
        assert!(r.width() <= rat(1, 8) && r.contains(&int(1)));
        assert_eq!(refine(&iv, &p, &int(3)), iv);

        let p = UPoly::new(vec![rat(-1, 2), int(0), int(1)]);
        let iv = IsolatingInterval { lo: int(0), hi: int(1), sign_left: -1, sign_right: 1 };
        let r = refine(&iv, &p, &rat(1, 100));
        assert!(r.width() <= rat(1, 100));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(crate::rational::to_f64(&r.lo) < s && s < crate::rational::to_f64(&r.hi));
    }

    #[test]
    fn exact_root_at_bisection_point() {
        // roots 0, 1/2, 1: 1/2 is the first midpoint of (0, 1) ... of (-1, 2)
        let p = &(&UPoly::from_ints(&[0, 1]) * &UPoly::new(vec![rat(-1, 2), int(1)]))
            * &UPoly::from_ints(&[-1, 1]);
        let ivs = isolate_roots(&p, (&int(-1), &int(2))).unwrap();
        assert_eq!(ivs.len(), 3);
        for (iv, r) in ivs.iter().zip([int(0), rat(1, 2), int(1)]) {
            assert!(iv.contains(&r));
            assert_eq!(iv.sign_left, -iv.sign_right);
        }
    }

    #[test]
    fn sign_at_root_detects_exact_zero() {
        let p = UPoly::from_ints(&[-2, 0, 1]); // ±√2
        let iso = RootIsolator::new(&p).unwrap();
        let ivs = iso.isolate_all();
        let q = UPoly::from_ints(&[-2, 0, 1, 0, 0]); // same roots
        assert_eq!(iso.sign_at_root(&ivs[1], &q), 0);
        let q = UPoly::from_ints(&[0, 1]); // x
        assert_eq!(iso.sign_at_root(&ivs[0], &q), -1);
        assert_eq!(iso.sign_at_root(&ivs[1], &q), 1);
    }
}
