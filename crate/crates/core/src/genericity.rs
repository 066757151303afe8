//! Certificates that a projection direction is generic for the small level
//! curves around the origin.
//!
//! The vertical direction is generic when the polar curve `∂f/∂y = 0` is
//! reduced (no vertical inflectional tangents) and `φ(x, y) = (x, f(x, y))`
//! is injective on it (no vertical bitangents). Injectivity is checked at a
//! geometric sequence of exact abscissae on both sides of the origin; equal
//! critical values are decided exactly through a resultant in `z`.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::direction::UnitDirection;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poly::{
    resultant_y, BivariatePolynomial, Interval, RootIsolator, UnivariatePolynomial, Var,
};
use crate::rational::{exact_serde, int, pow2_neg, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCurve {
    pub defining_polynomial: BivariatePolynomial,
    pub is_reduced: bool,
}

/// `Γ(f, x) = {∂f/∂y = 0}`.
pub fn polar_curve(f: &BivariatePolynomial) -> Result<PolarCurve> {
    let fy = f.partial(Var::Y);
    if fy.is_zero() {
        return Err(Error::ConstantInY);
    }
    let is_reduced = fy.is_squarefree()?;
    Ok(PolarCurve {
        defining_polynomial: fy,
        is_reduced,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Generic,
    NonGenericInflection,
    NonGenericBitangent,
    NonGenericBoth,
}

impl Verdict {
    pub fn from_flags(polar_reduced: bool, phi_injective: bool) -> Self {
        match (polar_reduced, phi_injective) {
            (true, true) => Verdict::Generic,
            (false, true) => Verdict::NonGenericInflection,
            (true, false) => Verdict::NonGenericBitangent,
            (false, false) => Verdict::NonGenericBoth,
        }
    }

    pub fn is_generic(self) -> bool {
        self == Verdict::Generic
    }
}

/// Two polar points over the same abscissa with equal values of `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    #[serde(with = "exact_serde")]
    pub x: Rational,
    /// Indices of the colliding roots of `∂f/∂y(x, ·)`, ascending in `y`.
    pub i: usize,
    pub j: usize,
}

/// Abscissae `x_max·2^(−k)` for `k < samples`, followed by their negatives.
pub fn sample_abscissae(x_max: &Rational, samples: u32) -> Vec<Rational> {
    let pos: Vec<Rational> = (0..samples.max(1)).map(|k| x_max * pow2_neg(k)).collect();
    let neg: Vec<Rational> = pos.iter().map(|x| -x).collect();
    pos.into_iter().chain(neg).collect()
}

/// Looks for two distinct real roots `y_i < y_j` of `∂f/∂y(x₀, ·)` with
/// `f(x₀, y_i) = f(x₀, y_j)`.
pub fn fiber_collision(f: &BivariatePolynomial, x0: &Rational) -> Option<(usize, usize)> {
    let p = f.partial(Var::Y).subs_x(x0);
    if p.is_constant() {
        return None;
    }
    let iso = RootIsolator::new(&p).ok()?;
    let roots = iso.isolate_all();
    if roots.len() < 2 {
        return None;
    }
    let q = f.subs_x(x0);
    // critical values are the roots of Res_y(p(y), q(y) − z), z in the x slot
    let py = BivariatePolynomial::from_y_coeffs(
        &iso.poly()
            .coeffs()
            .iter()
            .map(|c| UnivariatePolynomial::constant(c.clone()))
            .collect::<Vec<_>>(),
    );
    let qz = &BivariatePolynomial::from_y_coeffs(
        &q.coeffs()
            .iter()
            .map(|c| UnivariatePolynomial::constant(c.clone()))
            .collect::<Vec<_>>(),
    ) - &BivariatePolynomial::x();
    let rz = resultant_y(&py, &qz).expect("p has positive degree");
    if rz.is_squarefree().unwrap_or(true) {
        return None;
    }
    let values = RootIsolator::new(&rz).expect("nonzero resultant");
    let zs = values.isolate_all();
    let mut labels = Vec::with_capacity(roots.len());
    for r in &roots {
        let mut iv = r.clone();
        let label = loop {
            let v = Interval::eval_univariate(&q, &iv.as_interval());
            if let Some(k) = zs.iter().position(|z| z.lo < v.lo && v.hi < z.hi) {
                break k;
            }
            iv = iso.bisect(&iv);
        };
        labels.push(label);
    }
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if labels[i] == labels[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Sampled check that `φ|Γ` is injective near the origin.
pub fn phi_injective_on_polar(
    f: &BivariatePolynomial,
    x_max: &Rational,
    samples: u32,
) -> (bool, Option<Collision>) {
    for x0 in sample_abscissae(x_max, samples) {
        if let Some((i, j)) = fiber_collision(f, &x0) {
            debug!("phi collision at x = {x0}: roots {i} and {j}");
            return (false, Some(Collision { x: x0, i, j }));
        }
    }
    (true, None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityCertificate {
    pub direction: UnitDirection,
    pub polar_reduced: bool,
    pub phi_injective: bool,
    #[serde(with = "exact_vec")]
    pub sample_xs: Vec<Rational>,
    pub verdict: Verdict,
    pub witness: Option<Collision>,
}

/// Certifies the vertical projection of `rotate(f, d)`.
pub fn genericity_certificate(
    f: &BivariatePolynomial,
    d: &UnitDirection,
    x_max: &Rational,
    samples: u32,
) -> Result<GenericityCertificate> {
    let g = f.rotate(d);
    let polar = polar_curve(&g)?;
    let (phi_injective, witness) = phi_injective_on_polar(&g, x_max, samples);
    Ok(GenericityCertificate {
        direction: d.clone(),
        polar_reduced: polar.is_reduced,
        phi_injective,
        sample_xs: sample_abscissae(x_max, samples),
        verdict: Verdict::from_flags(polar.is_reduced, phi_injective),
        witness,
    })
}

/// Default sampling: `x_max = 1/4`, four abscissae per side.
pub fn default_x_max() -> Rational {
    rat(1, 4)
}

pub const DEFAULT_SAMPLES: u32 = 4;

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub x_max: Rational,
    pub samples: u32,
    /// When set, a direction whose sweep at this level has two events over
    /// one abscissa is flagged as a bitangent direction as well.
    pub epsilon_probe: Option<Rational>,
    pub execution: Execution,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            x_max: default_x_max(),
            samples: DEFAULT_SAMPLES,
            epsilon_probe: None,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSample {
    #[serde(with = "exact_serde")]
    pub t: Rational,
    pub direction: UnitDirection,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TInterval {
    #[serde(with = "exact_serde")]
    pub t_lo: Rational,
    #[serde(with = "exact_serde")]
    pub t_hi: Rational,
}

impl TInterval {
    pub fn contains(&self, t: &Rational) -> bool {
        &self.t_lo <= t && t <= &self.t_hi
    }

    pub fn is_within(&self, o: &TInterval) -> bool {
        o.t_lo <= self.t_lo && self.t_hi <= o.t_hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionScanReport {
    pub samples: Vec<ScanSample>,
    pub non_generic_intervals: Vec<TInterval>,
    #[serde(with = "exact_serde")]
    pub resolution: Rational,
}

impl DirectionScanReport {
    /// Distance in `t` from `t` to the nearest flagged interval.
    pub fn distance_to_flagged(&self, t: &Rational) -> Option<Rational> {
        self.non_generic_intervals
            .iter()
            .map(|iv| {
                if iv.contains(t) {
                    int(0)
                } else if t < &iv.t_lo {
                    &iv.t_lo - t
                } else {
                    t - &iv.t_hi
                }
            })
            .min()
    }
}

/// `k/N` for `k = −N..=N` with `N = max(points/2, 1)`: always contains 0 and ±1.
pub fn half_angle_grid(points: u32) -> Vec<Rational> {
    let n = (points / 2).max(1) as i64;
    (-n..=n).map(|k| rat(k, n)).collect()
}

/// Certifies every grid direction and merges non-generic runs into padded,
/// disjoint intervals of `t`.
pub fn direction_scan(
    f: &BivariatePolynomial,
    t_grid: &[Rational],
    opts: &ScanOptions,
) -> Result<DirectionScanReport> {
    polar_curve(f)?;
    let verdicts: Vec<Verdict> = par::map(opts.execution, t_grid, |t| {
        let d = UnitDirection::from_half_angle(t);
        let cert = match genericity_certificate(f, &d, &opts.x_max, opts.samples) {
            Ok(c) => c.verdict,
            // a rotation constant in y cannot be projected along x
            Err(_) => Verdict::NonGenericBoth,
        };
        if cert.is_generic() {
            if let Some(eps) = &opts.epsilon_probe {
                let g = f.rotate(&d);
                if let Err(Error::NonGenericTie { .. }) = crate::sweep::sweep(&g, eps) {
                    return Verdict::NonGenericBitangent;
                }
            }
        }
        cert
    });
    let samples: Vec<ScanSample> = t_grid
        .iter()
        .zip(&verdicts)
        .map(|(t, v)| ScanSample {
            t: t.clone(),
            direction: UnitDirection::from_half_angle(t),
            verdict: *v,
        })
        .collect();
    let resolution = t_grid
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .max()
        .unwrap_or_else(|| int(0));
    let last = t_grid.len().saturating_sub(1);
    let mut intervals: Vec<TInterval> = Vec::new();
    let mut i = 0;
    while i < verdicts.len() {
        if verdicts[i].is_generic() {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < verdicts.len() && !verdicts[j + 1].is_generic() {
            j += 1;
        }
        let iv = TInterval {
            t_lo: t_grid[i.saturating_sub(1)].clone(),
            t_hi: t_grid[(j + 1).min(last)].clone(),
        };
        match intervals.last_mut() {
            Some(prev) if prev.t_hi >= iv.t_lo => prev.t_hi = iv.t_hi,
            _ => intervals.push(iv),
        }
        i = j + 1;
    }
    Ok(DirectionScanReport {
        samples,
        non_generic_intervals: intervals,
        resolution,
    })
}

/// At most `3n(n − 2)` inflection points on a degree-`n` curve without lines.
pub fn max_inflections(n: u32) -> Result<u64> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { n });
    }
    let n = n as u64;
    Ok(3 * n * (n - 2))
}

/// At most `(n − 1)(n − 2)/2` singular points on an irreducible degree-`n` curve.
pub fn max_singularities(n: u32) -> Result<u64> {
    if n < 1 {
        return Err(Error::DegreeTooSmall { n });
    }
    let n = n as u64;
    Ok((n - 1) * n.saturating_sub(2) / 2)
}

mod exact_vec {
    use crate::rational::{fmt_exact, parse_exact, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_exact))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_exact(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivariatePolynomial {
        s.parse().unwrap()
    }

    const COSTE: &str = "x^2+(y^2-x)^2";
    const BITANGENT: &str = "x^10+y^6/6-3*x*y^4/4+x^2*y^2";
    const INFLECTION: &str = "x^12+y^4/4-x^2*y^3/3";

    #[test]
    fn polar_examples() {
        let c = polar_curve(&p(COSTE)).unwrap();
        assert_eq!(c.defining_polynomial, p("4*y*(y^2-x)"));
        assert!(c.is_reduced);
        let c = polar_curve(&p(BITANGENT)).unwrap();
        assert_eq!(c.defining_polynomial, p("y*(y^2-x)*(y^2-2*x)"));
        assert!(c.is_reduced);
        let c = polar_curve(&p(INFLECTION)).unwrap();
        assert_eq!(c.defining_polynomial, p("y^2*(y-x^2)"));
        assert!(!c.is_reduced);
        assert_eq!(polar_curve(&p("x^2+1")), Err(Error::ConstantInY));
    }

    #[test]
    fn coste_collision_at_quarter() {
        // roots -1/2, 0, 1/2 with values 1/16, 1/8, 1/16
        let f = p(COSTE);
        assert_eq!(fiber_collision(&f, &rat(1, 4)), Some((0, 2)));
        let (inj, w) = phi_injective_on_polar(&f, &rat(1, 4), 4);
        assert!(!inj);
        assert_eq!(w.unwrap().x, rat(1, 4));
    }

    #[test]
    fn circle_is_injective() {
        let (inj, w) = phi_injective_on_polar(&p("x^2+y^2"), &rat(1, 4), 4);
        assert!(inj && w.is_none());
    }

    #[test]
    fn bitangent_example_collides() {
        let f = p(BITANGENT);
        assert!(fiber_collision(&f, &rat(1, 64)).is_some());
        assert!(!phi_injective_on_polar(&f, &rat(1, 4), 4).0);
    }

    #[test]
    fn certificate_examples() {
        let id = UnitDirection::identity();
        let x_max = default_x_max();
        let v = |s: &str, d: &UnitDirection| {
            genericity_certificate(&p(s), d, &x_max, DEFAULT_SAMPLES)
                .unwrap()
                .verdict
        };
        assert_eq!(v(COSTE, &id), Verdict::NonGenericBitangent);
        assert_eq!(v(BITANGENT, &id), Verdict::NonGenericBitangent);
        assert_eq!(v(INFLECTION, &id), Verdict::NonGenericInflection);
        for t in [rat(0, 1), rat(1, 3), rat(-5, 7)] {
            assert_eq!(v("x^2+y^2", &UnitDirection::from_half_angle(&t)), Verdict::Generic);
        }
        assert_eq!(v(COSTE, &UnitDirection::from_half_angle(&rat(1, 10))), Verdict::Generic);
    }

    #[test]
    fn certificate_records_samples() {
        let c = genericity_certificate(&p(COSTE), &UnitDirection::identity(), &rat(1, 4), 3)
            .unwrap();
        assert_eq!(c.sample_xs.len(), 6);
        use num_traits::Signed;
        assert!(c.sample_xs.iter().all(|x| x.abs() <= rat(1, 4) && *x != int(0)));
    }

    #[test]
    fn bounds() {
        assert_eq!(max_inflections(4), Ok(24));
        assert_eq!(max_singularities(4), Ok(3));
        assert_eq!(max_inflections(2), Ok(0));
        assert_eq!(max_singularities(1), Ok(0));
        assert_eq!(max_inflections(1), Err(Error::DegreeTooSmall { n: 1 }));
        assert_eq!(max_singularities(0), Err(Error::DegreeTooSmall { n: 0 }));
    }

    #[test]
    fn scan_grid_contains_zero() {
        let g = half_angle_grid(128);
        assert_eq!(g.len(), 129);
        assert!(g.contains(&int(0)));
        assert_eq!(g[0], int(-1));
        assert_eq!(g[128], int(1));
    }

    #[test]
    fn scan_circle_and_coste() {
        let opts = ScanOptions::default();
        let grid = half_angle_grid(16);
        let r = direction_scan(&p("x^2+y^2"), &grid, &opts).unwrap();
        assert!(r.non_generic_intervals.is_empty());
        let r = direction_scan(&p(COSTE), &grid, &opts).unwrap();
        assert!(r.non_generic_intervals.iter().any(|iv| iv.contains(&int(0))));
        assert_eq!(r.resolution, rat(1, 8));
    }
}
