//! One-sided sweep over `0 < x < B` of `{f ≤ ε}`.
//!
//! Critical abscissae are the real roots of `Res_y(f − ε, f_y)`. Each one is
//! analysed on an isolating box `[a, b]`: polar branches are followed from
//! `a` to `b`, an event is a branch along which `f − ε` changes sign, and a
//! window `c < y < d` around the event is certified so that fiber roots of
//! `f − ε` outside it persist in order across the box.

use log::trace;

use super::{EventKind, Side};
use crate::error::{Error, Result};
use crate::poly::{
    resultant_y, BivariatePolynomial, Interval, IsolatingInterval, RootIsolator,
    Var,
};
use crate::rational::{int, midpoint, pow2_neg, rat, sign, simplest_between, Rational};

const MAX_STEPS: usize = 400;

pub(crate) struct Engine {
    fx: BivariatePolynomial,
    fy: BivariatePolynomial,
    fyy: BivariatePolynomial,
    level: BivariatePolynomial,
    bound: Rational,
    crit: RootIsolator,
    guard: Option<RootIsolator>,
}

/// A certified tangency, in the coordinates of the engine's polynomial.
#[derive(Debug, Clone)]
pub(crate) struct RawEvent {
    pub x_box: IsolatingInterval,
    pub y_box: IsolatingInterval,
    pub kind: EventKind,
    /// Index of the lower of the two fiber roots created or destroyed,
    /// counted on the side of the box where they exist.
    pub pair_index: usize,
    /// `f < ε` between the two roots.
    pub interval_pair: bool,
    /// Index of the polar root of `f_y(x, ·)` carrying the event.
    pub branch: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct CriticalBox {
    pub x_box: IsolatingInterval,
    pub events: Vec<RawEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Step {
    Split {
        event: (usize, usize),
        parent: usize,
        upper: usize,
        lower: usize,
    },
    Die {
        event: (usize, usize),
        label: usize,
    },
}

/// Result of threading the origin's component through the critical boxes.
#[derive(Debug, Clone)]
pub(crate) struct Threading {
    /// Boxes in ascending `x`, each with at most one event.
    pub boxes: Vec<CriticalBox>,
    /// `tracked[k]`: (root pair index, label) alive in gap `k`, before box `k`.
    pub tracked: Vec<Vec<(usize, usize)>>,
    /// Steps in ascending `x`; `event` is (box, index within the box).
    pub steps: Vec<Step>,
    pub half_branches: usize,
}

fn certified(f: &BivariatePolynomial, x: &Interval, y: &Interval) -> Option<i8> {
    Interval::eval_bivariate(f, x, y).certified_sign()
}

/// Exact sign of `f(·, y)` on `[a, b]`, if it has none there.
fn edge_sign(f: &BivariatePolynomial, a: &Rational, b: &Rational, y: &Rational) -> Option<i8> {
    let p = f.subs_y(y);
    let (sa, sb) = (p.sign_at(a), p.sign_at(b));
    if sa == 0 || sa != sb {
        return None;
    }
    if p.is_constant() {
        return Some(sa);
    }
    let iso = RootIsolator::new(&p).ok()?;
    (iso.count_in(a, b) == 0).then_some(sa)
}

/// Is the root isolated by `iv` strictly greater than `v`?
fn root_above(iso: &RootIsolator, iv: &IsolatingInterval, v: &Rational) -> bool {
    if v <= &iv.lo {
        return true;
    }
    if v >= &iv.hi {
        return false;
    }
    match iso.poly().sign_at(v) {
        0 => false,
        s => s == iv.sign_left,
    }
}

/// A rational strictly between two consecutive isolated roots.
fn point_between(lo: &IsolatingInterval, hi: &IsolatingInterval) -> Rational {
    if lo.hi == hi.lo {
        lo.hi.clone()
    } else {
        simplest_between(&lo.hi, &hi.lo)
    }
}

impl Engine {
    pub fn new(f: &BivariatePolynomial, eps: &Rational, bound: &Rational) -> Result<Self> {
        if sign(eps) <= 0 {
            return Err(Error::NonPositiveEpsilon);
        }
        let fy = f.partial(Var::Y);
        if fy.is_zero() {
            return Err(Error::ConstantInY);
        }
        let fyy = fy.partial(Var::Y);
        let level = f - &BivariatePolynomial::constant(eps.clone());
        let r = resultant_y(&level, &fy)?;
        if r.is_zero() {
            return Err(Error::DegenerateTangency { x: "*".into() });
        }
        if r.sign_at(&int(0)) == 0 {
            return Err(Error::EventAtZero);
        }
        let lc = f.lc_y();
        if !lc.is_constant() {
            let iso = RootIsolator::new(&lc)?;
            if iso.count_in(&-bound, bound) > 0
                || lc.sign_at(bound) == 0
                || lc.sign_at(&-bound) == 0
            {
                return Err(Error::LeadingCoefficientVanishes);
            }
        }
        let guard = if fy.degree_in(Var::Y).unwrap_or(0) == 0 {
            None
        } else {
            let disc = resultant_y(&fy, &fyy)?;
            if disc.is_zero() {
                return Err(Error::NonReducedPolar);
            }
            let g = &disc * &fy.lc_y();
            if g.is_constant() {
                None
            } else {
                Some(RootIsolator::new(&g)?)
            }
        };
        Ok(Self {
            fx: f.partial(Var::X),
            fy,
            fyy,
            level,
            bound: bound.clone(),
            crit: RootIsolator::new(&r)?,
            guard,
        })
    }

    pub fn crit(&self) -> &RootIsolator {
        &self.crit
    }

    fn fiber(&self, x: &Rational) -> Result<RootIsolator> {
        RootIsolator::new(&self.level.subs_x(x))
    }

    /// Isolating boxes of the critical abscissae in `(0, B)`, pairwise
    /// disjoint as closed intervals.
    fn critical_boxes(&self) -> Vec<IsolatingInterval> {
        let mut boxes = self.crit.isolate(&int(0), &self.bound);
        for b in boxes.iter_mut() {
            while b.lo <= int(0) || b.hi >= self.bound {
                *b = self.crit.bisect(b);
            }
        }
        for i in 1..boxes.len() {
            while boxes[i - 1].hi >= boxes[i].lo {
                boxes[i - 1] = self.crit.bisect(&boxes[i - 1]);
                boxes[i] = self.crit.bisect(&boxes[i]);
            }
        }
        boxes
    }

    /// Shrinks `xb` until the polar branches are ordered and continuous over it.
    fn clear_guard(&self, mut xb: IsolatingInterval) -> Result<IsolatingInterval> {
        let Some(g) = &self.guard else {
            return Ok(xb);
        };
        let common = self.crit.poly().gcd(g.poly());
        if !common.is_constant() {
            let ci = RootIsolator::new(&common)?;
            if ci.count_in(&xb.lo, &xb.hi) > 0 {
                return Err(Error::DegenerateTangency {
                    x: xb.midpoint().to_string(),
                });
            }
        }
        let p = g.poly();
        while g.count_in(&xb.lo, &xb.hi) > 0 || p.sign_at(&xb.lo) == 0 || p.sign_at(&xb.hi) == 0 {
            xb = self.crit.bisect(&xb);
        }
        Ok(xb)
    }

    /// Branch indices of `f_y(x, ·)` along which `f − ε` changes sign over `xb`.
    fn sign_changing_branches(&self, xb: &IsolatingInterval) -> Result<Vec<usize>> {
        let (ia, ib) = (
            RootIsolator::new(&self.fy.subs_x(&xb.lo))?,
            RootIsolator::new(&self.fy.subs_x(&xb.hi))?,
        );
        let (ra, rb) = (ia.isolate_all(), ib.isolate_all());
        if ra.len() != rb.len() {
            return Err(Error::DegenerateTangency {
                x: xb.midpoint().to_string(),
            });
        }
        let (la, lb) = (self.level.subs_x(&xb.lo), self.level.subs_x(&xb.hi));
        let mut out = Vec::new();
        for i in 0..ra.len() {
            if ia.sign_at_root(&ra[i], &la) != ib.sign_at_root(&rb[i], &lb) {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn certify_event(&self, mut xb: IsolatingInterval, branch: usize) -> Result<RawEvent> {
        let mut w = rat(1, 8);
        for _ in 0..MAX_STEPS {
            let (a, b) = (&xb.lo, &xb.hi);
            let ia = RootIsolator::new(&self.fy.subs_x(a))?;
            let ib = RootIsolator::new(&self.fy.subs_x(b))?;
            let (ra, rb) = (ia.isolate_all(), ib.isolate_all());
            let quarter = &w / int(4);
            let ya = ia.refine(&ra[branch], &quarter);
            let yb = ib.refine(&rb[branch], &quarter);
            let hull_lo = std::cmp::min(&ya.lo, &yb.lo).clone();
            let hull_hi = std::cmp::max(&ya.hi, &yb.hi).clone();
            if &hull_hi - &hull_lo >= w {
                // the branch still moves too much across the box
                xb = self.crit.bisect(&xb);
                continue;
            }
            let center = midpoint(&hull_lo, &hull_hi);
            let q = &w / int(4);
            let c = simplest_between(&(&center - &w), &(&center - &w + &q));
            let d = simplest_between(&(&center + &w - &q), &(&center + &w));
            let xi = Interval::new(a.clone(), b.clone());
            let wi = Interval::new(c.clone(), d.clone());
            let syy = certified(&self.fyy, &xi, &wi);
            let sx = certified(&self.fx, &xi, &wi);
            if syy.is_none() || sx.is_none() {
                w /= int(2);
                xb = self.crit.bisect(&xb);
                continue;
            }
            let (sc, sd) = (edge_sign(&self.fy, a, b, &c), edge_sign(&self.fy, a, b, &d));
            let (lc, ld) = (edge_sign(&self.level, a, b, &c), edge_sign(&self.level, a, b, &d));
            let line_sign = match (sc, sd, lc, ld) {
                (Some(u), Some(v), Some(l), Some(m)) if u != v && l == m => l,
                _ => {
                    xb = self.crit.bisect(&xb);
                    continue;
                }
            };
            let (fa, fb) = (self.fiber(a)?, self.fiber(b)?);
            let (na, nb) = (fa.count_in(&c, &d), fb.count_in(&c, &d));
            let kind = if -syy.unwrap() * sx.unwrap() > 0 {
                EventKind::Crest
            } else {
                EventKind::Valley
            };
            let side_with_pair = match ((na, nb), kind) {
                ((0, 2), EventKind::Crest) => &fb,
                ((2, 0), EventKind::Valley) => &fa,
                _ => {
                    return Err(Error::DegenerateTangency {
                        x: xb.midpoint().to_string(),
                    })
                }
            };
            let m = side_with_pair.root_bound();
            let pair_index = side_with_pair.count_in(&-&m, &c);
            let xb = self.crit.refine(&xb, &pow2_neg(32));
            let y_box = self
                .tight_y_box(&xb, branch)?
                .unwrap_or(IsolatingInterval {
                    lo: c,
                    hi: d,
                    sign_left: sc.unwrap(),
                    sign_right: sd.unwrap(),
                });
            trace!("event {kind:?} at x in [{}, {}]", xb.lo, xb.hi);
            return Ok(RawEvent {
                x_box: xb,
                y_box,
                kind,
                pair_index,
                interval_pair: line_sign > 0,
                branch,
            });
        }
        Err(Error::DegenerateTangency {
            x: xb.midpoint().to_string(),
        })
    }

    /// Hull of the branch's polar roots at both ends of `xb`, if the polar
    /// signs certify that it holds the branch over the whole box.
    fn tight_y_box(&self, xb: &IsolatingInterval, branch: usize) -> Result<Option<IsolatingInterval>> {
        let w = pow2_neg(32);
        let ia = RootIsolator::new(&self.fy.subs_x(&xb.lo))?;
        let ib = RootIsolator::new(&self.fy.subs_x(&xb.hi))?;
        let ya = ia.refine(&ia.isolate_all()[branch], &w);
        let yb = ib.refine(&ib.isolate_all()[branch], &w);
        let lo = std::cmp::min(&ya.lo, &yb.lo).clone();
        let hi = std::cmp::max(&ya.hi, &yb.hi).clone();
        let s = |y: &Rational| edge_sign(&self.fy, &xb.lo, &xb.hi, y);
        Ok(match (s(&lo), s(&hi)) {
            (Some(u), Some(v)) if u != v => Some(IsolatingInterval {
                lo,
                hi,
                sign_left: u,
                sign_right: v,
            }),
            _ => None,
        })
    }

    /// All certified tangencies with `0 < x < B`, grouped by critical box.
    pub fn critical(&self) -> Result<Vec<CriticalBox>> {
        let mut out = Vec::new();
        for xb in self.critical_boxes() {
            let xb = self.clear_guard(xb)?;
            let events = self
                .sign_changing_branches(&xb)?
                .into_iter()
                .map(|br| self.certify_event(xb.clone(), br))
                .collect::<Result<Vec<_>>>()?;
            out.push(CriticalBox { x_box: xb, events });
        }
        Ok(out)
    }

    /// Sample abscissa of gap `k` (gap 0 starts at `x = 0`).
    pub fn gap_sample(boxes: &[CriticalBox], k: usize, bound: &Rational) -> Rational {
        if k == 0 {
            return int(0);
        }
        let lo = &boxes[k - 1].x_box.hi;
        let hi = boxes.get(k).map(|b| &b.x_box.lo).unwrap_or(bound);
        if lo < hi {
            simplest_between(lo, hi)
        } else {
            lo.clone()
        }
    }

    /// Checks that every tracked pair bounds a piece of `{f < ε}` inside the box.
    fn check_slice(&self, x: &Rational, expected: Option<usize>, tracked: &[(usize, usize)]) -> Result<usize> {
        let iso = self.fiber(x)?;
        let roots = iso.isolate_all();
        if let Some(n) = expected {
            if roots.len() != n {
                return Err(Error::InconsistentTransitions(format!(
                    "expected {n} fiber roots at x = {x}, found {}",
                    roots.len()
                )));
            }
        }
        let poly = iso.poly();
        let lower = -&self.bound;
        for &(p, _) in tracked {
            if p + 1 >= roots.len() {
                return Err(Error::EventsOutsideBox);
            }
            let mid = point_between(&roots[p], &roots[p + 1]);
            if self.level.eval(x, &mid) >= int(0) || poly.sign_at(&mid) == 0 {
                return Err(Error::InconsistentTransitions(format!(
                    "tracked pair {p} at x = {x} is not inside the sublevel set"
                )));
            }
            if !root_above(&iso, &roots[p], &lower) || root_above(&iso, &roots[p + 1], &self.bound) {
                return Err(Error::EventsOutsideBox);
            }
        }
        Ok(roots.len())
    }

    /// Follows the component of the origin's fiber interval across all boxes.
    /// Several events over one abscissa are a tie unless `allow_ties`.
    pub fn thread(&self, boxes: Vec<CriticalBox>, side: Side, allow_ties: bool) -> Result<Threading> {
        let iso0 = self.fiber(&int(0))?;
        let below = iso0.count_in(&-&iso0.root_bound(), &int(0));
        if below == 0 {
            return Err(Error::EventsOutsideBox);
        }
        let mut tracked = vec![(below - 1, 0usize)];
        let mut n = self.check_slice(&int(0), None, &tracked)?;
        let half_branches = self.half_branches(&boxes, below - 1)?;
        let mut labels = 1;
        let mut all = vec![tracked.clone()];
        let mut steps = Vec::new();
        for (k, b) in boxes.iter().enumerate() {
            if b.events.len() > 1 && !allow_ties {
                return Err(Error::NonGenericTie { side });
            }
            let mut order: Vec<usize> = (0..b.events.len()).collect();
            order.sort_by_key(|&i| b.events[i].branch);
            // bottom-up: indices below the current event are already on the
            // far side of the box, indices above are shifted by `delta`
            let mut delta: isize = 0;
            for i in order {
                let e = &b.events[i];
                let j = match e.kind {
                    EventKind::Valley => (e.pair_index as isize + delta) as usize,
                    EventKind::Crest => e.pair_index,
                };
                tracked = apply(&tracked, e, j, (k, i), &mut labels, &mut steps)?;
                delta += if e.kind == EventKind::Crest { 2 } else { -2 };
            }
            n = (n as isize + delta) as usize;
            let s = Self::gap_sample(&boxes, k + 1, &self.bound);
            n = self.check_slice(&s, Some(n), &tracked)?;
            all.push(tracked.clone());
        }
        if !tracked.is_empty() {
            return Err(Error::EventsOutsideBox);
        }
        Ok(Threading {
            boxes,
            tracked: all,
            steps,
            half_branches,
        })
    }

    /// Polar roots inside the origin's fiber interval just right of `x = 0`.
    fn half_branches(&self, boxes: &[CriticalBox], p0: usize) -> Result<usize> {
        let hi = boxes.first().map(|b| &b.x_box.lo).unwrap_or(&self.bound);
        let s = if hi > &int(0) {
            simplest_between(&int(0), hi)
        } else {
            return Err(Error::EventAtZero);
        };
        let fiso = self.fiber(&s)?;
        let roots = fiso.isolate_all();
        let polar = self.fy.subs_x(&s);
        if polar.is_constant() {
            return Ok(0);
        }
        let piso = RootIsolator::new(&polar)?;
        let sep = |iv: &IsolatingInterval| {
            let mut iv = iv.clone();
            while piso.count_in(&iv.lo, &iv.hi) > 0
                || piso.poly().sign_at(&iv.lo) == 0
                || piso.poly().sign_at(&iv.hi) == 0
            {
                iv = fiso.bisect(&iv);
            }
            iv
        };
        let (lo, hi) = (sep(&roots[p0]), sep(&roots[p0 + 1]));
        Ok(piso.count_in(&lo.hi, &hi.lo))
    }

    /// Fiber interval endpoints of the tracked pairs at `x`.
    pub fn slice(&self, x: &Rational, tracked: &[(usize, usize)], width: &Rational) -> Result<Vec<(IsolatingInterval, IsolatingInterval)>> {
        let iso = self.fiber(x)?;
        let roots = iso.isolate_all();
        tracked
            .iter()
            .map(|&(p, _)| {
                if p + 1 >= roots.len() {
                    return Err(Error::XAtEvent { x: x.to_string() });
                }
                Ok((iso.refine(&roots[p], width), iso.refine(&roots[p + 1], width)))
            })
            .collect()
    }
}

/// Updates the tracked (pair index, label) list across one event whose
/// root pair starts at index `j` of the current indexing.
fn apply(
    tracked: &[(usize, usize)],
    e: &RawEvent,
    j: usize,
    event: (usize, usize),
    labels: &mut usize,
    steps: &mut Vec<Step>,
) -> Result<Vec<(usize, usize)>> {
    let mut next = Vec::with_capacity(tracked.len() + 1);
    match (e.kind, e.interval_pair) {
        (EventKind::Valley, true) => {
            for &(p, l) in tracked {
                if p == j {
                    steps.push(Step::Die { event, label: l });
                } else {
                    next.push((if p > j { p - 2 } else { p }, l));
                }
            }
        }
        (EventKind::Valley, false) => {
            for &(p, l) in tracked {
                if p + 1 == j || p == j + 1 {
                    return Err(Error::InconsistentTransitions(format!(
                        "tracked interval merges at box {}",
                        event.0
                    )));
                }
                next.push((if p > j { p - 2 } else { p }, l));
            }
        }
        (EventKind::Crest, false) => {
            if j == 0 {
                return Err(Error::InconsistentTransitions(format!(
                    "gap opens below every fiber root at box {}",
                    event.0
                )));
            }
            for &(p, l) in tracked {
                if p + 1 == j {
                    let (upper, lower) = (*labels, *labels + 1);
                    *labels += 2;
                    steps.push(Step::Split {
                        event,
                        parent: l,
                        upper,
                        lower,
                    });
                    next.push((p, lower));
                    next.push((p + 2, upper));
                } else {
                    next.push((if p >= j { p + 2 } else { p }, l));
                }
            }
        }
        (EventKind::Crest, true) => {
            for &(p, l) in tracked {
                next.push((if p >= j { p + 2 } else { p }, l));
            }
        }
    }
    next.sort();
    Ok(next)
}
