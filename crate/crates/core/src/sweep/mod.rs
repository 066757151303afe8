//! Exact sweep of the sublevel set `{f ≤ ε}` along the `x` axis.
//!
//! Each side of the origin is swept separately; the left side is computed on
//! `f(−x, y)` and mapped back. Only the fiber intervals connected to the
//! origin through the sweep are followed, so the result describes the disk
//! `D_ε` bounded by the small level curve `C_ε`.

mod engine;
mod epsilon;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poly::{BivariatePolynomial, Interval, IsolatingInterval, Var};
use crate::rational::{exact_serde, int, pow2_neg, Rational};
use engine::{Engine, RawEvent, Step, Threading};

pub use epsilon::{choose_epsilon, stabilize, EpsilonOptions, Stabilized};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// `+1` on the right, `−1` on the left.
    pub fn sign(self) -> i8 {
        match self {
            Side::Left => -1,
            Side::Right => 1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    Crest,
    Valley,
}

impl EventKind {
    pub fn letter(self) -> &'static str {
        match self {
            EventKind::Crest => "C",
            EventKind::Valley => "V",
        }
    }
}

/// A point of `C_ε` with a vertical tangent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangencyEvent {
    pub x_box: IsolatingInterval,
    pub y_box: IsolatingInterval,
    pub side: Side,
    pub kind: EventKind,
    /// 1-based position along the curve on its side; 0 when not ranked.
    pub branch_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberInterval {
    #[serde(with = "exact_serde")]
    pub y_lo: Rational,
    #[serde(with = "exact_serde")]
    pub y_hi: Rational,
    pub lo_box: IsolatingInterval,
    pub hi_box: IsolatingInterval,
}

/// The part of `D_ε` over one abscissa.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSlice {
    #[serde(with = "exact_serde")]
    pub x: Rational,
    pub intervals: Vec<FiberInterval>,
}

/// What happens to a fiber interval when the sweep, moving away from the
/// origin, crosses an event. `event` indexes `SideSweep::events`; interval
/// labels are per side, label 0 being the origin's interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transition {
    Split {
        event: usize,
        parent: usize,
        upper: usize,
        lower: usize,
    },
    Die {
        event: usize,
        interval: usize,
    },
}

impl Transition {
    pub fn event(&self) -> usize {
        match *self {
            Transition::Split { event, .. } | Transition::Die { event, .. } => event,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideSweep {
    pub side: Side,
    /// Events on `C_ε`, ordered by `branch_rank`.
    pub events: Vec<TangencyEvent>,
    /// Ordered by increasing `|x|`.
    pub transitions: Vec<Transition>,
    /// Polar roots inside the origin's fiber interval close to `x = 0`.
    pub half_branches: usize,
}

impl SideSweep {
    pub fn kinds(&self) -> Vec<EventKind> {
        self.events.iter().map(|e| e.kind).collect()
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    /// Event where interval `label` splits or dies.
    pub fn end_of(&self, label: usize) -> Option<usize> {
        self.transitions.iter().find_map(|t| match *t {
            Transition::Split { event, parent, .. } if parent == label => Some(event),
            Transition::Die { event, interval } if interval == label => Some(event),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    #[serde(with = "exact_serde")]
    pub epsilon: Rational,
    pub right: SideSweep,
    pub left: SideSweep,
}

impl SweepResult {
    pub fn side(&self, side: Side) -> &SideSweep {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

/// Half-width of the square box `[−B, B]²` around the origin in which
/// events are searched.
pub fn default_bound() -> Rational {
    int(2)
}

fn side_poly(f: &BivariatePolynomial, side: Side) -> BivariatePolynomial {
    match side {
        Side::Right => f.clone(),
        Side::Left => f.mirror_x(),
    }
}

fn to_side(iv: &IsolatingInterval, side: Side) -> IsolatingInterval {
    match side {
        Side::Right => iv.clone(),
        Side::Left => iv.mirrored(),
    }
}

fn to_event(raw: &RawEvent, side: Side, rank: usize) -> TangencyEvent {
    TangencyEvent {
        x_box: to_side(&raw.x_box, side),
        y_box: raw.y_box.clone(),
        side,
        kind: raw.kind,
        branch_rank: rank,
    }
}

/// All tangencies of `{f = ε}` with the polar curve inside the box, right
/// side first, each side in increasing `|x|`. Ranks are left at 0.
pub fn tangency_events(f: &BivariatePolynomial, eps: &Rational) -> Result<Vec<TangencyEvent>> {
    let mut out = Vec::new();
    for side in [Side::Right, Side::Left] {
        let engine = Engine::new(&side_poly(f, side), eps, &default_bound())?;
        for b in engine.critical()? {
            out.extend(b.events.iter().map(|e| to_event(e, side, 0)));
        }
    }
    Ok(out)
}

/// Crest when `C_ε` lies locally beyond the vertical tangent (farther from
/// the origin's side), valley otherwise; decided by the sign of `−f_yy/f_x`.
pub fn classify_event(f: &BivariatePolynomial, e: &TangencyEvent) -> Result<EventKind> {
    let g = side_poly(f, e.side);
    let xb = to_side(&e.x_box, e.side);
    let (x, y) = (xb.as_interval(), e.y_box.as_interval());
    let s = |p: &BivariatePolynomial| Interval::eval_bivariate(p, &x, &y).certified_sign();
    let fy = g.partial(Var::Y);
    match (s(&fy.partial(Var::Y)), s(&g.partial(Var::X))) {
        (Some(a), Some(b)) if -a * b > 0 => Ok(EventKind::Crest),
        (Some(_), Some(_)) => Ok(EventKind::Valley),
        _ => Err(Error::DegenerateTangency {
            x: e.x_box.midpoint().to_string(),
        }),
    }
}

fn run_side(f: &BivariatePolynomial, eps: &Rational, side: Side, allow_ties: bool) -> Result<(Engine, Threading)> {
    let engine = Engine::new(&side_poly(f, side), eps, &default_bound())?;
    let boxes = engine.critical()?;
    let threading = engine.thread(boxes, side, allow_ties)?;
    Ok((engine, threading))
}

fn assemble(th: &Threading, side: Side) -> Result<SideSweep> {
    let mut end: HashMap<usize, &Step> = HashMap::new();
    type Key = (usize, usize);
    for st in &th.steps {
        let l = match *st {
            Step::Split { parent, .. } => parent,
            Step::Die { label, .. } => label,
        };
        if end.insert(l, st).is_some() {
            return Err(Error::InconsistentTransitions(format!("interval {l} ends twice")));
        }
    }
    // in-order contour: lower subtree, the crest itself, upper subtree
    let mut order: Vec<Key> = Vec::new();
    let mut stack: Vec<(usize, bool)> = vec![(0, false)];
    while let Some((label, expanded)) = stack.pop() {
        let st = end
            .get(&label)
            .ok_or_else(|| Error::InconsistentTransitions(format!("interval {label} never ends")))?;
        match **st {
            Step::Die { event, .. } => order.push(event),
            Step::Split { event, upper, lower, .. } => {
                if expanded {
                    order.push(event);
                    stack.push((upper, false));
                } else {
                    stack.push((label, true));
                    stack.push((lower, false));
                }
            }
        }
    }
    if order.len() != th.steps.len() {
        return Err(Error::InconsistentTransitions(
            "transitions are not reachable from the origin".into(),
        ));
    }
    let rank: HashMap<Key, usize> = order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let events: Vec<TangencyEvent> = order
        .iter()
        .enumerate()
        .map(|(i, &(k, j))| to_event(&th.boxes[k].events[j], side, i + 1))
        .collect();
    let transitions = th
        .steps
        .iter()
        .map(|st| match *st {
            Step::Split { event, parent, upper, lower } => Transition::Split {
                event: rank[&event],
                parent,
                upper,
                lower,
            },
            Step::Die { event, label } => Transition::Die {
                event: rank[&event],
                interval: label,
            },
        })
        .collect();
    let out = SideSweep {
        side,
        events,
        transitions,
        half_branches: th.half_branches,
    };
    check_alternation(&out)?;
    Ok(out)
}

/// Kinds along the curve alternate and both ends are valleys.
pub fn check_alternation(s: &SideSweep) -> Result<()> {
    let kinds = s.kinds();
    if kinds.is_empty() {
        return Err(Error::EmptySide);
    }
    if kinds[0] != EventKind::Valley || kinds[kinds.len() - 1] != EventKind::Valley {
        return Err(Error::EndpointNotValley { side: s.side });
    }
    if kinds.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::AlternationViolation { side: s.side });
    }
    Ok(())
}

/// Full sweep at level `ε`, both sides.
pub fn sweep(f: &BivariatePolynomial, eps: &Rational) -> Result<SweepResult> {
    sweep_with(f, eps, Execution::Parallel)
}

pub fn sweep_with(f: &BivariatePolynomial, eps: &Rational, exec: Execution) -> Result<SweepResult> {
    if f.degree_in(Var::Y).unwrap_or(0) == 0 {
        return Err(Error::ConstantInY);
    }
    let side = |s: Side| run_side(f, eps, s, false).and_then(|(_, th)| assemble(&th, s));
    let (right, left) = par::join(exec, || side(Side::Right), || side(Side::Left));
    Ok(SweepResult {
        epsilon: eps.clone(),
        right: right?,
        left: left?,
    })
}

/// One side of a sweep kept around for repeated fiber queries.
pub struct FiberSweep {
    side: Side,
    engine: Engine,
    threading: Threading,
}

impl FiberSweep {
    /// Threads the side of `f − ε` that holds `x > 0` (right) or `x < 0` (left).
    pub fn new(f: &BivariatePolynomial, eps: &Rational, side: Side) -> Result<Self> {
        let (engine, threading) = run_side(f, eps, side, true)?;
        Ok(Self {
            side,
            engine,
            threading,
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// The intervals of `D_ε` over `x₀`, which must lie on this side. Fails
    /// with `XAtEvent` when `x₀` is a critical abscissa.
    pub fn components(&self, x0: &Rational) -> Result<FiberSlice> {
        let ax = match self.side {
            Side::Left => -x0,
            Side::Right => x0.clone(),
        };
        assert!(ax >= int(0), "abscissa on the wrong side");
        let crit = self.engine.crit();
        let mut gap = 0;
        for b in &self.threading.boxes {
            let mut xb = b.x_box.clone();
            while xb.contains(&ax) {
                let s = crit.poly().sign_at(&ax);
                if s == 0 {
                    return Err(Error::XAtEvent { x: x0.to_string() });
                }
                // the root lies on the side of `ax` where the sign differs
                xb = if s == xb.sign_right {
                    IsolatingInterval { hi: ax.clone(), ..xb }
                } else {
                    IsolatingInterval { lo: ax.clone(), ..xb }
                };
            }
            if xb.hi <= ax {
                gap += 1;
            }
        }
        let width = pow2_neg(40);
        let intervals = self
            .engine
            .slice(&ax, &self.threading.tracked[gap], &width)?
            .into_iter()
            .map(|(lo, hi)| FiberInterval {
                y_lo: lo.midpoint(),
                y_hi: hi.midpoint(),
                lo_box: lo,
                hi_box: hi,
            })
            .collect();
        Ok(FiberSlice {
            x: x0.clone(),
            intervals,
        })
    }
}

/// The intervals of `D_ε` over `x₀`, found by threading the sweep from the
/// origin. Fails with `XAtEvent` when `x₀` is a critical abscissa.
pub fn fiber_components(f: &BivariatePolynomial, eps: &Rational, x0: &Rational) -> Result<FiberSlice> {
    let side = if x0 < &int(0) { Side::Left } else { Side::Right };
    FiberSweep::new(f, eps, side)?.components(x0)
}

#[cfg(test)]
mod tests;
