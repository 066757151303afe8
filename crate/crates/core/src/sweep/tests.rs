use super::*;
use crate::rational::{rat, to_f64};

fn p(s: &str) -> BivariatePolynomial {
    s.parse().unwrap()
}

const COSTE: &str = "x^2+(y^2-x)^2";

#[test]
fn circle_events() {
    let ev = tangency_events(&p("x^2+y^2"), &int(1)).unwrap();
    assert_eq!(ev.len(), 2);
    for e in &ev {
        assert_eq!(e.kind, EventKind::Valley);
        assert!(e.x_box.contains(&int(e.side.sign() as i64)));
        assert!(e.y_box.lo < int(0) && int(0) < e.y_box.hi);
    }
    assert_eq!(ev[0].side, Side::Right);
    assert_eq!(ev[1].side, Side::Left);
}

#[test]
fn coste_events_at_one_hundredth() {
    let ev = tangency_events(&p(COSTE), &rat(1, 100)).unwrap();
    let right: Vec<_> = ev.iter().filter(|e| e.side == Side::Right).collect();
    assert_eq!(right.len(), 3);
    let x0 = (1.0f64 / 200.0).sqrt();
    let crest = right.iter().find(|e| e.kind == EventKind::Crest).unwrap();
    assert!((to_f64(&crest.x_box.midpoint()) - x0).abs() < 1e-6);
    let valleys: Vec<_> = right.iter().filter(|e| e.kind == EventKind::Valley).collect();
    assert_eq!(valleys.len(), 2);
    for v in valleys {
        assert!(v.x_box.contains(&rat(1, 10)) || v.x_box.lo == rat(1, 10) || v.x_box.hi == rat(1, 10));
        let y = to_f64(&v.y_box.midpoint()).abs();
        assert!((y - 0.1f64.sqrt()).abs() < 1e-3);
    }
    let left: Vec<_> = ev.iter().filter(|e| e.side == Side::Left).collect();
    assert_eq!(left.len(), 1);
    assert_eq!(left[0].kind, EventKind::Valley);
}

#[test]
fn classification_matches_partials() {
    let f = p(COSTE);
    for e in tangency_events(&f, &rat(1, 100)).unwrap() {
        assert_eq!(classify_event(&f, &e).unwrap(), e.kind);
    }
}

#[test]
fn zero_level_is_rejected() {
    assert_eq!(tangency_events(&p("x^2+y^2"), &int(0)), Err(Error::NonPositiveEpsilon));
}

#[test]
fn non_reduced_polar_is_rejected() {
    assert_eq!(
        tangency_events(&p("x^12+y^4/4-x^2*y^3/3"), &rat(1, 100)),
        Err(Error::NonReducedPolar)
    );
}

#[test]
fn coste_fibers() {
    let f = p(COSTE);
    let s = fiber_components(&f, &rat(1, 100), &rat(9, 100)).unwrap();
    assert_eq!(s.intervals.len(), 2);
    let a = (0.09f64 - 0.0019f64.sqrt()).sqrt();
    let b = (0.09f64 + 0.0019f64.sqrt()).sqrt();
    assert!((to_f64(&s.intervals[0].y_lo) + b).abs() < 1e-9);
    assert!((to_f64(&s.intervals[0].y_hi) + a).abs() < 1e-9);
    assert!((to_f64(&s.intervals[1].y_lo) - a).abs() < 1e-9);
    assert!((to_f64(&s.intervals[1].y_hi) - b).abs() < 1e-9);
    assert_eq!(fiber_components(&f, &rat(1, 100), &rat(1, 20)).unwrap().intervals.len(), 1);
    assert!(fiber_components(&f, &rat(1, 100), &rat(1, 5)).unwrap().intervals.is_empty());
    let s0 = fiber_components(&f, &rat(1, 100), &int(0)).unwrap();
    assert_eq!(s0.intervals.len(), 1);
    assert!(s0.intervals[0].y_lo < int(0) && int(0) < s0.intervals[0].y_hi);
    assert_eq!(fiber_components(&f, &rat(1, 100), &rat(-1, 20)).unwrap().intervals.len(), 1);
    assert_eq!(
        fiber_components(&f, &rat(1, 100), &rat(1, 10)),
        Err(Error::XAtEvent { x: "1/10".into() })
    );
}

#[test]
fn circle_sweep() {
    let s = sweep(&p("x^2+y^2"), &rat(1, 4)).unwrap();
    for side in [Side::Left, Side::Right] {
        assert_eq!(s.side(side).kinds(), vec![EventKind::Valley]);
        assert_eq!(s.side(side).half_branches, 1);
        assert_eq!(s.side(side).transitions, vec![Transition::Die { event: 0, interval: 0 }]);
    }
}

#[test]
fn vertical_coste_is_a_tie() {
    assert_eq!(
        sweep(&p(COSTE), &rat(1, 100)),
        Err(Error::NonGenericTie { side: Side::Right })
    );
}

#[test]
fn rotated_coste_alternates() {
    let d = crate::UnitDirection::from_half_angle(&rat(1, 100));
    let g = p(COSTE).rotate(&d);
    let s = sweep(&g, &rat(1, 1024)).unwrap();
    use EventKind::*;
    assert_eq!(s.right.kinds(), vec![Valley, Crest, Valley]);
    assert_eq!(s.left.kinds(), vec![Valley]);
    assert_eq!(s.right.half_branches, 3);
    assert_eq!(s.right.count(Valley), s.right.count(Crest) + 1);
}

#[test]
fn bitangent_example_is_rejected_vertically() {
    assert!(sweep(&p("x^10+y^6/6-3*x*y^4/4+x^2*y^2"), &rat(1, 4096)).is_err());
}

#[test]
fn scaling_invariance() {
    let d = crate::UnitDirection::from_half_angle(&rat(1, 100));
    let g = p(COSTE).rotate(&d);
    let a = sweep(&g, &rat(1, 1024)).unwrap();
    let b = sweep(&g.scale(&rat(3, 2)), &rat(3, 2048)).unwrap();
    assert_eq!(a.right.kinds(), b.right.kinds());
    assert_eq!(a.right.transitions, b.right.transitions);
    assert_eq!(a.left.transitions, b.left.transitions);
}

#[test]
fn circle_accepts_first_level() {
    let eps = choose_epsilon(&p("x^2+y^2"), &crate::UnitDirection::identity()).unwrap();
    assert_eq!(eps, rat(1, 4));
}

#[test]
fn coste_stabilizes() {
    let d = crate::UnitDirection::from_half_angle(&rat(1, 100));
    let s = stabilize(&p(COSTE), &d, &EpsilonOptions::default()).unwrap();
    assert_eq!(s.sweep.right.events.len(), 3);
    assert_eq!(s.sweep.left.events.len(), 1);
}

#[test]
fn tilted_coste_becomes_convex_for_small_levels() {
    // the tangent cone 2x² rotated away from the axis leaves one polar branch
    let d = crate::UnitDirection::from_half_angle(&rat(1, 10));
    let s = sweep(&p(COSTE).rotate(&d), &crate::rational::pow2_neg(12)).unwrap();
    assert_eq!(s.right.kinds(), vec![EventKind::Valley]);
    assert_eq!(s.left.kinds(), vec![EventKind::Valley]);
}

#[test]
fn non_strict_minimum_does_not_stabilize() {
    let opts = EpsilonOptions {
        k_max: 6,
        ..Default::default()
    };
    let r = stabilize(&p("y^2"), &crate::UnitDirection::identity(), &opts);
    assert_eq!(r.unwrap_err(), Error::NoStabilization { k_max: 6 });
}
