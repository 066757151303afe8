//! Snake permutations: the Knuth automorphism comparing the order of events
//! along the curve with their order by abscissa.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::direction::UnitDirection;
use crate::error::{Error, Result};
use crate::genericity::{default_x_max, genericity_certificate, DEFAULT_SAMPLES};
use crate::poly::{BivariatePolynomial, IsolatingInterval};
use crate::sweep::{stabilize, EpsilonOptions, Side};
use crate::tree::{PoincareReebTree, VertexKind, VertexSide};

/// A finite set with two total orders, each given as the list of elements
/// from smallest to largest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiorderedSet {
    pub elements: Vec<usize>,
    pub order_curve: Vec<usize>,
    pub order_x: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    UpDown,
    DownUp,
    Singleton,
}

/// `sigma` holds `σ(1), …, σ(n)` as values in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakePermutation {
    pub sigma: Vec<usize>,
    pub n: usize,
    pub shape: Shape,
}

impl SnakePermutation {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        check_permutation(&sigma)?;
        let shape = match sigma.as_slice() {
            [_] => Shape::Singleton,
            [a, b, ..] if a < b => Shape::UpDown,
            _ => Shape::DownUp,
        };
        Ok(Self {
            n: sigma.len(),
            sigma,
            shape,
        })
    }
}

impl fmt::Display for SnakePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sigma.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

fn check_permutation(sigma: &[usize]) -> Result<()> {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    if n == 0 {
        return Err(Error::NotAPermutation);
    }
    for &v in sigma {
        if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotAPermutation);
        }
    }
    Ok(())
}

/// Vertex ids of one side in the order the curve meets them: a contour
/// walk around the side's subtree, lower child first.
pub fn curve_order(t: &PoincareReebTree, side: Side) -> Result<Vec<usize>> {
    let start = t.side_child(side).ok_or(Error::EmptySide)?;
    let mut out = Vec::new();
    let mut stack = vec![(start, false)];
    while let Some((id, expanded)) = stack.pop() {
        let v = t.vertex(id);
        match v.children.as_slice() {
            [] => out.push(id),
            [upper, lower] => {
                if expanded {
                    out.push(id);
                    stack.push((*upper, false));
                } else {
                    stack.push((id, true));
                    stack.push((*lower, false));
                }
            }
            _ => return Err(Error::NotBinary(id)),
        }
    }
    Ok(out)
}

/// Ids sorted by decreasing `|x|`: right to left on the right side, left to
/// right on the left side.
pub fn x_order(items: &[(usize, IsolatingInterval)], side: Side) -> Result<Vec<usize>> {
    let mut v: Vec<&(usize, IsolatingInterval)> = items.iter().collect();
    v.sort_by(|a, b| a.1.lo.cmp(&b.1.lo));
    if v.windows(2).any(|w| w[0].1.hi > w[1].1.lo) {
        return Err(Error::TieDetected);
    }
    let mut ids: Vec<usize> = v.into_iter().map(|(id, _)| *id).collect();
    if side == Side::Right {
        ids.reverse();
    }
    Ok(ids)
}

/// `σ(i)` is the position in `order_x` of the `i`-th element along the curve.
pub fn knuth_permutation(b: &BiorderedSet) -> Result<SnakePermutation> {
    let n = b.elements.len();
    if b.order_curve.len() != n || b.order_x.len() != n {
        return Err(Error::OrderMismatch);
    }
    let pos: HashMap<usize, usize> = b.order_x.iter().enumerate().map(|(i, &e)| (e, i + 1)).collect();
    if pos.len() != n || b.elements.iter().any(|e| !pos.contains_key(e)) {
        return Err(Error::OrderMismatch);
    }
    let sigma = b
        .order_curve
        .iter()
        .map(|e| pos.get(e).copied().ok_or(Error::OrderMismatch))
        .collect::<Result<Vec<_>>>()?;
    SnakePermutation::new(sigma).map_err(|_| Error::OrderMismatch)
}

/// Consecutive comparisons strictly alternate.
pub fn is_snake(sigma: &[usize]) -> Result<bool> {
    check_permutation(sigma)?;
    Ok(sigma
        .windows(3)
        .all(|w| (w[0] < w[1]) != (w[1] < w[2])))
}

/// Biordered set of one side of a tree.
pub fn biordered_side(t: &PoincareReebTree, side: Side) -> Result<BiorderedSet> {
    let order_curve = curve_order(t, side)?;
    let items: Vec<(usize, IsolatingInterval)> = t
        .side_ids(side)
        .into_iter()
        .map(|id| (id, t.vertex(id).x_box.clone().expect("event vertex has a box")))
        .collect();
    let order_x = x_order(&items, side)?;
    Ok(BiorderedSet {
        elements: t.side_ids(side),
        order_curve,
        order_x,
    })
}

/// Kinds along the curve, as letters `V`/`C`.
pub fn curve_kinds(t: &PoincareReebTree, side: Side) -> Result<Vec<&'static str>> {
    Ok(curve_order(t, side)?
        .into_iter()
        .map(|id| match t.vertex(id).kind {
            VertexKind::Crest => "C",
            _ => "V",
        })
        .collect())
}

pub fn snake_of_tree(t: &PoincareReebTree, side: Side) -> Result<SnakePermutation> {
    knuth_permutation(&biordered_side(t, side)?)
}

/// Full pipeline: certify `d`, stabilize `ε`, build the tree and read off
/// the snake of `side`.
pub fn snake_of(f: &BivariatePolynomial, d: &UnitDirection, side: Side) -> Result<SnakePermutation> {
    let cert = genericity_certificate(f, d, &default_x_max(), DEFAULT_SAMPLES)?;
    if !cert.verdict.is_generic() {
        return Err(Error::NonGeneric(cert.verdict));
    }
    let s = stabilize(f, d, &EpsilonOptions::default())?;
    snake_of_tree(&s.tree, side)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakeReport {
    pub side: Side,
    pub sigma: Vec<usize>,
    pub kinds: Vec<String>,
}

pub fn snake_report(t: &PoincareReebTree, side: Side) -> Result<SnakeReport> {
    Ok(SnakeReport {
        side,
        sigma: snake_of_tree(t, side)?.sigma,
        kinds: curve_kinds(t, side)?.into_iter().map(String::from).collect(),
    })
}

/// Side of a vertex, for callers holding only a tree.
pub fn vertex_side(t: &PoincareReebTree, id: usize) -> Option<Side> {
    match t.vertex(id).side {
        VertexSide::Right => Some(Side::Right),
        VertexSide::Left => Some(Side::Left),
        VertexSide::Root => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rational};

    fn bi(curve: &[usize], x: &[usize]) -> BiorderedSet {
        let mut elements = curve.to_vec();
        elements.sort();
        BiorderedSet {
            elements,
            order_curve: curve.to_vec(),
            order_x: x.to_vec(),
        }
    }

    #[test]
    fn identity_when_orders_agree() {
        let s = knuth_permutation(&bi(&[4, 7, 9], &[4, 7, 9])).unwrap();
        assert_eq!(s.sigma, vec![1, 2, 3]);
    }

    #[test]
    fn worked_three_element_example() {
        // a1 <1 a2 <1 a3 and a1 <2 a3 <2 a2
        let s = knuth_permutation(&bi(&[1, 2, 3], &[1, 3, 2])).unwrap();
        assert_eq!(s.sigma, vec![1, 3, 2]);
        assert_eq!(s.shape, Shape::UpDown);
        assert_eq!(s.to_string(), "1 3 2");
    }

    #[test]
    fn five_point_example() {
        let s = knuth_permutation(&bi(&[10, 11, 12, 13, 14], &[10, 14, 12, 13, 11])).unwrap();
        assert_eq!(s.sigma, vec![1, 5, 3, 4, 2]);
        assert!(is_snake(&s.sigma).unwrap());
    }

    #[test]
    fn mismatched_orders() {
        assert_eq!(knuth_permutation(&bi(&[1, 2], &[1, 3])), Err(Error::OrderMismatch));
        assert_eq!(knuth_permutation(&bi(&[1, 2], &[1])), Err(Error::OrderMismatch));
    }

    #[test]
    fn snake_checks() {
        assert!(is_snake(&[1, 5, 3, 4, 2]).unwrap());
        assert!(!is_snake(&[1, 2, 3]).unwrap());
        assert!(is_snake(&[1]).unwrap());
        assert!(is_snake(&[2, 1]).unwrap());
        assert_eq!(is_snake(&[1, 1]), Err(Error::NotAPermutation));
        assert_eq!(is_snake(&[0, 1]), Err(Error::NotAPermutation));
        assert_eq!(is_snake(&[]), Err(Error::NotAPermutation));
    }

    fn iv(lo: Rational, hi: Rational) -> IsolatingInterval {
        IsolatingInterval {
            lo,
            hi,
            sign_left: -1,
            sign_right: 1,
        }
    }

    #[test]
    fn x_order_reads_away_from_origin() {
        let items = vec![(1, iv(rat(7, 100), rat(71, 1000))), (2, iv(rat(99, 1000), rat(101, 1000)))];
        assert_eq!(x_order(&items, Side::Right).unwrap(), vec![2, 1]);
        let left: Vec<_> = items.iter().map(|(i, b)| (*i, b.mirrored())).collect();
        assert_eq!(x_order(&left, Side::Left).unwrap(), vec![2, 1]);
        assert_eq!(x_order(&items[..1], Side::Right).unwrap(), vec![1]);
        let tied = vec![(1, iv(rat(1, 10), rat(2, 10))), (2, iv(rat(1, 10), rat(2, 10)))];
        assert_eq!(x_order(&tied, Side::Right), Err(Error::TieDetected));
    }

    #[test]
    fn circle_snake_is_singleton() {
        let f: BivariatePolynomial = "x^2+y^2".parse().unwrap();
        for side in [Side::Right, Side::Left] {
            let s = snake_of(&f, &UnitDirection::identity(), side).unwrap();
            assert_eq!(s.sigma, vec![1]);
            assert_eq!(s.shape, Shape::Singleton);
        }
    }

    #[test]
    fn vertical_coste_is_rejected() {
        let f: BivariatePolynomial = "x^2+(y^2-x)^2".parse().unwrap();
        assert_eq!(
            snake_of(&f, &UnitDirection::identity(), Side::Right),
            Err(Error::NonGeneric(crate::genericity::Verdict::NonGenericBitangent))
        );
    }

    #[test]
    fn slightly_rotated_coste() {
        let f: BivariatePolynomial = "x^2+(y^2-x)^2".parse().unwrap();
        for t in [rat(1, 100), rat(-1, 100)] {
            let d = UnitDirection::from_half_angle(&t);
            let s = snake_of(&f, &d, Side::Right).unwrap();
            assert!(s.sigma == vec![1, 3, 2] || s.sigma == vec![2, 3, 1], "{s}");
            assert!(is_snake(&s.sigma).unwrap());
        }
    }
}
