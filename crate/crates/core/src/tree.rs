//! Poincaré-Reeb trees: the quotient of `D_ε` by connected components of
//! vertical fibers, as a plane tree rooted at the image of the origin.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::direction::UnitDirection;
use crate::error::{Error, Result};
use crate::poly::IsolatingInterval;
use crate::rational::{exact_serde, fmt_exact, int, parse_exact, to_f64, Rational};
use crate::sweep::{EventKind, Side, SideSweep, SweepResult, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexSide {
    Root,
    Left,
    Right,
}

impl From<Side> for VertexSide {
    fn from(s: Side) -> Self {
        match s {
            Side::Left => VertexSide::Left,
            Side::Right => VertexSide::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexKind {
    Root,
    Crest,
    Valley,
}

impl From<EventKind> for VertexKind {
    fn from(k: EventKind) -> Self {
        match k {
            EventKind::Crest => VertexKind::Crest,
            EventKind::Valley => VertexKind::Valley,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReebVertex {
    pub id: usize,
    pub side: VertexSide,
    pub kind: VertexKind,
    /// `None` for the root, which sits at `x = 0` exactly.
    pub x_box: Option<IsolatingInterval>,
    pub y_box: Option<IsolatingInterval>,
    /// Top to bottom.
    pub children: Vec<usize>,
}

impl ReebVertex {
    /// Exact midpoint of the abscissa box, 0 for the root.
    pub fn x(&self) -> Rational {
        self.x_box.as_ref().map(|b| b.midpoint()).unwrap_or_else(|| int(0))
    }

    pub fn y(&self) -> Rational {
        self.y_box.as_ref().map(|b| b.midpoint()).unwrap_or_else(|| int(0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareReebTree {
    /// Indexed by id.
    pub vertices: Vec<ReebVertex>,
    pub root_id: usize,
    pub epsilon: Rational,
    pub direction: UnitDirection,
}

impl PoincareReebTree {
    pub fn vertex(&self, id: usize) -> &ReebVertex {
        &self.vertices[id]
    }

    pub fn side_ids(&self, side: Side) -> Vec<usize> {
        let vs = VertexSide::from(side);
        self.vertices.iter().filter(|v| v.side == vs).map(|v| v.id).collect()
    }

    pub fn count(&self, side: Side, kind: VertexKind) -> usize {
        let vs = VertexSide::from(side);
        self.vertices
            .iter()
            .filter(|v| v.side == vs && v.kind == kind)
            .count()
    }

    /// The root's child on `side`, if that side is nonempty.
    pub fn side_child(&self, side: Side) -> Option<usize> {
        let vs = VertexSide::from(side);
        self.vertices[self.root_id]
            .children
            .iter()
            .copied()
            .find(|&c| self.vertices[c].side == vs)
    }

    pub fn to_json(&self) -> String {
        let j = TreeJson {
            root_id: self.root_id,
            direction: self.direction.clone(),
            epsilon: self.epsilon.clone(),
            vertices: self.vertices.iter().map(VertexJson::from).collect(),
        };
        serde_json::to_string_pretty(&j).expect("tree serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, String> {
        let j: TreeJson = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let mut vertices = Vec::with_capacity(j.vertices.len());
        for (i, v) in j.vertices.into_iter().enumerate() {
            if v.id != i {
                return Err(format!("vertex {i} has id {}", v.id));
            }
            vertices.push(v.into_vertex()?);
        }
        if j.root_id >= vertices.len() {
            return Err("root id out of range".into());
        }
        Ok(Self {
            vertices,
            root_id: j.root_id,
            epsilon: j.epsilon,
            direction: j.direction,
        })
    }

    /// Graphviz rendering; the left side is drawn to the left of the root.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph reeb {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n");
        for v in &self.vertices {
            let (label, color) = match v.kind {
                VertexKind::Root => ("O".to_string(), "black"),
                VertexKind::Crest => (format!("C{}", v.id), "red"),
                VertexKind::Valley => (format!("V{}", v.id), "blue"),
            };
            let _ = writeln!(
                s,
                "  v{} [label=\"{}\", color={}, tooltip=\"x={:.6}\"];",
                v.id,
                label,
                color,
                to_f64(&v.x())
            );
        }
        for v in &self.vertices {
            for &c in &v.children {
                if self.vertices[c].side == VertexSide::Left {
                    let _ = writeln!(s, "  v{} -> v{} [dir=back];", c, v.id);
                } else {
                    let _ = writeln!(s, "  v{} -> v{};", v.id, c);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    root_id: usize,
    direction: UnitDirection,
    #[serde(with = "exact_serde")]
    epsilon: Rational,
    vertices: Vec<VertexJson>,
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    side: VertexSide,
    kind: VertexKind,
    x: String,
    x_lo: String,
    x_hi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y_lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y_hi: Option<String>,
    children: Vec<usize>,
}

impl From<&ReebVertex> for VertexJson {
    fn from(v: &ReebVertex) -> Self {
        let (lo, hi) = match &v.x_box {
            Some(b) => (fmt_exact(&b.lo), fmt_exact(&b.hi)),
            None => (fmt_exact(&int(0)), fmt_exact(&int(0))),
        };
        Self {
            id: v.id,
            side: v.side,
            kind: v.kind,
            x: fmt_exact(&v.x()),
            x_lo: lo,
            x_hi: hi,
            y_lo: v.y_box.as_ref().map(|b| fmt_exact(&b.lo)),
            y_hi: v.y_box.as_ref().map(|b| fmt_exact(&b.hi)),
            children: v.children.clone(),
        }
    }
}

impl VertexJson {
    fn into_vertex(self) -> std::result::Result<ReebVertex, String> {
        let p = |s: &str| parse_exact(s).map_err(|e| e.to_string());
        let iv = |lo: Rational, hi: Rational| IsolatingInterval {
            lo,
            hi,
            sign_left: 0,
            sign_right: 0,
        };
        let x_box = match self.kind {
            VertexKind::Root => None,
            _ => Some(iv(p(&self.x_lo)?, p(&self.x_hi)?)),
        };
        let y_box = match (&self.y_lo, &self.y_hi) {
            (Some(a), Some(b)) => Some(iv(p(a)?, p(b)?)),
            _ => None,
        };
        Ok(ReebVertex {
            id: self.id,
            side: self.side,
            kind: self.kind,
            x_box,
            y_box,
            children: self.children,
        })
    }
}

fn side_vertices(
    s: &SideSweep,
    offset: usize,
    out: &mut Vec<ReebVertex>,
) -> Result<Option<usize>> {
    if s.events.is_empty() {
        return Ok(None);
    }
    let id = |event: usize| offset + event;
    let mut children: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut seen = vec![false; s.events.len()];
    for t in &s.transitions {
        let e = t.event();
        if e >= s.events.len() || std::mem::replace(&mut seen[e], true) {
            return Err(Error::InconsistentTransitions(format!(
                "event {e} has no unique transition"
            )));
        }
        let expected = match t {
            Transition::Split { .. } => EventKind::Crest,
            Transition::Die { .. } => EventKind::Valley,
        };
        if s.events[e].kind != expected {
            return Err(Error::InconsistentTransitions(format!(
                "event {e} is a {:?} but its interval {}",
                s.events[e].kind,
                if expected == EventKind::Crest { "splits" } else { "dies" }
            )));
        }
        if let Transition::Split { upper, lower, .. } = *t {
            let end = |l: usize| {
                s.end_of(l)
                    .map(id)
                    .ok_or_else(|| Error::InconsistentTransitions(format!("interval {l} never ends")))
            };
            children.insert(e, vec![end(upper)?, end(lower)?]);
        }
    }
    if seen.iter().any(|b| !b) {
        return Err(Error::InconsistentTransitions("event without transition".into()));
    }
    for (i, e) in s.events.iter().enumerate() {
        out.push(ReebVertex {
            id: id(i),
            side: s.side.into(),
            kind: e.kind.into(),
            x_box: Some(e.x_box.clone()),
            y_box: Some(e.y_box.clone()),
            children: children.remove(&i).unwrap_or_default(),
        });
    }
    let first = s
        .end_of(0)
        .ok_or_else(|| Error::InconsistentTransitions("origin interval never ends".into()))?;
    Ok(Some(id(first)))
}

/// Tree with root 0, right vertices `1..=n_R` and then left vertices, each
/// side numbered by position along the curve.
pub fn build_tree(s: &SweepResult, d: &UnitDirection) -> Result<PoincareReebTree> {
    let mut vertices = vec![ReebVertex {
        id: 0,
        side: VertexSide::Root,
        kind: VertexKind::Root,
        x_box: None,
        y_box: None,
        children: Vec::new(),
    }];
    let right = side_vertices(&s.right, 1, &mut vertices)?;
    let left = side_vertices(&s.left, 1 + s.right.events.len(), &mut vertices)?;
    if right.is_none() || left.is_none() {
        return Err(Error::InconsistentTransitions(
            "a side of a strict minimum has no events".into(),
        ));
    }
    vertices[0].children = right.into_iter().chain(left).collect();
    Ok(PoincareReebTree {
        vertices,
        root_id: 0,
        epsilon: s.epsilon.clone(),
        direction: d.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub complete_binary: bool,
    pub total_order: bool,
    pub monotone_geodesics: bool,
    pub binary_counterexample: Option<usize>,
    pub order_counterexample: Option<(usize, usize)>,
    pub monotone_counterexample: Option<(usize, usize)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.complete_binary && self.total_order && self.monotone_geodesics
    }
}

fn beyond(side: VertexSide, child: &IsolatingInterval, parent: Option<&IsolatingInterval>) -> bool {
    let zero = int(0);
    match side {
        VertexSide::Right => child.lo >= *parent.map(|p| &p.hi).unwrap_or(&zero),
        VertexSide::Left => child.hi <= *parent.map(|p| &p.lo).unwrap_or(&zero),
        VertexSide::Root => false,
    }
}

/// Checks the structure every generic tree must have.
pub fn validate_generic(t: &PoincareReebTree) -> ValidationReport {
    let mut binary_bad = None;
    for v in &t.vertices {
        let ok = match v.kind {
            VertexKind::Root => {
                v.id == t.root_id
                    && v.children.len() <= 2
                    && v.children
                        .iter()
                        .map(|&c| t.vertices.get(c).map(|w| w.side))
                        .collect::<std::collections::HashSet<_>>()
                        .len()
                        == v.children.len()
            }
            VertexKind::Crest => v.children.len() == 2,
            VertexKind::Valley => v.children.is_empty(),
        };
        let ids_ok = v.children.iter().all(|&c| c < t.vertices.len() && c != t.root_id);
        if !(ok && ids_ok) {
            binary_bad = Some(v.id);
            break;
        }
    }
    let mut order_bad = None;
    'outer: for side in [VertexSide::Right, VertexSide::Left] {
        let vs: Vec<&ReebVertex> = t.vertices.iter().filter(|v| v.side == side).collect();
        for (i, a) in vs.iter().enumerate() {
            let Some(ba) = &a.x_box else {
                order_bad = Some((a.id, a.id));
                break 'outer;
            };
            if !beyond(side, ba, None) {
                order_bad = Some((t.root_id, a.id));
                break 'outer;
            }
            for b in &vs[i + 1..] {
                let bb = b.x_box.as_ref().expect("non-root vertex has a box");
                if !(ba.hi <= bb.lo || bb.hi <= ba.lo) {
                    order_bad = Some((a.id, b.id));
                    break 'outer;
                }
            }
        }
    }
    let mut mono_bad = None;
    if binary_bad.is_none() && order_bad.is_none() {
        for v in &t.vertices {
            for &c in &v.children {
                let w = &t.vertices[c];
                let ok = match v.kind {
                    VertexKind::Root => w.side != VertexSide::Root,
                    _ => w.side == v.side && beyond(w.side, w.x_box.as_ref().unwrap(), v.x_box.as_ref()),
                };
                if !ok && mono_bad.is_none() {
                    mono_bad = Some((v.id, c));
                }
            }
        }
    }
    ValidationReport {
        complete_binary: binary_bad.is_none(),
        total_order: order_bad.is_none(),
        monotone_geodesics: binary_bad.is_none() && order_bad.is_none() && mono_bad.is_none(),
        binary_counterexample: binary_bad,
        order_counterexample: order_bad,
        monotone_counterexample: mono_bad,
    }
}

fn x_ranks(t: &PoincareReebTree, side: VertexSide) -> HashMap<usize, usize> {
    let mut vs: Vec<(Rational, usize)> = t
        .vertices
        .iter()
        .filter(|v| v.side == side)
        .map(|v| (v.x(), v.id))
        .collect();
    vs.sort();
    vs.into_iter().enumerate().map(|(r, (_, id))| (id, r)).collect()
}

/// Root-, side- and child-order-preserving isomorphism that also preserves
/// the order of abscissae within each side.
pub fn tree_isomorphic(a: &PoincareReebTree, b: &PoincareReebTree) -> bool {
    if a.vertices.len() != b.vertices.len() {
        return false;
    }
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut stack = vec![(a.root_id, b.root_id)];
    while let Some((u, v)) = stack.pop() {
        let (x, y) = (&a.vertices[u], &b.vertices[v]);
        if x.side != y.side || x.kind != y.kind || x.children.len() != y.children.len() {
            return false;
        }
        if map.insert(u, v).is_some() {
            return false;
        }
        stack.extend(x.children.iter().copied().zip(y.children.iter().copied()));
    }
    if map.len() != a.vertices.len() {
        return false;
    }
    [VertexSide::Left, VertexSide::Right].into_iter().all(|side| {
        let (ra, rb) = (x_ranks(a, side), x_ranks(b, side));
        ra.iter().all(|(id, r)| rb.get(&map[id]) == Some(r))
    })
}
