//! Text and vector renderings of a computed tree.
//!
//! The SVG shows the picture in the sweep frame (the polynomial rotated by the
//! tree's direction): the level curve through marching squares on a dyadic
//! grid, the polar curve dashed in red, the events, and the tree drawn over
//! them. Grid signs are exact; only the interpolated path coordinates are
//! floats.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::genericity::DirectionScanReport;
use crate::poly::{BivariatePolynomial, Var};
use crate::rational::{int, lcm_denominators, to_f64, Rational};
use crate::snake::SnakeReport;
use crate::tree::{PoincareReebTree, VertexKind, VertexSide};

#[derive(Debug, Clone)]
pub struct SvgOptions {
    /// Cells along the longer side of the picture.
    pub grid: u32,
    /// Subdivision of the cells that contain an event.
    pub refine: u32,
    /// Longer side of the picture in pixels.
    pub size: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            grid: 512,
            refine: 8,
            size: 512.0,
        }
    }
}

/// Integer evaluation of `L·D^n·p(X/D, Y/D)` for `D = 2^m`, which has the sign
/// of `p` at the dyadic point `(X/D, Y/D)`.
struct DyadicEval {
    n: u32,
    /// `(a, b, c_ab · D^(n−a−b))`
    terms: Vec<(u32, u32, BigInt)>,
}

impl DyadicEval {
    fn new(p: &BivariatePolynomial, m: u32) -> Self {
        let n = p.total_degree().unwrap_or(0);
        let l = lcm_denominators(p.terms().map(|(_, c)| c));
        let terms = p
            .terms()
            .map(|(&(a, b), c)| {
                let ci = c.numer() * (&l / c.denom());
                (a, b, ci << ((m * (n - a - b)) as usize))
            })
            .collect();
        Self { n, terms }
    }

    /// Coefficients in `X` for a fixed row `Y`, lowest degree first.
    fn row(&self, y: &BigInt) -> Vec<BigInt> {
        let mut ypow = vec![BigInt::one()];
        for _ in 0..self.n {
            let next = ypow.last().unwrap() * y;
            ypow.push(next);
        }
        let mut out = vec![BigInt::zero(); self.n as usize + 1];
        for (a, b, c) in &self.terms {
            out[*a as usize] += c * &ypow[*b as usize];
        }
        out
    }

    fn eval_row(row: &[BigInt], x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in row.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        Self::eval_row(&self.row(y), x)
    }
}

/// A grid of `(nx + 1) × (ny + 1)` dyadic nodes `((x0 + i·s)/D, (y0 + j·s)/D)`.
#[derive(Debug, Clone)]
struct Grid {
    m: u32,
    x0: BigInt,
    y0: BigInt,
    s: BigInt,
    nx: usize,
    ny: usize,
}

impl Grid {
    /// Square cells covering `[xl, xr] × [yl, yr]` with at most `n` cells
    /// along the longer side.
    fn covering(xl: &Rational, xr: &Rational, yl: &Rational, yr: &Rational, n: u32) -> Self {
        let span = std::cmp::max(xr - xl, yr - yl);
        // smallest m with span·2^m/n ≥ 16, so rounding the step up costs little
        let mut m = 0u32;
        while (&span * Rational::from_integer(BigInt::one() << m as usize)) / int(n as i64) < int(16) {
            m += 1;
        }
        let d = Rational::from_integer(BigInt::one() << m as usize);
        let s = ((&span * &d) / int(n as i64)).ceil().to_integer();
        let x0 = (xl * &d).floor().to_integer();
        let y0 = (yl * &d).floor().to_integer();
        let cells = |lo: &BigInt, hi: &Rational| -> usize {
            let hi = (hi * &d).ceil().to_integer();
            let (q, r) = (hi - lo).div_rem(&s);
            let q = q.to_usize().unwrap_or(0) + usize::from(!r.is_zero());
            q.max(1)
        };
        let nx = cells(&x0, xr);
        let ny = cells(&y0, yr);
        Self { m, x0, y0, s, nx, ny }
    }

    fn node_x(&self, i: usize) -> BigInt {
        &self.x0 + &self.s * BigInt::from(i)
    }

    fn node_y(&self, j: usize) -> BigInt {
        &self.y0 + &self.s * BigInt::from(j)
    }

    fn coord(&self, v: &BigInt) -> Rational {
        Rational::new(v.clone(), BigInt::one() << self.m as usize)
    }

    fn x_at(&self, i: usize) -> Rational {
        self.coord(&self.node_x(i))
    }

    fn y_at(&self, j: usize) -> Rational {
        self.coord(&self.node_y(j))
    }

    /// Values at all nodes, row-major (`j` outer).
    fn values(&self, p: &DyadicEval) -> Vec<BigInt> {
        let xs: Vec<BigInt> = (0..=self.nx).map(|i| self.node_x(i)).collect();
        let mut out = Vec::with_capacity((self.nx + 1) * (self.ny + 1));
        for j in 0..=self.ny {
            let row = p.row(&self.node_y(j));
            out.extend(xs.iter().map(|x| DyadicEval::eval_row(&row, x)));
        }
        out
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    /// Nodes with value `≤ 0` reachable from the node closest to the origin.
    fn flood(&self, vals: &[BigInt]) -> Vec<bool> {
        let mut seen = vec![false; vals.len()];
        let nearest = |lo: &BigInt, n: usize| -> usize {
            let k = (-lo).div_floor(&self.s).to_i64().unwrap_or(0);
            k.clamp(0, n as i64) as usize
        };
        let (i0, j0) = (nearest(&self.x0, self.nx), nearest(&self.y0, self.ny));
        let start = (0..=1)
            .flat_map(|di| (0..=1).map(move |dj| (i0 + di, j0 + dj)))
            .filter(|&(i, j)| i <= self.nx && j <= self.ny)
            .find(|&(i, j)| !vals[self.idx(i, j)].is_positive());
        let Some(start) = start else { return seen };
        let mut queue = VecDeque::from([start]);
        seen[self.idx(start.0, start.1)] = true;
        while let Some((i, j)) = queue.pop_front() {
            let mut push = |a: usize, b: usize| {
                let k = self.idx(a, b);
                if !seen[k] && !vals[k].is_positive() {
                    seen[k] = true;
                    queue.push_back((a, b));
                }
            };
            if i > 0 {
                push(i - 1, j);
            }
            if i < self.nx {
                push(i + 1, j);
            }
            if j > 0 {
                push(i, j - 1);
            }
            if j < self.ny {
                push(i, j + 1);
            }
        }
        seen
    }
}

/// Fit of the picture frame: grid cell coordinates to pixels.
struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
    margin: f64,
}

impl Frame {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.margin + (x - self.x0) * self.scale,
            self.margin + (self.y1 - y) * self.scale,
        )
    }
}

/// Corner values in the order (x0,y0), (x1,y0), (x1,y1), (x0,y1).
fn march_cell(v: [f64; 4], corners: [(f64, f64); 4], out: &mut Vec<[(f64, f64); 2]>) {
    let inside: Vec<bool> = v.iter().map(|&a| a <= 0.0).collect();
    let edge = |k: usize| {
        // shared edges are interpolated in the same direction from both cells
        let (a, b) = if k < 2 { (k, k + 1) } else { ((k + 1) % 4, k) };
        let t = if v[a] == v[b] { 0.5 } else { v[a] / (v[a] - v[b]) };
        let t = t.clamp(0.0, 1.0);
        (
            corners[a].0 + t * (corners[b].0 - corners[a].0),
            corners[a].1 + t * (corners[b].1 - corners[a].1),
        )
    };
    let crossing: Vec<usize> = (0..4).filter(|&k| inside[k] != inside[(k + 1) % 4]).collect();
    match crossing.len() {
        2 => out.push([edge(crossing[0]), edge(crossing[1])]),
        4 => {
            // saddle: pair edges according to the sign at the centre
            let centre_inside = v.iter().sum::<f64>() <= 0.0;
            if centre_inside == inside[0] {
                out.push([edge(0), edge(1)]);
                out.push([edge(2), edge(3)]);
            } else {
                out.push([edge(3), edge(0)]);
                out.push([edge(1), edge(2)]);
            }
        }
        _ => {}
    }
}

fn big_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or_else(|| if v.is_negative() { f64::MIN } else { f64::MAX })
}

/// Segments of `p = 0` over the cells selected by `keep`, with cells that
/// contain one of `hot` subdivided `refine × refine` times.
fn contour(
    p: &BivariatePolynomial,
    grid: &Grid,
    keep: impl Fn(usize, usize) -> bool,
    hot: &[(Rational, Rational)],
    refine: u32,
) -> Vec<[(f64, f64); 2]> {
    let ev = DyadicEval::new(p, grid.m);
    let vals = grid.values(&ev);
    let fx: Vec<f64> = (0..=grid.nx).map(|i| to_f64(&grid.x_at(i))).collect();
    let fy: Vec<f64> = (0..=grid.ny).map(|j| to_f64(&grid.y_at(j))).collect();
    let fine_shift = refine.next_power_of_two().trailing_zeros();
    let fine = DyadicEval::new(p, grid.m + fine_shift);
    let r = 1usize << fine_shift;
    let mut segs = Vec::new();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            if !keep(i, j) {
                continue;
            }
            let (xa, xb, ya, yb) = (grid.x_at(i), grid.x_at(i + 1), grid.y_at(j), grid.y_at(j + 1));
            let is_hot = hot.iter().any(|(x, y)| &xa <= x && x <= &xb && &ya <= y && y <= &yb);
            if is_hot {
                let (bx, by) = (grid.node_x(i) << fine_shift as usize, grid.node_y(j) << fine_shift as usize);
                let s = &grid.s;
                let h = (fx[i + 1] - fx[i]) / r as f64;
                let value = |a: usize, b: usize| {
                    big_f64(&fine.eval(&(&bx + s * BigInt::from(a)), &(&by + s * BigInt::from(b))))
                };
                let sub: Vec<Vec<f64>> = (0..=r).map(|b| (0..=r).map(|a| value(a, b)).collect()).collect();
                for b in 0..r {
                    for a in 0..r {
                        let (x0, y0) = (fx[i] + a as f64 * h, fy[j] + b as f64 * h);
                        march_cell(
                            [sub[b][a], sub[b][a + 1], sub[b + 1][a + 1], sub[b + 1][a]],
                            [(x0, y0), (x0 + h, y0), (x0 + h, y0 + h), (x0, y0 + h)],
                            &mut segs,
                        );
                    }
                }
                continue;
            }
            let v = |a: usize, b: usize| big_f64(&vals[grid.idx(a, b)]);
            march_cell(
                [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)],
                [(fx[i], fy[j]), (fx[i + 1], fy[j]), (fx[i + 1], fy[j + 1]), (fx[i], fy[j + 1])],
                &mut segs,
            );
        }
    }
    segs
}

/// Bounding box of the origin's component of `{g ≤ ε}` found on coarse grids,
/// starting from the events' abscissae and growing until the component stays
/// inside.
fn frame_box(level: &BivariatePolynomial, tree: &PoincareReebTree) -> [Rational; 4] {
    let xs: Vec<Rational> = tree.vertices.iter().map(|v| v.x()).collect();
    let mut xl = xs.iter().min().cloned().unwrap_or_else(|| int(-1));
    let mut xr = xs.iter().max().cloned().unwrap_or_else(|| int(1));
    let w = &xr - &xl;
    let pad = &w / int(8);
    xl -= &pad;
    xr += &pad;
    let mut yl = -&w / int(2);
    let mut yr = &w / int(2);
    for _ in 0..24 {
        let g = Grid::covering(&xl, &xr, &yl, &yr, 64);
        let vals = g.values(&DyadicEval::new(level, g.m));
        let inside = g.flood(&vals);
        let mut touch = [false; 4];
        let (mut imin, mut imax, mut jmin, mut jmax) = (g.nx, 0, g.ny, 0);
        for j in 0..=g.ny {
            for i in 0..=g.nx {
                if inside[g.idx(i, j)] {
                    imin = imin.min(i);
                    imax = imax.max(i);
                    jmin = jmin.min(j);
                    jmax = jmax.max(j);
                    touch[0] |= i == 0;
                    touch[1] |= i == g.nx;
                    touch[2] |= j == 0;
                    touch[3] |= j == g.ny;
                }
            }
        }
        if imin > imax {
            break;
        }
        if !touch.iter().any(|&t| t) {
            let one = g.coord(&g.s);
            let i_lo = imin.saturating_sub(1);
            let j_lo = jmin.saturating_sub(1);
            let (bx0, bx1) = (g.x_at(i_lo), g.x_at((imax + 1).min(g.nx)));
            let (by0, by1) = (g.y_at(j_lo), g.y_at((jmax + 1).min(g.ny)));
            let p = std::cmp::max(&bx1 - &bx0, &by1 - &by0) / int(20) + one;
            return [bx0 - &p, bx1 + &p, by0 - &p, by1 + p];
        }
        let (wx, wy) = (&xr - &xl, &yr - &yl);
        if touch[0] {
            xl -= &wx;
        }
        if touch[1] {
            xr += &wx;
        }
        if touch[2] {
            yl -= &wy;
        }
        if touch[3] {
            yr += &wy;
        }
    }
    [xl, xr, yl, yr]
}

/// SVG picture of the tree's level curve in the sweep frame of `f`.
pub fn render_svg(f: &BivariatePolynomial, tree: &PoincareReebTree, opts: &SvgOptions) -> String {
    let g = f.rotate(&tree.direction);
    let level = &g - &BivariatePolynomial::constant(tree.epsilon.clone());
    let polar = g.partial(Var::Y);
    let [xl, xr, yl, yr] = frame_box(&level, tree);
    let grid = Grid::covering(&xl, &xr, &yl, &yr, opts.grid);
    let inside = grid.flood(&grid.values(&DyadicEval::new(&level, grid.m)));
    let near = |i: usize, j: usize| {
        [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            .iter()
            .any(|&(a, b)| inside[grid.idx(a, b)])
    };
    let hot: Vec<(Rational, Rational)> = tree
        .vertices
        .iter()
        .filter(|v| v.kind != VertexKind::Root)
        .map(|v| (v.x(), v.y()))
        .collect();
    let curve = contour(&level, &grid, near, &hot, opts.refine);
    let gamma = contour(&polar, &grid, near, &hot, opts.refine);

    let (fx0, fx1) = (to_f64(&grid.x_at(0)), to_f64(&grid.x_at(grid.nx)));
    let (fy0, fy1) = (to_f64(&grid.y_at(0)), to_f64(&grid.y_at(grid.ny)));
    let span = (fx1 - fx0).max(fy1 - fy0);
    let margin = 16.0;
    let frame = Frame {
        x0: fx0,
        y1: fy1,
        scale: opts.size / span,
        margin,
    };
    let width = 2.0 * margin + (fx1 - fx0) * frame.scale;
    let height = 2.0 * margin + (fy1 - fy0) * frame.scale;

    let path = |segs: &[[(f64, f64); 2]]| {
        let mut d = String::new();
        for [a, b] in segs {
            let (p, q) = (frame.px(a.0, a.1), frame.px(b.0, b.1));
            let _ = write!(d, "M{:.2} {:.2}L{:.2} {:.2}", p.0, p.1, q.0, q.1);
        }
        d
    };
    let at = |id: usize| {
        let v = tree.vertex(id);
        frame.px(to_f64(&v.x()), to_f64(&v.y()))
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<path class=\"polar\" fill=\"none\" stroke=\"red\" stroke-width=\"1\" stroke-dasharray=\"4 2\" d=\"{}\"/>",
        path(&gamma)
    );
    let _ = writeln!(
        s,
        "<path class=\"level\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"{}\"/>",
        path(&curve)
    );
    s.push_str("<g class=\"tree\" stroke=\"#3060c0\" stroke-width=\"1\">\n");
    for v in &tree.vertices {
        for &c in &v.children {
            let (p, q) = (at(v.id), at(c));
            let _ = writeln!(s, "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>", p.0, p.1, q.0, q.1);
        }
    }
    s.push_str("</g>\n<g class=\"events\" font-family=\"sans-serif\" font-size=\"10\">\n");
    for v in &tree.vertices {
        let (x, y) = at(v.id);
        match (v.kind, v.side) {
            (VertexKind::Root, _) => {
                let _ = writeln!(s, "<circle class=\"root\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"black\"/>");
            }
            (k, side) => {
                let (class, letter, color) = if k == VertexKind::Crest {
                    ("crest", "C", "red")
                } else {
                    ("valley", "V", "blue")
                };
                let side = if side == VertexSide::Left { "left" } else { "right" };
                let _ = writeln!(
                    s,
                    "<circle class=\"event {class}\" data-side=\"{side}\" data-id=\"{}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"{color}\"/>",
                    v.id
                );
                let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\">{letter}{}</text>", x + 4.0, y - 4.0, v.id);
            }
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// One `side: σ` line per report, e.g. `right: 1 3 2`.
pub fn snake_text(reports: &[SnakeReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let sigma: Vec<String> = r.sigma.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(s, "{}: {}", r.side, sigma.join(" "));
    }
    s
}

pub fn snake_json(reports: &[SnakeReport]) -> String {
    serde_json::to_string_pretty(reports).expect("snake reports serialize")
}

pub fn scan_json(report: &DirectionScanReport) -> String {
    serde_json::to_string_pretty(report).expect("scan report serializes")
}
