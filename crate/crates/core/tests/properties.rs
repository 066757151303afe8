use proptest::prelude::*;
use reebsnake::poly::{resultant_y, RootIsolator};
use reebsnake::rational::{rat, sign};
use reebsnake::snake::is_snake;
use reebsnake::sweep::{sweep, Side};
use reebsnake::tree::{build_tree, tree_isomorphic, PoincareReebTree};
use reebsnake::{BivariatePolynomial, Rational, UnitDirection, UnivariatePolynomial};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn bivariate(max_deg: u32) -> impl Strategy<Value = BivariatePolynomial> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg), -5i64..=5, 1i64..=3), 1..6).prop_map(|ts| {
        BivariatePolynomial::from_terms(ts.into_iter().map(|((i, j), n, d)| ((i, j), rat(n, d))))
    })
}

fn from_roots(roots: &[(Rational, u32)]) -> UnivariatePolynomial {
    roots.iter().fold(UnivariatePolynomial::one(), |acc, (r, m)| {
        let lin = UnivariatePolynomial::new(vec![-r.clone(), rat(1, 1)]);
        &acc * &lin.pow(*m)
    })
}

fn distinct(rs: &[(Rational, u32)]) -> Vec<Rational> {
    let mut v: Vec<Rational> = rs.iter().map(|(r, _)| r.clone()).collect();
    v.sort();
    v.dedup();
    v
}

/// Determinant by Gaussian elimination over the rationals.
fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = rat(1, 1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != rat(0, 1)) else {
            return rat(0, 1);
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let pivot_row = m[c].clone();
        d *= &pivot_row[c];
        for row in &mut m[c + 1..] {
            let k = &row[c] / &pivot_row[c];
            for (dst, src) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *dst -= &k * src;
            }
        }
    }
    d
}

/// Sylvester resultant of two univariate polynomials with nonzero degree.
fn sylvester(a: &UnivariatePolynomial, b: &UnivariatePolynomial) -> Rational {
    let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (p, deg, count) in [(a, m, n), (b, n, m)] {
        for i in 0..count {
            let mut row = vec![rat(0, 1); size];
            for k in 0..=deg {
                row[i + k] = p.coeff(deg - k);
            }
            rows.push(row);
        }
    }
    det(rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotation_preserves_values(f in bivariate(4), t in small_rat(), x in small_rat(), y in small_rat()) {
        let d = UnitDirection::from_half_angle(&t);
        let g = f.rotate(&d);
        let (u, v) = d.apply(&x, &y);
        prop_assert_eq!(g.eval(&x, &y), f.eval(&u, &v));
        prop_assert_eq!(g.rotate(&d.inverse()), f);
    }

    #[test]
    fn sturm_counts_match_roots(
        roots in prop::collection::vec((small_rat(), 1u32..=3), 1..6),
        lo in small_rat(),
        hi in small_rat(),
    ) {
        let p = from_roots(&roots);
        let iso = RootIsolator::new(&p).unwrap();
        let ds = distinct(&roots);
        prop_assert_eq!(iso.count_all(), ds.len());
        let expected = ds.iter().filter(|r| &lo < *r && *r < &hi).count();
        prop_assert_eq!(iso.count_in(&lo, &hi), expected);
        let ivs = iso.isolate_all();
        prop_assert_eq!(ivs.len(), ds.len());
        for (iv, r) in ivs.iter().zip(&ds) {
            prop_assert!(iv.contains(r));
        }
    }

    #[test]
    fn squarefree_part_divides(roots in prop::collection::vec((small_rat(), 1u32..=3), 1..6)) {
        let p = from_roots(&roots);
        let s = p.squarefree_part().unwrap();
        prop_assert!(p.exact_div(&s).is_some());
        prop_assert_eq!(s.degree(), Some(distinct(&roots).len()));
        prop_assert!(s.is_squarefree().unwrap());
    }

    #[test]
    fn resultant_matches_sylvester(f in bivariate(3), g in bivariate(3), x0 in small_rat()) {
        let y = BivariatePolynomial::y();
        let (f, g) = (&f + &y, &g + &y.pow(2));
        let r = resultant_y(&f, &g).unwrap();
        let (fx, gx) = (f.subs_x(&x0), g.subs_x(&x0));
        prop_assume!(fx.degree() == f.degree_in(reebsnake::Var::Y).map(|d| d as usize));
        prop_assume!(gx.degree() == g.degree_in(reebsnake::Var::Y).map(|d| d as usize));
        prop_assert_eq!(r.eval(&x0), sylvester(&fx, &gx));
    }

    #[test]
    fn resultant_vanishes_on_common_roots(h in bivariate(2), u in bivariate(2), v in bivariate(2), a in small_rat()) {
        // f and g share the factor y − a·x − h(x, 0)
        let x = BivariatePolynomial::x();
        let common = &(&BivariatePolynomial::y() - &x.scale(&a)) - &BivariatePolynomial::from_terms(
            h.terms().filter(|((_, j), _)| *j == 0).map(|(k, c)| (*k, c.clone())),
        );
        let y = BivariatePolynomial::y();
        let f = &common * &(&u + &y);
        let g = &common * &(&v + &y.pow(2));
        prop_assert!(resultant_y(&f, &g).unwrap().is_zero());
    }

    #[test]
    fn resultant_scales(f in bivariate(3), g in bivariate(3), c in small_rat()) {
        prop_assume!(sign(&c) != 0);
        let y = BivariatePolynomial::y();
        let (f, g) = (&f + &y.pow(2), &g + &y);
        let r = resultant_y(&f, &g).unwrap();
        let rs = resultant_y(&f.scale(&c), &g).unwrap();
        // Res(c·f, g) = c^deg_y(g) · Res(f, g)
        let k = num_traits::pow(c, g.degree_in(reebsnake::Var::Y).unwrap() as usize);
        prop_assert_eq!(rs, r.scale(&k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn sweep_is_scale_invariant(seed in 0u64..400, c in prop::sample::select(vec![rat(1, 3), rat(2, 1), rat(5, 7)])) {
        let f = reebsnake::generator::random_polynomial(seed);
        let eps = rat(1, 64);
        let a = sweep(&f, &eps);
        let b = sweep(&f.scale(&c), &(&eps * &c));
        match (a, b) {
            (Ok(a), Ok(b)) => {
                for side in [Side::Right, Side::Left] {
                    prop_assert_eq!(a.side(side).kinds(), b.side(side).kinds());
                }
            }
            (Err(a), Err(b)) => prop_assert_eq!(std::mem::discriminant(&a), std::mem::discriminant(&b)),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.err(), b.err()),
        }
    }
}

fn tree_at(poly: &str, t: Rational, eps: Rational) -> PoincareReebTree {
    let d = UnitDirection::from_half_angle(&t);
    let f: BivariatePolynomial = poly.parse().unwrap();
    build_tree(&sweep(&f.rotate(&d), &eps).unwrap(), &d).unwrap()
}

#[test]
fn isomorphism_is_an_equivalence() {
    let trees = [
        tree_at("x^2+y^2", rat(0, 1), rat(1, 4)),
        tree_at("x^2+y^2", rat(0, 1), rat(1, 16)),
        tree_at("2*x^2+y^2+x^3", rat(0, 1), rat(1, 16)),
        tree_at("x^2+(y^2-x)^2", rat(1, 100), rat(1, 1024)),
        tree_at("x^2+(y^2-x)^2", rat(1, 100), rat(1, 2048)),
        tree_at("x^2+(y^2-x)^2", rat(-1, 100), rat(1, 1024)),
    ];
    let n = trees.len();
    let rel: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| tree_isomorphic(&trees[i], &trees[j])).collect())
        .collect();
    for i in 0..n {
        assert!(rel[i][i]);
        for j in 0..n {
            assert_eq!(rel[i][j], rel[j][i], "{i} {j}");
            for k in 0..n {
                if rel[i][j] && rel[j][k] {
                    assert!(rel[i][k], "{i} {j} {k}");
                }
            }
        }
    }
    assert!(rel[0][1]);
    assert!(rel[3][4]);
    assert!(!rel[0][3]);
    let back = PoincareReebTree::from_json(&trees[3].to_json()).unwrap();
    assert!(tree_isomorphic(&back, &trees[3]));
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n);
            out.push(q);
        }
    }
    out
}

#[test]
fn alternation_exhaustive() {
    // alternating permutations of either kind: 1 for n = 1, else twice the Euler zigzag number
    let expected = [1, 2, 4, 10, 32, 122, 544];
    for n in 1..=7 {
        let mut count = 0;
        for p in permutations(n) {
            let ups: Vec<bool> = p.windows(2).map(|w| w[0] < w[1]).collect();
            let brute = ups.windows(2).all(|w| w[0] != w[1]);
            assert_eq!(is_snake(&p).unwrap(), brute, "{p:?}");
            count += usize::from(brute);
        }
        assert_eq!(count, expected[n - 1], "n = {n}");
    }
    assert!(is_snake(&[1, 1]).is_err());
    assert!(is_snake(&[]).is_err());
}
