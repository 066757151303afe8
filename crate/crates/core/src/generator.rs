//! Random polynomials with a strict local minimum at the origin.
//!
//! `f = A² + B²` with `A = x + (terms of degree 2 and 3)` and
//! `B = y^m − q(x)`, `q(0) = 0`. `A = 0` is a smooth curve through the
//! origin on which `B` has an isolated zero, so the origin is a strict
//! minimum with value 0. `m = 1` gives Morse minima, `m ≥ 2` Coste-like ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::BivariatePolynomial;
use crate::rational::{rat, Rational};

#[derive(Debug, Clone)]
pub struct GeneratorOptions {
    pub max_m: u32,
    /// Number of higher-order terms added to `A`.
    pub a_terms: usize,
    /// Number of monomials in `q`, of degree 1 to `q_degree`.
    pub q_terms: usize,
    pub q_degree: u32,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        Self {
            max_m: 3,
            a_terms: 2,
            q_terms: 2,
            q_degree: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub f: BivariatePolynomial,
    pub a: BivariatePolynomial,
    pub b: BivariatePolynomial,
    pub m: u32,
}

fn coefficient(rng: &mut impl Rng) -> Rational {
    let num = [-2, -1, 1, 2][rng.gen_range(0..4)];
    let den = [1, 2][rng.gen_range(0..2)];
    rat(num, den)
}

pub fn generate(rng: &mut impl Rng, opts: &GeneratorOptions) -> Generated {
    let mut a = BivariatePolynomial::x();
    for _ in 0..opts.a_terms {
        let deg = rng.gen_range(2..=3u32);
        let i = rng.gen_range(0..=deg);
        a = &a + &BivariatePolynomial::monomial(coefficient(rng), i, deg - i);
    }
    let m = rng.gen_range(1..=opts.max_m.max(1));
    let mut q = BivariatePolynomial::zero();
    for _ in 0..opts.q_terms {
        let deg = rng.gen_range(1..=opts.q_degree.max(1));
        q = &q + &BivariatePolynomial::monomial(coefficient(rng), deg, 0);
    }
    let b = &BivariatePolynomial::monomial(rat(1, 1), 0, m) - &q;
    let f = &a.pow(2) + &b.pow(2);
    Generated { f, a, b, m }
}

/// The polynomial for `seed` with default options.
pub fn random_polynomial(seed: u64) -> BivariatePolynomial {
    generate(&mut ChaCha8Rng::seed_from_u64(seed), &GeneratorOptions::default()).f
}

/// `n` polynomials from one seeded stream.
pub fn corpus(seed: u64, n: usize, opts: &GeneratorOptions) -> Vec<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| generate(&mut rng, opts)).collect()
}
