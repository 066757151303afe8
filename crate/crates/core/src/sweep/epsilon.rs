//! Choice of a level `ε` small enough for the tree to have stabilized.

use log::debug;

use super::{sweep_with, SweepResult};
use crate::direction::UnitDirection;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poly::BivariatePolynomial;
use crate::rational::{pow2_neg, rat, Rational};
use crate::tree::{build_tree, tree_isomorphic, validate_generic, PoincareReebTree};

#[derive(Debug, Clone)]
pub struct EpsilonOptions {
    pub eps0: Rational,
    pub k_max: u32,
    /// Number of consecutive levels `ε₀·2^(−k)`, …, whose trees must agree.
    pub stable_levels: u32,
    pub execution: Execution,
}

impl Default for EpsilonOptions {
    fn default() -> Self {
        Self {
            eps0: rat(1, 4),
            k_max: 40,
            stable_levels: 4,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stabilized {
    pub epsilon: Rational,
    pub k: u32,
    pub sweep: SweepResult,
    pub tree: PoincareReebTree,
}

/// Errors that do not depend on the level and must not be retried.
fn is_structural(e: &Error) -> bool {
    matches!(
        e,
        Error::ConstantInY
            | Error::NonReducedPolar
            | Error::ZeroPolynomial
            | Error::LeadingCoefficientVanishes
    )
}

/// Sweep and tree at one level, or `None` if the level is unusable.
fn level(g: &BivariatePolynomial, d: &UnitDirection, eps: &Rational) -> Result<Option<(SweepResult, PoincareReebTree)>> {
    let s = match sweep_with(g, eps, Execution::Sequential) {
        Ok(s) => s,
        Err(e) if is_structural(&e) => return Err(e),
        Err(e) => {
            debug!("level {eps}: {e}");
            return Ok(None);
        }
    };
    if s.right.events.len() != s.right.half_branches || s.left.events.len() != s.left.half_branches {
        debug!("level {eps}: event count differs from polar half-branch count");
        return Ok(None);
    }
    let Ok(t) = build_tree(&s, d) else {
        return Ok(None);
    };
    if !validate_generic(&t).passed() {
        return Ok(None);
    }
    Ok(Some((s, t)))
}

/// Smallest `k` such that the trees of `rotate(f, d)` at `ε₀·2^(−k)` and the
/// next `stable_levels − 1` halvings are all valid and isomorphic.
pub fn stabilize(f: &BivariatePolynomial, d: &UnitDirection, opts: &EpsilonOptions) -> Result<Stabilized> {
    let g = f.rotate(d);
    let need = opts.stable_levels.max(1) as usize;
    let batch = need as u32;
    let mut run: Vec<(u32, SweepResult, PoincareReebTree)> = Vec::new();
    let mut k = 0;
    while k < opts.k_max + opts.stable_levels {
        let ks: Vec<u32> = (k..k + batch).collect();
        let results = par::map(opts.execution, &ks, |&k| {
            level(&g, d, &(&opts.eps0 * pow2_neg(k)))
        });
        for (k, r) in ks.into_iter().zip(results) {
            match r? {
                Some((s, t)) => {
                    if run.last().is_some_and(|(_, _, last)| !tree_isomorphic(last, &t)) {
                        run.clear();
                    }
                    if run.is_empty() && k > opts.k_max {
                        return Err(Error::NoStabilization { k_max: opts.k_max });
                    }
                    run.push((k, s, t));
                    if run.len() == need {
                        let (k, sweep, tree) = run.swap_remove(0);
                        debug!("stabilized at k = {k}");
                        return Ok(Stabilized {
                            epsilon: sweep.epsilon.clone(),
                            k,
                            sweep,
                            tree,
                        });
                    }
                }
                None => run.clear(),
            }
        }
        k += batch;
    }
    Err(Error::NoStabilization { k_max: opts.k_max })
}

/// `ε` from [`stabilize`] with default options.
pub fn choose_epsilon(f: &BivariatePolynomial, d: &UnitDirection) -> Result<Rational> {
    stabilize(f, d, &EpsilonOptions::default()).map(|s| s.epsilon)
}
