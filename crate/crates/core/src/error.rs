use thiserror::Error;

use crate::genericity::Verdict;
use crate::sweep::Side;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("both polynomials are constant in y")]
    BothConstantInY,
    #[error("polynomial is constant in y")]
    ConstantInY,
    #[error("direction ({c}, {s}) is not on the unit circle")]
    InvalidDirection { c: String, s: String },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degree {n} is too small")]
    DegreeTooSmall { n: u32 },
    #[error("polar curve is not reduced")]
    NonReducedPolar,
    #[error("polynomial does not vanish at the origin")]
    NotVanishingAtOrigin,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("a tangency event lies on the line x = 0")]
    EventAtZero,
    #[error("degenerate tangency near x = {x}")]
    DegenerateTangency { x: String },
    #[error("abscissa {x} meets a critical abscissa of the sweep")]
    XAtEvent { x: String },
    #[error("leading coefficient in y vanishes inside the sweep box")]
    LeadingCoefficientVanishes,
    #[error("events leave the good-neighbourhood box")]
    EventsOutsideBox,
    #[error("two events share an abscissa on the {side} side")]
    NonGenericTie { side: Side },
    #[error("crests and valleys do not alternate on the {side} side")]
    AlternationViolation { side: Side },
    #[error("first or last event on the {side} side is not a valley")]
    EndpointNotValley { side: Side },
    #[error("inconsistent transitions: {0}")]
    InconsistentTransitions(String),
    #[error("tree combinatorics did not stabilize after {k_max} halvings")]
    NoStabilization { k_max: u32 },
    #[error("direction is not generic: {0:?}")]
    NonGeneric(Verdict),
    #[error("side has no events")]
    EmptySide,
    #[error("two events have overlapping abscissae")]
    TieDetected,
    #[error("the two orders are not on the same element set")]
    OrderMismatch,
    #[error("sequence is not a permutation of 1..=n")]
    NotAPermutation,
    #[error("tree is not binary at vertex {0}")]
    NotBinary(usize),
}
