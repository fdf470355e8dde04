//! Superspace zonotopal algebras of rational hyperplane multiarrangements.
//!
//! Given a multiarrangement `A` in `n` dimensions, the differential closure of
//! its external power ideal lives in superspace: polynomials in `x_1..x_n`
//! tensored with the exterior algebra on `θ_1..θ_n`. This crate computes
//!
//! * the Macaulay inverse system of that ideal (and of its shifts by `k`),
//!   bidegree by bidegree, in exact rational arithmetic ([`perp`]);
//! * its bigraded Hilbert series three ways: from the kernel dimensions, from
//!   a Tutte polynomial specialization, and from the deletion/restriction
//!   recursion ([`invariants`]);
//! * an explicit basis of the inverse system built from matroid activities,
//!   together with a verifier ([`inverse_basis`]);
//! * enumerative consequences: f-vectors of generic deformations, region
//!   counts of doubled arrangements, top-degree summands, log-concavity, and
//!   the internal-case conjecture survey.
//!
//! All arithmetic is exact. See `examples/` for one runnable program per
//! capability and the `superzono` binary for the command-line front end.

pub mod arrangement;
pub mod corpus;
pub mod inverse_basis;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod modular;
pub mod perp;
pub mod poly;
pub mod rational;
pub mod superspace;

pub use arrangement::{Arrangement, Flat, Hyperplane};
pub use matroid::{BasisRecord, TutteMethod};
pub use perp::{ConstraintOperator, KernelBasis, PerpSolver};
pub use poly::{BigradedSeries, Poly2, TuttePoly, UniPoly};
pub use rational::Rational;
pub use superspace::{Bidegree, SuperElement, ThetaWord, XMonomial};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("hyperplane index {index} out of range for arrangement of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cannot restrict at hyperplane {0}: it is a loop")]
    RestrictAtLoop(usize),
    #[error("hyperplane {0} has a zero normal vector")]
    ZeroNormal(usize),
    #[error("normal vector of hyperplane {index} has {got} coordinates, expected {expected}")]
    NormalLength { index: usize, got: usize, expected: usize },
    #[error("edge {0}-{0} is a self-loop")]
    SelfLoop(usize),
    #[error("edge {0}-{1} appears more than once")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{0:?} is not a basis of the arrangement")]
    NotABasis(Vec<usize>),
    #[error("shift parameter k = {0} is below -1")]
    InvalidShift(i32),
    #[error("denominators do not clear: {0}")]
    NonIntegral(String),
    #[error("unsupported thickening order {0} (only 2 is implemented)")]
    UnsupportedThickening(u32),
    #[error("malformed arrangement file: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
