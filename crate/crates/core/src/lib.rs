//! Grothendieck polynomials and their principal specializations, computed
//! through the marked pipe dream model.
//!
//! The crate is organised around five modules:
//!
//! - [`perm`]: permutations in one-line notation, subwords, pattern
//!   statistics, and reduced words;
//! - [`poly`]: exact sparse polynomials in `beta, x_1..x_n`, divided
//!   difference operators, and the Grothendieck polynomial they define;
//! - [`pipedream`]: staircase pipe dreams, routing, markable bumps, and
//!   enumeration of reduced and marked reduced dreams;
//! - [`reduction`]: removable pipes, the pipe-deleting map `phi_j` with its
//!   inverse augmentation `psi_j`, core dreams, and their generating
//!   polynomials;
//! - [`special`]: principal specializations, the pattern-expansion
//!   coefficients `c_w(beta)`, interval sums, and an exhaustive verification
//!   harness over small symmetric groups.
//!
//! Everything is exact: coefficients are arbitrary-precision integers and
//! all equalities asserted by the verification harness are tested without
//! tolerance.

pub mod perm;
pub mod pipedream;
pub mod poly;
pub mod reduction;
pub mod special;

pub use perm::{pattern_of, Permutation, Subword};
pub use pipedream::{PipeDream, Routing, Tile};
pub use poly::{BetaPoly, MultiPoly};
pub use reduction::{CoreDream, ReductionResult};
pub use special::{CheckReport, SpecCache};

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("word has repeated entries")]
    RepeatedEntries,
    #[error("cannot parse word {0:?}")]
    WordParse(String),
    #[error("{0} is not a subword of {1}")]
    NotASubword(String, String),
    #[error("no pipe labelled {0}")]
    UnknownLabel(usize),
    #[error("pipe {0} is not removable")]
    NotRemovable(usize),
    #[error("pipe {0} is already present")]
    LabelPresent(usize),
    #[error("insertion position {0} out of range 1..={1}")]
    BadPosition(usize, usize),
    #[error("augmenting pipe {0} produced a non-reduced diagram")]
    InvalidAugmentation(usize),
    #[error("variable index {0} out of range")]
    BadVariable(usize),
    #[error("inexact division in divided difference (arithmetic bug)")]
    InexactDivision,
    #[error("reduced-word average of {0} is not an integer (arithmetic bug)")]
    MacdonaldNotIntegral(String),
    #[error("invalid pipe dream: {0}")]
    InvalidDream(String),
    #[error("cannot parse pipe dream: {0}")]
    DreamParse(String),
    #[error("the core method needs a 1423-avoiding permutation, got {0}")]
    CoreMethodUnavailable(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("cache {0} failed its audit: entry {1} does not match a recomputation")]
    CacheCorrupt(String, String),
    #[error("cache i/o: {0}")]
    CacheIo(String),
    #[error("sweep supports 1 <= n <= 8, got {0}")]
    SweepRange(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
