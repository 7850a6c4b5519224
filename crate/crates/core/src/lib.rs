//! Exact-arithmetic toolkit for transferable-utility coalitional games.
//!
//! A coalitional game assigns a worth to every subset of a player set
//! (`v(∅) = 0`). This crate represents such games densely over coalition
//! bitmasks with arbitrary-precision rationals and provides:
//!
//! * [`game`] — games, Harsanyi dividends (Möbius transform), structural
//!   predicates (superadditivity, symmetric players, null players);
//! * [`rules`] — allocation rules: Shapley, equal division, weighted
//!   Shapley, egalitarian Shapley mixtures, the nucleolus, and several
//!   deliberately flawed rules used as audit foils;
//! * [`lp`] — an exact rational simplex solver (Bland's rule) backing the
//!   nucleolus;
//! * [`audit`] — mechanical checkers for the manipulation-immunity axioms
//!   (reallocation-proofness, coalitional monotonicity, marginality
//!   variants, ...) plus randomized counterexample search;
//! * [`manipulate`] — a constructive engine that searches for the most
//!   profitable manipulation a coalition can pull off under a given
//!   axiom's feasibility notion.
//!
//! Everything in the core is exact: the audited axioms are equalities and
//! weak inequalities, and floating point would turn them into guesses.

pub mod audit;
pub mod game;
pub mod lp;
pub mod manipulate;
pub mod ratio;
pub mod rules;
pub mod samples;

mod nucleolus;

pub use game::{Coalition, CoalitionalGame, DividendVector, Domain, ModularShift};
pub use ratio::Rational;
pub use rules::{Allocation, RuleId};

/// Errors shared across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("player count must be between 1 and 16, got {0}")]
    PlayerCount(usize),
    #[error("coalition belongs to a {coalition}-player context, game has {game} players")]
    ContextMismatch { coalition: u8, game: u8 },
    #[error("worth table must have length 2^n = {expected}, got {got}")]
    WorthTableLength { expected: usize, got: usize },
    #[error("the empty coalition must have worth 0")]
    EmptyWorthNonzero,
    #[error("the empty coalition must have dividend 0")]
    EmptyDividendNonzero,
    #[error("game tagged superadditive but v(S ∪ T) < v(S) + v(T) for S={s}, T={t}")]
    NotSuperadditive { s: String, t: String },
    #[error("player {0} is out of range")]
    PlayerOutOfRange(usize),
    #[error("player {0} is already a member of the coalition")]
    AlreadyMember(usize),
    #[error("coalition mask {mask:#x} does not fit a {n}-player context")]
    MaskOutOfRange { mask: usize, n: u8 },
    #[error("a unanimity game needs a nonempty carrier coalition")]
    EmptyCarrier,
    #[error("the manipulating coalition must be nonempty")]
    EmptyManipulator,
    #[error("modular shift has {got} entries, game has {expected} players")]
    ShiftLength { expected: usize, got: usize },
    #[error("weights must be strictly positive")]
    NonpositiveWeight,
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("mixture coefficient must lie in [0, 1]")]
    AlphaOutOfRange,
    #[error("this rule is only defined for 2-player games, got {0} players")]
    TwoPlayerOnly(u8),
    #[error("games must have the same player count ({0} vs {1})")]
    PlayerCountMismatch(u8, u8),
    #[error("games must carry the same domain tag")]
    DomainMismatch,
    #[error("unknown axiom {0:?}")]
    UnknownAxiom(String),
    #[error("audit precondition failed: {0}")]
    AuditPrecondition(String),
    #[error("linear program is malformed: {0}")]
    MalformedProgram(String),
    #[error("linear program has no optimal solution")]
    NoOptimum,
    #[error("no witness game available")]
    NoWitness,
}

pub type Result<T> = std::result::Result<T, Error>;
