//! Allocation rules: total functions from games to payoff vectors.
//!
//! The Shapley value is computed through dividends (each coalition's
//! dividend split equally among its members); the classic weighted-sum-of-
//! marginal-contributions form is kept alongside as an independent route
//! and the two are tested to agree exactly. The remaining rules are the
//! equal division value, proportional-weight Shapley, egalitarian
//! mixtures, the (pre)nucleolus, and a few intentionally defective rules
//! that the audit module uses to separate the axioms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::game::{Coalition, CoalitionalGame};
use crate::ratio::Rational;
use crate::{Error, Result};

/// A payoff vector, one exact rational per player.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Allocation {
    payoffs: Vec<Rational>,
}

impl Allocation {
    pub fn new(payoffs: Vec<Rational>) -> Self {
        Allocation { payoffs }
    }

    pub fn player_count(&self) -> u8 {
        self.payoffs.len() as u8
    }

    pub fn payoffs(&self) -> &[Rational] {
        &self.payoffs
    }

    pub fn payoff(&self, i: usize) -> &Rational {
        &self.payoffs[i]
    }

    /// `∑_{i∈s} payoff_i`.
    pub fn coalition_payoff(&self, s: Coalition) -> Result<Rational> {
        if s.context() as usize != self.payoffs.len() {
            return Err(Error::ContextMismatch {
                coalition: s.context(),
                game: self.payoffs.len() as u8,
            });
        }
        Ok(s.members().map(|i| &self.payoffs[i]).sum())
    }

    pub fn total(&self) -> Rational {
        self.payoffs.iter().sum()
    }

    /// Componentwise `self + c · other`.
    pub fn axpy(&self, c: &Rational, other: &Allocation) -> Allocation {
        assert_eq!(self.payoffs.len(), other.payoffs.len());
        Allocation {
            payoffs: self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }
}

/// `∑_{i∈s} payoffs[i]` as a free function.
pub fn coalition_payoff(alloc: &Allocation, s: Coalition) -> Result<Rational> {
    alloc.coalition_payoff(s)
}

/// Shapley value via dividends: each coalition's dividend is split
/// equally among its members.
pub fn shapley(game: &CoalitionalGame) -> Allocation {
    let n = game.player_count() as usize;
    let d = game.dividends();
    let mut payoffs = vec![Rational::zero(); n];
    for (mask, dividend) in d.values().iter().enumerate() {
        if dividend.is_zero() {
            continue;
        }
        let size = mask.count_ones() as i64;
        let share = dividend / Rational::from_integer(size.into());
        for (i, p) in payoffs.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *p += &share;
            }
        }
    }
    Allocation { payoffs }
}

/// Shapley value as the factorial-weighted average of marginal
/// contributions; an independent route kept for cross-checks.
pub fn shapley_from_marginals(game: &CoalitionalGame) -> Allocation {
    let n = game.player_count() as usize;
    let mut factorial = vec![BigInt::one(); n + 1];
    for k in 1..=n {
        factorial[k] = &factorial[k - 1] * BigInt::from(k);
    }
    // weight for |S| = s: s! (n-1-s)! / n!
    let weights: Vec<Rational> = (0..n)
        .map(|s| Rational::new(&factorial[s] * &factorial[n - 1 - s], factorial[n].clone()))
        .collect();
    let worths = game.worths();
    let mut payoffs = vec![Rational::zero(); n];
    for (i, p) in payoffs.iter_mut().enumerate() {
        let bit = 1usize << i;
        for mask in 0..worths.len() {
            if mask & bit == 0 {
                let marginal = &worths[mask | bit] - &worths[mask];
                if !marginal.is_zero() {
                    *p += &weights[mask.count_ones() as usize] * marginal;
                }
            }
        }
    }
    Allocation { payoffs }
}

/// Equal division value: everyone gets `v(N)/n`.
pub fn equal_division(game: &CoalitionalGame) -> Allocation {
    let n = game.player_count() as usize;
    let share = game.grand_worth() / Rational::from_integer((n as i64).into());
    Allocation { payoffs: vec![share; n] }
}

/// Weighted Shapley value with simple positive weights: each dividend is
/// split within its coalition proportionally to the members' weights.
/// Equal weights reproduce [`shapley`] exactly.
pub fn weighted_shapley(game: &CoalitionalGame, weights: &[Rational]) -> Result<Allocation> {
    let n = game.player_count() as usize;
    if weights.len() != n {
        return Err(Error::WeightCount { expected: n, got: weights.len() });
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::NonpositiveWeight);
    }
    let d = game.dividends();
    let mut payoffs = vec![Rational::zero(); n];
    for (mask, dividend) in d.values().iter().enumerate() {
        if dividend.is_zero() {
            continue;
        }
        let total: Rational = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &weights[i]).sum();
        for (i, p) in payoffs.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *p += dividend * &weights[i] / &total;
            }
        }
    }
    Ok(Allocation { payoffs })
}

/// Egalitarian Shapley value `α·Sh + (1−α)·ED` for `α ∈ [0, 1]`.
pub fn egalitarian_shapley(game: &CoalitionalGame, alpha: &Rational) -> Result<Allocation> {
    if alpha.is_negative() || alpha > &Rational::one() {
        return Err(Error::AlphaOutOfRange);
    }
    Ok(sh_ed_mix(game, alpha, &(Rational::one() - alpha)))
}

/// `a·Sh + b·ED` without range restrictions. The egalitarian family is
/// the `a + b = 1`, `a,b ≥ 0` slice; other combinations (like `2Sh − ED`)
/// are useful as axiom-separating foils.
pub fn sh_ed_mix(game: &CoalitionalGame, sh_coeff: &Rational, ed_coeff: &Rational) -> Allocation {
    let sh = shapley(game);
    let ed = equal_division(game);
    Allocation {
        payoffs: sh
            .payoffs
            .iter()
            .zip(&ed.payoffs)
            .map(|(s, e)| s * sh_coeff + e * ed_coeff)
            .collect(),
    }
}

/// The null value: everyone gets zero, whatever the game.
pub fn null_value(game: &CoalitionalGame) -> Allocation {
    Allocation { payoffs: vec![Rational::zero(); game.player_count() as usize] }
}

/// A 2-player-only rule that matches the standard solution on symmetric
/// singletons but snaps to extreme splits otherwise. Requesting it on any
/// other player count is an error.
pub fn phi_two_player(game: &CoalitionalGame) -> Result<Allocation> {
    let n = game.player_count();
    if n != 2 {
        return Err(Error::TwoPlayerOnly(n));
    }
    let worths = game.worths();
    let grand = &worths[3];
    let one = |i: usize, j: usize| -> Rational {
        let vi = &worths[1 << i];
        let vj = &worths[1 << j];
        if vi == vj {
            grand / Rational::from_integer(2.into())
        } else if vi > vj {
            let alt = grand - vj;
            if *vi > alt { vi.clone() } else { alt }
        } else {
            let alt = grand - vj;
            if *vi < alt { vi.clone() } else { alt }
        }
    };
    Ok(Allocation { payoffs: vec![one(0, 1), one(1, 0)] })
}

/// A rule that reshuffles Shapley payoffs using the grand coalition's own
/// dividend: when `d(N) > 0` and `v(N) − d(N) > 0` it removes each
/// player's share of `d(N)` and rescales the rest back to efficiency;
/// otherwise it falls back to the Shapley value.
pub fn phi_w(game: &CoalitionalGame) -> Allocation {
    let n = game.player_count() as usize;
    let sh = shapley(game);
    let d = game.dividends();
    let grand_dividend = &d.values()[(1 << n) - 1];
    let grand_worth = game.grand_worth();
    let remainder = grand_worth - grand_dividend;
    if !(grand_dividend.is_positive() && remainder.is_positive()) {
        return sh;
    }
    let per_head = grand_dividend / Rational::from_integer((n as i64).into());
    let scale = grand_worth / &remainder;
    Allocation {
        payoffs: sh.payoffs.iter().map(|p| (p - &per_head) * &scale).collect(),
    }
}

/// The prenucleolus: the efficient allocation lexicographically
/// minimizing the sorted excess vector. See the solver for details.
pub fn nucleolus(game: &CoalitionalGame) -> Allocation {
    crate::nucleolus::solve(game)
}

/// Aggregate Shapley payoff of a coalition straight from dividends:
/// dividends of subsets of `s` count fully, dividends of coalitions
/// reaching outside count in proportion `|s ∩ R| / |R|`.
///
/// Must agree with summing [`shapley`] payoffs over `s` — which makes
/// internal reallocations (which can only move dividends around inside
/// `s` while preserving their total) payoff-neutral for Shapley.
pub fn shapley_coalition_payoff(game: &CoalitionalGame, s: Coalition) -> Result<Rational> {
    if s.context() != game.player_count() {
        return Err(Error::ContextMismatch { coalition: s.context(), game: game.player_count() });
    }
    let d = game.dividends();
    let mut total = Rational::zero();
    for (mask, dividend) in d.values().iter().enumerate() {
        if dividend.is_zero() {
            continue;
        }
        let overlap = (mask & s.mask()).count_ones() as i64;
        if overlap == 0 {
            continue;
        }
        let size = mask.count_ones() as i64;
        if overlap == size {
            total += dividend;
        } else {
            total += dividend * Rational::new(overlap.into(), size.into());
        }
    }
    Ok(total)
}

/// Identifier (plus parameters) for every built-in rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RuleId {
    Shapley,
    EqualDivision,
    WeightedShapley(Vec<Rational>),
    EgalitarianShapley(Rational),
    Nucleolus,
    NullValue,
    PhiTwoPlayer,
    PhiW,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::Shapley => write!(f, "shapley"),
            RuleId::EqualDivision => write!(f, "equal-division"),
            RuleId::WeightedShapley(w) => {
                write!(f, "weighted-shapley(")?;
                for (k, wi) in w.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", crate::ratio::display(wi))?;
                }
                write!(f, ")")
            }
            RuleId::EgalitarianShapley(a) => {
                write!(f, "egalitarian-shapley({})", crate::ratio::display(a))
            }
            RuleId::Nucleolus => write!(f, "nucleolus"),
            RuleId::NullValue => write!(f, "null-value"),
            RuleId::PhiTwoPlayer => write!(f, "phi-two-player"),
            RuleId::PhiW => write!(f, "phi-w"),
        }
    }
}

/// Anything that maps games to payoff vectors. Audits and manipulation
/// searches are written against this so tests can plug in ad-hoc rules.
pub trait AllocationRule {
    fn label(&self) -> String;

    fn allocate(&self, game: &CoalitionalGame) -> Result<Allocation>;

    /// Whether the rule is linear in the game (`φ(v+w) = φ(v)+φ(w)` and
    /// `φ(cv) = cφ(v)`), which makes manipulation gains linear in
    /// dividend perturbations.
    fn is_linear(&self) -> bool {
        false
    }
}

impl AllocationRule for RuleId {
    fn label(&self) -> String {
        self.to_string()
    }

    fn allocate(&self, game: &CoalitionalGame) -> Result<Allocation> {
        match self {
            RuleId::Shapley => Ok(shapley(game)),
            RuleId::EqualDivision => Ok(equal_division(game)),
            RuleId::WeightedShapley(w) => weighted_shapley(game, w),
            RuleId::EgalitarianShapley(alpha) => egalitarian_shapley(game, alpha),
            RuleId::Nucleolus => Ok(nucleolus(game)),
            RuleId::NullValue => Ok(null_value(game)),
            RuleId::PhiTwoPlayer => phi_two_player(game),
            RuleId::PhiW => Ok(phi_w(game)),
        }
    }

    fn is_linear(&self) -> bool {
        matches!(
            self,
            RuleId::Shapley
                | RuleId::EqualDivision
                | RuleId::WeightedShapley(_)
                | RuleId::EgalitarianShapley(_)
                | RuleId::NullValue
        )
    }
}
