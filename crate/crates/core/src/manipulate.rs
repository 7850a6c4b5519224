//! Constructive manipulation search.
//!
//! Given a rule, a game, and a coalition, look for the most profitable
//! rewrite of the game the coalition could get away with under a chosen
//! axiom's feasibility notion:
//!
//! * [`Mode::InternalReallocation`] — move dividend mass between the
//!   coalition's subcoalitions, keeping its total and everything touching
//!   outsiders fixed (the reallocation-proofness hypothesis);
//! * [`Mode::Underreport`] — lower only the coalition's own worth (the
//!   weak-coalitional-monotonicity hypothesis);
//! * [`Mode::StrongReallocation`] — rewrite worths of coalitions that
//!   straddle the manipulators, fixing outsider coalitions and supersets
//!   (the strong-reallocation-proofness hypothesis).
//!
//! The search walks a deterministic single-move sweep over a rational
//! lattice and then seeded random multi-moves, so results are exactly
//! reproducible. For rules linear in the game the engine also evaluates
//! the exact criterion: the coalition's aggregate payoff is an affine map
//! of the dividend vector, so if every unit feasible direction has zero
//! payoff effect (for the Shapley value this is the dividend-split
//! identity at work), the gain is exactly zero on the whole feasible set,
//! not merely on the sampled lattice.

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::audit::{precondition, AxiomId, ManipulationInstance, Target};
use crate::game::{Coalition, CoalitionalGame, DividendVector, Domain};
use crate::ratio::{frac, Rational};
use crate::rules::{Allocation, AllocationRule, RuleId};
use crate::{Error, Result};

/// Which axiom's feasibility notion bounds the manipulation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    InternalReallocation,
    Underreport,
    StrongReallocation,
}

impl Mode {
    pub fn axiom(&self) -> AxiomId {
        match self {
            Mode::InternalReallocation => AxiomId::R,
            Mode::Underreport => AxiomId::W,
            Mode::StrongReallocation => AxiomId::Rplus,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Mode::InternalReallocation => "internal-reallocation",
            Mode::Underreport => "underreport",
            Mode::StrongReallocation => "strong-reallocation",
        }
    }
}

/// Search effort: perturbation numerators run over `{1..radius}/denom`,
/// `samples` caps the number of evaluated candidates, `seed` fixes the
/// random tail of the stream.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Budget {
    pub radius: i64,
    pub denom: i64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { radius: 12, denom: 1, samples: 2_000, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct ManipulationQuery {
    pub rule: RuleId,
    pub game: CoalitionalGame,
    pub coalition: Coalition,
    pub mode: Mode,
    pub budget: Budget,
}

/// Outcome of a manipulation search.
#[derive(Clone, Debug)]
pub struct ManipulationResult {
    pub mode: Mode,
    pub coalition: Coalition,
    /// `∑_{i∈M} φ_i` on the original game.
    pub base_group_payoff: Rational,
    /// The most profitable admissible rewrite found, if any gained.
    pub best_w: Option<CoalitionalGame>,
    /// Payoff gain of `best_w`; zero when nothing profitable was found.
    pub gain: Rational,
    /// Number of candidates evaluated.
    pub trace: usize,
    /// True when the reported gain is certified optimal over the entire
    /// feasible set (linear rules in internal mode, or a singleton
    /// feasible set), not merely the best lattice point.
    pub gain_is_exact: bool,
    pub base_allocation: Allocation,
    pub best_allocation: Option<Allocation>,
}

/// Searches for the most profitable manipulation under the query's mode.
pub fn optimize(query: &ManipulationQuery) -> Result<ManipulationResult> {
    let game = &query.game;
    let m = query.coalition;
    if m.context() != game.player_count() {
        return Err(Error::ContextMismatch { coalition: m.context(), game: game.player_count() });
    }
    if m.is_empty() {
        return Err(Error::EmptyManipulator);
    }
    let rule = &query.rule;
    let base_allocation = rule.allocate(game)?;
    let base = base_allocation.coalition_payoff(m)?;

    struct SearchState<'a> {
        rule: &'a RuleId,
        m: Coalition,
        base: Rational,
        best: Option<(Rational, CoalitionalGame, Allocation)>,
        trace: usize,
    }

    impl SearchState<'_> {
        fn consider(&mut self, w: CoalitionalGame) -> Result<()> {
            let alloc = self.rule.allocate(&w)?;
            let gain = alloc.coalition_payoff(self.m)? - &self.base;
            self.trace += 1;
            if gain.is_positive() && self.best.as_ref().is_none_or(|(g, _, _)| gain > *g) {
                self.best = Some((gain, w, alloc));
            }
            Ok(())
        }
    }

    let mut state = SearchState { rule, m, base: base.clone(), best: None, trace: 0 };
    let budget = &query.budget;
    let cap = frac(budget.radius, budget.denom);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    match query.mode {
        Mode::InternalReallocation => {
            let inside: Vec<usize> =
                m.subsets().filter(|s| !s.is_empty()).map(|s| s.mask()).collect();
            if inside.len() >= 2 {
                let divs = game.dividends().into_values();
                // deterministic sweep over all single moves
                'sweep: for &from in &inside {
                    for &to in &inside {
                        if from == to {
                            continue;
                        }
                        for k in 1..=budget.radius {
                            if state.trace >= budget.samples {
                                break 'sweep;
                            }
                            let delta = frac(k, budget.denom);
                            if let Some(w) =
                                apply_moves(game, &divs, &[(from, to, delta)], m, &cap)
                            {
                                state.consider(w)?;
                            }
                        }
                    }
                }
                // random multi-moves fill the remaining budget
                while state.trace < budget.samples {
                    let mut moves = Vec::new();
                    for _ in 0..rng.gen_range(2..=3) {
                        let a = rng.gen_range(0..inside.len());
                        let mut b = rng.gen_range(0..inside.len() - 1);
                        if b >= a {
                            b += 1;
                        }
                        let k = rng.gen_range(1..=budget.radius.max(1));
                        moves.push((inside[a], inside[b], frac(k, budget.denom)));
                    }
                    if let Some(w) = apply_moves(game, &divs, &moves, m, &cap) {
                        state.consider(w)?;
                    } else {
                        state.trace += 1; // rejected candidate still consumes budget
                    }
                }
            }
        }
        Mode::Underreport => {
            for k in 1..=budget.radius {
                if state.trace >= budget.samples {
                    break;
                }
                let delta = frac(k, budget.denom);
                let lowered = game.worths()[m.mask()].clone() - delta;
                let w = game.with_worth(m, lowered).expect("worth rewrite");
                if let Ok(w) = w.with_domain(game.domain()) {
                    let inst = ManipulationInstance::new(game.clone(), w, Target::Coalition(m))
                        .expect("instance");
                    assert!(
                        precondition(AxiomId::W, &inst),
                        "underreport broke the W precondition"
                    );
                    state.consider(inst.manipulated().clone())?;
                }
            }
        }
        Mode::StrongReallocation => {
            let straddling: Vec<usize> = Coalition::all(game.player_count())
                .filter(|t| !t.is_disjoint_from(&m) && !m.is_subset_of(t))
                .map(|t| t.mask())
                .collect();
            if !straddling.is_empty() {
                'sweep: for &t in &straddling {
                    for k in (-budget.radius..=budget.radius).filter(|&k| k != 0) {
                        if state.trace >= budget.samples {
                            break 'sweep;
                        }
                        if let Some(w) =
                            apply_rewrites(game, &[(t, frac(k, budget.denom))], m, &cap)
                        {
                            state.consider(w)?;
                        }
                    }
                }
                while state.trace < budget.samples {
                    let mut rewrites = Vec::new();
                    for _ in 0..rng.gen_range(2..=3) {
                        let t = straddling[rng.gen_range(0..straddling.len())];
                        let k = rng.gen_range(1..=budget.radius.max(1))
                            * if rng.gen_bool(0.5) { 1 } else { -1 };
                        rewrites.push((t, frac(k, budget.denom)));
                    }
                    if let Some(w) = apply_rewrites(game, &rewrites, m, &cap) {
                        state.consider(w)?;
                    } else {
                        state.trace += 1;
                    }
                }
            }
        }
    }

    let gain_is_exact = match query.mode {
        Mode::InternalReallocation => {
            let single = m.cardinality() == 1;
            single || (rule.is_linear() && internal_directions_are_neutral(rule, m)?)
        }
        Mode::StrongReallocation => m.cardinality() as usize == 1,
        Mode::Underreport => false,
    };

    let (gain, best_w, best_allocation) = match state.best {
        Some((gain, w, alloc)) => (gain, Some(w), Some(alloc)),
        None => (Rational::zero(), None, None),
    };
    if gain_is_exact {
        assert!(gain.is_zero(), "exactness certificate contradicts a found gain");
    }
    Ok(ManipulationResult {
        mode: query.mode,
        coalition: m,
        base_group_payoff: base,
        best_w,
        gain,
        trace: state.trace,
        gain_is_exact,
        base_allocation,
        best_allocation,
    })
}

/// Applies dividend moves `(from, to, δ)` within `m` and returns the
/// rewritten game if it stays admissible: net perturbation per dividend
/// within the lattice bound, precondition re-checked, domain tag
/// preserved.
fn apply_moves(
    game: &CoalitionalGame,
    divs: &[Rational],
    moves: &[(usize, usize, Rational)],
    m: Coalition,
    cap: &Rational,
) -> Option<CoalitionalGame> {
    let mut values = divs.to_vec();
    for (from, to, delta) in moves {
        values[*from] -= delta;
        values[*to] += delta;
    }
    for (net, base) in values.iter().zip(divs) {
        if (net - base).abs() > *cap {
            return None;
        }
    }
    let d = DividendVector::new(game.player_count(), values).expect("dividend table");
    let w = CoalitionalGame::from_dividends(&d).with_domain(game.domain()).ok()?;
    let inst =
        ManipulationInstance::new(game.clone(), w, Target::Coalition(m)).expect("instance");
    assert!(precondition(AxiomId::R, &inst), "internal move broke the R precondition");
    Some(inst.manipulated().clone())
}

/// Applies worth rewrites on straddling coalitions, keeping everything
/// the strong-reallocation hypothesis pins and every net rewrite within
/// the lattice bound.
fn apply_rewrites(
    game: &CoalitionalGame,
    rewrites: &[(usize, Rational)],
    m: Coalition,
    cap: &Rational,
) -> Option<CoalitionalGame> {
    let mut worths = game.worths().to_vec();
    for (mask, delta) in rewrites {
        worths[*mask] += delta;
    }
    for (net, base) in worths.iter().zip(game.worths()) {
        if (net - base).abs() > *cap {
            return None;
        }
    }
    let w = CoalitionalGame::new(game.player_count(), worths, Domain::Unrestricted)
        .expect("worth table")
        .with_domain(game.domain())
        .ok()?;
    let inst =
        ManipulationInstance::new(game.clone(), w, Target::Coalition(m)).expect("instance");
    assert!(precondition(AxiomId::Rplus, &inst), "rewrite broke the R+ precondition");
    Some(inst.manipulated().clone())
}

/// Exact linearity criterion: for a linear rule the group payoff is an
/// affine function of the dividend vector, with the coefficient of
/// `d(T)` equal to the group payoff of the unanimity game `u_T`. Moving
/// mass between subsets of `m` changes nothing iff those coefficients
/// all agree.
fn internal_directions_are_neutral(rule: &RuleId, m: Coalition) -> Result<bool> {
    let mut coeffs = m.subsets().filter(|t| !t.is_empty()).map(|t| -> Result<Rational> {
        let u = CoalitionalGame::unanimity(t).expect("nonempty carrier");
        rule.allocate(&u)?.coalition_payoff(m)
    });
    let Some(first) = coeffs.next() else {
        return Ok(true);
    };
    let first = first?;
    for coeff in coeffs {
        if coeff? != first {
            return Ok(false);
        }
    }
    Ok(true)
}

/// What a manipulation changed, for human-readable reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueChange {
    pub coalition: Coalition,
    pub before: Rational,
    pub after: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationDiff {
    pub worths: Vec<ValueChange>,
    pub dividends: Vec<ValueChange>,
    /// Per-player payoff change under the queried rule.
    pub payoff_deltas: Vec<Rational>,
}

/// Diffs a manipulated game against the original: changed worths,
/// changed dividends, per-player payoff deltas.
pub fn diff(
    original: &CoalitionalGame,
    manipulated: &CoalitionalGame,
    rule: &dyn AllocationRule,
) -> Result<ManipulationDiff> {
    if original.player_count() != manipulated.player_count() {
        return Err(Error::PlayerCountMismatch(
            original.player_count(),
            manipulated.player_count(),
        ));
    }
    let n = original.player_count();
    let collect = |before: &[Rational], after: &[Rational]| -> Vec<ValueChange> {
        before
            .iter()
            .zip(after)
            .enumerate()
            .filter(|(_, (b, a))| b != a)
            .map(|(mask, (b, a))| ValueChange {
                coalition: Coalition::from_mask(mask, n).expect("mask"),
                before: b.clone(),
                after: a.clone(),
            })
            .collect()
    };
    let worths = collect(original.worths(), manipulated.worths());
    let dividends =
        collect(original.dividends().values(), manipulated.dividends().values());
    let before = rule.allocate(original)?;
    let after = rule.allocate(manipulated)?;
    let payoff_deltas = (0..n as usize).map(|i| after.payoff(i) - before.payoff(i)).collect();
    Ok(ManipulationDiff { worths, dividends, payoff_deltas })
}

/// Diff between the query's original game and the found witness.
pub fn explain(result: &ManipulationResult, original: &CoalitionalGame, rule: &RuleId) -> Result<ManipulationDiff> {
    let witness = result.best_w.as_ref().ok_or(Error::NoWitness)?;
    diff(original, witness, rule)
}
