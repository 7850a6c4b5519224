//! Mechanical axiom checkers and counterexample search.
//!
//! Each axiom has the shape "if the pair of games (and a coalition `M` or
//! player `i`) satisfies a precondition, then payoffs must relate in a
//! stated way". The checkers classify instances exactly; the search
//! samples instances whose preconditions hold *by construction* — for
//! reallocation-proofness that means working in dividend space, where the
//! precondition is a linear subspace — and reports the first violation.
//!
//! Axioms quantify over infinite domains, so a clean audit is always
//! "no violation found in k samples", never a proof.

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game::{Coalition, CoalitionalGame, DividendVector, Domain};
use crate::ratio::Rational;
use crate::rules::{AllocationRule, RuleId};
use crate::{Error, Result};

/// The audited axioms.
///
/// `CMarg` is constrained marginality (a player's payoff may depend only
/// on that player's marginal contributions and the grand coalition's
/// worth); `CMono` is coalitional monotonicity. The two are kept under
/// distinct names everywhere because both are routinely abbreviated "CM".
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AxiomId {
    /// Additivity: `φ(v + w) = φ(v) + φ(w)`.
    A,
    /// Efficiency: payoffs sum to `v(N)`.
    E,
    /// Null player: a player contributing nothing gets nothing.
    N,
    /// Symmetry: interchangeable players get equal payoffs.
    S,
    /// Strong reallocation-proofness: a coalition gains nothing from any
    /// rewrite that fixes outsider coalitions and its own supersets.
    Rplus,
    /// Reallocation-proofness: a coalition gains nothing from internal
    /// reallocation that keeps its worth and all synergies with outsiders.
    R,
    /// Weak coalitional monotonicity: a coalition gains nothing from a
    /// ceteris-paribus drop of its own worth.
    W,
    /// Coalitional monotonicity: if only `v(M)` rises, each member of `M`
    /// weakly gains.
    CMono,
    /// Strong monotonicity: pointwise-higher marginals never hurt.
    Mplus,
    /// Marginality: payoff depends only on own marginal contributions.
    M,
    /// Constrained marginality: marginality restricted to pairs with
    /// equal grand-coalition worth.
    CMarg,
    /// Weak monotonicity: higher marginals plus higher `v(N)` never hurt.
    Mminus,
}

impl AxiomId {
    pub const ALL: [AxiomId; 12] = [
        AxiomId::A,
        AxiomId::E,
        AxiomId::N,
        AxiomId::S,
        AxiomId::Rplus,
        AxiomId::R,
        AxiomId::W,
        AxiomId::CMono,
        AxiomId::Mplus,
        AxiomId::M,
        AxiomId::CMarg,
        AxiomId::Mminus,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            AxiomId::A => "A",
            AxiomId::E => "E",
            AxiomId::N => "N",
            AxiomId::S => "S",
            AxiomId::Rplus => "R+",
            AxiomId::R => "R",
            AxiomId::W => "W",
            AxiomId::CMono => "CMono",
            AxiomId::Mplus => "M+",
            AxiomId::M => "M",
            AxiomId::CMarg => "CMarg",
            AxiomId::Mminus => "M-",
        }
    }

    /// Whether the precondition is an equality family, so that swapping
    /// `(v, w)` yields another admissible instance and the conclusion is
    /// effectively an equality.
    pub fn symmetric_precondition(&self) -> bool {
        matches!(self, AxiomId::R | AxiomId::Rplus | AxiomId::M | AxiomId::CMarg)
    }
}

impl std::fmt::Display for AxiomId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Ok(match key.as_str() {
            "a" => AxiomId::A,
            "e" => AxiomId::E,
            "n" => AxiomId::N,
            "s" => AxiomId::S,
            "r+" | "rplus" => AxiomId::Rplus,
            "r" => AxiomId::R,
            "w" => AxiomId::W,
            "cmono" => AxiomId::CMono,
            "m+" | "mplus" => AxiomId::Mplus,
            "m" => AxiomId::M,
            "cmarg" => AxiomId::CMarg,
            "m-" | "mminus" => AxiomId::Mminus,
            _ => return Err(Error::UnknownAxiom(s.to_owned())),
        })
    }
}

/// What an axiom's hypothesis talks about: a manipulating coalition or a
/// single player.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Target {
    Coalition(Coalition),
    Player(usize),
}

/// A pair of games plus the coalition/player an axiom quantifies over.
///
/// Both games must share the player count and the domain tag; under the
/// superadditive domain the tag itself guarantees both games actually are
/// superadditive (the constructor of a tagged game verifies it).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ManipulationInstance {
    v: CoalitionalGame,
    w: CoalitionalGame,
    target: Target,
}

impl ManipulationInstance {
    pub fn new(v: CoalitionalGame, w: CoalitionalGame, target: Target) -> Result<Self> {
        if v.player_count() != w.player_count() {
            return Err(Error::PlayerCountMismatch(v.player_count(), w.player_count()));
        }
        if v.domain() != w.domain() {
            return Err(Error::DomainMismatch);
        }
        match target {
            Target::Coalition(m) if m.context() != v.player_count() => {
                return Err(Error::ContextMismatch {
                    coalition: m.context(),
                    game: v.player_count(),
                })
            }
            Target::Player(i) if i >= v.player_count() as usize => {
                return Err(Error::PlayerOutOfRange(i))
            }
            _ => {}
        }
        Ok(ManipulationInstance { v, w, target })
    }

    pub fn original(&self) -> &CoalitionalGame {
        &self.v
    }

    pub fn manipulated(&self) -> &CoalitionalGame {
        &self.w
    }

    pub fn target(&self) -> Target {
        self.target
    }

    /// The same instance read in the opposite direction.
    pub fn swapped(&self) -> ManipulationInstance {
        ManipulationInstance { v: self.w.clone(), w: self.v.clone(), target: self.target }
    }
}

/// Outcome of checking one axiom on one instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    PreconditionNotMet,
    ImplicationHolds,
    Violated(Violation),
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }
}

/// A confirmed violation: how much the manipulating side nets (or the
/// slack of the broken equality), plus the instance it happened on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub gain: Rational,
    pub witness: ManipulationInstance,
}

// -- preconditions -----------------------------------------------------

/// Exact precondition classifier for every axiom.
///
/// Pointwise axioms read only `inst.original()`: `A` and `E` apply to any
/// instance, `N` requires the target player to be null in `v`, and `S`
/// requires the target to be a two-player coalition symmetric in `v`.
pub fn precondition(axiom: AxiomId, inst: &ManipulationInstance) -> bool {
    let (v, w) = (&inst.v, &inst.w);
    match (axiom, inst.target) {
        (AxiomId::A, _) | (AxiomId::E, _) => true,
        (AxiomId::N, Target::Player(i)) => v.is_null_player(i),
        (AxiomId::S, Target::Coalition(m)) => {
            if m.cardinality() != 2 {
                return false;
            }
            let mut it = m.members();
            let (i, j) = (it.next().unwrap(), it.next().unwrap());
            v.are_symmetric(i, j)
        }
        (AxiomId::Rplus, Target::Coalition(m)) => rplus_precondition(v, w, m),
        (AxiomId::R, Target::Coalition(m)) => reallocation_precondition_worths(v, w, m),
        (AxiomId::W, Target::Coalition(m)) | (AxiomId::CMono, Target::Coalition(m)) => {
            ceteris_paribus_drop(v, w, m)
        }
        (AxiomId::Mplus, Target::Player(i)) => marginals_dominate(v, w, i),
        (AxiomId::M, Target::Player(i)) => marginals_equal(v, w, i),
        (AxiomId::CMarg, Target::Player(i)) => {
            v.grand_worth() == w.grand_worth() && marginals_equal(v, w, i)
        }
        (AxiomId::Mminus, Target::Player(i)) => {
            v.grand_worth() >= w.grand_worth() && marginals_dominate(v, w, i)
        }
        _ => false,
    }
}

/// `v(M) = w(M)` and `v(S ∪ T) − v(S) = w(S ∪ T) − w(S)` for all
/// `S ⊆ M`, `T ⊆ N∖M`: the manipulation neither moves the coalition's
/// own worth nor any surplus created by outsiders.
pub fn reallocation_precondition_worths(
    v: &CoalitionalGame,
    w: &CoalitionalGame,
    m: Coalition,
) -> bool {
    if v.worths()[m.mask()] != w.worths()[m.mask()] {
        return false;
    }
    for s in m.subsets() {
        for t in m.complement().subsets() {
            if t.is_empty() {
                continue;
            }
            let joint = s.mask() | t.mask();
            let lhs = &v.worths()[joint] - &v.worths()[s.mask()];
            let rhs = &w.worths()[joint] - &w.worths()[s.mask()];
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// The same precondition in dividend space, where it reads: the total
/// dividend inside `M` is preserved and every dividend of a coalition
/// reaching outside `M` is untouched.
pub fn reallocation_precondition_dividends(
    v: &CoalitionalGame,
    w: &CoalitionalGame,
    m: Coalition,
) -> bool {
    let dv = v.dividends();
    let dw = w.dividends();
    let outside = m.complement().mask();
    let mut sum_v = Rational::zero();
    let mut sum_w = Rational::zero();
    for (mask, (a, b)) in dv.values().iter().zip(dw.values()).enumerate() {
        if mask & outside != 0 {
            if a != b {
                return false;
            }
        } else {
            sum_v += a;
            sum_w += b;
        }
    }
    sum_v == sum_w
}

/// `v(T) = w(T)` for every `T ⊆ N∖M` and every `T ⊇ M`.
pub fn rplus_precondition(v: &CoalitionalGame, w: &CoalitionalGame, m: Coalition) -> bool {
    let n = v.player_count();
    Coalition::all(n).all(|t| {
        let pinned = t.is_disjoint_from(&m) || m.is_subset_of(&t);
        !pinned || v.worths()[t.mask()] == w.worths()[t.mask()]
    })
}

/// `v(M) ≥ w(M)` while every other coalition's worth is unchanged
/// (including `N` when `M ≠ N`).
fn ceteris_paribus_drop(v: &CoalitionalGame, w: &CoalitionalGame, m: Coalition) -> bool {
    if v.worths()[m.mask()] < w.worths()[m.mask()] {
        return false;
    }
    v.worths()
        .iter()
        .zip(w.worths())
        .enumerate()
        .all(|(mask, (a, b))| mask == m.mask() || a == b)
}

fn marginals_equal(v: &CoalitionalGame, w: &CoalitionalGame, i: usize) -> bool {
    let rest = Coalition::grand(v.player_count()).remove(i);
    rest.subsets().all(|t| {
        let with = t.mask() | 1 << i;
        &v.worths()[with] - &v.worths()[t.mask()] == &w.worths()[with] - &w.worths()[t.mask()]
    })
}

fn marginals_dominate(v: &CoalitionalGame, w: &CoalitionalGame, i: usize) -> bool {
    let rest = Coalition::grand(v.player_count()).remove(i);
    rest.subsets().all(|t| {
        let with = t.mask() | 1 << i;
        &v.worths()[with] - &v.worths()[t.mask()] >= &w.worths()[with] - &w.worths()[t.mask()]
    })
}

// -- conclusions -------------------------------------------------------

/// Checks one axiom on one instance: precondition first, then the exact
/// conclusion. Group axioms compare the coalition's aggregate payoff;
/// single-player axioms (`N`, `M±`, `M`, `CMarg`) compare the target
/// player's payoff, and `CMono` checks every member individually.
pub fn check_instance(
    rule: &dyn AllocationRule,
    axiom: AxiomId,
    inst: &ManipulationInstance,
) -> Result<Verdict> {
    if !precondition(axiom, inst) {
        return Ok(Verdict::PreconditionNotMet);
    }
    let violated = |gain: Rational| Verdict::Violated(Violation { gain, witness: inst.clone() });
    match (axiom, inst.target) {
        (AxiomId::A, _) => check_additivity(rule, &inst.v, &inst.w),
        (AxiomId::E, _) => check_pointwise(rule, AxiomId::E, &inst.v),
        (AxiomId::N, Target::Player(i)) => {
            let payoff = rule.allocate(&inst.v)?;
            if payoff.payoff(i).is_zero() {
                Ok(Verdict::ImplicationHolds)
            } else {
                Ok(violated(payoff.payoff(i).abs()))
            }
        }
        (AxiomId::S, Target::Coalition(m)) => {
            let payoff = rule.allocate(&inst.v)?;
            let mut it = m.members();
            let (i, j) = (it.next().unwrap(), it.next().unwrap());
            let diff = payoff.payoff(i) - payoff.payoff(j);
            if diff.is_zero() {
                Ok(Verdict::ImplicationHolds)
            } else {
                Ok(violated(diff.abs()))
            }
        }
        (AxiomId::Rplus | AxiomId::R | AxiomId::W, Target::Coalition(m)) => {
            let before = rule.allocate(&inst.v)?.coalition_payoff(m)?;
            let after = rule.allocate(&inst.w)?.coalition_payoff(m)?;
            if after > before {
                Ok(violated(after - before))
            } else {
                Ok(Verdict::ImplicationHolds)
            }
        }
        (AxiomId::CMono, Target::Coalition(m)) => {
            let before = rule.allocate(&inst.v)?;
            let after = rule.allocate(&inst.w)?;
            let worst = m.members().map(|i| after.payoff(i) - before.payoff(i)).max();
            match worst {
                Some(gain) if gain.is_positive() => Ok(violated(gain)),
                _ => Ok(Verdict::ImplicationHolds),
            }
        }
        (AxiomId::Mplus | AxiomId::Mminus, Target::Player(i)) => {
            let before = rule.allocate(&inst.v)?;
            let after = rule.allocate(&inst.w)?;
            let gain = after.payoff(i) - before.payoff(i);
            if gain.is_positive() {
                Ok(violated(gain))
            } else {
                Ok(Verdict::ImplicationHolds)
            }
        }
        (AxiomId::M | AxiomId::CMarg, Target::Player(i)) => {
            let before = rule.allocate(&inst.v)?;
            let after = rule.allocate(&inst.w)?;
            let diff = after.payoff(i) - before.payoff(i);
            if diff.is_zero() {
                Ok(Verdict::ImplicationHolds)
            } else {
                Ok(violated(diff.abs()))
            }
        }
        _ => unreachable!("precondition filtered mismatched targets"),
    }
}

/// Single-game checks for `E`, `N`, and `S`.
///
/// `E` compares the payoff total with `v(N)`; `N` requires every null
/// player to get zero; `S` requires every symmetric pair to get equal
/// payoffs. Panics if called with any other axiom.
pub fn check_pointwise(
    rule: &dyn AllocationRule,
    axiom: AxiomId,
    game: &CoalitionalGame,
) -> Result<Verdict> {
    let n = game.player_count() as usize;
    let payoff = rule.allocate(game)?;
    let reflexive = |target: Target| {
        ManipulationInstance::new(game.clone(), game.clone(), target).expect("reflexive instance")
    };
    match axiom {
        AxiomId::E => {
            let slack = payoff.total() - game.grand_worth();
            if slack.is_zero() {
                Ok(Verdict::ImplicationHolds)
            } else {
                Ok(Verdict::Violated(Violation {
                    gain: slack.abs(),
                    witness: reflexive(Target::Coalition(Coalition::grand(game.player_count()))),
                }))
            }
        }
        AxiomId::N => {
            for i in 0..n {
                if game.is_null_player(i) && !payoff.payoff(i).is_zero() {
                    return Ok(Verdict::Violated(Violation {
                        gain: payoff.payoff(i).abs(),
                        witness: reflexive(Target::Player(i)),
                    }));
                }
            }
            Ok(Verdict::ImplicationHolds)
        }
        AxiomId::S => {
            for i in 0..n {
                for j in i + 1..n {
                    if game.are_symmetric(i, j) && payoff.payoff(i) != payoff.payoff(j) {
                        let pair = Coalition::from_members([i, j], game.player_count())?;
                        return Ok(Verdict::Violated(Violation {
                            gain: (payoff.payoff(i) - payoff.payoff(j)).abs(),
                            witness: reflexive(Target::Coalition(pair)),
                        }));
                    }
                }
            }
            Ok(Verdict::ImplicationHolds)
        }
        other => panic!("check_pointwise handles E, N, S only, got {other}"),
    }
}

/// `φ(v + w) = φ(v) + φ(w)`, componentwise and exactly.
pub fn check_additivity(
    rule: &dyn AllocationRule,
    v: &CoalitionalGame,
    w: &CoalitionalGame,
) -> Result<Verdict> {
    let sum = v.add(w)?;
    let lhs = rule.allocate(&sum)?;
    let of_v = rule.allocate(v)?;
    let of_w = rule.allocate(w)?;
    for i in 0..v.player_count() as usize {
        let diff = lhs.payoff(i) - (of_v.payoff(i) + of_w.payoff(i));
        if !diff.is_zero() {
            return Ok(Verdict::Violated(Violation {
                gain: diff.abs(),
                witness: ManipulationInstance::new(v.clone(), w.clone(), Target::Player(i))?,
            }));
        }
    }
    Ok(Verdict::ImplicationHolds)
}

// -- randomized search -------------------------------------------------

/// RNG driving the samplers, exposed so callers can feed
/// [`sample_game`] deterministically.
pub type SearchRng = ChaCha8Rng;

pub fn search_rng(seed: u64) -> SearchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reproducible sampling plan for a counterexample search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    pub samples: usize,
    pub n: u8,
    pub domain: Domain,
    /// Lattice numerator bound: perturbation magnitudes are drawn from
    /// `{1, …, radius} / denom`.
    pub radius: i64,
    pub denom: i64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            samples: 500,
            n: 3,
            domain: Domain::Unrestricted,
            radius: 12,
            denom: 1,
        }
    }
}

/// Draws instances whose precondition holds by construction and returns
/// the first violation, deterministically for a given seed. For axioms
/// with equality preconditions both reading directions of each sampled
/// pair are checked.
pub fn search_counterexample(
    rule: &dyn AllocationRule,
    axiom: AxiomId,
    cfg: &SearchConfig,
) -> Result<Option<Violation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        if let Some(violation) = sample_and_check(rule, axiom, cfg, &mut rng)? {
            return Ok(Some(violation));
        }
    }
    Ok(None)
}

fn sample_and_check(
    rule: &dyn AllocationRule,
    axiom: AxiomId,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Violation>> {
    let v = sample_game(rng, cfg);
    let inst = match build_instance(axiom, cfg, rng, &v) {
        Some(inst) => inst,
        None => return Ok(None),
    };
    assert!(precondition(axiom, &inst), "generator broke the {axiom} precondition");
    if let Verdict::Violated(violation) = check_instance(rule, axiom, &inst)? {
        return Ok(Some(violation));
    }
    if axiom.symmetric_precondition() {
        if let Verdict::Violated(violation) = check_instance(rule, axiom, &inst.swapped())? {
            return Ok(Some(violation));
        }
    }
    Ok(None)
}

fn build_instance(
    axiom: AxiomId,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
    v: &CoalitionalGame,
) -> Option<ManipulationInstance> {
    let n = cfg.n;
    let make = |w: CoalitionalGame, target: Target| {
        Some(ManipulationInstance::new(v.clone(), w, target).expect("generated instance"))
    };
    match axiom {
        AxiomId::A => {
            let w = sample_game(rng, cfg);
            make(w, Target::Player(rng.gen_range(0..n as usize)))
        }
        AxiomId::E => make(v.clone(), Target::Coalition(Coalition::grand(n))),
        AxiomId::N => {
            let i = rng.gen_range(0..n as usize);
            let nulled = nullify(v, i, cfg.domain)?;
            Some(
                ManipulationInstance::new(nulled.clone(), nulled, Target::Player(i))
                    .expect("generated instance"),
            )
        }
        AxiomId::S => {
            let i = rng.gen_range(0..n as usize);
            let mut j = rng.gen_range(0..n as usize - 1);
            if j >= i {
                j += 1;
            }
            let sym = symmetrize(v, i, j, cfg.domain)?;
            let pair = Coalition::from_members([i, j], n).expect("pair");
            Some(
                ManipulationInstance::new(sym.clone(), sym, Target::Coalition(pair))
                    .expect("generated instance"),
            )
        }
        AxiomId::R => {
            let m = sample_coalition(rng, n, 2, n.saturating_sub(1).max(2))?;
            let w = perturb_inside(v, m, cfg, rng)?;
            make(w, Target::Coalition(m))
        }
        AxiomId::Rplus => {
            let m = sample_coalition(rng, n, 2, n.saturating_sub(1).max(2))?;
            let w = perturb_straddling(v, m, cfg, rng)?;
            make(w, Target::Coalition(m))
        }
        AxiomId::W | AxiomId::CMono => {
            let m = sample_coalition(rng, n, 1, n)?;
            let w = lower_single_worth(v, m, cfg, rng)?;
            make(w, Target::Coalition(m))
        }
        AxiomId::M => {
            let i = rng.gen_range(0..n as usize);
            let w = perturb_off_player(v, i, cfg, rng, false)?;
            make(w, Target::Player(i))
        }
        AxiomId::CMarg => {
            let i = rng.gen_range(0..n as usize);
            let w = perturb_off_player(v, i, cfg, rng, true)?;
            make(w, Target::Player(i))
        }
        AxiomId::Mplus => {
            let i = rng.gen_range(0..n as usize);
            let w = weaken_player(v, i, cfg, rng, false)?;
            make(w, Target::Player(i))
        }
        AxiomId::Mminus => {
            let i = rng.gen_range(0..n as usize);
            let w = weaken_player(v, i, cfg, rng, true)?;
            make(w, Target::Player(i))
        }
    }
}

// -- game and perturbation samplers ------------------------------------

fn lattice_value(rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> Rational {
    crate::ratio::frac(rng.gen_range(-cfg.radius..=cfg.radius), cfg.denom)
}

fn positive_lattice_value(rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> Rational {
    crate::ratio::frac(rng.gen_range(1..=cfg.radius.max(1)), cfg.denom)
}

/// Draws a base game. On the unrestricted domain worths come from the
/// lattice directly; on the superadditive domain the game is built from
/// nonnegative dividends on coalitions of size ≥ 2 plus a modular part,
/// which is superadditive by construction.
pub fn sample_game(rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> CoalitionalGame {
    let n = cfg.n;
    match cfg.domain {
        Domain::Unrestricted => {
            let mut worths: Vec<Rational> =
                (0..1usize << n).map(|_| lattice_value(rng, cfg)).collect();
            worths[0] = Rational::zero();
            CoalitionalGame::new(n, worths, Domain::Unrestricted).expect("lattice game")
        }
        Domain::Superadditive => {
            let mut divs = vec![Rational::zero(); 1 << n];
            for (mask, d) in divs.iter_mut().enumerate() {
                let size = mask.count_ones();
                if size == 1 {
                    *d = lattice_value(rng, cfg);
                } else if size >= 2 {
                    *d = crate::ratio::frac(rng.gen_range(0..=cfg.radius), cfg.denom);
                }
            }
            let d = DividendVector::new(n, divs).expect("dividend table");
            CoalitionalGame::from_dividends(&d)
                .with_domain(Domain::Superadditive)
                .expect("nonnegative dividends are superadditive")
        }
    }
}

fn sample_coalition(rng: &mut ChaCha8Rng, n: u8, min_size: u32, max_size: u8) -> Option<Coalition> {
    let max_size = (max_size.min(n)) as u32;
    if min_size > max_size {
        return None;
    }
    for _ in 0..64 {
        let mask = rng.gen_range(1..1usize << n);
        let size = mask.count_ones();
        if size >= min_size && size <= max_size {
            return Some(Coalition::from_mask(mask, n).expect("mask"));
        }
    }
    None
}

/// Retags `w` with `v`'s domain; under the superadditive domain this
/// rejects (returns `None`) any perturbation that left the class.
fn retag(w: CoalitionalGame, domain: Domain) -> Option<CoalitionalGame> {
    w.with_domain(domain).ok()
}

/// Internal reallocation: moves lattice amounts between dividends of
/// subsets of `m`, keeping their total fixed and all other dividends
/// untouched, so the reallocation-proofness precondition holds by
/// construction. Under the superadditive domain, dividends of coalitions
/// of size ≥ 2 are kept nonnegative, which keeps the game in the class.
fn perturb_inside(
    v: &CoalitionalGame,
    m: Coalition,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> Option<CoalitionalGame> {
    let inside: Vec<usize> = m.subsets().filter(|s| !s.is_empty()).map(|s| s.mask()).collect();
    if inside.len() < 2 {
        return None;
    }
    let mut divs = v.dividends().into_values();
    for _ in 0..rng.gen_range(1..=2) {
        let a = rng.gen_range(0..inside.len());
        let mut b = rng.gen_range(0..inside.len() - 1);
        if b >= a {
            b += 1;
        }
        let (from, to) = (inside[a], inside[b]);
        let delta = positive_lattice_value(rng, cfg);
        if cfg.domain == Domain::Superadditive
            && from.count_ones() >= 2
            && &divs[from] - &delta < Rational::zero()
        {
            return None;
        }
        divs[from] -= &delta;
        divs[to] += &delta;
    }
    let d = DividendVector::new(v.player_count(), divs).expect("dividend table");
    retag(CoalitionalGame::from_dividends(&d), v.domain())
}

/// Strong-reallocation rewrite: changes worths of coalitions that
/// straddle `m` (meet it without containing it), leaving outsider
/// coalitions and supersets of `m` alone.
fn perturb_straddling(
    v: &CoalitionalGame,
    m: Coalition,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> Option<CoalitionalGame> {
    let n = v.player_count();
    let straddling: Vec<usize> = Coalition::all(n)
        .filter(|t| !t.is_disjoint_from(&m) && !m.is_subset_of(t))
        .map(|t| t.mask())
        .collect();
    if straddling.is_empty() {
        return None;
    }
    let mut worths = v.worths().to_vec();
    for _ in 0..rng.gen_range(1..=2) {
        let t = straddling[rng.gen_range(0..straddling.len())];
        let delta = lattice_value(rng, cfg);
        worths[t] += delta;
    }
    let w = CoalitionalGame::new(n, worths, Domain::Unrestricted).expect("table");
    retag(w, v.domain())
}

/// Ceteris-paribus drop of `v(m)` by a positive lattice amount.
fn lower_single_worth(
    v: &CoalitionalGame,
    m: Coalition,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> Option<CoalitionalGame> {
    let delta = positive_lattice_value(rng, cfg);
    let new_worth = v.worths()[m.mask()].clone() - delta;
    let w = v.with_worth(m, new_worth).expect("worth rewrite");
    retag(w, v.domain())
}

/// Changes dividends of coalitions *not* containing `i`, which leaves
/// `i`'s marginal contributions untouched. With `fix_total` the changes
/// cancel out, so `v(N)` is preserved as well (constrained marginality).
fn perturb_off_player(
    v: &CoalitionalGame,
    i: usize,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
    fix_total: bool,
) -> Option<CoalitionalGame> {
    let n = v.player_count();
    let off: Vec<usize> = Coalition::all(n)
        .filter(|s| !s.is_empty() && !s.contains(i))
        .map(|s| s.mask())
        .collect();
    if off.is_empty() || (fix_total && off.len() < 2) {
        return None;
    }
    let mut divs = v.dividends().into_values();
    let breaks_nonneg = |mask: usize, value: &Rational| {
        cfg.domain == Domain::Superadditive && mask.count_ones() >= 2 && value.is_negative()
    };
    if fix_total {
        let a = rng.gen_range(0..off.len());
        let mut b = rng.gen_range(0..off.len() - 1);
        if b >= a {
            b += 1;
        }
        let (from, to) = (off[a], off[b]);
        let delta = positive_lattice_value(rng, cfg);
        let moved = &divs[from] - &delta;
        if breaks_nonneg(from, &moved) {
            return None;
        }
        divs[from] = moved;
        divs[to] += &delta;
    } else {
        let s = off[rng.gen_range(0..off.len())];
        let delta = lattice_value(rng, cfg);
        if delta.is_zero() {
            return None;
        }
        let moved = &divs[s] + &delta;
        if breaks_nonneg(s, &moved) {
            return None;
        }
        divs[s] = moved;
    }
    let d = DividendVector::new(n, divs).expect("dividend table");
    retag(CoalitionalGame::from_dividends(&d), v.domain())
}

/// Builds `w` whose marginals for `i` sit pointwise below `v`'s: lowers
/// dividends of coalitions containing `i` and shifts dividends elsewhere
/// freely. With `cap_total` the net dividend change is kept ≤ 0, so that
/// `v(N) ≥ w(N)` (weak monotonicity's extra hypothesis).
fn weaken_player(
    v: &CoalitionalGame,
    i: usize,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
    cap_total: bool,
) -> Option<CoalitionalGame> {
    let n = v.player_count();
    let mut divs = v.dividends().into_values();
    let mut net = Rational::zero();
    let mut changed = false;
    for _ in 0..rng.gen_range(1..=3) {
        let mask = rng.gen_range(1..1usize << n);
        let delta = if mask >> i & 1 == 1 {
            -positive_lattice_value(rng, cfg)
        } else {
            lattice_value(rng, cfg)
        };
        if delta.is_zero() {
            continue;
        }
        let moved = &divs[mask] + &delta;
        if cfg.domain == Domain::Superadditive && mask.count_ones() >= 2 && moved.is_negative() {
            continue;
        }
        divs[mask] = moved;
        net += &delta;
        changed = true;
    }
    if !changed || (cap_total && net.is_positive()) {
        return None;
    }
    let d = DividendVector::new(n, divs).expect("dividend table");
    retag(CoalitionalGame::from_dividends(&d), v.domain())
}

/// Copies `i`'s contributions onto `j`, making the pair symmetric.
fn symmetrize(v: &CoalitionalGame, i: usize, j: usize, domain: Domain) -> Option<CoalitionalGame> {
    let n = v.player_count();
    let mut worths = v.worths().to_vec();
    let rest = Coalition::grand(n).remove(i).remove(j);
    for s in rest.subsets() {
        worths[s.mask() | 1 << j] = worths[s.mask() | 1 << i].clone();
    }
    retag(CoalitionalGame::new(n, worths, Domain::Unrestricted).expect("table"), domain)
}

/// Deletes `i`'s contributions: `v(S ∪ i) := v(S)` for every `S ∌ i`.
fn nullify(v: &CoalitionalGame, i: usize, domain: Domain) -> Option<CoalitionalGame> {
    let n = v.player_count();
    let mut worths = v.worths().to_vec();
    let rest = Coalition::grand(n).remove(i);
    for s in rest.subsets() {
        worths[s.mask() | 1 << i] = worths[s.mask()].clone();
    }
    retag(CoalitionalGame::new(n, worths, Domain::Unrestricted).expect("table"), domain)
}

// -- audit reports ------------------------------------------------------

/// Per-axiom outcome over a sample.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CellOutcome {
    NoViolationFound { samples: usize },
    Violated(Violation),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AuditCell {
    pub axiom: AxiomId,
    pub outcome: CellOutcome,
}

/// Verdicts for one rule across a set of axioms, reproducible from the
/// seed: each axiom's sample stream derives from `config.seed` and the
/// axiom's identity, independent of the order axioms are listed in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AuditReport {
    pub rule: RuleId,
    pub config: SearchConfig,
    pub cells: Vec<AuditCell>,
}

/// Seed for one audit cell, stable per `(seed, axiom)`.
pub fn cell_seed(seed: u64, axiom: AxiomId) -> u64 {
    let tag = AxiomId::ALL.iter().position(|a| *a == axiom).expect("known axiom") as u64;
    seed ^ (tag + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run_audit(rule: &RuleId, axioms: &[AxiomId], cfg: &SearchConfig) -> Result<AuditReport> {
    let mut cells = Vec::with_capacity(axioms.len());
    for &axiom in axioms {
        let cell_cfg = SearchConfig { seed: cell_seed(cfg.seed, axiom), ..cfg.clone() };
        let outcome = match search_counterexample(rule, axiom, &cell_cfg)? {
            Some(violation) => CellOutcome::Violated(violation),
            None => CellOutcome::NoViolationFound { samples: cell_cfg.samples },
        };
        cells.push(AuditCell { axiom, outcome });
    }
    Ok(AuditReport { rule: rule.clone(), config: cfg.clone(), cells })
}

/// The expectation table: which axioms each built-in rule is known to
/// satisfy (`Some(true)`), known to violate (`Some(false)`), or left
/// unasserted (`None`). Audit exit status is gated on this table.
pub fn expected_verdict(rule: &RuleId, axiom: AxiomId) -> Option<bool> {
    use AxiomId::*;
    match rule {
        RuleId::Shapley => match axiom {
            A | E | N | S | R | W | CMono | Mplus | M | CMarg | Mminus => Some(true),
            Rplus => Some(false),
        },
        RuleId::EqualDivision => match axiom {
            A | E | S | W | R | CMono | CMarg | Mminus | Rplus => Some(true),
            N | M | Mplus => Some(false),
        },
        RuleId::NullValue => match axiom {
            E => Some(false),
            _ => Some(true),
        },
        RuleId::WeightedShapley(weights) => {
            let uniform = weights.windows(2).all(|p| p[0] == p[1]);
            match axiom {
                S => Some(uniform),
                A | E | N | W | R | CMarg => Some(true),
                _ => None,
            }
        }
        RuleId::EgalitarianShapley(alpha) => {
            let is_shapley = alpha == &crate::ratio::int(1);
            let is_ed = alpha.is_zero();
            match axiom {
                A | E | S | W | R | CMono | CMarg | Mminus => Some(true),
                N | M | Mplus => Some(is_shapley),
                Rplus => Some(is_ed),
            }
        }
        RuleId::Nucleolus => match axiom {
            E | N | S | W => Some(true),
            R | CMarg => Some(false),
            _ => None,
        },
        RuleId::PhiTwoPlayer => match axiom {
            E | N | S | W | R | CMarg => Some(true),
            _ => None,
        },
        RuleId::PhiW => match axiom {
            E | N | S | R | CMarg => Some(true),
            W => Some(false),
            _ => None,
        },
    }
}

// -- constrained marginality ⇄ reallocation-proofness -------------------

/// Tally from [`verify_cmarg_r_equivalence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub samples: usize,
    pub instances: usize,
    /// Constrained-marginality violations whose reallocation reading
    /// (`M = N∖{i}`) was violated as well.
    pub forward_translated: usize,
    /// Reallocation violations whose outside-player constrained-
    /// marginality reading was violated as well.
    pub backward_translated: usize,
    pub disagreements: usize,
}

/// Sampled consistency check of the equivalence (for efficient rules)
/// between constrained marginality and reallocation-proofness.
///
/// A constrained-marginality instance for player `i` is re-read as a
/// reallocation instance for `M = N∖{i}`; for those pairs the two
/// verdicts must coincide exactly. Conversely, every sampled reallocation
/// violation names some outside player whose constrained-marginality
/// instance must be violated as well. Any disagreement is a bug in the
/// rule, the checkers, or the efficiency hypothesis.
pub fn verify_cmarg_r_equivalence(
    rule: &dyn AllocationRule,
    cfg: &SearchConfig,
) -> Result<EquivalenceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;
    let mut report = EquivalenceReport {
        samples: cfg.samples,
        instances: 0,
        forward_translated: 0,
        backward_translated: 0,
        disagreements: 0,
    };
    let violated_both_ways = |axiom: AxiomId, inst: &ManipulationInstance| -> Result<bool> {
        Ok(check_instance(rule, axiom, inst)?.is_violated()
            || check_instance(rule, axiom, &inst.swapped())?.is_violated())
    };
    for _ in 0..cfg.samples {
        let v = sample_game(&mut rng, cfg);
        if check_pointwise(rule, AxiomId::E, &v)?.is_violated() {
            return Err(Error::AuditPrecondition(format!(
                "{} is not efficient on the sample",
                rule.label()
            )));
        }

        // forward: a CMarg instance for i is an R instance for N∖{i}
        let i = rng.gen_range(0..n as usize);
        if let Some(w) = perturb_off_player(&v, i, cfg, &mut rng, true) {
            let player = ManipulationInstance::new(v.clone(), w.clone(), Target::Player(i))?;
            let complement = Coalition::singleton(i, n)?.complement();
            let group =
                ManipulationInstance::new(v.clone(), w, Target::Coalition(complement))?;
            assert!(precondition(AxiomId::CMarg, &player));
            assert!(
                precondition(AxiomId::R, &group),
                "constrained-marginality hypothesis must imply the reallocation hypothesis"
            );
            report.instances += 1;
            let cm_violated = violated_both_ways(AxiomId::CMarg, &player)?;
            let r_violated = violated_both_ways(AxiomId::R, &group)?;
            if cm_violated != r_violated {
                report.disagreements += 1;
            } else if cm_violated {
                report.forward_translated += 1;
            }
        }

        // backward: an R violation for M names an outside player whose
        // CMarg instance is violated too
        if let Some(m) = sample_coalition(&mut rng, n, 2, n.saturating_sub(1).max(2)) {
            if let Some(w) = perturb_inside(&v, m, cfg, &mut rng) {
                let group = ManipulationInstance::new(v.clone(), w.clone(), Target::Coalition(m))?;
                report.instances += 1;
                if violated_both_ways(AxiomId::R, &group)? {
                    let before = rule.allocate(&v)?;
                    let after = rule.allocate(&w)?;
                    let moved =
                        m.complement().members().find(|&j| before.payoff(j) != after.payoff(j));
                    match moved {
                        Some(j) => {
                            let player =
                                ManipulationInstance::new(v.clone(), w.clone(), Target::Player(j))?;
                            assert!(precondition(AxiomId::CMarg, &player));
                            if violated_both_ways(AxiomId::CMarg, &player)? {
                                report.backward_translated += 1;
                            } else {
                                report.disagreements += 1;
                            }
                        }
                        // under efficiency the outside total moved with the
                        // inside total, so some outside payoff moved
                        None => report.disagreements += 1,
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, int};
    use crate::rules::{self, Allocation};
    use crate::samples;
    use proptest::prelude::*;

    fn se() -> Coalition {
        Coalition::from_members([samples::SEARCH, samples::EMAIL], 3).unwrap()
    }

    fn inst(v: CoalitionalGame, w: CoalitionalGame, target: Target) -> ManipulationInstance {
        ManipulationInstance::new(v, w, target).unwrap()
    }

    #[test]
    fn ad_game_preconditions() {
        let original = samples::ad_campaign();
        let internal = samples::ad_campaign_internal_realloc();
        let synergy = samples::ad_campaign_synergy_realloc();
        let underreport = samples::ad_campaign_underreport();
        let target = Target::Coalition(se());

        let internal_inst = inst(original.clone(), internal, target);
        assert!(precondition(AxiomId::R, &internal_inst));
        assert!(precondition(AxiomId::Rplus, &internal_inst));

        let synergy_inst = inst(original.clone(), synergy, target);
        assert!(precondition(AxiomId::Rplus, &synergy_inst));
        assert!(!precondition(AxiomId::R, &synergy_inst));

        let under_inst = inst(original.clone(), underreport, target);
        assert!(precondition(AxiomId::W, &under_inst));
        assert!(!precondition(AxiomId::R, &under_inst));

        // reflexive pairs satisfy every two-game precondition
        let reflexive = inst(original.clone(), original.clone(), target);
        for axiom in [AxiomId::R, AxiomId::Rplus, AxiomId::W, AxiomId::CMono] {
            assert!(precondition(axiom, &reflexive), "{axiom} on (v, v)");
        }
        let reflexive_player = inst(original.clone(), original, Target::Player(0));
        for axiom in [AxiomId::M, AxiomId::CMarg, AxiomId::Mplus, AxiomId::Mminus] {
            assert!(precondition(axiom, &reflexive_player), "{axiom} on (v, v)");
        }
    }

    #[test]
    fn shapley_verdicts_on_the_ad_instances() {
        let original = samples::ad_campaign();
        let target = Target::Coalition(se());

        let internal = inst(original.clone(), samples::ad_campaign_internal_realloc(), target);
        let verdict = check_instance(&RuleId::Shapley, AxiomId::R, &internal).unwrap();
        assert_eq!(verdict, Verdict::ImplicationHolds);
        // both directions admissible, so the group payoff is pinned: 45 = 45
        assert_eq!(
            rules::shapley(internal.original()).coalition_payoff(se()).unwrap(),
            rules::shapley(internal.manipulated()).coalition_payoff(se()).unwrap(),
        );

        let synergy = inst(original.clone(), samples::ad_campaign_synergy_realloc(), target);
        match check_instance(&RuleId::Shapley, AxiomId::Rplus, &synergy).unwrap() {
            Verdict::Violated(violation) => assert_eq!(violation.gain, int(2)),
            other => panic!("expected R+ violation, got {other:?}"),
        }

        let under = inst(original, samples::ad_campaign_underreport(), target);
        assert_eq!(
            check_instance(&RuleId::Shapley, AxiomId::W, &under).unwrap(),
            Verdict::ImplicationHolds
        );
    }

    #[test]
    fn equal_division_is_strong_reallocation_proof_on_instances() {
        let original = samples::ad_campaign();
        let synergy = inst(
            original,
            samples::ad_campaign_synergy_realloc(),
            Target::Coalition(se()),
        );
        assert_eq!(
            check_instance(&RuleId::EqualDivision, AxiomId::Rplus, &synergy).unwrap(),
            Verdict::ImplicationHolds
        );
    }

    #[test]
    fn pointwise_checks_catch_the_designated_failures() {
        let u_n = CoalitionalGame::unanimity(Coalition::grand(3)).unwrap();
        assert!(check_pointwise(&RuleId::NullValue, AxiomId::E, &u_n).unwrap().is_violated());

        let u_0 = CoalitionalGame::unanimity(Coalition::singleton(0, 3).unwrap()).unwrap();
        match check_pointwise(&RuleId::EqualDivision, AxiomId::N, &u_0).unwrap() {
            Verdict::Violated(violation) => assert_eq!(violation.gain, frac(1, 3)),
            other => panic!("expected N violation, got {other:?}"),
        }

        let symmetric = CoalitionalGame::unanimity(Coalition::grand(3)).unwrap();
        let weighted = RuleId::WeightedShapley(vec![int(1), int(2), int(1)]);
        assert!(check_pointwise(&weighted, AxiomId::S, &symmetric).unwrap().is_violated());
        assert_eq!(
            check_pointwise(&RuleId::Shapley, AxiomId::S, &symmetric).unwrap(),
            Verdict::ImplicationHolds
        );
    }

    #[test]
    fn additivity_checks() {
        let v = samples::ad_campaign();
        let w = samples::ad_campaign_underreport();
        assert_eq!(
            check_additivity(&RuleId::Shapley, &v, &w).unwrap(),
            Verdict::ImplicationHolds
        );
        assert_eq!(
            check_additivity(&RuleId::EqualDivision, &v, &w).unwrap(),
            Verdict::ImplicationHolds
        );
    }

    #[test]
    fn nucleolus_fails_additivity_on_a_searched_pair() {
        let cfg = SearchConfig { samples: 200, n: 3, seed: 7, ..Default::default() };
        let hit = search_counterexample(&RuleId::Nucleolus, AxiomId::A, &cfg).unwrap();
        assert!(hit.is_some(), "no additivity violation found for the nucleolus");
    }

    #[test]
    fn searches_find_the_documented_failures() {
        let base = SearchConfig { samples: 400, seed: 1, ..Default::default() };

        for n in [3u8, 4] {
            let cfg = SearchConfig { n, ..base.clone() };
            let hit = search_counterexample(&RuleId::Nucleolus, AxiomId::R, &cfg).unwrap();
            assert!(hit.is_some(), "nucleolus R violation not found at n={n}");
            let violation = hit.unwrap();
            assert!(violation.gain.is_positive());
            if let Target::Coalition(m) = violation.witness.target() {
                assert!(reallocation_precondition_worths(
                    violation.witness.original(),
                    violation.witness.manipulated(),
                    m
                ));
            } else {
                panic!("R witness must target a coalition");
            }
        }

        let hit = search_counterexample(&RuleId::PhiW, AxiomId::W, &base).unwrap();
        assert!(hit.is_some(), "phi-W weak-monotonicity violation not found");

        let hit = search_counterexample(&RuleId::Shapley, AxiomId::R, &base).unwrap();
        assert!(hit.is_none(), "Shapley must pass reallocation-proofness");
    }

    /// `2·Sh − ED`: keeps the reallocation/marginality family but breaks
    /// weak monotonicity.
    struct ShEdStretch;

    impl AllocationRule for ShEdStretch {
        fn label(&self) -> String {
            "2sh-minus-ed".into()
        }

        fn allocate(&self, game: &CoalitionalGame) -> crate::Result<Allocation> {
            Ok(rules::sh_ed_mix(game, &int(2), &int(-1)))
        }

        fn is_linear(&self) -> bool {
            true
        }
    }

    #[test]
    fn stretched_mixture_fails_weak_monotonicity() {
        let cfg = SearchConfig { samples: 600, seed: 1, ..Default::default() };
        let hit = search_counterexample(&ShEdStretch, AxiomId::Mminus, &cfg).unwrap();
        assert!(hit.is_some(), "2Sh - ED weak-monotonicity violation not found");
        // while satisfying the undirected cousins on the same budget
        assert!(search_counterexample(&ShEdStretch, AxiomId::CMarg, &cfg).unwrap().is_none());
        assert!(search_counterexample(&ShEdStretch, AxiomId::R, &cfg).unwrap().is_none());
        assert!(search_counterexample(&ShEdStretch, AxiomId::W, &cfg).unwrap().is_none());
        assert!(search_counterexample(&ShEdStretch, AxiomId::CMono, &cfg).unwrap().is_none());
    }

    #[test]
    fn two_player_rule_passes_its_row_at_n2() {
        // no special-casing of n = 2: the same generators run, and the
        // 2-player-only rule clears the whole audited set there
        let cfg = SearchConfig { samples: 250, seed: 2, n: 2, ..Default::default() };
        let axioms =
            [AxiomId::S, AxiomId::N, AxiomId::E, AxiomId::W, AxiomId::R, AxiomId::CMarg];
        let report = run_audit(&RuleId::PhiTwoPlayer, &axioms, &cfg).unwrap();
        for cell in &report.cells {
            assert!(
                matches!(cell.outcome, CellOutcome::NoViolationFound { .. }),
                "phi-two-player unexpectedly fails {} at n=2",
                cell.axiom
            );
        }
    }

    #[test]
    fn audit_reports_are_deterministic() {
        let cfg = SearchConfig { samples: 60, seed: 42, ..Default::default() };
        let axioms = [AxiomId::E, AxiomId::N, AxiomId::R, AxiomId::W];
        let a = run_audit(&RuleId::Shapley, &axioms, &cfg).unwrap();
        let b = run_audit(&RuleId::Shapley, &axioms, &cfg).unwrap();
        assert_eq!(a, b);
        // cell outcomes do not depend on the order axioms are requested in
        let reversed: Vec<AxiomId> = axioms.iter().rev().copied().collect();
        let c = run_audit(&RuleId::Shapley, &reversed, &cfg).unwrap();
        for cell in &a.cells {
            let mirrored = c.cells.iter().find(|other| other.axiom == cell.axiom).unwrap();
            assert_eq!(cell.outcome, mirrored.outcome);
        }
    }

    #[test]
    fn superadditive_domain_yields_superadditive_instances() {
        let cfg = SearchConfig {
            samples: 150,
            seed: 9,
            n: 3,
            domain: Domain::Superadditive,
            ..Default::default()
        };
        for axiom in [AxiomId::R, AxiomId::W, AxiomId::CMarg, AxiomId::Mminus] {
            if let Some(violation) =
                search_counterexample(&RuleId::Nucleolus, axiom, &cfg).unwrap()
            {
                assert!(violation.witness.original().is_superadditive());
                assert!(violation.witness.manipulated().is_superadditive());
            }
        }
    }

    #[test]
    fn monotonicity_checkers_are_ordered() {
        // a W violation on (v, w, M) is also a CMono violation, and each
        // member with a positive gain gives an M+ violation
        let cfg = SearchConfig { samples: 800, seed: 3, n: 3, ..Default::default() };
        let hit = search_counterexample(&RuleId::PhiW, AxiomId::W, &cfg).unwrap().unwrap();
        let witness = hit.witness;
        assert!(check_instance(&RuleId::PhiW, AxiomId::CMono, &witness).unwrap().is_violated());
        if let Target::Coalition(m) = witness.target() {
            let before = rules::phi_w(witness.original());
            let after = rules::phi_w(witness.manipulated());
            let gainer = m
                .members()
                .find(|&i| after.payoff(i) > before.payoff(i))
                .expect("some member must gain");
            let single = inst(
                witness.original().clone(),
                witness.manipulated().clone(),
                Target::Player(gainer),
            );
            assert!(precondition(AxiomId::Mplus, &single));
            assert!(check_instance(&RuleId::PhiW, AxiomId::Mplus, &single).unwrap().is_violated());
        } else {
            panic!("W witness must target a coalition");
        }
    }

    #[test]
    fn cmarg_r_equivalence_for_shapley_and_ed() {
        let cfg = SearchConfig { samples: 120, seed: 5, ..Default::default() };
        for rule in [RuleId::Shapley, RuleId::EqualDivision] {
            let report = verify_cmarg_r_equivalence(&rule, &cfg).unwrap();
            assert_eq!(report.disagreements, 0, "{rule}");
            assert_eq!(report.forward_translated + report.backward_translated, 0, "{rule} satisfies both axioms");
            assert!(report.instances > 0);
        }
    }

    #[test]
    fn cmarg_r_equivalence_for_the_nucleolus_translates_witnesses() {
        let cfg = SearchConfig { samples: 120, seed: 5, n: 3, ..Default::default() };
        let report = verify_cmarg_r_equivalence(&RuleId::Nucleolus, &cfg).unwrap();
        assert_eq!(report.disagreements, 0);
        assert!(report.forward_translated > 0, "expected forward-translated violations");
        assert!(report.backward_translated > 0, "expected backward-translated violations");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn reallocation_precondition_routes_agree(
            raw_v in proptest::collection::vec(-9i64..=9, 16),
            raw_w in proptest::collection::vec(-9i64..=9, 16),
            m_mask in 1usize..15,
        ) {
            let build = |raw: &[i64]| {
                let mut worths: Vec<Rational> = raw.iter().map(|&x| int(x)).collect();
                worths[0] = Rational::zero();
                CoalitionalGame::new(4, worths, Domain::Unrestricted).unwrap()
            };
            let v = build(&raw_v);
            let w = build(&raw_w);
            let m = Coalition::from_mask(m_mask, 4).unwrap();
            prop_assert_eq!(
                reallocation_precondition_worths(&v, &w, m),
                reallocation_precondition_dividends(&v, &w, m)
            );
        }

        #[test]
        fn generated_r_instances_hold_both_precondition_routes(seed in 0u64..1000) {
            let cfg = SearchConfig { seed, samples: 1, n: 4, ..Default::default() };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = sample_game(&mut rng, &cfg);
            if let Some(m) = sample_coalition(&mut rng, 4, 2, 3) {
                if let Some(w) = perturb_inside(&v, m, &cfg, &mut rng) {
                    prop_assert!(reallocation_precondition_worths(&v, &w, m));
                    prop_assert!(reallocation_precondition_dividends(&v, &w, m));
                    // an R instance is in particular an R+ instance
                    prop_assert!(rplus_precondition(&v, &w, m));
                }
            }
        }
    }
}
