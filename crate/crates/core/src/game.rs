//! Coalitional games over subset-indexed worth tables.
//!
//! Players are indices `0..n` with `n ≤ 16`; a coalition is the bitmask
//! with bit `i` set iff player `i` belongs to it. Worth tables are dense
//! (`2^n` rationals, index = bitmask) so the subset transforms run with
//! O(1) indexed access. Every value is immutable after construction and
//! every operation is a pure function.

use std::fmt;

use num_traits::Zero;

use crate::ratio::Rational;
use crate::{Error, Result};

/// Hard cap on the player count: worth tables are dense arrays of 2^n.
pub const MAX_PLAYERS: u8 = 16;

/// A set of players inside a fixed `n`-player context.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition {
    mask: u16,
    n: u8,
}

impl Coalition {
    /// The empty coalition in an `n`-player context.
    pub fn empty(n: u8) -> Self {
        check_player_count(n).expect("player count");
        Coalition { mask: 0, n }
    }

    /// The grand coalition `N`.
    pub fn grand(n: u8) -> Self {
        check_player_count(n).expect("player count");
        Coalition { mask: ((1u32 << n) - 1) as u16, n }
    }

    /// Coalition from a raw bitmask; the mask must fit the context.
    pub fn from_mask(mask: usize, n: u8) -> Result<Self> {
        check_player_count(n)?;
        if mask >= 1usize << n {
            return Err(Error::MaskOutOfRange { mask, n });
        }
        Ok(Coalition { mask: mask as u16, n })
    }

    /// Coalition containing exactly the given players.
    pub fn from_members(members: impl IntoIterator<Item = usize>, n: u8) -> Result<Self> {
        check_player_count(n)?;
        let mut mask = 0usize;
        for i in members {
            if i >= n as usize {
                return Err(Error::PlayerOutOfRange(i));
            }
            mask |= 1 << i;
        }
        Ok(Coalition { mask: mask as u16, n })
    }

    /// The singleton `{i}`.
    pub fn singleton(i: usize, n: u8) -> Result<Self> {
        Self::from_members([i], n)
    }

    pub fn mask(&self) -> usize {
        self.mask as usize
    }

    /// Player count of the ambient context, not of the coalition.
    pub fn context(&self) -> u8 {
        self.n
    }

    pub fn cardinality(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_grand(&self) -> bool {
        self.mask() == (1usize << self.n) - 1
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n as usize && self.mask >> i & 1 == 1
    }

    pub fn insert(&self, i: usize) -> Result<Self> {
        if i >= self.n as usize {
            return Err(Error::PlayerOutOfRange(i));
        }
        Ok(Coalition { mask: self.mask | 1 << i, n: self.n })
    }

    pub fn remove(&self, i: usize) -> Self {
        if i >= self.n as usize {
            return *self;
        }
        Coalition { mask: self.mask & !(1u16 << i), n: self.n }
    }

    pub fn union(&self, other: &Coalition) -> Self {
        debug_assert_eq!(self.n, other.n);
        Coalition { mask: self.mask | other.mask, n: self.n }
    }

    pub fn intersection(&self, other: &Coalition) -> Self {
        debug_assert_eq!(self.n, other.n);
        Coalition { mask: self.mask & other.mask, n: self.n }
    }

    pub fn complement(&self) -> Self {
        Coalition { mask: !self.mask & Coalition::grand(self.n).mask, n: self.n }
    }

    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn is_disjoint_from(&self, other: &Coalition) -> bool {
        self.mask & other.mask == 0
    }

    /// Members in ascending player order.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n as usize;
        let mask = self.mask;
        (0..n).filter(move |i| mask >> i & 1 == 1)
    }

    /// All subsets of this coalition, the empty set and itself included.
    pub fn subsets(&self) -> impl Iterator<Item = Coalition> {
        let m = self.mask;
        let n = self.n;
        // descending submask walk: s -> (s-1) & m
        let mut cur = Some(m);
        std::iter::from_fn(move || {
            let s = cur?;
            cur = if s == 0 { None } else { Some((s - 1) & m) };
            Some(Coalition { mask: s, n })
        })
    }

    /// Every coalition of an `n`-player context, by ascending bitmask.
    pub fn all(n: u8) -> impl Iterator<Item = Coalition> {
        check_player_count(n).expect("player count");
        (0..1usize << n).map(move |mask| Coalition { mask: mask as u16, n })
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

fn check_player_count(n: u8) -> Result<()> {
    if n == 0 || n > MAX_PLAYERS {
        return Err(Error::PlayerCount(n as usize));
    }
    Ok(())
}

/// Domain tag: whether the game is asserted to live in the superadditive
/// class. Axiom audits on the superadditive domain only admit instances
/// whose games both carry (and satisfy) this tag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum Domain {
    #[default]
    Unrestricted,
    Superadditive,
}

/// A transferable-utility coalitional game: a worth for every coalition,
/// with `v(∅) = 0`, in exact rationals.
///
/// Equality compares player count and worth tables; the domain tag is
/// metadata about which class the game is certified to belong to.
#[derive(Clone)]
pub struct CoalitionalGame {
    n: u8,
    worths: Vec<Rational>,
    domain: Domain,
}

impl PartialEq for CoalitionalGame {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.worths == other.worths
    }
}

impl Eq for CoalitionalGame {}

impl fmt::Debug for CoalitionalGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoalitionalGame(n={}, {:?}", self.n, self.domain)?;
        for s in Coalition::all(self.n).skip(1) {
            write!(f, ", {:?}={}", s, self.worths[s.mask()])?;
        }
        write!(f, ")")
    }
}

impl CoalitionalGame {
    /// Builds a game from a dense worth table (index = coalition bitmask).
    ///
    /// Rejects tables of the wrong length, a nonzero worth for the empty
    /// coalition, and a `Superadditive` tag the table does not satisfy.
    pub fn new(n: u8, worths: Vec<Rational>, domain: Domain) -> Result<Self> {
        check_player_count(n)?;
        let expected = 1usize << n;
        if worths.len() != expected {
            return Err(Error::WorthTableLength { expected, got: worths.len() });
        }
        if !worths[0].is_zero() {
            return Err(Error::EmptyWorthNonzero);
        }
        let game = CoalitionalGame { n, worths, domain };
        if domain == Domain::Superadditive {
            if let Some((s, t)) = game.superadditivity_witness() {
                return Err(Error::NotSuperadditive {
                    s: format!("{s:?}"),
                    t: format!("{t:?}"),
                });
            }
        }
        Ok(game)
    }

    /// The null game `𝟘`.
    pub fn zero(n: u8) -> Self {
        check_player_count(n).expect("player count");
        CoalitionalGame {
            n,
            worths: vec![Rational::zero(); 1 << n],
            domain: Domain::Unrestricted,
        }
    }

    /// The unanimity game `u_T`: worth 1 on supersets of `t`, else 0.
    pub fn unanimity(t: Coalition) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let n = t.context();
        let one = Rational::from_integer(1.into());
        let worths = (0..1usize << n)
            .map(|mask| {
                if mask & t.mask() == t.mask() {
                    one.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(CoalitionalGame { n, worths, domain: Domain::Unrestricted })
    }

    /// The modular (additive) game `S ↦ ∑_{i∈S} x_i`.
    pub fn modular(x: &ModularShift) -> Result<Self> {
        Self::zero(x.len() as u8).add_modular(x)
    }

    pub fn player_count(&self) -> u8 {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Re-tags the game, revalidating superadditivity if claimed.
    pub fn with_domain(self, domain: Domain) -> Result<Self> {
        CoalitionalGame::new(self.n, self.worths, domain)
    }

    /// `v(S)`.
    pub fn worth(&self, s: Coalition) -> Result<&Rational> {
        if s.context() != self.n {
            return Err(Error::ContextMismatch { coalition: s.context(), game: self.n });
        }
        Ok(&self.worths[s.mask()])
    }

    pub fn worths(&self) -> &[Rational] {
        &self.worths
    }

    /// `v(N)`.
    pub fn grand_worth(&self) -> &Rational {
        &self.worths[(1usize << self.n) - 1]
    }

    /// Returns a copy with `v(s)` replaced. The result is tagged
    /// `Unrestricted`; re-tag with [`CoalitionalGame::with_domain`] to
    /// reassert superadditivity.
    pub fn with_worth(&self, s: Coalition, worth: Rational) -> Result<Self> {
        if s.context() != self.n {
            return Err(Error::ContextMismatch { coalition: s.context(), game: self.n });
        }
        if s.is_empty() && !worth.is_zero() {
            return Err(Error::EmptyWorthNonzero);
        }
        let mut worths = self.worths.clone();
        worths[s.mask()] = worth;
        Ok(CoalitionalGame { n: self.n, worths, domain: Domain::Unrestricted })
    }

    /// `∂_i v(S) = v(S ∪ i) − v(S)`, defined for `i ∉ S`.
    pub fn marginal_contribution(&self, i: usize, s: Coalition) -> Result<Rational> {
        if s.context() != self.n {
            return Err(Error::ContextMismatch { coalition: s.context(), game: self.n });
        }
        if i >= self.n as usize {
            return Err(Error::PlayerOutOfRange(i));
        }
        if s.contains(i) {
            return Err(Error::AlreadyMember(i));
        }
        let with = s.insert(i)?;
        Ok(&self.worths[with.mask()] - &self.worths[s.mask()])
    }

    /// The Harsanyi dividends (Möbius inverse) of the game, via the
    /// in-place subset-sum transform in O(n·2^n).
    pub fn dividends(&self) -> DividendVector {
        let mut values = self.worths.clone();
        mobius_in_place(&mut values, self.n);
        DividendVector { n: self.n, values }
    }

    /// Reconstructs the unique game with the given dividends (zeta
    /// transform), so that `from_dividends(v.dividends()) == v` exactly.
    pub fn from_dividends(d: &DividendVector) -> Self {
        let mut worths = d.values.clone();
        zeta_in_place(&mut worths, d.n);
        CoalitionalGame { n: d.n, worths, domain: Domain::Unrestricted }
    }

    /// First pair of disjoint coalitions with `v(S ∪ T) < v(S) + v(T)`,
    /// or `None` if the game is superadditive.
    pub fn superadditivity_witness(&self) -> Option<(Coalition, Coalition)> {
        for s in Coalition::all(self.n) {
            if s.is_empty() {
                continue;
            }
            // nonempty submasks of the complement; (s, t) visited once per
            // ordered pair, which is fine for a witness search
            for t in s.complement().subsets() {
                if t.is_empty() {
                    continue;
                }
                let merged = s.union(&t);
                if self.worths[merged.mask()] < &self.worths[s.mask()] + &self.worths[t.mask()] {
                    return Some((s, t));
                }
            }
        }
        None
    }

    pub fn is_superadditive(&self) -> bool {
        self.superadditivity_witness().is_none()
    }

    /// True iff `v(S ∪ i) = v(S ∪ j)` for every `S ⊆ N∖{i,j}`.
    pub fn are_symmetric(&self, i: usize, j: usize) -> bool {
        assert!(i != j, "symmetry is a relation between distinct players");
        assert!(i < self.n as usize && j < self.n as usize, "player out of range");
        let rest = Coalition::grand(self.n).remove(i).remove(j);
        rest.subsets().all(|s| {
            self.worths[s.mask() | 1 << i] == self.worths[s.mask() | 1 << j]
        })
    }

    /// True iff player `i` contributes nothing to any coalition.
    pub fn is_null_player(&self, i: usize) -> bool {
        assert!(i < self.n as usize, "player out of range");
        let rest = Coalition::grand(self.n).remove(i);
        rest.subsets().all(|s| self.worths[s.mask() | 1 << i] == self.worths[s.mask()])
    }

    /// `#v`: number of coalitions with nonzero dividend.
    pub fn support_count(&self) -> usize {
        self.dividends().support_count()
    }

    /// `R(v)`: players contained in every coalition with nonzero dividend.
    /// For the null game the intersection runs over an empty family and is
    /// taken to be the grand coalition.
    pub fn required_players(&self) -> Coalition {
        self.dividends().required_players()
    }

    /// The shifted game `(v + x)(S) = v(S) + ∑_{i∈S} x_i`.
    ///
    /// Dividends on coalitions of size ≥ 2 are unchanged; singleton
    /// dividends move by `x_i`. Superadditivity is preserved in both
    /// directions, so the domain tag carries over.
    pub fn add_modular(&self, x: &ModularShift) -> Result<Self> {
        if x.len() != self.n as usize {
            return Err(Error::ShiftLength { expected: self.n as usize, got: x.len() });
        }
        let mut worths = self.worths.clone();
        for s in Coalition::all(self.n) {
            for i in s.members() {
                worths[s.mask()] += &x.0[i];
            }
        }
        Ok(CoalitionalGame { n: self.n, worths, domain: self.domain })
    }

    /// Pointwise sum `(v + w)(S) = v(S) + w(S)`. Superadditive tags
    /// survive because the defining inequalities add.
    pub fn add(&self, other: &CoalitionalGame) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::PlayerCountMismatch(self.n, other.n));
        }
        let worths = self
            .worths
            .iter()
            .zip(&other.worths)
            .map(|(a, b)| a + b)
            .collect();
        let domain = if self.domain == Domain::Superadditive && other.domain == Domain::Superadditive
        {
            Domain::Superadditive
        } else {
            Domain::Unrestricted
        };
        Ok(CoalitionalGame { n: self.n, worths, domain })
    }

    /// Scales every worth by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        CoalitionalGame {
            n: self.n,
            worths: self.worths.iter().map(|w| w * c).collect(),
            domain: Domain::Unrestricted,
        }
    }
}

/// Harsanyi dividends of a game, indexed like a worth table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DividendVector {
    n: u8,
    values: Vec<Rational>,
}

impl DividendVector {
    pub fn new(n: u8, values: Vec<Rational>) -> Result<Self> {
        check_player_count(n)?;
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::WorthTableLength { expected, got: values.len() });
        }
        if !values[0].is_zero() {
            return Err(Error::EmptyDividendNonzero);
        }
        Ok(DividendVector { n, values })
    }

    pub fn player_count(&self) -> u8 {
        self.n
    }

    pub fn value(&self, s: Coalition) -> Result<&Rational> {
        if s.context() != self.n {
            return Err(Error::ContextMismatch { coalition: s.context(), game: self.n });
        }
        Ok(&self.values[s.mask()])
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    /// `#v = |{T : d(T) ≠ 0}|`.
    pub fn support_count(&self) -> usize {
        self.values.iter().filter(|d| !d.is_zero()).count()
    }

    /// Intersection of all coalitions with nonzero dividend; the grand
    /// coalition when the support is empty.
    pub fn required_players(&self) -> Coalition {
        let mut acc = Coalition::grand(self.n).mask();
        for (mask, d) in self.values.iter().enumerate() {
            if !d.is_zero() {
                acc &= mask;
            }
        }
        Coalition::from_mask(acc, self.n).expect("mask in range")
    }
}

/// A per-player payment vector defining a modular game shift.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModularShift(Vec<Rational>);

impl ModularShift {
    pub fn new(x: Vec<Rational>) -> Self {
        ModularShift(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn per_player(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for ModularShift {
    fn from(x: Vec<Rational>) -> Self {
        ModularShift(x)
    }
}

/// In-place Möbius transform: afterwards `vals[S] = ∑_{T⊆S} (−1)^{|S∖T|} v(T)`.
fn mobius_in_place(vals: &mut [Rational], n: u8) {
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..vals.len() {
            if mask & bit != 0 {
                let sub = vals[mask ^ bit].clone();
                vals[mask] -= sub;
            }
        }
    }
}

/// In-place zeta transform: afterwards `vals[S] = ∑_{T⊆S} d(T)`.
fn zeta_in_place(vals: &mut [Rational], n: u8) {
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..vals.len() {
            if mask & bit != 0 {
                let add = vals[mask ^ bit].clone();
                vals[mask] += add;
            }
        }
    }
}
