//! Shared helpers for integration suites: seeded game generation and the
//! independent lexicographic-excess oracle used to audit the nucleolus.

use std::cmp::Ordering;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_traits::Zero;
use tugames::game::{Coalition, CoalitionalGame, Domain};
use tugames::ratio::{frac, int, Rational};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random worth-lattice game with integer worths in `[-bound, bound]`.
pub fn random_game(rng: &mut ChaCha8Rng, n: u8, bound: i64) -> CoalitionalGame {
    let mut worths: Vec<Rational> =
        (0..1usize << n).map(|_| int(rng.gen_range(-bound..=bound))).collect();
    worths[0] = Rational::zero();
    CoalitionalGame::new(n, worths, Domain::Unrestricted).expect("lattice game")
}

/// Excesses `v(S) − x(S)` over proper nonempty coalitions, sorted
/// descending: the vector the nucleolus lexicographically minimizes.
pub fn sorted_excesses(game: &CoalitionalGame, x: &[Rational]) -> Vec<Rational> {
    let n = game.player_count();
    let mut out: Vec<Rational> = Coalition::all(n)
        .filter(|s| !s.is_empty() && !s.is_grand())
        .map(|s| {
            let xs: Rational = s.members().map(|i| &x[i]).sum();
            game.worths()[s.mask()].clone() - xs
        })
        .collect();
    out.sort();
    out.reverse();
    out
}

fn lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Efficiency-preserving probe directions: all pairwise transfers.
pub fn transfer_directions(n: usize) -> Vec<Vec<Rational>> {
    let mut dirs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut d = vec![Rational::zero(); n];
                d[i] = int(1);
                d[j] = int(-1);
                dirs.push(d);
            }
        }
    }
    dirs
}

/// Grid-refinement lexicographic-excess minimizer. Starting from
/// `center`, repeatedly walks to any grid point (one `step` along a
/// transfer direction) with a lexicographically smaller sorted excess
/// vector, halving the step `levels` times. Returns the final point and
/// the final grid resolution.
///
/// Everything is exact rational arithmetic, so a center that no grid
/// point ever beats is returned bit-identically.
pub fn grid_refine(
    game: &CoalitionalGame,
    center: &[Rational],
    levels: u32,
) -> (Vec<Rational>, Rational) {
    let n = game.player_count() as usize;
    let dirs = transfer_directions(n);
    let mut best = center.to_vec();
    let mut best_key = sorted_excesses(game, &best);
    let mut step = int(1);
    for _ in 0..levels {
        loop {
            let mut improved = false;
            for d in &dirs {
                let candidate: Vec<Rational> =
                    best.iter().zip(d).map(|(x, di)| x + &step * di).collect();
                let key = sorted_excesses(game, &candidate);
                if lex_cmp(&key, &best_key) == Ordering::Less {
                    best = candidate;
                    best_key = key;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        step /= int(2);
    }
    (best, step)
}

/// First-order optimality probe: true iff moving from `x` along `d` by an
/// infinitesimal positive step lexicographically improves the sorted
/// excess vector. Decided exactly by sorting excess/slope pairs as dual
/// numbers — excesses are affine in the step, so the first-order
/// comparison is the whole story near zero.
pub fn improves_first_order(game: &CoalitionalGame, x: &[Rational], d: &[Rational]) -> bool {
    let n = game.player_count();
    let mut pairs: Vec<(Rational, Rational)> = Coalition::all(n)
        .filter(|s| !s.is_empty() && !s.is_grand())
        .map(|s| {
            let xs: Rational = s.members().map(|i| &x[i]).sum();
            let ds: Rational = s.members().map(|i| &d[i]).sum();
            (game.worths()[s.mask()].clone() - xs, -ds)
        })
        .collect();
    // descending dual order (value, then slope)
    pairs.sort_by(|a, b| b.cmp(a));
    let base = sorted_excesses(game, x);
    for ((value, slope), base_value) in pairs.iter().zip(&base) {
        debug_assert_eq!(value, base_value, "dual sort must refine the value sort");
        match slope.cmp(&Rational::zero()) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => continue,
        }
    }
    false
}

/// Seeded zero-sum rational direction for extra optimality probes.
pub fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let mut d: Vec<Rational> =
            (0..n).map(|_| frac(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=3))).collect();
        let mean: Rational = d.iter().sum::<Rational>() / int(n as i64);
        for di in d.iter_mut() {
            *di -= &mean;
        }
        if d.iter().any(|di| !di.is_zero()) {
            return d;
        }
    }
}
