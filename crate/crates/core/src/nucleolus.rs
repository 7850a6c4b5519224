//! The (pre)nucleolus by the iterative least-core scheme.
//!
//! Minimize the largest excess `e(S,x) = v(S) − x(S)` over the efficiency
//! hyperplane, detect the coalitions whose excess is pinned at that level
//! in *every* optimum (an exact tightness certificate per candidate, no
//! dual guesswork), freeze them as equalities, and repeat on the rest.
//! Individual-rationality constraints are not imposed, so this computes
//! the prenucleolus, which is total on all games; on the superadditive
//! test fixtures used here it coincides with the nucleolus.
//!
//! Every round strictly lowers the level and freezes at least one
//! coalition: if no unfixed constraint were tight in every optimum, a
//! convex combination of optima would be slack everywhere, contradicting
//! optimality. Termination is therefore guaranteed after at most
//! `2^n − 2` rounds, and usually far fewer because the fixed equalities
//! pin the allocation early.

use num_traits::{One, Zero};

use crate::game::CoalitionalGame;
use crate::lp::{tightness_certificate_at, LinearProgram, LpOutcome};
use crate::ratio::Rational;
use crate::rules::Allocation;

pub(crate) fn solve(game: &CoalitionalGame) -> Allocation {
    let n = game.player_count() as usize;
    let worths = game.worths();
    if n == 1 {
        return Allocation::new(vec![worths[1].clone()]);
    }
    let full = (1usize << n) - 1;
    let mut unfixed: Vec<usize> = (1..full).collect();
    let mut fixed: Vec<(usize, Rational)> = Vec::new();

    loop {
        // vars: x_0..x_{n-1}, t; minimize t
        let mut objective = vec![Rational::zero(); n + 1];
        objective[n] = Rational::one();
        let mut lp = LinearProgram::minimize(objective).expect("nonempty program");

        let mut efficiency = vec![Rational::one(); n + 1];
        efficiency[n] = Rational::zero();
        lp.add_eq(efficiency, worths[full].clone()).expect("dims");

        for (mask, level) in &fixed {
            lp.add_eq(excess_coeffs(*mask, n, false), level - &worths[*mask]).expect("dims");
        }
        for &mask in &unfixed {
            lp.add_le(excess_coeffs(mask, n, true), -worths[mask].clone()).expect("dims");
        }

        let (x, level) = match lp.solve() {
            LpOutcome::Optimal { mut solution, value } => {
                solution.truncate(n);
                (solution, value)
            }
            other => unreachable!("least-core program must have an optimum, got {other:?}"),
        };

        // freeze the coalitions whose excess sits at the level in every
        // optimal solution; candidates are those tight at the found point
        let first_unfixed_row = 1 + fixed.len();
        let mut frozen = Vec::new();
        for (pos, &mask) in unfixed.iter().enumerate() {
            let excess = &worths[mask] - coalition_sum(&x, mask);
            if excess != level {
                continue;
            }
            let row = first_unfixed_row + pos;
            if tightness_certificate_at(&lp, row, &level).expect("certificate on solved program") {
                frozen.push(mask);
            }
        }
        assert!(!frozen.is_empty(), "least-core round froze nothing");
        unfixed.retain(|m| !frozen.contains(m));
        for mask in frozen {
            fixed.push((mask, level.clone()));
        }

        if unfixed.is_empty() || allocation_pinned(&fixed, n) {
            return Allocation::new(x);
        }
    }
}

/// Coefficients of `−x(S)` (and `−t` when `with_t`) as an LP row, so that
/// `v(S) − x(S) ≤ t` becomes `coeffs · (x,t) ≤ −v(S)`.
fn excess_coeffs(mask: usize, n: usize, with_t: bool) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); n + 1];
    for (i, c) in coeffs.iter_mut().enumerate().take(n) {
        if mask >> i & 1 == 1 {
            *c = -Rational::one();
        }
    }
    if with_t {
        coeffs[n] = -Rational::one();
    }
    coeffs
}

fn coalition_sum(x: &[Rational], mask: usize) -> Rational {
    x.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, v)| v)
        .sum()
}

/// True when efficiency plus the fixed excess equalities determine the
/// allocation uniquely (coefficient rank = n); the last LP solution is
/// then the prenucleolus and further rounds would be busywork.
fn allocation_pinned(fixed: &[(usize, Rational)], n: usize) -> bool {
    let full = (1usize << n) - 1;
    let mut rows: Vec<usize> = Vec::with_capacity(fixed.len() + 1);
    rows.push(full);
    rows.extend(fixed.iter().map(|(mask, _)| *mask));
    // fraction-free Gaussian elimination on the 0/1 indicator rows
    let mut matrix: Vec<Vec<i128>> = rows
        .iter()
        .map(|mask| (0..n).map(|i| (mask >> i & 1) as i128).collect())
        .collect();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pivot) = (rank..matrix.len()).find(|&r| matrix[r][col] != 0) else {
            continue;
        };
        matrix.swap(rank, pivot);
        let lead = matrix[rank][col];
        for r in 0..matrix.len() {
            if r != rank && matrix[r][col] != 0 {
                let factor = matrix[r][col];
                let pivot_row = matrix[rank].clone();
                for (entry, p) in matrix[r].iter_mut().zip(&pivot_row) {
                    *entry = *entry * lead - p * factor;
                }
            }
        }
        rank += 1;
        if rank == n {
            return true;
        }
    }
    rank == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Coalition, Domain};
    use crate::ratio::{frac, int};
    use crate::rules::{equal_division, nucleolus};
    use crate::samples;
    use proptest::prelude::*;

    #[test]
    fn ad_game_value() {
        let nuc = nucleolus(&samples::ad_campaign());
        assert_eq!(nuc.payoffs(), &[frac(19, 2), frac(73, 2), int(8)]);
    }

    #[test]
    fn one_player_game() {
        let g = CoalitionalGame::new(1, vec![int(0), int(7)], Domain::Unrestricted).unwrap();
        assert_eq!(nucleolus(&g).payoffs(), &[int(7)]);
    }

    #[test]
    fn excesses_at_the_ad_nucleolus_are_lexicographically_sorted_as_expected() {
        let g = samples::ad_campaign();
        let x = nucleolus(&g);
        let mut excesses: Vec<Rational> = Coalition::all(3)
            .filter(|s| !s.is_empty() && !s.is_grand())
            .map(|s| g.worth(s).unwrap() - x.coalition_payoff(s).unwrap())
            .collect();
        excesses.sort();
        excesses.reverse();
        let expected = [frac(-9, 2), frac(-9, 2), frac(-33, 2), frac(-33, 2), int(-18), int(-21)];
        assert_eq!(excesses, expected);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn two_player_standard_solution(v1 in -9i64..=9, v2 in -9i64..=9, v12 in -9i64..=9) {
            let g = CoalitionalGame::new(
                2,
                vec![int(0), int(v1), int(v2), int(v12)],
                Domain::Unrestricted,
            )
            .unwrap();
            let x = nucleolus(&g);
            let surplus = frac(v12 - v1 - v2, 2);
            prop_assert_eq!(x.payoffs()[0].clone(), int(v1) + &surplus);
            prop_assert_eq!(x.payoffs()[1].clone(), int(v2) + surplus);
        }

        #[test]
        fn symmetric_games_get_equal_division(sizes in proptest::collection::vec(-9i64..=9, 4), n in 3u8..=4) {
            // worth depends only on coalition size => all players symmetric
            let worths: Vec<Rational> = (0..1usize << n)
                .map(|mask| {
                    let k = mask.count_ones() as usize;
                    if k == 0 { Rational::zero() } else { int(sizes[k - 1]) }
                })
                .collect();
            let g = CoalitionalGame::new(n, worths, Domain::Unrestricted).unwrap();
            prop_assert_eq!(nucleolus(&g), equal_division(&g));
            prop_assert_eq!(nucleolus(&g), crate::rules::shapley(&g));
        }
    }
}
