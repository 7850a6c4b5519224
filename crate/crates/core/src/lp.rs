//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex over arbitrary-precision rationals,
//! pivoting by Bland's rule so it cannot cycle. Built for desk-scale
//! programs (the nucleolus iteration solves many programs with at most a
//! few hundred rows); exactness matters more than speed here, since the
//! callers decide equalities, not approximations.
//!
//! Variables are free unless bounds are set. Constraints are `≤` or `=`;
//! encode `a·x ≥ b` as `−a·x ≤ −b` or with a lower bound.

use num_traits::{One, Signed, Zero};

use crate::ratio::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

/// `minimize objective · x` subject to linear constraints and optional
/// per-variable bounds.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    bounds: Vec<VarBounds>,
}

/// Exact outcome of a solve. An `Optimal` solution satisfies every
/// constraint exactly; this is re-verified before returning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { solution: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn minimize(objective: Vec<Rational>) -> Result<Self> {
        if objective.is_empty() {
            return Err(Error::MalformedProgram("a program needs at least one variable".into()));
        }
        let nv = objective.len();
        Ok(LinearProgram { objective, constraints: Vec::new(), bounds: vec![VarBounds::default(); nv] })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::MalformedProgram(format!(
                "constraint has {} coefficients, program has {} variables",
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(())
    }

    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.add_constraint(coeffs, Relation::Le, rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.add_constraint(coeffs, Relation::Eq, rhs)
    }

    pub fn set_lower(&mut self, var: usize, bound: Rational) -> Result<()> {
        if var >= self.num_vars() {
            return Err(Error::MalformedProgram(format!("no variable {var}")));
        }
        self.bounds[var].lower = Some(bound);
        Ok(())
    }

    pub fn set_upper(&mut self, var: usize, bound: Rational) -> Result<()> {
        if var >= self.num_vars() {
            return Err(Error::MalformedProgram(format!("no variable {var}")));
        }
        self.bounds[var].upper = Some(bound);
        Ok(())
    }

    pub fn solve(&self) -> LpOutcome {
        solve(self)
    }

    fn satisfied_by(&self, x: &[Rational]) -> bool {
        for c in &self.constraints {
            let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let ok = match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
            };
            if !ok {
                return false;
            }
        }
        self.bounds.iter().zip(x).all(|(b, v)| {
            b.lower.as_ref().is_none_or(|l| v >= l) && b.upper.as_ref().is_none_or(|u| v <= u)
        })
    }
}

/// Solves the program exactly.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let outcome = simplex(lp);
    if let LpOutcome::Optimal { solution, value } = &outcome {
        // a claimed optimum that violates a constraint is a solver bug,
        // and silent wrong answers would poison every audit downstream
        assert!(lp.satisfied_by(solution), "simplex returned an infeasible point");
        let recomputed: Rational = lp.objective.iter().zip(solution).map(|(c, v)| c * v).sum();
        assert_eq!(&recomputed, value, "simplex objective value mismatch");
    }
    outcome
}

/// True iff constraint `index` is tight in every optimal solution,
/// decided by a secondary program maximizing the constraint's slack while
/// holding the objective at its optimal value.
pub fn tightness_certificate(lp: &LinearProgram, index: usize) -> Result<bool> {
    match solve(lp) {
        LpOutcome::Optimal { value, .. } => tightness_certificate_at(lp, index, &value),
        _ => Err(Error::NoOptimum),
    }
}

/// [`tightness_certificate`] for callers that already know the optimal
/// objective value, sparing the primary re-solve.
pub fn tightness_certificate_at(lp: &LinearProgram, index: usize, optimal: &Rational) -> Result<bool> {
    let constraint = lp
        .constraints
        .get(index)
        .ok_or_else(|| Error::MalformedProgram(format!("no constraint {index}")))?;
    if constraint.relation == Relation::Eq {
        return Ok(true);
    }
    // minimize a_k·x over the optimal face; slack is maximal where a_k·x
    // is minimal, and max slack 0 means tight everywhere
    let mut probe = lp.clone();
    probe.objective = constraint.coeffs.clone();
    probe.add_eq(lp.objective.clone(), optimal.clone())?;
    match solve(&probe) {
        LpOutcome::Optimal { value, .. } => Ok(value == constraint.rhs),
        LpOutcome::Unbounded => Ok(false),
        LpOutcome::Infeasible => Err(Error::NoOptimum),
    }
}

// -- simplex internals ------------------------------------------------

/// How an original variable maps onto its nonnegative tableau column.
#[derive(Clone, Debug)]
enum VarMap {
    /// `x = lower + y`
    Shifted(Rational),
    /// `x = upper − y`
    Mirrored(Rational),
    /// `x = y − Y` with the shared shift column `Y`
    Free,
}

struct Standardized {
    rows: Vec<(Vec<Rational>, Relation, Rational)>,
    maps: Vec<VarMap>,
    shift_col: Option<usize>,
    ncols: usize,
}

fn standardize(lp: &LinearProgram) -> std::result::Result<Standardized, LpOutcome> {
    let nv = lp.num_vars();
    let mut maps = Vec::with_capacity(nv);
    let any_free = lp.bounds.iter().any(|b| b.lower.is_none() && b.upper.is_none());
    let shift_col = any_free.then_some(nv);
    let ncols = nv + usize::from(any_free);
    let mut extra_rows: Vec<(usize, Rational)> = Vec::new(); // y_j <= cap

    for (j, b) in lp.bounds.iter().enumerate() {
        match (&b.lower, &b.upper) {
            (Some(l), Some(u)) => {
                if l > u {
                    return Err(LpOutcome::Infeasible);
                }
                extra_rows.push((j, u - l));
                maps.push(VarMap::Shifted(l.clone()));
            }
            (Some(l), None) => maps.push(VarMap::Shifted(l.clone())),
            (None, Some(u)) => maps.push(VarMap::Mirrored(u.clone())),
            (None, None) => maps.push(VarMap::Free),
        }
    }

    let mut rows = Vec::with_capacity(lp.constraints.len() + extra_rows.len());
    for c in &lp.constraints {
        let mut coeffs = vec![Rational::zero(); ncols];
        let mut rhs = c.rhs.clone();
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                VarMap::Shifted(l) => {
                    coeffs[j] = a.clone();
                    rhs -= a * l;
                }
                VarMap::Mirrored(u) => {
                    coeffs[j] = -a.clone();
                    rhs -= a * u;
                }
                VarMap::Free => {
                    coeffs[j] = a.clone();
                    let col = shift_col.expect("free var implies shift column");
                    let acc = coeffs[col].clone();
                    coeffs[col] = acc - a;
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for (j, cap) in extra_rows {
        let mut coeffs = vec![Rational::zero(); ncols];
        coeffs[j] = Rational::one();
        rows.push((coeffs, Relation::Le, cap));
    }

    // drop identically-zero rows, catching outright contradictions
    let mut kept = Vec::with_capacity(rows.len());
    for (coeffs, relation, rhs) in rows {
        if coeffs.iter().all(Zero::is_zero) {
            let feasible = match relation {
                Relation::Le => !rhs.is_negative(),
                Relation::Eq => rhs.is_zero(),
            };
            if !feasible {
                return Err(LpOutcome::Infeasible);
            }
            continue;
        }
        kept.push((coeffs, relation, rhs));
    }

    Ok(Standardized { rows: kept, maps, shift_col, ncols })
}

struct Tableau {
    /// `m × (width + 1)` matrix, last column is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row, same width; last entry is minus the objective.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
    /// Columns the entering rule may consider (artificials get blocked).
    allowed: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone();
        for entry in self.rows[r].iter_mut() {
            if !entry.is_zero() {
                *entry /= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (dst, src) in row.iter_mut().zip(&pivot_row) {
                if !src.is_zero() {
                    *dst -= &factor * src;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let factor = self.cost[c].clone();
            for (dst, src) in self.cost.iter_mut().zip(&pivot_row) {
                if !src.is_zero() {
                    *dst -= &factor * src;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: entering column is the lowest-index allowed column
    /// with negative reduced cost; leaving row breaks ratio ties by the
    /// lowest basic column index.
    fn run(&mut self) -> Step {
        loop {
            let entering = (0..self.width)
                .find(|&j| self.allowed[j] && self.cost[j].is_negative());
            let Some(c) = entering else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][c].is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][self.width] / &self.rows[r][c];
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Step::Unbounded;
            };
            self.pivot(r, c);
        }
    }

    /// Rebuilds the reduced-cost row for a new objective over columns.
    fn price(&mut self, objective: &[Rational]) {
        let mut cost = objective.to_vec();
        cost.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let factor = cost[b].clone();
            for (dst, src) in cost.iter_mut().zip(&self.rows[r]) {
                if !src.is_zero() {
                    *dst -= &factor * src;
                }
            }
        }
        self.cost = cost;
    }
}

fn simplex(lp: &LinearProgram) -> LpOutcome {
    let std = match standardize(lp) {
        Ok(s) => s,
        Err(outcome) => return outcome,
    };
    let m = std.rows.len();
    let ncols = std.ncols;

    // slacks for ≤ rows, then artificials wherever no identity column
    // comes for free (negated slack or equality row)
    let nslack = std.rows.iter().filter(|r| r.1 == Relation::Le).count();
    let mut width = ncols + nslack;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];
    let mut needs_artificial = Vec::new();
    let mut slack_idx = 0;

    for (r, (coeffs, relation, rhs)) in std.rows.iter().enumerate() {
        let negate = rhs.is_negative();
        let mut row = vec![Rational::zero(); width + 1];
        for (j, a) in coeffs.iter().enumerate() {
            if !a.is_zero() {
                row[j] = if negate { -a.clone() } else { a.clone() };
            }
        }
        if *relation == Relation::Le {
            let col = ncols + slack_idx;
            slack_idx += 1;
            row[col] = if negate { -Rational::one() } else { Rational::one() };
            if !negate {
                basis[r] = col;
            }
        }
        *row.last_mut().unwrap() = if negate { -rhs.clone() } else { rhs.clone() };
        if basis[r] == usize::MAX {
            needs_artificial.push(r);
        }
        rows.push(row);
    }

    let first_artificial = width;
    width += needs_artificial.len();
    for row in &mut rows {
        let rhs = row.pop().expect("rhs present");
        row.resize(width, Rational::zero());
        row.push(rhs);
    }
    for (k, &r) in needs_artificial.iter().enumerate() {
        rows[r][first_artificial + k] = Rational::one();
        basis[r] = first_artificial + k;
    }

    let mut tableau = Tableau {
        rows,
        cost: vec![Rational::zero(); width + 1],
        basis,
        width,
        allowed: vec![true; width],
    };

    if !needs_artificial.is_empty() {
        // phase 1: minimize the artificial total
        let mut phase1 = vec![Rational::zero(); width];
        for k in 0..needs_artificial.len() {
            phase1[first_artificial + k] = Rational::one();
        }
        tableau.price(&phase1);
        match tableau.run() {
            Step::Unbounded => unreachable!("phase-1 objective is bounded below by zero"),
            Step::Optimal => {}
        }
        let infeasibility = -tableau.cost[width].clone();
        if !infeasibility.is_zero() {
            return LpOutcome::Infeasible;
        }
        // pivot leftover artificials out of the basis; a row with no
        // other nonzero entry is redundant and can be ignored
        for r in 0..tableau.rows.len() {
            if tableau.basis[r] < first_artificial {
                continue;
            }
            if let Some(c) = (0..first_artificial).find(|&j| !tableau.rows[r][j].is_zero()) {
                tableau.pivot(r, c);
            }
        }
        for j in first_artificial..width {
            tableau.allowed[j] = false;
        }
    }

    // phase 2
    let mut objective = vec![Rational::zero(); width];
    for (j, map) in std.maps.iter().enumerate() {
        match map {
            VarMap::Shifted(_) | VarMap::Free => objective[j] = lp.objective[j].clone(),
            VarMap::Mirrored(_) => objective[j] = -lp.objective[j].clone(),
        }
        if matches!(map, VarMap::Free) {
            let col = std.shift_col.expect("shift column");
            let acc = objective[col].clone();
            objective[col] = acc - &lp.objective[j];
        }
    }
    tableau.price(&objective);
    match tableau.run() {
        Step::Unbounded => return LpOutcome::Unbounded,
        Step::Optimal => {}
    }

    // read out y, undo the substitutions
    let mut y = vec![Rational::zero(); width];
    for (r, &b) in tableau.basis.iter().enumerate() {
        if b != usize::MAX {
            y[b] = tableau.rows[r][width].clone();
        }
    }
    let shift = std.shift_col.map(|c| y[c].clone()).unwrap_or_else(Rational::zero);
    let solution: Vec<Rational> = std
        .maps
        .iter()
        .enumerate()
        .map(|(j, map)| match map {
            VarMap::Shifted(l) => l + &y[j],
            VarMap::Mirrored(u) => u - &y[j],
            VarMap::Free => &y[j] - &shift,
        })
        .collect();
    let value: Rational = lp.objective.iter().zip(&solution).map(|(c, v)| c * v).sum();
    LpOutcome::Optimal { solution, value }
}
