//! Exact rational linear programming.
//!
//! Dense two-phase simplex over `BigRational`, largest-coefficient pivoting
//! with a Bland's-rule fallback against cycling.
//! Every outcome carries an arithmetically checkable certificate:
//! an optimal point ships the dual multipliers proving the bound, an
//! infeasible program ships Farkas multipliers recombining the rows into
//! 0 ≤ −1, and an unbounded program ships a feasible point plus an improving
//! recession ray. `verify_certificate` re-checks any of these by direct
//! arithmetic, independent of the pivoting path that produced them.
//!
//! Internally every program is canonicalized to `A x ≤ b` with free
//! variables (≥ rows negated, = rows split, bounds appended as rows), so
//! certificates are vectors of nonnegative multipliers indexed by the
//! canonical rows. The canonicalization order is fixed and reproducible via
//! [`LinearProgram::canonical_rows`].

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<Option<Rational>>,
    pub upper_bounds: Vec<Option<Rational>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("malformed program: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// `dual` is indexed by canonical rows and certifies optimality of
    /// `value` (in the maximize orientation; see `verify_certificate`).
    Optimal {
        point: Vec<Rational>,
        value: Rational,
        dual: Vec<Rational>,
    },
    /// Nonnegative canonical-row multipliers μ with μᵀA = 0 and μᵀb < 0.
    Infeasible { farkas: Vec<Rational> },
    /// A feasible point and a recession ray improving the objective.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            num_vars: n,
            sense,
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![None; n],
            upper_bounds: vec![None; n],
        }
    }

    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn push_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_lower(&mut self, var: usize, bound: Rational) {
        self.lower_bounds[var] = Some(bound);
    }

    pub fn set_upper(&mut self, var: usize, bound: Rational) {
        self.upper_bounds[var] = Some(bound);
    }

    fn validate(&self) -> Result<(), SolverError> {
        if self.objective.len() != self.num_vars {
            return Err(SolverError::Malformed(format!(
                "objective width {} != {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != self.num_vars {
                return Err(SolverError::Malformed(format!(
                    "row {} width {} != {} variables",
                    i,
                    row.coeffs.len(),
                    self.num_vars
                )));
            }
        }
        if self.lower_bounds.len() != self.num_vars || self.upper_bounds.len() != self.num_vars {
            return Err(SolverError::Malformed(
                "bound vectors must match variable count".into(),
            ));
        }
        Ok(())
    }

    /// Fixed-order reduction to `a·x ≤ b` rows: each constraint in order
    /// (= rows contribute the ≤ row then the negated ≥ row), then per
    /// variable the lower bound (negated) then the upper bound.
    pub fn canonical_rows(&self) -> Vec<(Vec<Rational>, Rational)> {
        let mut rows = Vec::new();
        for c in &self.constraints {
            match c.relation {
                Relation::Le => rows.push((c.coeffs.clone(), c.rhs.clone())),
                Relation::Ge => rows.push((
                    c.coeffs.iter().map(|v| -v.clone()).collect(),
                    -c.rhs.clone(),
                )),
                Relation::Eq => {
                    rows.push((c.coeffs.clone(), c.rhs.clone()));
                    rows.push((
                        c.coeffs.iter().map(|v| -v.clone()).collect(),
                        -c.rhs.clone(),
                    ));
                }
            }
        }
        for j in 0..self.num_vars {
            if let Some(l) = &self.lower_bounds[j] {
                let mut coeffs = vec![Rational::zero(); self.num_vars];
                coeffs[j] = -Rational::one();
                rows.push((coeffs, -l.clone()));
            }
            if let Some(u) = &self.upper_bounds[j] {
                let mut coeffs = vec![Rational::zero(); self.num_vars];
                coeffs[j] = Rational::one();
                rows.push((coeffs, u.clone()));
            }
        }
        rows
    }

    /// Objective oriented for maximization.
    fn max_objective(&self) -> Vec<Rational> {
        match self.sense {
            Sense::Maximize => self.objective.clone(),
            Sense::Minimize => self.objective.iter().map(|c| -c.clone()).collect(),
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, SolverError> {
    lp.validate()?;
    let rows = lp.canonical_rows();
    let objective = lp.max_objective();
    let outcome = simplex(lp.num_vars, &rows, &objective);
    Ok(match (lp.sense, outcome) {
        (Sense::Minimize, RawOutcome::Optimal { point, value, dual }) => LpOutcome::Optimal {
            point,
            value: -value,
            dual,
        },
        (_, RawOutcome::Optimal { point, value, dual }) => {
            LpOutcome::Optimal { point, value, dual }
        }
        (_, RawOutcome::Infeasible { farkas }) => LpOutcome::Infeasible { farkas },
        (_, RawOutcome::Unbounded { point, ray }) => LpOutcome::Unbounded { point, ray },
    })
}

/// True iff the certificate arithmetically proves the claimed status.
pub fn verify_certificate(lp: &LinearProgram, out: &LpOutcome) -> bool {
    if lp.validate().is_err() {
        return false;
    }
    let rows = lp.canonical_rows();
    let objective = lp.max_objective();
    match out {
        LpOutcome::Optimal { point, value, dual } => {
            if point.len() != lp.num_vars || dual.len() != rows.len() {
                return false;
            }
            if !satisfies_all(&rows, point) {
                return false;
            }
            let max_value = match lp.sense {
                Sense::Maximize => value.clone(),
                Sense::Minimize => -value.clone(),
            };
            if dot(&objective, point) != max_value {
                return false;
            }
            // Dual feasibility: μ ≥ 0 and μᵀA = c, plus strong duality
            // μᵀb = value, which pins the optimum exactly.
            if dual.iter().any(|m| m.is_negative()) {
                return false;
            }
            for j in 0..lp.num_vars {
                let combo: Rational = rows
                    .iter()
                    .zip(dual)
                    .map(|((a, _), m)| &a[j] * m)
                    .sum();
                if combo != objective[j] {
                    return false;
                }
            }
            let bound: Rational = rows.iter().zip(dual).map(|((_, b), m)| b * m).sum();
            bound == max_value
        }
        LpOutcome::Infeasible { farkas } => {
            if farkas.len() != rows.len() {
                return false;
            }
            if farkas.iter().any(|m| m.is_negative()) {
                return false;
            }
            for j in 0..lp.num_vars {
                let combo: Rational = rows
                    .iter()
                    .zip(farkas)
                    .map(|((a, _), m)| &a[j] * m)
                    .sum();
                if !combo.is_zero() {
                    return false;
                }
            }
            let bound: Rational = rows.iter().zip(farkas).map(|((_, b), m)| b * m).sum();
            bound.is_negative()
        }
        LpOutcome::Unbounded { point, ray } => {
            if point.len() != lp.num_vars || ray.len() != lp.num_vars {
                return false;
            }
            if !satisfies_all(&rows, point) {
                return false;
            }
            for (a, _) in &rows {
                if dot(a, ray).is_positive() {
                    return false;
                }
            }
            dot(&objective, ray).is_positive()
        }
    }
}

/// A program together with the outcome claimed for it; negative answers
/// elsewhere in the crate ship one of these so the caller can re-check the
/// claim without trusting the solver run that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certified {
    pub lp: LinearProgram,
    pub outcome: LpOutcome,
}

impl Certified {
    pub fn verify(&self) -> bool {
        verify_certificate(&self.lp, &self.outcome)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn satisfies_all(rows: &[(Vec<Rational>, Rational)], point: &[Rational]) -> bool {
    rows.iter().all(|(a, b)| dot(a, point) <= *b)
}

enum RawOutcome {
    Optimal {
        point: Vec<Rational>,
        value: Rational,
        dual: Vec<Rational>,
    },
    Infeasible {
        farkas: Vec<Rational>,
    },
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

/// Maximizes `objective` over { x free : a_i·x ≤ b_i }.
///
/// Standard form uses the split x = u − v, one slack per row, and one
/// artificial per row whose right-hand side had to be negated. Column
/// layout: u (n), v (n), slacks (m), artificials.
fn simplex(
    n: usize,
    rows: &[(Vec<Rational>, Rational)],
    objective: &[Rational],
) -> RawOutcome {
    let m = rows.len();
    let slack_start = 2 * n;
    let art_start = slack_start + m;

    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut num_art = 0usize;
    let mut art_row: Vec<usize> = Vec::new(); // artificial index -> row

    for (i, (a, b)) in rows.iter().enumerate() {
        let flip = b.is_negative();
        let mut row = vec![Rational::zero(); art_start];
        for j in 0..n {
            let coeff = if flip { -a[j].clone() } else { a[j].clone() };
            row[n + j] = -coeff.clone();
            row[j] = coeff;
        }
        row[slack_start + i] = if flip { -Rational::one() } else { Rational::one() };
        rhs.push(if flip { -b.clone() } else { b.clone() });
        if flip {
            basis.push(art_start + num_art);
            art_row.push(i);
            num_art += 1;
        } else {
            basis.push(slack_start + i);
        }
        tableau.push(row);
    }
    let total_cols = art_start + num_art;
    for (k, &i) in art_row.iter().enumerate() {
        for row in tableau.iter_mut() {
            row.push(Rational::zero());
        }
        tableau[i][art_start + k] = Rational::one();
    }
    debug_assert!(tableau.iter().all(|r| r.len() == total_cols));

    // Phase 1: maximize -Σ artificials.
    if num_art > 0 {
        let mut cost = vec![Rational::zero(); total_cols];
        for j in art_start..total_cols {
            cost[j] = -Rational::one();
        }
        let mut obj_val = Rational::zero();
        // Price out the artificial basics (cost −1 each).
        for (i, &b) in basis.iter().enumerate() {
            if b >= art_start {
                for j in 0..total_cols {
                    let t = tableau[i][j].clone();
                    if !t.is_zero() {
                        cost[j] += t;
                    }
                }
                obj_val -= rhs[i].clone();
            }
        }
        let res = simplex_loop(
            &mut tableau,
            &mut rhs,
            &mut basis,
            &mut cost,
            &mut obj_val,
            total_cols,
        );
        debug_assert!(res.is_none(), "phase 1 is bounded by 0");
        if obj_val.is_negative() {
            // Infeasible: μ_i = −(reduced cost of slack i), scaled to μᵀb = −1.
            let delta = -obj_val;
            let farkas: Vec<Rational> = (0..m)
                .map(|i| -cost[slack_start + i].clone() / &delta)
                .collect();
            return RawOutcome::Infeasible { farkas };
        }
        // Pivot leftover artificials out of the basis where possible; a row
        // that is zero on every real column is redundant and stays inert.
        for i in 0..m {
            if basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| !tableau[i][j].is_zero()) {
                    pivot(&mut tableau, &mut rhs, &mut basis, &mut cost, &mut obj_val, i, j);
                }
            }
        }
    }

    // Phase 2: the real objective (u gets +c, v gets −c, artificials barred).
    let mut cost = vec![Rational::zero(); total_cols];
    for j in 0..n {
        cost[j] = objective[j].clone();
        cost[n + j] = -objective[j].clone();
    }
    let mut obj_val = Rational::zero();
    for (i, &b) in basis.iter().enumerate() {
        let cb = if b < n {
            objective[b].clone()
        } else if b < 2 * n {
            -objective[b - n].clone()
        } else {
            Rational::zero()
        };
        if !cb.is_zero() {
            for j in 0..total_cols {
                let t = &tableau[i][j] * &cb;
                if !t.is_zero() {
                    cost[j] -= t;
                }
            }
            obj_val += &cb * &rhs[i];
        }
    }
    let unbounded_col = simplex_loop(
        &mut tableau,
        &mut rhs,
        &mut basis,
        &mut cost,
        &mut obj_val,
        art_start, // artificials may not enter
    );

    let point = extract_point(n, &basis, &rhs);
    match unbounded_col {
        Some(j) => {
            let mut ray = vec![Rational::zero(); n];
            if j < n {
                ray[j] += Rational::one();
            } else if j < 2 * n {
                ray[j - n] -= Rational::one();
            }
            for (i, &b) in basis.iter().enumerate() {
                let step = -tableau[i][j].clone();
                if step.is_zero() {
                    continue;
                }
                if b < n {
                    ray[b] += step;
                } else if b < 2 * n {
                    ray[b - n] -= step;
                }
            }
            RawOutcome::Unbounded { point, ray }
        }
        None => {
            let dual: Vec<Rational> = (0..m).map(|i| -cost[slack_start + i].clone()).collect();
            RawOutcome::Optimal {
                point,
                value: obj_val,
                dual,
            }
        }
    }
}

fn extract_point(n: usize, basis: &[usize], rhs: &[Rational]) -> Vec<Rational> {
    let mut point = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            point[b] += rhs[i].clone();
        } else if b < 2 * n {
            point[b - n] -= rhs[i].clone();
        }
    }
    point
}

/// Entering column: largest positive reduced cost (fast in practice) until
/// the iteration budget is spent, then Bland's smallest-index rule, which
/// cannot cycle, so termination is guaranteed from any basis. Leaving row:
/// minimum ratio, ties broken by smallest basic variable index. Returns
/// `Some(column)` if that column certifies unboundedness.
fn simplex_loop(
    tableau: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    cost: &mut [Rational],
    obj_val: &mut Rational,
    enterable_cols: usize,
) -> Option<usize> {
    let dantzig_budget = 4 * (tableau.len() + enterable_cols) + 64;
    let mut iterations = 0usize;
    loop {
        let entering = if iterations < dantzig_budget {
            (0..enterable_cols)
                .filter(|&j| cost[j].is_positive())
                .max_by(|&a, &b| cost[a].cmp(&cost[b]).then(b.cmp(&a)))
        } else {
            (0..enterable_cols).find(|&j| cost[j].is_positive())
        };
        iterations += 1;
        let Some(j) = entering else {
            return None;
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for i in 0..tableau.len() {
            if tableau[i][j].is_positive() {
                let ratio = &rhs[i] / &tableau[i][j];
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leaving else {
            return Some(j);
        };
        pivot(tableau, rhs, basis, cost, obj_val, i, j);
    }
}

fn pivot(
    tableau: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    cost: &mut [Rational],
    obj_val: &mut Rational,
    row: usize,
    col: usize,
) {
    let pivot_val = tableau[row][col].clone();
    if !pivot_val.is_one() {
        for v in tableau[row].iter_mut() {
            if !v.is_zero() {
                *v /= &pivot_val;
            }
        }
        rhs[row] /= &pivot_val;
    }
    let nonzero_cols: Vec<usize> = (0..tableau[row].len())
        .filter(|&j| !tableau[row][j].is_zero())
        .collect();
    let (pivot_row, pivot_rhs) = {
        let r = &tableau[row];
        (r.clone(), rhs[row].clone())
    };
    for i in 0..tableau.len() {
        if i == row {
            continue;
        }
        let factor = tableau[i][col].clone();
        if factor.is_zero() {
            continue;
        }
        for &j in &nonzero_cols {
            let delta = &factor * &pivot_row[j];
            tableau[i][j] -= delta;
        }
        rhs[i] -= &factor * &pivot_rhs;
    }
    let factor = cost[col].clone();
    if !factor.is_zero() {
        for &j in &nonzero_cols {
            let delta = &factor * &pivot_row[j];
            cost[j] -= delta;
        }
        *obj_val += &factor * &pivot_rhs;
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn one_var_lp() -> LinearProgram {
        LinearProgram::maximize(vec![int(1)])
    }

    #[test]
    fn bounded_optimum() {
        let mut lp = one_var_lp();
        lp.push_row(vec![int(1)], Relation::Le, int(3));
        lp.set_lower(0, int(0));
        let out = solve(&lp).unwrap();
        match &out {
            LpOutcome::Optimal { point, value, .. } => {
                assert_eq!(point, &[int(3)]);
                assert_eq!(value, &int(3));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        assert!(verify_certificate(&lp, &out));
    }

    #[test]
    fn infeasible_with_unit_multipliers() {
        let mut lp = one_var_lp();
        lp.push_row(vec![int(1)], Relation::Le, int(-1));
        lp.set_lower(0, int(0));
        let out = solve(&lp).unwrap();
        match &out {
            LpOutcome::Infeasible { farkas } => {
                assert_eq!(farkas, &[int(1), int(1)]);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
        assert!(verify_certificate(&lp, &out));
    }

    #[test]
    fn unbounded_with_unit_ray() {
        let mut lp = one_var_lp();
        lp.set_lower(0, int(0));
        let out = solve(&lp).unwrap();
        match &out {
            LpOutcome::Unbounded { ray, .. } => assert_eq!(ray, &[int(1)]),
            other => panic!("expected unbounded, got {other:?}"),
        }
        assert!(verify_certificate(&lp, &out));
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let mut lp = one_var_lp();
        lp.push_row(vec![int(1)], Relation::Le, int(3));
        lp.set_lower(0, int(0));
        let out = solve(&lp).unwrap();
        let LpOutcome::Optimal { value, dual, .. } = out else {
            panic!()
        };
        let bad = LpOutcome::Optimal {
            point: vec![int(5)],
            value,
            dual,
        };
        assert!(!verify_certificate(&lp, &bad));

        let mut infeasible = one_var_lp();
        infeasible.push_row(vec![int(1)], Relation::Le, int(-1));
        infeasible.set_lower(0, int(0));
        let bad = LpOutcome::Infeasible {
            farkas: vec![int(1), int(-1)],
        };
        assert!(!verify_certificate(&infeasible, &bad));
    }

    #[test]
    fn minimize_and_equalities() {
        // minimize x + y s.t. x + y = 2, x ≥ 0, y ≥ 0.
        let mut lp = LinearProgram::minimize(vec![int(1), int(1)]);
        lp.push_row(vec![int(1), int(1)], Relation::Eq, int(2));
        lp.set_lower(0, int(0));
        lp.set_lower(1, int(0));
        let out = solve(&lp).unwrap();
        match &out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, &int(2)),
            other => panic!("expected optimal, got {other:?}"),
        }
        assert!(verify_certificate(&lp, &out));
    }

    #[test]
    fn free_variables_and_ge_rows() {
        // maximize -x s.t. x ≥ -4 (x free): optimum 4 at x = -4.
        let mut lp = LinearProgram::maximize(vec![int(-1)]);
        lp.push_row(vec![int(1)], Relation::Ge, int(-4));
        let out = solve(&lp).unwrap();
        match &out {
            LpOutcome::Optimal { point, value, .. } => {
                assert_eq!(point, &[int(-4)]);
                assert_eq!(value, &int(4));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        assert!(verify_certificate(&lp, &out));
    }

    #[test]
    fn zero_variable_program() {
        let lp = LinearProgram::maximize(vec![]);
        let out = solve(&lp).unwrap();
        assert!(matches!(out, LpOutcome::Optimal { .. }));
        assert!(verify_certificate(&lp, &out));
    }

    #[test]
    fn degenerate_cycling_guard() {
        // A classic degenerate instance; Bland must terminate.
        let mut lp = LinearProgram::maximize(vec![
            crate::rational::rat(3, 4),
            int(-150),
            crate::rational::rat(1, 50),
            int(-6),
        ]);
        lp.push_row(
            vec![
                crate::rational::rat(1, 4),
                int(-60),
                crate::rational::rat(-1, 25),
                int(9),
            ],
            Relation::Le,
            int(0),
        );
        lp.push_row(
            vec![
                crate::rational::rat(1, 2),
                int(-90),
                crate::rational::rat(-1, 50),
                int(3),
            ],
            Relation::Le,
            int(0),
        );
        lp.push_row(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
        for j in 0..4 {
            lp.set_lower(j, int(0));
        }
        let out = solve(&lp).unwrap();
        match &out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, &crate::rational::rat(1, 20)),
            other => panic!("expected optimal, got {other:?}"),
        }
        assert!(verify_certificate(&lp, &out));
    }
}
