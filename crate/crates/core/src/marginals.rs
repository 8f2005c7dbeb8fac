//! Couplings: probabilities on a finite product space, equivalent to a
//! reference joint measure, with prescribed row and column marginals.
//!
//! The problem has two equivalent faces — a transportation LP with a floor
//! variable, and an equivalent-super-martingale-measure search on the linear
//! space spanned by centered row/column indicators — and both are exposed so
//! tests can cross-validate them.

use num_traits::{One, Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

use crate::solver::Certified;
use crate::criteria::{self, CriteriaError, Extended};
use crate::rational::Rational;
use crate::solver::{self, LinearProgram, LpOutcome, Relation};
use crate::space::{
    ConeKind, ConeSpec, FiniteProbSpace, Measure, RandomVariable, SpaceError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarginalError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error("joint weights must be a {rows}×{cols} grid, got row {row} of length {got}")]
    RaggedGrid {
        rows: usize,
        cols: usize,
        row: usize,
        got: usize,
    },
    #[error("row `{0}` carries no joint mass")]
    EmptyRow(String),
    #[error("column `{0}` carries no joint mass")]
    EmptyColumn(String),
    #[error("marginal on {axis} has {got} weights, expected {expected}")]
    MarginalLength {
        axis: &'static str,
        got: usize,
        expected: usize,
    },
}

/// A product Ω₁ × Ω₂ with a joint reference measure. Null cells are dropped:
/// the carried `FiniteProbSpace` has one atom `"row|col"` per support cell.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    rows: Vec<String>,
    cols: Vec<String>,
    joint: Arc<FiniteProbSpace>,
    /// (row index, column index) of each joint atom, in atom order.
    cells: Vec<(usize, usize)>,
}

impl ProductSpace {
    /// `weights[i][j]` is the reference mass of cell (rowsᵢ, colsⱼ); zero
    /// cells are outside the support. Every row and column must carry mass,
    /// otherwise a prescribed marginal on it could never be matched by an
    /// equivalent measure.
    pub fn new(
        rows: Vec<String>,
        cols: Vec<String>,
        weights: Vec<Vec<Rational>>,
    ) -> Result<ProductSpace, MarginalError> {
        for (i, row) in weights.iter().enumerate() {
            if weights.len() != rows.len() || row.len() != cols.len() {
                return Err(MarginalError::RaggedGrid {
                    rows: rows.len(),
                    cols: cols.len(),
                    row: i,
                    got: row.len(),
                });
            }
        }
        let mut labels = Vec::new();
        let mut cell_weights = Vec::new();
        let mut cells = Vec::new();
        for (i, row) in weights.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                if !w.is_zero() {
                    labels.push(format!("{}|{}", rows[i], cols[j]));
                    cell_weights.push(w.clone());
                    cells.push((i, j));
                }
            }
        }
        for (i, label) in rows.iter().enumerate() {
            if !cells.iter().any(|&(r, _)| r == i) {
                return Err(MarginalError::EmptyRow(label.clone()));
            }
        }
        for (j, label) in cols.iter().enumerate() {
            if !cells.iter().any(|&(_, c)| c == j) {
                return Err(MarginalError::EmptyColumn(label.clone()));
            }
        }
        let joint = FiniteProbSpace::new(labels, cell_weights)?;
        Ok(ProductSpace {
            rows,
            cols,
            joint,
            cells,
        })
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn joint(&self) -> &Arc<FiniteProbSpace> {
        &self.joint
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// Row and column marginals of a measure on the joint space.
    pub fn marginals_of(&self, p: &Measure) -> (Vec<Rational>, Vec<Rational>) {
        let mut row = vec![Rational::zero(); self.rows.len()];
        let mut col = vec![Rational::zero(); self.cols.len()];
        for (atom, &(i, j)) in self.cells.iter().enumerate() {
            row[i] += p.weight(atom);
            col[j] += p.weight(atom);
        }
        (row, col)
    }
}

/// Prescribed marginals (T₁ on rows, T₂ on columns), each summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalPair {
    t1: Vec<Rational>,
    t2: Vec<Rational>,
}

impl MarginalPair {
    pub fn new(
        ps: &ProductSpace,
        t1: Vec<Rational>,
        t2: Vec<Rational>,
    ) -> Result<MarginalPair, MarginalError> {
        check_marginal("rows", &t1, ps.rows.len())?;
        check_marginal("columns", &t2, ps.cols.len())?;
        Ok(MarginalPair { t1, t2 })
    }

    pub fn t1(&self) -> &[Rational] {
        &self.t1
    }

    pub fn t2(&self) -> &[Rational] {
        &self.t2
    }
}

fn check_marginal(
    axis: &'static str,
    t: &[Rational],
    expected: usize,
) -> Result<(), MarginalError> {
    if t.len() != expected {
        return Err(MarginalError::MarginalLength {
            axis,
            got: t.len(),
            expected,
        });
    }
    // Reuse the measure validation (nonnegative, sums to 1) on a throwaway
    // uniform space of the right size.
    let space = FiniteProbSpace::uniform(
        (0..expected).map(|i| format!("a{i}")).collect(),
    )?;
    Measure::new(&space, t.to_vec())?;
    Ok(())
}

/// The linear space spanned by the centered indicators
/// {I_{row=a} − T₁(a)} ∪ {I_{col=b} − T₂(b)}. A measure P on the joint space
/// annihilates every generator iff its marginals are exactly (T₁, T₂), so an
/// equivalent super-martingale measure for this space is a coupling.
pub fn build_marginal_cone(
    ps: &ProductSpace,
    m: &MarginalPair,
) -> Result<ConeSpec, MarginalError> {
    let mut generators = Vec::with_capacity(ps.rows.len() + ps.cols.len());
    for (i, t) in m.t1.iter().enumerate() {
        let atoms: Vec<usize> = ps
            .cells
            .iter()
            .enumerate()
            .filter(|(_, &(r, _))| r == i)
            .map(|(a, _)| a)
            .collect();
        let indicator = RandomVariable::indicator(&ps.joint, &atoms);
        generators.push(indicator.add(&RandomVariable::constant(&ps.joint, -t.clone()))?);
    }
    for (j, t) in m.t2.iter().enumerate() {
        let atoms: Vec<usize> = ps
            .cells
            .iter()
            .enumerate()
            .filter(|(_, &(_, c))| c == j)
            .map(|(a, _)| a)
            .collect();
        let indicator = RandomVariable::indicator(&ps.joint, &atoms);
        generators.push(indicator.add(&RandomVariable::constant(&ps.joint, -t.clone()))?);
    }
    Ok(ConeSpec::new(&ps.joint, generators, ConeKind::LinearSpace)?)
}

/// Outcome of the direct coupling search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CouplingResult {
    /// An equivalent coupling with the maximal floor τ in P ≥ τ·P₀.
    Found { coupling: Measure, floor: Rational },
    /// No equivalent coupling. The certificate is either Farkas
    /// infeasibility of the marginal system, or a dual bound proving the
    /// maximal floor is 0 (absolutely continuous solutions exist but all
    /// vanish somewhere on the support).
    NoCoupling { certificate: Certified },
}

/// Maximizes τ subject to P ≥ τ·P₀ on the support cells and exact row and
/// column sums. Off-support cells are eliminated up front, not constrained.
pub fn couple_with_marginals(
    ps: &ProductSpace,
    m: &MarginalPair,
) -> Result<CouplingResult, MarginalError> {
    let n = ps.joint.atom_count();
    let tau = n; // index of the floor variable
    let mut objective = vec![Rational::zero(); n + 1];
    objective[tau] = Rational::one();
    let mut lp = LinearProgram::maximize(objective);
    for (i, t) in m.t1.iter().enumerate() {
        let mut row = vec![Rational::zero(); n + 1];
        for (atom, &(r, _)) in ps.cells.iter().enumerate() {
            if r == i {
                row[atom] = Rational::one();
            }
        }
        lp.push_row(row, Relation::Eq, t.clone());
    }
    for (j, t) in m.t2.iter().enumerate() {
        let mut row = vec![Rational::zero(); n + 1];
        for (atom, &(_, c)) in ps.cells.iter().enumerate() {
            if c == j {
                row[atom] = Rational::one();
            }
        }
        lp.push_row(row, Relation::Eq, t.clone());
    }
    for atom in 0..n {
        let mut row = vec![Rational::zero(); n + 1];
        row[atom] = Rational::one();
        row[tau] = -ps.joint.weight(atom).clone();
        lp.push_row(row, Relation::Ge, Rational::zero());
        lp.set_lower(atom, Rational::zero());
    }
    lp.set_lower(tau, Rational::zero());
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, value, dual } => {
            if value.is_positive() {
                let coupling = Measure::new(&ps.joint, point[..n].to_vec())?;
                Ok(CouplingResult::Found {
                    coupling,
                    floor: value,
                })
            } else {
                Ok(CouplingResult::NoCoupling {
                    certificate: Certified {
                        lp,
                        outcome: LpOutcome::Optimal { point, value, dual },
                    },
                })
            }
        }
        outcome @ LpOutcome::Infeasible { .. } => Ok(CouplingResult::NoCoupling {
            certificate: Certified { lp, outcome },
        }),
        LpOutcome::Unbounded { .. } => unreachable!("τ is bounded by 1"),
    }
}

/// The worst-case ratio sup |E_Q(X)| / E_Q|X| over the marginal linear
/// space; a value < 1 certifies that a coupling equivalent to P₀ exists.
pub fn evaluate_inf_criterion(
    ps: &ProductSpace,
    m: &MarginalPair,
    q: &Measure,
) -> Result<Extended, MarginalError> {
    let cone = build_marginal_cone(ps, m)?;
    Ok(criteria::c_min_b_star_star(&cone, q)?)
}
