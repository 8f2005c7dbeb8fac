//! Decision procedures for the testable conditions: no-arbitrage, norm-closure
//! no-arbitrage, tightness of D = {X ∈ L : X ≥ −1}, the minimal constants in
//! E_Q(X) ≤ k·ess sup(−X) and E_Q(X) ≤ k·E_Q(X⁻), the |E_Q(X)| ≤ c·E_Q|X|
//! constant for linear spaces, and the exact k ↔ c conversions.
//!
//! Every "for all X ∈ L" statement is decided by optimizing over the
//! coefficient polytope, never by sampling cone members. The conditions that
//! coincide on finite spaces (NA, (a), (d)) are deliberately implemented as
//! separate programs; their agreement is asserted by tests, not assumed here.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, Rational};
use crate::solver::{self, LinearProgram, LpOutcome, Relation};
use crate::space::{
    self, ConeKind, ConeSpec, Measure, RandomVariable, SpaceError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CriteriaError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error("Q is not equivalent to the reference measure (witness atoms {0:?})")]
    QNotEquivalent(Vec<String>),
    #[error("operation requires a linear space, got a convex cone")]
    RequiresLinearSpace,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("constant out of range: {0}")]
    ConstantOutOfRange(String),
}

/// A finite value or an explicit +∞ status; never a sentinel number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Finite(Rational),
    Infinite,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }
}

/// Verdict of an arbitrage-style check, with the offending payoff when the
/// condition fails.
#[derive(Debug, Clone, PartialEq)]
pub struct NaReport {
    pub holds: bool,
    pub witness: Option<RandomVariable>,
}

/// A minimal constant together with the payoff attaining it (finite case) or
/// the improving ray forcing +∞.
#[derive(Debug, Clone, PartialEq)]
pub struct KReport {
    pub value: Extended,
    pub attaining: Option<RandomVariable>,
    pub ray: Option<RandomVariable>,
    pub q: Measure,
}

fn coefficient_lp(cone: &ConeSpec, objective: Vec<Rational>, extra_vars: usize) -> LinearProgram {
    let g = cone.generators().len();
    debug_assert_eq!(objective.len(), g + extra_vars);
    let mut lp = LinearProgram::maximize(objective);
    if cone.kind() == ConeKind::ConvexCone {
        for j in 0..g {
            lp.set_lower(j, Rational::zero());
        }
    }
    lp
}

fn generator_expectations(cone: &ConeSpec, q: &Measure) -> Result<Vec<Rational>, SpaceError> {
    cone.generators()
        .iter()
        .map(|x| space::expectation(q, x))
        .collect()
}

fn require_equivalent(q: &Measure) -> Result<(), CriteriaError> {
    let p0 = q.space().reference_measure();
    let rel = space::relate(q, &p0)?;
    if rel.result != space::RelationResult::Equivalent {
        return Err(CriteriaError::QNotEquivalent(rel.witness));
    }
    Ok(())
}

/// Condition (NA): no X ∈ L with X ≥ 0 atomwise and X ≠ 0.
///
/// LP: maximize Σ_ω X(ω) over the coefficients subject to X ≥ 0 atomwise and
/// Σ_ω X(ω) ≤ 1; the condition holds iff the optimum is 0.
pub fn check_na(cone: &ConeSpec) -> Result<NaReport, CriteriaError> {
    let g = cone.generators().len();
    let atoms = cone.space().atom_count();
    let col_sums: Vec<Rational> = cone
        .generators()
        .iter()
        .map(|x| x.values().iter().sum())
        .collect();
    let mut lp = coefficient_lp(cone, col_sums.clone(), 0);
    for w in 0..atoms {
        let row: Vec<Rational> = cone
            .generators()
            .iter()
            .map(|x| x.value(w).clone())
            .collect();
        lp.push_row(row, Relation::Ge, Rational::zero());
    }
    lp.push_row(col_sums, Relation::Le, Rational::one());
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, value, .. } => {
            if value.is_zero() {
                Ok(NaReport {
                    holds: true,
                    witness: None,
                })
            } else {
                let witness = cone.combine(&point[..g])?;
                Ok(NaReport {
                    holds: false,
                    witness: Some(witness),
                })
            }
        }
        other => unreachable!("NA program is feasible and bounded: {other:?}"),
    }
}

/// Minimal k in E_Q(X) ≤ k·E_Q(X⁻) over the cone, by the epigraph program
/// maximize E_Q(X) with s_ω ≥ −X(ω), s_ω ≥ 0 and Σ Q(ω)·s_ω ≤ 1.
///
/// Slack in s only tightens the budget row, so the optimum is attained with
/// s = X⁻ and the normalized value is exactly sup E_Q(X)/E_Q(X⁻); positive
/// homogeneity justifies the unit budget. Unbounded means +∞, witnessed by a
/// ray with E_Q(X) > 0 and E_Q(X⁻) = 0.
pub fn min_k_b_star(cone: &ConeSpec, q: &Measure) -> Result<KReport, CriteriaError> {
    require_equivalent(q)?;
    let g = cone.generators().len();
    let atoms = cone.space().atom_count();
    let mut objective = generator_expectations(cone, q)?;
    objective.extend(std::iter::repeat_n(Rational::zero(), atoms));
    let mut lp = coefficient_lp(cone, objective, atoms);
    for w in 0..atoms {
        // X(ω) + s_ω ≥ 0
        let mut row: Vec<Rational> = cone
            .generators()
            .iter()
            .map(|x| x.value(w).clone())
            .collect();
        row.extend((0..atoms).map(|i| {
            if i == w {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        lp.push_row(row, Relation::Ge, Rational::zero());
        lp.set_lower(g + w, Rational::zero());
    }
    let mut budget = vec![Rational::zero(); g];
    budget.extend(q.weights().iter().cloned());
    lp.push_row(budget, Relation::Le, Rational::one());
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, value, .. } => Ok(KReport {
            value: Extended::Finite(value),
            attaining: Some(cone.combine(&point[..g])?),
            ray: None,
            q: q.clone(),
        }),
        LpOutcome::Unbounded { ray, .. } => Ok(KReport {
            value: Extended::Infinite,
            attaining: None,
            ray: Some(cone.combine(&ray[..g])?),
            q: q.clone(),
        }),
        LpOutcome::Infeasible { .. } => unreachable!("origin is always feasible"),
    }
}

/// Maximal E_Q(X) over D = {X ∈ L : X ≥ −1 atomwise}; +∞ iff unbounded.
pub fn min_k_b(cone: &ConeSpec, q: &Measure) -> Result<KReport, CriteriaError> {
    require_equivalent(q)?;
    let g = cone.generators().len();
    let atoms = cone.space().atom_count();
    let objective = generator_expectations(cone, q)?;
    let mut lp = coefficient_lp(cone, objective, 0);
    for w in 0..atoms {
        let row: Vec<Rational> = cone
            .generators()
            .iter()
            .map(|x| x.value(w).clone())
            .collect();
        lp.push_row(row, Relation::Ge, -Rational::one());
    }
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, value, .. } => Ok(KReport {
            value: Extended::Finite(value),
            attaining: Some(cone.combine(&point[..g])?),
            ray: None,
            q: q.clone(),
        }),
        LpOutcome::Unbounded { ray, .. } => Ok(KReport {
            value: Extended::Infinite,
            attaining: None,
            ray: Some(cone.combine(&ray[..g])?),
            q: q.clone(),
        }),
        LpOutcome::Infeasible { .. } => unreachable!("origin is always feasible"),
    }
}

/// Condition (d): on a finite space, tightness of the laws of D means D is
/// bounded, and D is unbounded iff the recession cone L ∩ {X ≥ 0} has a
/// nonzero element.
///
/// The program searches for such a recession ray directly, with the
/// coefficients normalized (Σλ ≤ 1 for cones, λ ∈ [−1, 1] for linear spaces)
/// so it is a different LP from `check_na`; the finite-space coincidence of
/// the two verdicts is a fact under test, not shared code.
pub fn check_condition_d(cone: &ConeSpec) -> Result<NaReport, CriteriaError> {
    let g = cone.generators().len();
    let atoms = cone.space().atom_count();
    let col_sums: Vec<Rational> = cone
        .generators()
        .iter()
        .map(|x| x.values().iter().sum())
        .collect();
    let mut lp = coefficient_lp(cone, col_sums, 0);
    for w in 0..atoms {
        let row: Vec<Rational> = cone
            .generators()
            .iter()
            .map(|x| x.value(w).clone())
            .collect();
        lp.push_row(row, Relation::Ge, Rational::zero());
    }
    match cone.kind() {
        ConeKind::ConvexCone => {
            lp.push_row(vec![Rational::one(); g], Relation::Le, Rational::one());
        }
        ConeKind::LinearSpace => {
            for j in 0..g {
                lp.set_lower(j, -Rational::one());
                lp.set_upper(j, Rational::one());
            }
        }
    }
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, value, .. } => {
            if value.is_zero() {
                Ok(NaReport {
                    holds: true,
                    witness: None,
                })
            } else {
                Ok(NaReport {
                    holds: false,
                    witness: Some(cone.combine(&point[..g])?),
                })
            }
        }
        other => unreachable!("recession program is feasible and bounded: {other:?}"),
    }
}

/// Condition (a): on a finite space L − L∞⁺ is polyhedral, hence closed, so
/// (a) reduces to the absence of an X ∈ L dominating a nonnegative nonzero Z.
///
/// LP over coefficients plus Z: maximize Σ Z(ω) with X ≥ Z atomwise, Z ≥ 0,
/// Σ Z ≤ 1; the condition holds iff the optimum is 0.
pub fn check_condition_a(cone: &ConeSpec) -> Result<NaReport, CriteriaError> {
    let g = cone.generators().len();
    let atoms = cone.space().atom_count();
    let mut objective = vec![Rational::zero(); g];
    objective.extend(std::iter::repeat_n(Rational::one(), atoms));
    let mut lp = coefficient_lp(cone, objective, atoms);
    for w in 0..atoms {
        // X(ω) − Z(ω) ≥ 0
        let mut row: Vec<Rational> = cone
            .generators()
            .iter()
            .map(|x| x.value(w).clone())
            .collect();
        row.extend((0..atoms).map(|i| {
            if i == w {
                -Rational::one()
            } else {
                Rational::zero()
            }
        }));
        lp.push_row(row, Relation::Ge, Rational::zero());
        lp.set_lower(g + w, Rational::zero());
    }
    let mut norm = vec![Rational::zero(); g];
    norm.extend(std::iter::repeat_n(Rational::one(), atoms));
    lp.push_row(norm, Relation::Le, Rational::one());
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, value, .. } => {
            if value.is_zero() {
                Ok(NaReport {
                    holds: true,
                    witness: None,
                })
            } else {
                // X ≥ Z ≥ 0 with Z ≠ 0, so X itself is the arbitrage.
                Ok(NaReport {
                    holds: false,
                    witness: Some(cone.combine(&point[..g])?),
                })
            }
        }
        other => unreachable!("domination program is feasible and bounded: {other:?}"),
    }
}

/// One (A_n, k_n) pair of condition (c): the atom set and its constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCPair {
    pub atoms: Vec<usize>,
    pub bound: Rational,
}

/// The proof construction behind (b) ⇒ (c): with f the density of Q w.r.t.
/// P₀, A_n = {ω : n·f(ω) ≥ 1} and k_n = n(k+1). On a finite space A_n = Ω
/// for every n ≥ ⌈1/min f⌉, so the list stops there.
pub fn build_condition_c(
    cone: &ConeSpec,
    q: &Measure,
    k: &Rational,
) -> Result<Vec<ConditionCPair>, CriteriaError> {
    require_equivalent(q)?;
    let kb = min_k_b(cone, q)?;
    match &kb.value {
        Extended::Finite(v) if v <= k => {}
        Extended::Finite(v) => {
            return Err(CriteriaError::Precondition(format!(
                "min_k_b = {} exceeds k = {}",
                format_rational(v),
                format_rational(k)
            )));
        }
        Extended::Infinite => {
            return Err(CriteriaError::Precondition(
                "min_k_b is infinite".to_string(),
            ));
        }
    }
    let p0 = q.space().reference_measure();
    let f = space::density_of(q, &p0)?;
    let min_f = f.values().iter().min().expect("nonempty space").clone();
    // Smallest N with N·min f ≥ 1.
    let inv = min_f.recip();
    let n_max = inv.ceil().to_integer();
    let t = k + Rational::one();
    let mut pairs = Vec::new();
    let mut n = Rational::one();
    while n.to_integer() <= n_max {
        let atoms: Vec<usize> = (0..f.values().len())
            .filter(|&w| (&n * f.value(w)) >= Rational::one())
            .collect();
        pairs.push(ConditionCPair {
            atoms,
            bound: &n * &t,
        });
        n += Rational::one();
    }
    Ok(pairs)
}

/// Checks condition (c) for the given pairs: for each n the optimum of
/// maximize E_{P₀}(X·I_{A_n}) over X ∈ L with X ≥ −1 atomwise must not
/// exceed k_n (an unbounded program exceeds every constant).
pub fn verify_condition_c(cone: &ConeSpec, pairs: &[ConditionCPair]) -> Result<bool, CriteriaError> {
    let space = cone.space();
    let atoms = space.atom_count();
    for pair in pairs {
        let in_set = {
            let mut mask = vec![false; atoms];
            for &w in &pair.atoms {
                mask[w] = true;
            }
            mask
        };
        let objective: Vec<Rational> = cone
            .generators()
            .iter()
            .map(|x| {
                (0..atoms)
                    .filter(|&w| in_set[w])
                    .map(|w| space.weight(w) * x.value(w))
                    .sum()
            })
            .collect();
        let mut lp = coefficient_lp(cone, objective, 0);
        for w in 0..atoms {
            let row: Vec<Rational> = cone
                .generators()
                .iter()
                .map(|x| x.value(w).clone())
                .collect();
            lp.push_row(row, Relation::Ge, -Rational::one());
        }
        match solver::solve(&lp)? {
            LpOutcome::Optimal { value, .. } => {
                if value > pair.bound {
                    return Ok(false);
                }
            }
            LpOutcome::Unbounded { .. } => return Ok(false),
            LpOutcome::Infeasible { .. } => unreachable!("origin is always feasible"),
        }
    }
    Ok(true)
}

/// Minimal c in |E_Q(X)| ≤ c·E_Q|X| over a linear space, via two epigraph
/// programs (maximize ±E_Q(X) with u ≥ |X| atomwise and Σ Q(ω)·u_ω ≤ 1).
pub fn c_min_b_star_star(cone: &ConeSpec, q: &Measure) -> Result<Extended, CriteriaError> {
    if cone.kind() != ConeKind::LinearSpace {
        return Err(CriteriaError::RequiresLinearSpace);
    }
    require_equivalent(q)?;
    let g = cone.generators().len();
    let atoms = cone.space().atom_count();
    let expectations = generator_expectations(cone, q)?;
    let mut best = Rational::zero();
    for flip in [false, true] {
        let mut objective: Vec<Rational> = expectations
            .iter()
            .map(|e| if flip { -e.clone() } else { e.clone() })
            .collect();
        objective.extend(std::iter::repeat_n(Rational::zero(), atoms));
        let mut lp = coefficient_lp(cone, objective, atoms);
        for w in 0..atoms {
            for sign in [1i64, -1i64] {
                // ±X(ω) − u_ω ≤ 0
                let mut row: Vec<Rational> = cone
                    .generators()
                    .iter()
                    .map(|x| {
                        if sign > 0 {
                            x.value(w).clone()
                        } else {
                            -x.value(w).clone()
                        }
                    })
                    .collect();
                row.extend((0..atoms).map(|i| {
                    if i == w {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                lp.push_row(row, Relation::Le, Rational::zero());
            }
            lp.set_lower(g + w, Rational::zero());
        }
        let mut budget = vec![Rational::zero(); g];
        budget.extend(q.weights().iter().cloned());
        lp.push_row(budget, Relation::Le, Rational::one());
        match solver::solve(&lp)? {
            LpOutcome::Optimal { value, .. } => {
                if value > best {
                    best = value;
                }
            }
            LpOutcome::Unbounded { .. } => return Ok(Extended::Infinite),
            LpOutcome::Infeasible { .. } => unreachable!("origin is always feasible"),
        }
    }
    Ok(Extended::Finite(best))
}

/// c = k/(k+2).
pub fn convert_k_to_c(k: &Rational) -> Result<Rational, CriteriaError> {
    if k.is_negative() {
        return Err(CriteriaError::ConstantOutOfRange(format!(
            "k = {} must be ≥ 0",
            format_rational(k)
        )));
    }
    Ok(k / (k + Rational::from_integer(2.into())))
}

/// k = 2c/(1−c).
pub fn convert_c_to_k(c: &Rational) -> Result<Rational, CriteriaError> {
    if c.is_negative() || *c >= Rational::one() {
        return Err(CriteriaError::ConstantOutOfRange(format!(
            "c = {} must lie in [0, 1)",
            format_rational(c)
        )));
    }
    Ok(Rational::from_integer(2.into()) * c / (Rational::one() - c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::space::FiniteProbSpace;
    use std::sync::Arc;

    fn i1() -> (Arc<FiniteProbSpace>, RandomVariable) {
        let space = FiniteProbSpace::new(
            vec!["w1".into(), "w2".into()],
            vec![rat(3, 5), rat(2, 5)],
        )
        .unwrap();
        let x = RandomVariable::new(&space, vec![int(1), int(-1)]).unwrap();
        (space, x)
    }

    fn cone_of(x: &RandomVariable, kind: ConeKind) -> ConeSpec {
        ConeSpec::new(x.space(), vec![x.clone()], kind).unwrap()
    }

    #[test]
    fn na_examples() {
        let (space, x) = i1();
        let report = check_na(&cone_of(&x, ConeKind::ConvexCone)).unwrap();
        assert!(report.holds);

        let arb = RandomVariable::new(&space, vec![int(1), int(0)]).unwrap();
        let report = check_na(&cone_of(&arb, ConeKind::ConvexCone)).unwrap();
        assert!(!report.holds);
        let w = report.witness.unwrap();
        assert!(w.is_nonnegative() && !w.is_zero());

        let empty = ConeSpec::new(&space, vec![], ConeKind::ConvexCone).unwrap();
        assert!(check_na(&empty).unwrap().holds);
    }

    #[test]
    fn min_k_b_star_examples() {
        let (space, x) = i1();
        let p0 = space.reference_measure();
        let report = min_k_b_star(&cone_of(&x, ConeKind::ConvexCone), &p0).unwrap();
        assert_eq!(report.value, Extended::Finite(rat(1, 2)));

        let report = min_k_b_star(&cone_of(&x, ConeKind::LinearSpace), &p0).unwrap();
        assert_eq!(report.value, Extended::Finite(rat(1, 2)));

        let arb = RandomVariable::new(&space, vec![int(1), int(0)]).unwrap();
        let report = min_k_b_star(&cone_of(&arb, ConeKind::ConvexCone), &p0).unwrap();
        assert_eq!(report.value, Extended::Infinite);
        let ray = report.ray.unwrap();
        let ex = space::expectation(&p0, &ray).unwrap();
        let (_, neg) = space::value_decomp(&ray);
        assert!(ex.is_positive());
        assert!(space::expectation(&p0, &neg).unwrap().is_zero());
    }

    #[test]
    fn min_k_b_examples() {
        let (space, x) = i1();
        let p0 = space.reference_measure();
        let report = min_k_b(&cone_of(&x, ConeKind::ConvexCone), &p0).unwrap();
        assert_eq!(report.value, Extended::Finite(rat(1, 5)));

        let empty = ConeSpec::new(&space, vec![], ConeKind::ConvexCone).unwrap();
        let report = min_k_b(&empty, &p0).unwrap();
        assert_eq!(report.value, Extended::Finite(int(0)));

        let arb = RandomVariable::new(&space, vec![int(1), int(0)]).unwrap();
        let report = min_k_b(&cone_of(&arb, ConeKind::ConvexCone), &p0).unwrap();
        assert_eq!(report.value, Extended::Infinite);
    }

    #[test]
    fn condition_d_examples() {
        let (space, x) = i1();
        assert!(check_condition_d(&cone_of(&x, ConeKind::ConvexCone))
            .unwrap()
            .holds);

        let arb = RandomVariable::new(&space, vec![int(1), int(0)]).unwrap();
        let report = check_condition_d(&cone_of(&arb, ConeKind::ConvexCone)).unwrap();
        assert!(!report.holds);
        assert!(report.witness.unwrap().is_nonnegative());

        let sym = FiniteProbSpace::new(
            vec!["a".into(), "b".into()],
            vec![rat(1, 2), rat(1, 2)],
        )
        .unwrap();
        let x = RandomVariable::new(&sym, vec![int(1), int(-1)]).unwrap();
        assert!(check_condition_d(&cone_of(&x, ConeKind::LinearSpace))
            .unwrap()
            .holds);
    }

    #[test]
    fn condition_a_examples() {
        let (space, x) = i1();
        assert!(check_condition_a(&cone_of(&x, ConeKind::ConvexCone))
            .unwrap()
            .holds);
        let arb = RandomVariable::new(&space, vec![int(1), int(0)]).unwrap();
        assert!(!check_condition_a(&cone_of(&arb, ConeKind::ConvexCone))
            .unwrap()
            .holds);
        let empty = ConeSpec::new(&space, vec![], ConeKind::ConvexCone).unwrap();
        assert!(check_condition_a(&empty).unwrap().holds);
    }

    #[test]
    fn condition_c_build_and_verify() {
        let (space, x) = i1();
        let cone = cone_of(&x, ConeKind::ConvexCone);
        let p0 = space.reference_measure();

        // f ≡ 1 so A_n = Ω already at n = 1; k_n = n·6/5.
        let pairs = build_condition_c(&cone, &p0, &rat(1, 5)).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].atoms, vec![0, 1]);
        assert_eq!(pairs[0].bound, rat(6, 5));
        assert!(verify_condition_c(&cone, &pairs).unwrap());

        // Q with density (5/6, 5/4): only ω2 clears the n = 1 threshold.
        let q = Measure::new(&space, vec![rat(1, 2), rat(1, 2)]).unwrap();
        let kq = min_k_b(&cone, &q).unwrap();
        let k = kq.value.finite().unwrap().clone();
        let pairs = build_condition_c(&cone, &q, &k).unwrap();
        assert_eq!(pairs[0].atoms, vec![1]);
        assert_eq!(pairs.last().unwrap().atoms, vec![0, 1]);
        assert!(verify_condition_c(&cone, &pairs).unwrap());

        // A zero constant cannot absorb the positive-expectation member.
        let zeroed = vec![ConditionCPair {
            atoms: vec![0, 1],
            bound: int(0),
        }];
        assert!(!verify_condition_c(&cone, &zeroed).unwrap());

        // The empty cone satisfies any pairs.
        let empty = ConeSpec::new(&space, vec![], ConeKind::ConvexCone).unwrap();
        assert!(verify_condition_c(&empty, &zeroed).unwrap());
    }

    #[test]
    fn c_min_examples() {
        let (space, x) = i1();
        let p0 = space.reference_measure();
        let lin = cone_of(&x, ConeKind::LinearSpace);
        assert_eq!(
            c_min_b_star_star(&lin, &p0).unwrap(),
            Extended::Finite(rat(1, 5))
        );

        let sym = FiniteProbSpace::new(
            vec!["a".into(), "b".into()],
            vec![rat(1, 2), rat(1, 2)],
        )
        .unwrap();
        let xs = RandomVariable::new(&sym, vec![int(1), int(-1)]).unwrap();
        assert_eq!(
            c_min_b_star_star(&cone_of(&xs, ConeKind::LinearSpace), &sym.reference_measure())
                .unwrap(),
            Extended::Finite(int(0))
        );

        let arb = RandomVariable::new(&space, vec![int(1), int(0)]).unwrap();
        assert_eq!(
            c_min_b_star_star(&cone_of(&arb, ConeKind::LinearSpace), &p0).unwrap(),
            Extended::Finite(int(1))
        );

        assert_eq!(
            c_min_b_star_star(&cone_of(&x, ConeKind::ConvexCone), &p0),
            Err(CriteriaError::RequiresLinearSpace)
        );
    }

    #[test]
    fn conversions() {
        assert_eq!(convert_k_to_c(&int(0)).unwrap(), int(0));
        assert_eq!(convert_k_to_c(&rat(1, 2)).unwrap(), rat(1, 5));
        for k in [int(0), rat(1, 2), int(3), int(100)] {
            let c = convert_k_to_c(&k).unwrap();
            assert_eq!(convert_c_to_k(&c).unwrap(), k);
        }
        assert!(convert_c_to_k(&int(1)).is_err());
        assert!(convert_k_to_c(&int(-1)).is_err());
    }
}
