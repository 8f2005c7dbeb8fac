//! Constructions of the measures whose existence the characterizations
//! assert: the single-payoff density, equivalent super-martingale measures
//! inside a band around Q, floor-bounded measures, the deflation/inflation
//! pair for rescaled cones, and the dominating-variable combination.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, Rational};
use crate::solver::{self, Certified, LinearProgram, LpOutcome, Relation};
use crate::space::{
    self, ConeKind, ConeSpec, Measure, RandomVariable, SpaceError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error("Q is not equivalent to the reference measure (witness atoms {0:?})")]
    QNotEquivalent(Vec<String>),
    #[error("constant k = {0} is negative")]
    NegativeK(String),
    #[error("floor r = {0} must be positive")]
    NonPositiveFloor(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("Y must be ≥ 1 atomwise, violated at `{0}`")]
    YBelowOne(String),
    #[error("Y_{0} must be ≥ 0 atomwise")]
    DominatedNegative(usize),
}

/// The band 𝒦 = {P : (1/t)·Q ≤ P ≤ t·Q} with t = k + 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandSpec {
    pub center: Measure,
    pub t: Rational,
}

impl BandSpec {
    pub fn from_k(center: Measure, k: &Rational) -> Result<BandSpec, ConstructError> {
        if k.is_negative() {
            return Err(ConstructError::NegativeK(format_rational(k)));
        }
        Ok(BandSpec {
            center,
            t: k + Rational::one(),
        })
    }

    pub fn contains(&self, p: &Measure) -> bool {
        p.weights()
            .iter()
            .zip(self.center.weights())
            .all(|(pw, qw)| qw / &self.t <= *pw && *pw <= qw * &self.t)
    }
}

fn require_equivalent(q: &Measure) -> Result<(), ConstructError> {
    let p0 = q.space().reference_measure();
    let rel = space::relate(q, &p0)?;
    if rel.result != space::RelationResult::Equivalent {
        return Err(ConstructError::QNotEquivalent(rel.witness));
    }
    Ok(())
}

/// The single-payoff construction: with t = k + 1,
/// f = (I_{X≥0} + t·I_{X<0}) / (Q(X≥0) + t·Q(X<0)) and P = f·Q.
///
/// P lies in the band (1/t)·Q ≤ P ≤ t·Q and satisfies the exact identity
/// E_P(X)·(Q(X≥0) + t·Q(X<0)) = E_Q(X) − k·E_Q(X⁻), hence E_P(X) ≤ 0.
pub fn single_x_density(
    q: &Measure,
    x: &RandomVariable,
    k: &Rational,
) -> Result<Measure, ConstructError> {
    require_equivalent(q)?;
    if k.is_negative() {
        return Err(ConstructError::NegativeK(format_rational(k)));
    }
    let (_, neg) = space::value_decomp(x);
    let ex = space::expectation(q, x)?;
    let eneg = space::expectation(q, &neg)?;
    if ex > k * &eneg {
        return Err(ConstructError::Precondition(format!(
            "E_Q(X) = {} exceeds k·E_Q(X⁻) = {}",
            format_rational(&ex),
            format_rational(&(k * &eneg))
        )));
    }
    let t = k + Rational::one();
    let nonneg: Vec<usize> = (0..x.values().len())
        .filter(|&w| !x.value(w).is_negative())
        .collect();
    let negative: Vec<usize> = (0..x.values().len())
        .filter(|&w| x.value(w).is_negative())
        .collect();
    let denom = q.mass(&nonneg) + &t * q.mass(&negative);
    let weights = (0..x.values().len())
        .map(|w| {
            let num = if x.value(w).is_negative() {
                t.clone()
            } else {
                Rational::one()
            };
            q.weight(w) * num / &denom
        })
        .collect();
    Ok(Measure::new(q.space(), weights)?)
}

/// Outcome of a certified feasibility search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Found(Measure),
    Infeasible(Certified),
}

fn supermartingale_rows(lp: &mut LinearProgram, cone: &ConeSpec) {
    let relation = match cone.kind() {
        ConeKind::ConvexCone => Relation::Le,
        ConeKind::LinearSpace => Relation::Eq,
    };
    for x in cone.generators() {
        lp.push_row(x.values().to_vec(), relation, Rational::zero());
    }
}

/// Searches the band (1/t)·Q ≤ P ≤ t·Q, t = k + 1, for a measure with
/// E_P(X_j) ≤ 0 for every generator (= 0 for a linear space).
///
/// This search cannot fail when min_k_b_star(Q) ≤ k; that implication is
/// exercised by tests, not assumed here, so an infeasible system still
/// returns its Farkas certificate.
pub fn find_esm_in_band(
    cone: &ConeSpec,
    q: &Measure,
    k: &Rational,
) -> Result<Feasibility, ConstructError> {
    require_equivalent(q)?;
    let band = BandSpec::from_k(q.clone(), k)?;
    let n = cone.space().atom_count();
    let mut lp = LinearProgram::maximize(vec![Rational::zero(); n]);
    lp.push_row(vec![Rational::one(); n], Relation::Eq, Rational::one());
    supermartingale_rows(&mut lp, cone);
    for w in 0..n {
        lp.set_lower(w, q.weight(w) / &band.t);
        lp.set_upper(w, q.weight(w) * &band.t);
    }
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, .. } => Ok(Feasibility::Found(Measure::new(
            cone.space(),
            point,
        )?)),
        outcome @ LpOutcome::Infeasible { .. } => {
            Ok(Feasibility::Infeasible(Certified { lp, outcome }))
        }
        LpOutcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Result of the direct equivalent-super-martingale-measure search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EsmResult {
    /// An equivalent measure, together with the maximal floor τ with
    /// P ≥ τ·P₀ attained by the optimizer.
    Found { measure: Measure, floor: Rational },
    /// No equivalent measure exists. `best` is the maximal-support
    /// absolutely continuous solution when one exists; the certificate
    /// proves the verdict (dual bound τ* = 0, or Farkas infeasibility of
    /// the whole system).
    NoEquivalent {
        best: Option<Measure>,
        certificate: Certified,
    },
}

fn esm_lp(cone: &ConeSpec, with_floor_var: bool) -> LinearProgram {
    let n = cone.space().atom_count();
    let space = cone.space();
    let vars = if with_floor_var { n + 1 } else { n };
    let mut objective = vec![Rational::zero(); vars];
    if with_floor_var {
        objective[n] = Rational::one();
    }
    let mut lp = LinearProgram::maximize(objective);
    let mut total = vec![Rational::one(); vars];
    if with_floor_var {
        total[n] = Rational::zero();
    }
    lp.push_row(total, Relation::Eq, Rational::one());
    let relation = match cone.kind() {
        ConeKind::ConvexCone => Relation::Le,
        ConeKind::LinearSpace => Relation::Eq,
    };
    for x in cone.generators() {
        let mut row = x.values().to_vec();
        if with_floor_var {
            row.push(Rational::zero());
        }
        lp.push_row(row, relation, Rational::zero());
    }
    if with_floor_var {
        for w in 0..n {
            // P(ω) − τ·P₀(ω) ≥ 0
            let mut row = vec![Rational::zero(); vars];
            row[w] = Rational::one();
            row[n] = -space.weight(w).clone();
            lp.push_row(row, Relation::Ge, Rational::zero());
        }
        lp.set_lower(n, Rational::zero());
    }
    for w in 0..n {
        lp.set_lower(w, Rational::zero());
    }
    lp
}

/// Maximizes the floor ratio τ in P ≥ τ·P₀ over measures with the
/// super-martingale rows; equivalence holds iff the optimum is positive.
/// τ = 0 is an answer (no equivalent measure), not an error.
pub fn find_esm(cone: &ConeSpec) -> Result<EsmResult, ConstructError> {
    let n = cone.space().atom_count();
    let lp = esm_lp(cone, true);
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, value, dual } => {
            if value.is_positive() {
                let measure = Measure::new(cone.space(), point[..n].to_vec())?;
                Ok(EsmResult::Found {
                    measure,
                    floor: value,
                })
            } else {
                let best = maximal_support_solution(cone)?;
                Ok(EsmResult::NoEquivalent {
                    best,
                    certificate: Certified {
                        lp,
                        outcome: LpOutcome::Optimal { point, value, dual },
                    },
                })
            }
        }
        outcome @ LpOutcome::Infeasible { .. } => Ok(EsmResult::NoEquivalent {
            best: None,
            certificate: Certified { lp, outcome },
        }),
        LpOutcome::Unbounded { .. } => unreachable!("τ is bounded by 1"),
    }
}

/// Among absolutely continuous solutions, the convex average of solutions
/// maximizing the mass outside the support found so far has support equal to
/// the union of all feasible supports: if that maximal outside mass is 0,
/// every remaining atom is null in every solution.
fn maximal_support_solution(cone: &ConeSpec) -> Result<Option<Measure>, ConstructError> {
    let n = cone.space().atom_count();
    let mut achievers: Vec<Vec<Rational>> = Vec::new();
    let mut covered = vec![false; n];
    loop {
        let mut lp = esm_lp(cone, false);
        for (w, done) in covered.iter().enumerate() {
            if !done {
                lp.objective[w] = Rational::one();
            }
        }
        match solver::solve(&lp)? {
            LpOutcome::Optimal { point, .. } => {
                let mut grew = false;
                for (w, v) in point.iter().take(n).enumerate() {
                    if v.is_positive() && !covered[w] {
                        covered[w] = true;
                        grew = true;
                    }
                }
                achievers.push(point);
                if !grew || covered.iter().all(|c| *c) {
                    break;
                }
            }
            LpOutcome::Infeasible { .. } => return Ok(None),
            LpOutcome::Unbounded { .. } => unreachable!("mass is bounded by 1"),
        }
    }
    if achievers.is_empty() {
        return Ok(None);
    }
    let count = Rational::from_integer((achievers.len() as i64).into());
    let weights: Vec<Rational> = (0..n)
        .map(|w| achievers.iter().map(|p| &p[w]).sum::<Rational>() / &count)
        .collect();
    Ok(Some(Measure::new(cone.space(), weights)?))
}

/// The floor-bounded search: a measure with P ≥ r·P₀ and the
/// super-martingale rows, r > 0 fixed by the caller.
pub fn find_esfa_with_floor(
    cone: &ConeSpec,
    r: &Rational,
) -> Result<Feasibility, ConstructError> {
    if !r.is_positive() {
        return Err(ConstructError::NonPositiveFloor(format_rational(r)));
    }
    let n = cone.space().atom_count();
    let space = cone.space();
    let mut lp = LinearProgram::maximize(vec![Rational::zero(); n]);
    lp.push_row(vec![Rational::one(); n], Relation::Eq, Rational::one());
    supermartingale_rows(&mut lp, cone);
    for w in 0..n {
        lp.set_lower(w, r * space.weight(w));
    }
    match solver::solve(&lp)? {
        LpOutcome::Optimal { point, .. } => {
            Ok(Feasibility::Found(Measure::new(cone.space(), point)?))
        }
        outcome @ LpOutcome::Infeasible { .. } => {
            Ok(Feasibility::Infeasible(Certified { lp, outcome }))
        }
        LpOutcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

fn require_at_least_one(y: &RandomVariable) -> Result<(), ConstructError> {
    for (w, v) in y.values().iter().enumerate() {
        if *v < Rational::one() {
            return Err(ConstructError::YBelowOne(
                y.space().label(w).to_string(),
            ));
        }
    }
    Ok(())
}

/// L* = {X/Y : X ∈ L}: generators divided atomwise by Y ≥ 1, kind kept.
pub fn rescale_cone(cone: &ConeSpec, y: &RandomVariable) -> Result<ConeSpec, ConstructError> {
    require_at_least_one(y)?;
    let generators = cone
        .generators()
        .iter()
        .map(|x| {
            let values = x
                .values()
                .iter()
                .zip(y.values())
                .map(|(xv, yv)| xv / yv)
                .collect();
            RandomVariable::new(cone.space(), values)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConeSpec::new(cone.space(), generators, cone.kind())?)
}

/// P(A) = E_T(I_A/Y) / E_T(1/Y): moves a super-martingale measure for the
/// rescaled cone back to one for the original cone.
pub fn deflate_measure(t: &Measure, y: &RandomVariable) -> Result<Measure, ConstructError> {
    require_at_least_one(y)?;
    let raw: Vec<Rational> = t
        .weights()
        .iter()
        .zip(y.values())
        .map(|(tw, yv)| tw / yv)
        .collect();
    let total: Rational = raw.iter().sum();
    let weights = raw.into_iter().map(|w| w / &total).collect();
    Ok(Measure::new(t.space(), weights)?)
}

/// T(A) = E_P(I_A·Y) / E_P(Y): the inverse of `deflate_measure`.
pub fn inflate_measure(p: &Measure, y: &RandomVariable) -> Result<Measure, ConstructError> {
    require_at_least_one(y)?;
    let raw: Vec<Rational> = p
        .weights()
        .iter()
        .zip(y.values())
        .map(|(pw, yv)| pw * yv)
        .collect();
    let total: Rational = raw.iter().sum();
    let weights = raw.into_iter().map(|w| w / &total).collect();
    Ok(Measure::new(p.space(), weights)?)
}

/// Finite form of the dominating-variable construction: a_n is the smallest value
/// in {Y_n(ω)} ∪ {1} with P₀(Y_n > a_n) < 2⁻ⁿ, and
/// Y = 1 + Σ_n Y_n/(2ⁿ·a_n), so that Y_n ≤ 2ⁿ·a_n·Y atomwise.
pub fn dominating_variable(
    ys: &[RandomVariable],
) -> Result<(RandomVariable, Vec<Rational>), ConstructError> {
    assert!(!ys.is_empty(), "need at least one variable to dominate");
    let space = ys[0].space();
    let p0 = space.reference_measure();
    let mut scales = Vec::with_capacity(ys.len());
    let mut y_values = vec![Rational::one(); space.atom_count()];
    let mut pow2 = Rational::one();
    for (idx, yn) in ys.iter().enumerate() {
        if !yn.is_nonnegative() {
            return Err(ConstructError::DominatedNegative(idx + 1));
        }
        pow2 *= Rational::from_integer(2.into());
        let threshold = pow2.recip(); // 2⁻ⁿ
        let mut candidates: Vec<Rational> = yn
            .values()
            .iter()
            .filter(|v| v.is_positive())
            .cloned()
            .collect();
        candidates.push(Rational::one());
        candidates.sort();
        candidates.dedup();
        let a_n = candidates
            .into_iter()
            .find(|a| {
                let exceed: Vec<usize> = (0..yn.values().len())
                    .filter(|&w| yn.value(w) > a)
                    .collect();
                p0.mass(&exceed) < threshold
            })
            .expect("the maximum value always qualifies");
        let scale = (&pow2 * &a_n).recip();
        for (v, yv) in y_values.iter_mut().zip(yn.values()) {
            *v += &scale * yv;
        }
        scales.push(a_n);
    }
    Ok((RandomVariable::new(space, y_values)?, scales))
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
    fn single_x_density_examples() {
        let (space, x) = i1();
        let p0 = space.reference_measure();

        let p = single_x_density(&p0, &x, &rat(1, 2)).unwrap();
        assert_eq!(p.weights(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(space::expectation(&p, &x).unwrap(), int(0));

        let q = Measure::new(&space, vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(single_x_density(&q, &x, &int(0)).unwrap(), q);

        let zero = RandomVariable::constant(&space, int(0));
        assert_eq!(single_x_density(&q, &zero, &int(0)).unwrap(), q);

        // E_Q(X) = 1/5 > 0 = 0·E_Q(X⁻) fails the precondition at k = 0 only
        // when X⁻ carries no Q-mass; here it fails because 1/5 > 0·2/5.
        assert!(matches!(
            single_x_density(&p0, &x, &int(0)),
            Err(ConstructError::Precondition(_))
        ));
    }

    #[test]
    fn band_search_examples() {
        let (space, x) = i1();
        let p0 = space.reference_measure();
        let cone = cone_of(&x, ConeKind::ConvexCone);

        match find_esm_in_band(&cone, &p0, &rat(1, 2)).unwrap() {
            Feasibility::Found(p) => {
                assert!(*p.weight(0) >= rat(2, 5) && *p.weight(0) <= rat(1, 2));
                let band = BandSpec::from_k(p0.clone(), &rat(1, 2)).unwrap();
                assert!(band.contains(&p));
                assert!(!space::expectation(&p, &x).unwrap().is_positive());
            }
            other => panic!("expected a measure, got {other:?}"),
        }

        let empty = ConeSpec::new(&space, vec![], ConeKind::ConvexCone).unwrap();
        match find_esm_in_band(&empty, &p0, &int(0)).unwrap() {
            Feasibility::Found(p) => assert_eq!(p, p0),
            other => panic!("expected Q itself, got {other:?}"),
        }

        let arb = RandomVariable::new(&space, vec![int(1), int(0)]).unwrap();
        match find_esm_in_band(&cone_of(&arb, ConeKind::ConvexCone), &p0, &int(5)).unwrap() {
            Feasibility::Infeasible(cert) => assert!(cert.verify()),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn find_esm_examples() {
        let (space, x) = i1();
        let cone = cone_of(&x, ConeKind::ConvexCone);
        match find_esm(&cone).unwrap() {
            EsmResult::Found { measure, floor } => {
                assert_eq!(measure.weights(), &[rat(1, 2), rat(1, 2)]);
                assert_eq!(floor, rat(5, 6));
            }
            other => panic!("expected a measure, got {other:?}"),
        }

        let arb = RandomVariable::new(&space, vec![int(1), int(0)]).unwrap();
        match find_esm(&cone_of(&arb, ConeKind::ConvexCone)).unwrap() {
            EsmResult::NoEquivalent { best, certificate } => {
                assert!(certificate.verify());
                // Any absolutely continuous solution must put zero mass on ω1.
                let best = best.unwrap();
                assert!(best.weight(0).is_zero());
                assert_eq!(best.weight(1), &int(1));
            }
            other => panic!("expected no equivalent measure, got {other:?}"),
        }
    }

    #[test]
    fn esm_totally_infeasible_when_cone_contains_positive_constant() {
        let (space, _) = i1();
        let one = RandomVariable::constant(&space, int(1));
        match find_esm(&cone_of(&one, ConeKind::LinearSpace)).unwrap() {
            EsmResult::NoEquivalent { best, certificate } => {
                assert!(best.is_none());
                assert!(certificate.verify());
                assert!(matches!(certificate.outcome, LpOutcome::Infeasible { .. }));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn floor_search_examples() {
        let (space, x) = i1();
        let cone = cone_of(&x, ConeKind::ConvexCone);
        let p0 = space.reference_measure();

        match find_esfa_with_floor(&cone, &rat(1, 2)).unwrap() {
            Feasibility::Found(p) => {
                assert!(p.weight(0) >= &rat(3, 10));
                assert!(p.weight(1) >= &rat(1, 5));
                assert!(!space::expectation(&p, &x).unwrap().is_positive());
            }
            other => panic!("expected feasible, got {other:?}"),
        }

        // r = 1 pins P = P₀, and E_{P₀}(X) = 1/5 > 0.
        match find_esfa_with_floor(&cone, &int(1)).unwrap() {
            Feasibility::Infeasible(cert) => assert!(cert.verify()),
            other => panic!("expected infeasible, got {other:?}"),
        }

        let empty = ConeSpec::new(&space, vec![], ConeKind::ConvexCone).unwrap();
        match find_esfa_with_floor(&empty, &int(1)).unwrap() {
            Feasibility::Found(p) => assert_eq!(p, p0),
            other => panic!("expected P₀, got {other:?}"),
        }

        assert!(find_esfa_with_floor(&cone, &int(0)).is_err());
    }

    #[test]
    fn rescale_examples() {
        let (space, x) = i1();
        let cone = cone_of(&x, ConeKind::ConvexCone);

        let ones = RandomVariable::constant(&space, int(1));
        assert_eq!(rescale_cone(&cone, &ones).unwrap(), cone);

        let y = RandomVariable::new(&space, vec![int(1), int(2)]).unwrap();
        let rescaled = rescale_cone(&cone, &y).unwrap();
        assert_eq!(rescaled.generators()[0].values(), &[int(1), rat(-1, 2)]);

        let y2 = RandomVariable::new(&space, vec![int(3), int(1)]).unwrap();
        let twice = rescale_cone(&rescale_cone(&cone, &y).unwrap(), &y2).unwrap();
        let product = RandomVariable::new(&space, vec![int(3), int(2)]).unwrap();
        assert_eq!(twice, rescale_cone(&cone, &product).unwrap());

        let bad = RandomVariable::new(&space, vec![rat(1, 2), int(1)]).unwrap();
        assert!(rescale_cone(&cone, &bad).is_err());
    }

    #[test]
    fn deflate_inflate_examples() {
        let (space, _) = i1();
        let t = Measure::new(&space, vec![rat(1, 2), rat(1, 2)]).unwrap();

        let ones = RandomVariable::constant(&space, int(1));
        assert_eq!(deflate_measure(&t, &ones).unwrap(), t);
        assert_eq!(inflate_measure(&t, &ones).unwrap(), t);

        let y = RandomVariable::new(&space, vec![int(1), int(3)]).unwrap();
        let p = deflate_measure(&t, &y).unwrap();
        assert_eq!(p.weights(), &[rat(3, 4), rat(1, 4)]);
        assert_eq!(inflate_measure(&p, &y).unwrap(), t);
        assert_eq!(
            deflate_measure(&inflate_measure(&t, &y).unwrap(), &y).unwrap(),
            t
        );
    }

    #[test]
    fn dominating_variable_examples() {
        let (space, _) = i1();

        let zero = RandomVariable::constant(&space, int(0));
        let (y, scales) = dominating_variable(&[zero]).unwrap();
        assert_eq!(y.values(), &[int(1), int(1)]);
        assert_eq!(scales, vec![int(1)]);

        // P₀(Y₁ > a) < 1/2 needs a ≥ 4 since P₀(ω1) = 3/5.
        let y1 = RandomVariable::new(&space, vec![int(4), int(0)]).unwrap();
        let (y, scales) = dominating_variable(&[y1.clone()]).unwrap();
        assert_eq!(scales, vec![int(4)]);
        assert_eq!(y.values(), &[rat(3, 2), int(1)]);

        // Domination: Y₁ ≤ 2·a₁·Y atomwise.
        for w in 0..2 {
            assert!(y1.value(w) <= &(int(2) * &scales[0] * y.value(w)));
        }
    }
}
