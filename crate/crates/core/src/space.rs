//! Finite probability spaces, random variables, cones of payoffs, measures,
//! and the elementary functionals on them.
//!
//! A space carries strictly positive exact-rational reference weights; null
//! atoms are rejected at construction since on a finite space they are
//! invisible to every downstream condition. All values are immutable after
//! construction and every operation is a pure function.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("space needs at least one atom")]
    EmptySpace,
    #[error("atom `{0}` has non-positive weight {1}")]
    NonPositiveWeight(String, String),
    #[error("weights sum to {0}, expected 1")]
    WeightSum(String),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("duplicate atom label `{0}`")]
    DuplicateLabel(String),
    #[error("measure weight for `{0}` is negative: {1}")]
    NegativeMeasureWeight(String, String),
    #[error("mixing constant k = {0} is negative")]
    NegativeMixingConstant(String),
    #[error("absolute continuity violated on atoms {0:?}")]
    NotAbsolutelyContinuous(Vec<String>),
}

/// (Ω, 𝒜, P₀) with 𝒜 the power set: an ordered list of atoms with strictly
/// positive rational weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteProbSpace {
    atoms: Vec<String>,
    weights: Vec<Rational>,
}

impl FiniteProbSpace {
    pub fn new(
        atoms: Vec<String>,
        weights: Vec<Rational>,
    ) -> Result<Arc<FiniteProbSpace>, SpaceError> {
        if atoms.is_empty() {
            return Err(SpaceError::EmptySpace);
        }
        if atoms.len() != weights.len() {
            return Err(SpaceError::LengthMismatch {
                expected: atoms.len(),
                got: weights.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for label in &atoms {
            if !seen.insert(label.clone()) {
                return Err(SpaceError::DuplicateLabel(label.clone()));
            }
        }
        for (label, w) in atoms.iter().zip(&weights) {
            if !w.is_positive() {
                return Err(SpaceError::NonPositiveWeight(
                    label.clone(),
                    format_rational(w),
                ));
            }
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(SpaceError::WeightSum(format_rational(&total)));
        }
        Ok(Arc::new(FiniteProbSpace { atoms, weights }))
    }

    /// Uniform reference weights over the given labels.
    pub fn uniform(atoms: Vec<String>) -> Result<Arc<FiniteProbSpace>, SpaceError> {
        let n = atoms.len();
        if n == 0 {
            return Err(SpaceError::EmptySpace);
        }
        let w = Rational::new(1.into(), (n as i64).into());
        let weights = vec![w; n];
        FiniteProbSpace::new(atoms, weights)
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.atoms
    }

    pub fn label(&self, i: usize) -> &str {
        &self.atoms[i]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    /// The reference measure P₀ as a `Measure` value.
    pub fn reference_measure(self: &Arc<Self>) -> Measure {
        Measure {
            space: Arc::clone(self),
            weights: self.weights.clone(),
        }
    }
}

fn same_space(a: &Arc<FiniteProbSpace>, b: &Arc<FiniteProbSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An exact-rational value per atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomVariable {
    space: Arc<FiniteProbSpace>,
    values: Vec<Rational>,
}

impl RandomVariable {
    pub fn new(
        space: &Arc<FiniteProbSpace>,
        values: Vec<Rational>,
    ) -> Result<RandomVariable, SpaceError> {
        if values.len() != space.atom_count() {
            return Err(SpaceError::LengthMismatch {
                expected: space.atom_count(),
                got: values.len(),
            });
        }
        Ok(RandomVariable {
            space: Arc::clone(space),
            values,
        })
    }

    pub fn constant(space: &Arc<FiniteProbSpace>, value: Rational) -> RandomVariable {
        RandomVariable {
            space: Arc::clone(space),
            values: vec![value; space.atom_count()],
        }
    }

    /// Indicator of an atom set given by indices.
    pub fn indicator(space: &Arc<FiniteProbSpace>, atoms: &[usize]) -> RandomVariable {
        let mut values = vec![Rational::zero(); space.atom_count()];
        for &i in atoms {
            values[i] = Rational::one();
        }
        RandomVariable {
            space: Arc::clone(space),
            values,
        }
    }

    pub fn space(&self) -> &Arc<FiniteProbSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn scale(&self, c: &Rational) -> RandomVariable {
        RandomVariable {
            space: Arc::clone(&self.space),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &RandomVariable) -> Result<RandomVariable, SpaceError> {
        if !same_space(&self.space, &other.space) {
            return Err(SpaceError::SpaceMismatch);
        }
        Ok(RandomVariable {
            space: Arc::clone(&self.space),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// Nonnegative rational weight per atom, summing to one. Houses P, Q, T and
/// friends; on a finite space every finitely additive probability is
/// countably additive, so one type covers both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    space: Arc<FiniteProbSpace>,
    weights: Vec<Rational>,
}

impl Measure {
    pub fn new(
        space: &Arc<FiniteProbSpace>,
        weights: Vec<Rational>,
    ) -> Result<Measure, SpaceError> {
        if weights.len() != space.atom_count() {
            return Err(SpaceError::LengthMismatch {
                expected: space.atom_count(),
                got: weights.len(),
            });
        }
        for (i, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(SpaceError::NegativeMeasureWeight(
                    space.label(i).to_string(),
                    format_rational(w),
                ));
            }
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(SpaceError::WeightSum(format_rational(&total)));
        }
        Ok(Measure {
            space: Arc::clone(space),
            weights,
        })
    }

    pub fn space(&self) -> &Arc<FiniteProbSpace> {
        &self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    /// Indices of atoms carrying positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&i| self.weights[i].is_positive())
            .collect()
    }

    /// Probability of an atom set.
    pub fn mass(&self, atoms: &[usize]) -> Rational {
        atoms.iter().map(|&i| &self.weights[i]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    /// Nonnegative combinations of the generators.
    ConvexCone,
    /// Arbitrary real combinations.
    LinearSpace,
}

impl fmt::Display for ConeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeKind::ConvexCone => write!(f, "cone"),
            ConeKind::LinearSpace => write!(f, "linear"),
        }
    }
}

/// Finitely generated cone (or linear space) of payoffs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSpec {
    space: Arc<FiniteProbSpace>,
    generators: Vec<RandomVariable>,
    kind: ConeKind,
}

impl ConeSpec {
    pub fn new(
        space: &Arc<FiniteProbSpace>,
        generators: Vec<RandomVariable>,
        kind: ConeKind,
    ) -> Result<ConeSpec, SpaceError> {
        for g in &generators {
            if !same_space(&g.space, space) {
                return Err(SpaceError::SpaceMismatch);
            }
        }
        Ok(ConeSpec {
            space: Arc::clone(space),
            generators,
            kind,
        })
    }

    pub fn space(&self) -> &Arc<FiniteProbSpace> {
        &self.space
    }

    pub fn generators(&self) -> &[RandomVariable] {
        &self.generators
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    /// The member Σ λ_j X_j for given coefficients.
    pub fn combine(&self, coeffs: &[Rational]) -> Result<RandomVariable, SpaceError> {
        if coeffs.len() != self.generators.len() {
            return Err(SpaceError::LengthMismatch {
                expected: self.generators.len(),
                got: coeffs.len(),
            });
        }
        let mut values = vec![Rational::zero(); self.space.atom_count()];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            for (v, gv) in values.iter_mut().zip(&g.values) {
                *v += c * gv;
            }
        }
        Ok(RandomVariable {
            space: Arc::clone(&self.space),
            values,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationResult {
    Equivalent,
    AbsolutelyContinuous,
    SingularPartPresent,
}

/// Outcome of comparing null sets of two measures, with the witness atoms
/// where one vanishes and the other does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureRelation {
    pub result: RelationResult,
    pub witness: Vec<String>,
}

/// E_P(X) = Σ_ω P(ω)·X(ω), exact.
pub fn expectation(p: &Measure, x: &RandomVariable) -> Result<Rational, SpaceError> {
    if !same_space(&p.space, &x.space) {
        return Err(SpaceError::SpaceMismatch);
    }
    Ok(p.weights
        .iter()
        .zip(&x.values)
        .map(|(w, v)| w * v)
        .sum())
}

/// On a finite full-support space the essential supremum is the maximum.
pub fn ess_sup(x: &RandomVariable) -> Rational {
    x.values.iter().max().cloned().expect("nonempty space")
}

/// (X⁺, X⁻) with X = X⁺ − X⁻ atomwise.
pub fn value_decomp(x: &RandomVariable) -> (RandomVariable, RandomVariable) {
    let pos = RandomVariable {
        space: Arc::clone(&x.space),
        values: x
            .values
            .iter()
            .map(|v| if v.is_positive() { v.clone() } else { Rational::zero() })
            .collect(),
    };
    let neg = RandomVariable {
        space: Arc::clone(&x.space),
        values: x
            .values
            .iter()
            .map(|v| if v.is_negative() { -v.clone() } else { Rational::zero() })
            .collect(),
    };
    (pos, neg)
}

/// Compares supports: equivalent iff they coincide, absolutely continuous iff
/// support(P) ⊆ support(T), otherwise a singular part is present.
pub fn relate(p: &Measure, t: &Measure) -> Result<MeasureRelation, SpaceError> {
    if !same_space(&p.space, &t.space) {
        return Err(SpaceError::SpaceMismatch);
    }
    let mut p_not_t = Vec::new();
    let mut t_not_p = Vec::new();
    for i in 0..p.weights.len() {
        let pp = p.weights[i].is_positive();
        let tp = t.weights[i].is_positive();
        if pp && !tp {
            p_not_t.push(p.space.label(i).to_string());
        } else if tp && !pp {
            t_not_p.push(p.space.label(i).to_string());
        }
    }
    let relation = if !p_not_t.is_empty() {
        MeasureRelation {
            result: RelationResult::SingularPartPresent,
            witness: p_not_t,
        }
    } else if !t_not_p.is_empty() {
        MeasureRelation {
            result: RelationResult::AbsolutelyContinuous,
            witness: t_not_p,
        }
    } else {
        MeasureRelation {
            result: RelationResult::Equivalent,
            witness: Vec::new(),
        }
    };
    Ok(relation)
}

pub fn equivalent(p: &Measure, t: &Measure) -> Result<bool, SpaceError> {
    Ok(relate(p, t)?.result == RelationResult::Equivalent)
}

/// P = (Q + k·P₁)/(1+k), weightwise.
pub fn mixture(q: &Measure, p1: &Measure, k: &Rational) -> Result<Measure, SpaceError> {
    if !same_space(&q.space, &p1.space) {
        return Err(SpaceError::SpaceMismatch);
    }
    if k.is_negative() {
        return Err(SpaceError::NegativeMixingConstant(format_rational(k)));
    }
    let denom = Rational::one() + k;
    let weights = q
        .weights
        .iter()
        .zip(&p1.weights)
        .map(|(qw, pw)| (qw + k * pw) / &denom)
        .collect();
    Ok(Measure {
        space: Arc::clone(&q.space),
        weights,
    })
}

/// f = dP/d(wrt) on support(wrt); requires P ≪ wrt and reports the witness
/// atoms otherwise.
pub fn density_of(p: &Measure, wrt: &Measure) -> Result<RandomVariable, SpaceError> {
    if !same_space(&p.space, &wrt.space) {
        return Err(SpaceError::SpaceMismatch);
    }
    let mut witness = Vec::new();
    for i in 0..p.weights.len() {
        if p.weights[i].is_positive() && wrt.weights[i].is_zero() {
            witness.push(p.space.label(i).to_string());
        }
    }
    if !witness.is_empty() {
        return Err(SpaceError::NotAbsolutelyContinuous(witness));
    }
    let values = p
        .weights
        .iter()
        .zip(&wrt.weights)
        .map(|(pw, ww)| {
            if ww.is_zero() {
                Rational::zero()
            } else {
                pw / ww
            }
        })
        .collect();
    Ok(RandomVariable {
        space: Arc::clone(&p.space),
        values,
    })
}
