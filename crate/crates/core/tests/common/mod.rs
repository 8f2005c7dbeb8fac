//! Shared support for the acceptance suite: seeded random instances and an
//! independent brute-force oracle for the small-instance cross-check.
//!
//! The oracle never touches the simplex solver. Every optimum it reports is
//! obtained by enumerating basic points of the relevant polyhedron with
//! Gaussian elimination: the feasible sets are bounded along every direction
//! that moves the objective, so each optimum is attained at a point where
//! `dim` linearly independent constraints are active.
//!
//! The oracle works in `Ratio<i128>`: its inputs are tiny integer matrices
//! and unit-fraction weights, so every intermediate value stays far below
//! the i128 range (Hadamard bounds for ≤ 6×6 systems with entries below 100)
//! while avoiding heap-allocated big integers in the innermost loop.

use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use esmcert_core::rational::{int, rat, Rational};
use esmcert_core::space::{ConeKind, ConeSpec, FiniteProbSpace, Measure, RandomVariable};

type Frac = Ratio<i128>;

// ---------------------------------------------------------------------------
// Random instance generation
// ---------------------------------------------------------------------------

/// A rational drawn from a small grid inside [lo, hi] (denominator ≤ 4).
pub fn random_entry(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let denom = rng.random_range(1..=4i64);
    let numer = rng.random_range(lo * denom..=hi * denom);
    rat(numer, denom)
}

/// A space with the given atom count and random positive rational weights.
pub fn random_space(rng: &mut ChaCha8Rng, atoms: usize) -> Arc<FiniteProbSpace> {
    let raw: Vec<Rational> = (0..atoms)
        .map(|_| rat(rng.random_range(1..=12), rng.random_range(1..=4)))
        .collect();
    let total: Rational = raw.iter().sum();
    let weights = raw.into_iter().map(|w| w / &total).collect();
    let labels = (0..atoms).map(|i| format!("w{i}")).collect();
    FiniteProbSpace::new(labels, weights).expect("positive weights")
}

fn random_generators(
    rng: &mut ChaCha8Rng,
    space: &Arc<FiniteProbSpace>,
    gens: usize,
    bound: i64,
) -> Vec<RandomVariable> {
    let atoms = space.atom_count();
    (0..gens)
        .map(|_| {
            let values = (0..atoms)
                .map(|_| int(rng.random_range(-bound..=bound)))
                .collect();
            RandomVariable::new(space, values).expect("matching length")
        })
        .collect()
}

/// A random cone or linear space: `atoms` in 2..=max_atoms, `generators` in
/// 1..=max_gens, integer entries in [-bound, bound], random positive
/// rational weights. One instance in four is a linear space.
pub fn random_cone(
    rng: &mut ChaCha8Rng,
    max_atoms: usize,
    max_gens: usize,
    bound: i64,
) -> ConeSpec {
    let atoms = rng.random_range(2..=max_atoms);
    let gens = rng.random_range(1..=max_gens);
    let space = random_space(rng, atoms);
    let generators = random_generators(rng, &space, gens, bound);
    let kind = if rng.random_range(0..4u8) == 0 {
        ConeKind::LinearSpace
    } else {
        ConeKind::ConvexCone
    };
    ConeSpec::new(&space, generators, kind).expect("valid cone")
}

/// Like `random_cone` but always a linear space.
pub fn random_linear_cone(
    rng: &mut ChaCha8Rng,
    max_atoms: usize,
    max_gens: usize,
    bound: i64,
) -> ConeSpec {
    let atoms = rng.random_range(2..=max_atoms);
    let gens = rng.random_range(1..=max_gens);
    let space = random_space(rng, atoms);
    let generators = random_generators(rng, &space, gens, bound);
    ConeSpec::new(&space, generators, ConeKind::LinearSpace).expect("valid cone")
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Exact small-fraction linear algebra
// ---------------------------------------------------------------------------

fn to_frac(r: &Rational) -> Frac {
    let numer = r.numer().to_i128().expect("oracle input fits in i128");
    let denom = r.denom().to_i128().expect("oracle input fits in i128");
    Frac::new(numer, denom)
}

fn from_frac(f: &Frac) -> Rational {
    rat(
        i64::try_from(*f.numer()).expect("oracle output fits in i64"),
        i64::try_from(*f.denom()).expect("oracle output fits in i64"),
    )
}

fn dot(a: &[Frac], b: &[Frac]) -> Frac {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves a square system by Gauss-Jordan elimination; `None` when singular.
fn solve_square(a: &[Vec<Frac>], b: &[Frac]) -> Option<Vec<Frac>> {
    let n = b.len();
    let mut m: Vec<Vec<Frac>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(*rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col];
        for j in col..=n {
            m[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for j in col..=n {
                    let d = f * m[col][j];
                    m[r][j] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n]).collect())
}

/// All feasible basic points of {x : a·x ≤ rhs for every row}: solutions of
/// `dim` active rows that satisfy the remaining rows.
fn basic_points(rows: &[(Vec<Frac>, Frac)], dim: usize) -> Vec<Vec<Frac>> {
    let n = rows.len();
    let mut out = Vec::new();
    if dim == 0 || n < dim {
        return out;
    }
    let mut idx: Vec<usize> = (0..dim).collect();
    loop {
        let a: Vec<Vec<Frac>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Frac> = idx.iter().map(|&i| rows[i].1).collect();
        if let Some(x) = solve_square(&a, &b) {
            if rows.iter().all(|(c, r)| dot(c, &x) <= *r) {
                out.push(x);
            }
        }
        // Advance to the next dim-subset of 0..n in lexicographic order.
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + 1 <= n - (dim - i) {
                idx[i] += 1;
                for j in i + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Generator value matrix describing the cone as nonnegative combinations
/// only: a linear space contributes each generator with both signs.
fn nonneg_generator_matrix(cone: &ConeSpec) -> Vec<Vec<Frac>> {
    let mut gens: Vec<Vec<Frac>> = cone
        .generators()
        .iter()
        .map(|x| x.values().iter().map(to_frac).collect())
        .collect();
    if cone.kind() == ConeKind::LinearSpace {
        let negated: Vec<Vec<Frac>> = gens
            .iter()
            .map(|v| v.iter().map(|e| -e).collect())
            .collect();
        gens.extend(negated);
    }
    gens
}

fn payoff_at(gens: &[Vec<Frac>], lambda: &[Frac], atom: usize) -> Frac {
    gens.iter().zip(lambda).map(|(x, c)| x[atom] * c).sum()
}

fn nonneg_rows(g: usize) -> Vec<(Vec<Frac>, Frac)> {
    (0..g)
        .map(|j| {
            let mut c = vec![Frac::zero(); g];
            c[j] = -Frac::one();
            (c, Frac::zero())
        })
        .collect()
}

/// No-arbitrage by direct search: the cone contains a nonzero nonnegative
/// payoff iff some basic point of the normalized slice
/// {λ ≥ 0, Σλ = 1, Xλ ≥ 0} produces one. (Maximizing total positive mass
/// over that bounded polytope attains its optimum at a basic point, so the
/// search is exhaustive.)
pub fn oracle_na(cone: &ConeSpec) -> bool {
    let gens = nonneg_generator_matrix(cone);
    if gens.is_empty() {
        return true;
    }
    let g = gens.len();
    let atoms = cone.space().atom_count();
    let mut rows = nonneg_rows(g);
    rows.push((vec![Frac::one(); g], Frac::one()));
    rows.push((vec![-Frac::one(); g], -Frac::one()));
    for w in 0..atoms {
        let c: Vec<Frac> = gens.iter().map(|x| -x[w]).collect();
        rows.push((c, Frac::zero()));
    }
    for lambda in basic_points(&rows, g) {
        for w in 0..atoms {
            if payoff_at(&gens, &lambda, w).is_positive() {
                return false;
            }
        }
    }
    true
}

/// Minimal k with E_Q(X) ≤ k·ess sup(−X) over the cone; `None` is +∞.
///
/// Finite iff no arbitrage: an arbitrage payoff has E_Q > 0 and
/// ess sup(−X) ≤ 0, defeating every k. Under no-arbitrage the value is
/// max E_Q(Xλ) over {λ ≥ 0, −Xλ ≤ 1 atomwise}; every recession direction of
/// that set yields a nonnegative payoff, hence the zero payoff, so the
/// maximum sits at a basic point.
pub fn oracle_min_k_b(cone: &ConeSpec, q: &Measure) -> Option<Rational> {
    if !oracle_na(cone) {
        return None;
    }
    let gens = nonneg_generator_matrix(cone);
    if gens.is_empty() {
        return Some(Rational::zero());
    }
    let g = gens.len();
    let atoms = cone.space().atom_count();
    let weights: Vec<Frac> = q.weights().iter().map(to_frac).collect();
    let mut rows = nonneg_rows(g);
    for w in 0..atoms {
        let c: Vec<Frac> = gens.iter().map(|x| -x[w]).collect();
        rows.push((c, Frac::one()));
    }
    let mut best = Frac::zero();
    for lambda in basic_points(&rows, g) {
        let value: Frac = (0..atoms)
            .map(|w| weights[w] * payoff_at(&gens, &lambda, w))
            .sum();
        if value > best {
            best = value;
        }
    }
    Some(from_frac(&best))
}

/// Shared search for the two ratio constants. For each sign pattern over the
/// atoms, the payoffs whose signs match the pattern form a polyhedral piece
/// on which the denominator (E_Q(X⁻), or E_Q|X| when `full_abs`) is linear;
/// the denominator ≤ 1 slice of each piece is searched at its basic points.
fn oracle_ratio(cone: &ConeSpec, q: &Measure, full_abs: bool) -> Option<Rational> {
    if !full_abs && !oracle_na(cone) {
        // An arbitrage payoff has E_Q > 0 and E_Q(X⁻) = 0: no finite k works.
        // (With the full |X| denominator the ratio stays ≤ 1 regardless.)
        return None;
    }
    let gens = nonneg_generator_matrix(cone);
    if gens.is_empty() {
        return Some(Rational::zero());
    }
    let g = gens.len();
    let atoms = cone.space().atom_count();
    let weights: Vec<Frac> = q.weights().iter().map(to_frac).collect();
    let mut best = Frac::zero();
    for pattern in 0..(1u32 << atoms) {
        let mut rows = nonneg_rows(g);
        let mut denom_row = vec![Frac::zero(); g];
        for w in 0..atoms {
            let negative_here = pattern >> w & 1 == 1;
            // (Xλ)_w ≤ 0 on pattern-negative atoms, ≥ 0 elsewhere.
            let c: Vec<Frac> = gens
                .iter()
                .map(|x| if negative_here { x[w] } else { -x[w] })
                .collect();
            rows.push((c, Frac::zero()));
            if negative_here {
                for (d, x) in denom_row.iter_mut().zip(&gens) {
                    *d -= weights[w] * x[w];
                }
            } else if full_abs {
                for (d, x) in denom_row.iter_mut().zip(&gens) {
                    *d += weights[w] * x[w];
                }
            }
        }
        rows.push((denom_row, Frac::one()));
        for lambda in basic_points(&rows, g) {
            let value: Frac = (0..atoms)
                .map(|w| weights[w] * payoff_at(&gens, &lambda, w))
                .sum();
            if value > best {
                best = value;
            }
        }
    }
    Some(from_frac(&best))
}

/// Minimal k with E_Q(X) ≤ k·E_Q(X⁻) over the cone; `None` is +∞.
pub fn oracle_min_k_b_star(cone: &ConeSpec, q: &Measure) -> Option<Rational> {
    oracle_ratio(cone, q, false)
}

/// Minimal c with |E_Q(X)| ≤ c·E_Q|X| over a linear space; always finite
/// since |E(X)| ≤ E|X| holds outright. (The space contains −X with X, so the
/// max of E over the nonnegative-combination description already covers both
/// signs of the numerator.)
pub fn oracle_c_min(cone: &ConeSpec, q: &Measure) -> Rational {
    oracle_ratio(cone, q, true).expect("the full-abs ratio is always finite")
}
