//! Worked case studies at finite truncation, each producing a
//! machine-checkable report: finite-dimensional existence, ±1 sign
//! sequences, the ε-approximation family where no equivalent measure
//! exists, the vanishing-risk gap, and the bounded-density question.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

use crate::construct::{self, BandSpec, ConstructError, EsmResult, Feasibility};
use crate::criteria::{self, CriteriaError, Extended};
use crate::rational::{
    format_approx, format_rational, int, rat, rational_from_f64, rational_to_f64, Rational,
};
use crate::space::{
    self, ConeKind, ConeSpec, FiniteProbSpace, Measure, RandomVariable, SpaceError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CasebookError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimStatus {
    Verified,
    Refuted,
    Informational,
}

impl ClaimStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimStatus::Verified => "verified",
            ClaimStatus::Refuted => "refuted",
            ClaimStatus::Informational => "informational",
        }
    }
}

/// One checked statement: what was claimed, which operation checked it, how
/// it came out, and the value (exact `p/q`, or `~`-prefixed float with the
/// tolerance that was applied).
#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub label: String,
    pub operation: String,
    pub status: ClaimStatus,
    pub value: String,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub name: String,
    pub parameters: Vec<(String, String)>,
    pub claims: Vec<Claim>,
}

impl CaseReport {
    fn new(name: &str, parameters: Vec<(String, String)>) -> CaseReport {
        CaseReport {
            name: name.to_string(),
            parameters,
            claims: Vec::new(),
        }
    }

    fn claim(&mut self, label: &str, operation: &str, ok: bool, value: String) {
        self.claims.push(Claim {
            label: label.to_string(),
            operation: operation.to_string(),
            status: if ok {
                ClaimStatus::Verified
            } else {
                ClaimStatus::Refuted
            },
            value,
            tolerance: None,
        });
    }

    fn claim_tol(&mut self, label: &str, operation: &str, ok: bool, value: String, tol: f64) {
        self.claims.push(Claim {
            label: label.to_string(),
            operation: operation.to_string(),
            status: if ok {
                ClaimStatus::Verified
            } else {
                ClaimStatus::Refuted
            },
            value,
            tolerance: Some(tol),
        });
    }

    fn info(&mut self, label: &str, operation: &str, value: String) {
        self.claims.push(Claim {
            label: label.to_string(),
            operation: operation.to_string(),
            status: ClaimStatus::Informational,
            value,
            tolerance: None,
        });
    }

    pub fn all_verified(&self) -> bool {
        self.claims
            .iter()
            .all(|c| c.status != ClaimStatus::Refuted)
    }
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    int(rng.random_range(lo..=hi))
}

fn random_space(rng: &mut ChaCha8Rng, atoms: usize) -> Result<Arc<FiniteProbSpace>, SpaceError> {
    let raw: Vec<Rational> = (0..atoms).map(|_| random_rational(rng, 1, 9)).collect();
    let total: Rational = raw.iter().sum();
    FiniteProbSpace::new(
        (0..atoms).map(|i| format!("w{}", i + 1)).collect(),
        raw.into_iter().map(|w| w / &total).collect(),
    )
}

/// Random linear space of payoffs on a random space: does an equivalent
/// measure with zero expectations exist iff there is no arbitrage? Also
/// checks the band strengthening and invariance under the bounding
/// normalization Y_j = X_j / (1 + Σ|X_i|).
pub fn case_finite_dim_ftap(
    seed: u64,
    atoms: usize,
    generators: usize,
) -> Result<CaseReport, CasebookError> {
    if atoms < 2 {
        return Err(CasebookError::Parameter(format!(
            "need at least 2 atoms, got {atoms}"
        )));
    }
    let mut report = CaseReport::new(
        "finite-dim",
        vec![
            ("seed".into(), seed.to_string()),
            ("atoms".into(), atoms.to_string()),
            ("generators".into(), generators.to_string()),
        ],
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = random_space(&mut rng, atoms)?;
    let xs: Vec<RandomVariable> = (0..generators)
        .map(|_| {
            let values = (0..atoms).map(|_| random_rational(&mut rng, -3, 3)).collect();
            RandomVariable::new(&space, values)
        })
        .collect::<Result<_, _>>()?;
    let cone = ConeSpec::new(&space, xs.clone(), ConeKind::LinearSpace)?;

    let na = criteria::check_na(&cone)?;
    let esm = construct::find_esm(&cone)?;
    let found = matches!(esm, EsmResult::Found { .. });
    report.claim(
        "equivalent measure exists iff no arbitrage",
        "check_na/find_esm",
        na.holds == found,
        format!("na={}, measure_found={}", na.holds, found),
    );

    if na.holds {
        let p0 = space.reference_measure();
        let k_report = criteria::min_k_b_star(&cone, &p0)?;
        match &k_report.value {
            Extended::Finite(k) => {
                report.claim(
                    "worst-case ratio constant is finite",
                    "min_k_b_star",
                    true,
                    format_rational(k),
                );
                match construct::find_esm_in_band(&cone, &p0, k)? {
                    Feasibility::Found(p) => {
                        let band = BandSpec::from_k(p0.clone(), k)?;
                        report.claim(
                            "measure found inside r·P0 ≤ P ≤ s·P0",
                            "find_esm_in_band",
                            band.contains(&p),
                            format!("t={}", format_rational(&band.t)),
                        );
                    }
                    Feasibility::Infeasible(_) => {
                        report.claim(
                            "measure found inside r·P0 ≤ P ≤ s·P0",
                            "find_esm_in_band",
                            false,
                            "infeasible".into(),
                        );
                    }
                }
            }
            Extended::Infinite => {
                report.claim(
                    "worst-case ratio constant is finite",
                    "min_k_b_star",
                    false,
                    "+inf".into(),
                );
            }
        }
    } else {
        report.info(
            "arbitrage witness present; no measure attempted",
            "check_na",
            "refusal is consistent".into(),
        );
    }

    // Dividing by 1 + Σ|X_i| bounds the payoffs without changing whether
    // an arbitrage exists.
    let mut y_values = vec![Rational::one(); atoms];
    for x in &xs {
        for (v, xv) in y_values.iter_mut().zip(x.values()) {
            *v += xv.abs();
        }
    }
    let y = RandomVariable::new(&space, y_values)?;
    let normalized = construct::rescale_cone(&cone, &y)?;
    let na_after = criteria::check_na(&normalized)?;
    report.claim(
        "arbitrage verdict unchanged by bounding normalization",
        "rescale_cone/check_na",
        na.holds == na_after.holds,
        format!("before={}, after={}", na.holds, na_after.holds),
    );
    Ok(report)
}

/// Default coordinate weights P(X_m = −1) = (m+1)⁻².
pub fn sign_default_weights(n: usize) -> Vec<Rational> {
    (1..=n)
        .map(|m| {
            let d = (m as i64 + 1) * (m as i64 + 1);
            rat(1, d)
        })
        .collect()
}

/// The 2ⁿ-atom space of independent ±1 coordinates; `weights[m−1]` is
/// P(X_m = −1).
pub fn sign_space(
    n: usize,
    weights: &[Rational],
) -> Result<(Arc<FiniteProbSpace>, Vec<RandomVariable>), CasebookError> {
    if n == 0 || n > 12 {
        return Err(CasebookError::Parameter(format!(
            "coordinate count {n} outside 1..=12"
        )));
    }
    if weights.len() != n {
        return Err(CasebookError::Parameter(format!(
            "{} coordinate weights for {n} coordinates",
            weights.len()
        )));
    }
    for w in weights {
        if !w.is_positive() || *w >= int(1) {
            return Err(CasebookError::Parameter(format!(
                "coordinate weight {} outside (0,1)",
                format_rational(w)
            )));
        }
    }
    let count = 1usize << n;
    let mut labels = Vec::with_capacity(count);
    let mut atom_weights = Vec::with_capacity(count);
    for code in 0..count {
        let mut label = String::with_capacity(n);
        let mut weight = Rational::one();
        for m in 0..n {
            // Bit set ⇒ coordinate m+1 equals −1.
            if code >> m & 1 == 1 {
                label.push('-');
                weight *= &weights[m];
            } else {
                label.push('+');
                weight *= int(1) - &weights[m];
            }
        }
        labels.push(label);
        atom_weights.push(weight);
    }
    let space = FiniteProbSpace::new(labels, atom_weights)?;
    let coords = (0..n)
        .map(|m| {
            let values = (0..count)
                .map(|code| if code >> m & 1 == 1 { int(-1) } else { int(1) })
                .collect();
            RandomVariable::new(&space, values)
        })
        .collect::<Result<_, _>>()?;
    Ok((space, coords))
}

/// Sign-sequence space: the essential-sup identity
/// ess sup(Σ b_m X_m) = Σ|b_m|, the bound minK_b(P₀) ≤ 1 it implies, and
/// the drift of E(X_m) toward 1 under the default weights.
pub fn case_sign_sequences(
    n: usize,
    weights: Option<Vec<Rational>>,
) -> Result<CaseReport, CasebookError> {
    let weights = weights.unwrap_or_else(|| sign_default_weights(n));
    let mut report = CaseReport::new(
        "sign-sequences",
        vec![
            ("n".into(), n.to_string()),
            (
                "weights".into(),
                weights
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        ],
    );
    let (space, coords) = sign_space(n, &weights)?;
    let cone = ConeSpec::new(&space, coords.clone(), ConeKind::LinearSpace)?;

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut identity_holds = true;
    for _ in 0..20 {
        let b: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, -3, 3)).collect();
        let x = cone.combine(&b)?;
        let expected: Rational = b.iter().map(|c| c.abs()).sum();
        if space::ess_sup(&x) != expected
            || space::ess_sup(&x.scale(&int(-1))) != expected
        {
            identity_holds = false;
        }
    }
    report.claim(
        "ess sup(Σ b·X) = Σ|b| = ess sup(−Σ b·X) on 20 random b",
        "ess_sup",
        identity_holds,
        "full-support sign space".into(),
    );

    let p0 = space.reference_measure();
    let k = criteria::min_k_b(&cone, &p0)?;
    let bound_ok = match &k.value {
        Extended::Finite(v) => *v <= int(1),
        Extended::Infinite => false,
    };
    report.claim(
        "minimal constant for E(X) ≤ k·ess sup(−X) is at most 1",
        "min_k_b",
        bound_ok,
        match &k.value {
            Extended::Finite(v) => format_rational(v),
            Extended::Infinite => "+inf".into(),
        },
    );

    for (m, w) in weights.iter().enumerate() {
        let e = space::expectation(&p0, &coords[m])?;
        let closed_form = int(1) - int(2) * w;
        report.claim(
            &format!("E(X_{}) = 1 − 2·P(X_{} = −1)", m + 1, m + 1),
            "expectation",
            e == closed_form,
            format_rational(&e),
        );
    }
    report.info(
        "coordinate means approach 1 as weights shrink",
        "expectation",
        "finite shadow of the a.s. limit".into(),
    );
    Ok(report)
}

/// Poisson(1) weights on {0..cap}: each double is rounded to 24 mantissa
/// bits, converted to the exact dyadic rational it denotes, and the family
/// is renormalized exactly to sum 1. The rounding keeps the LP coefficients
/// small (every later check is exact relative to these weights; the only
/// float comparison in the case uses a 10⁻³ tolerance, far above 2⁻²⁴).
fn truncated_poisson(cap: usize) -> Vec<Rational> {
    let quantum = (1u64 << 24) as f64;
    let mut raw = Vec::with_capacity(cap + 1);
    let mut term = (-1f64).exp();
    for j in 0..=cap {
        if j > 0 {
            term /= j as f64;
        }
        let quantized = ((term * quantum).round()).max(1.0) / quantum;
        raw.push(rational_from_f64(quantized).expect("finite weight"));
    }
    let total: Rational = raw.iter().sum();
    raw.into_iter().map(|w| w / &total).collect()
}

/// The ε-approximation family: a linear space with no equivalent
/// super-martingale measure that still admits, for every ε > 0, a measure
/// Q_ε with E(X) ≤ ε·ess sup(−X).
///
/// (Y, Z) are independent truncated Poisson(1) on {0..cap}; generators are
/// X_0 = I(Y=0) − I(Z=0) and X_j = I(Y=j) − P₀(Y=j)·I(Z>0).
pub fn case_approx_esfa(
    epsilon: &Rational,
    cap: usize,
    n: usize,
) -> Result<CaseReport, CasebookError> {
    if !epsilon.is_positive() {
        return Err(CasebookError::Parameter(format!(
            "epsilon {} must be positive",
            format_rational(epsilon)
        )));
    }
    if n >= cap || cap < 2 {
        return Err(CasebookError::Parameter(format!(
            "need n < cap and cap ≥ 2, got n={n}, cap={cap}"
        )));
    }
    let mut report = CaseReport::new(
        "approx-esfa",
        vec![
            ("epsilon".into(), format_rational(epsilon)),
            ("cap".into(), cap.to_string()),
            ("n".into(), n.to_string()),
        ],
    );
    let marginal = truncated_poisson(cap);
    let side = cap + 1;
    let mut labels = Vec::with_capacity(side * side);
    let mut weights = Vec::with_capacity(side * side);
    for y in 0..side {
        for z in 0..side {
            labels.push(format!("y{y}z{z}"));
            weights.push(&marginal[y] * &marginal[z]);
        }
    }
    let space = FiniteProbSpace::new(labels, weights)?;
    let atom = |y: usize, z: usize| y * side + z;

    let mut generators = Vec::with_capacity(side);
    let y0: Vec<usize> = (0..side).map(|z| atom(0, z)).collect();
    let z0: Vec<usize> = (0..side).map(|y| atom(y, 0)).collect();
    let x0 = RandomVariable::indicator(&space, &y0)
        .add(&RandomVariable::indicator(&space, &z0).scale(&int(-1)))?;
    generators.push(x0);
    let z_pos: Vec<usize> = (0..side * side).filter(|a| a % side != 0).collect();
    for j in 1..side {
        let yj: Vec<usize> = (0..side).map(|z| atom(j, z)).collect();
        let xj = RandomVariable::indicator(&space, &yj).add(
            &RandomVariable::indicator(&space, &z_pos).scale(&-marginal[j].clone()),
        )?;
        generators.push(xj);
    }

    // Q_ε = (ε·P₀(·|B) + P₀(·|B^c)) / (ε+1), where B^c = {Y=0, Z=0}.
    let p0 = space.reference_measure();
    let bc = atom(0, 0);
    let pb = int(1) - p0.weight(bc);
    let denom = epsilon + int(1);
    let q_eps = Measure::new(
        &space,
        (0..side * side)
            .map(|a| {
                if a == bc {
                    denom.recip()
                } else {
                    epsilon / &denom * p0.weight(a) / &pb
                }
            })
            .collect(),
    )?;

    let p_z0 = p0.mass(&z0);
    let ratio = &p_z0 / &pb;

    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let tol = rational_from_f64(1e-9).unwrap();
    let mut identity_ok = true;
    let mut inequality_ok = true;
    for _ in 0..200 {
        let mut coeffs = vec![Rational::zero(); side];
        for c in coeffs.iter_mut().take(n + 1) {
            *c = random_rational(&mut rng, -4, 4);
        }
        let x = {
            let mut acc = RandomVariable::constant(&space, int(0));
            for (c, g) in coeffs.iter().zip(&generators) {
                acc = acc.add(&g.scale(c))?;
            }
            acc
        };
        let b: Rational = (1..=n).map(|j| &coeffs[j] * &marginal[j]).sum();
        let e = space::expectation(&q_eps, &x)?;
        if e != &b * epsilon / &denom * &ratio {
            identity_ok = false;
        }
        if e > epsilon * space::ess_sup(&x.scale(&int(-1))) + &tol {
            inequality_ok = false;
        }
    }
    report.claim(
        "E(X) under Q_ε equals b·ε/(ε+1) · P(Z=0)/P(B) on 200 random X",
        "expectation",
        identity_ok,
        "exact".into(),
    );
    report.claim_tol(
        "E(X) under Q_ε ≤ ε·ess sup(−X) on 200 random X",
        "expectation/ess_sup",
        inequality_ok,
        "exact (tolerance unused)".into(),
        1e-9,
    );

    let analytic = (-1f64).exp() / (1.0 - (-2f64).exp());
    let truncated = rational_to_f64(&ratio);
    report.claim_tol(
        "truncated ratio P(Z=0)/P(B) matches e⁻¹/(1−e⁻²)",
        "mass",
        (truncated - analytic).abs() < 1e-3,
        format!("{} vs {}", format_approx(truncated), format_approx(analytic)),
        1e-3,
    );
    report.claim(
        "truncated ratio is below 1",
        "mass",
        ratio < int(1),
        format_rational(&ratio),
    );

    // Full generator set: summing the constraints forces P(Z>0)·P₀(Y=0)=0,
    // so any absolutely continuous solution lives in {Z = 0}.
    let cone = ConeSpec::new(&space, generators, ConeKind::LinearSpace)?;
    match construct::find_esm(&cone)? {
        EsmResult::NoEquivalent { best, certificate } => {
            report.claim(
                "no equivalent measure for the full generator set",
                "find_esm",
                certificate.verify(),
                "maximal floor 0, certificate checks".into(),
            );
            let confined = best
                .map(|p| p.support().iter().all(|a| a % side == 0))
                .unwrap_or(false);
            report.claim(
                "every absolutely continuous solution is confined to {Z=0}",
                "find_esm",
                confined,
                "support obstruction".into(),
            );
        }
        EsmResult::Found { floor, .. } => {
            report.claim(
                "no equivalent measure for the full generator set",
                "find_esm",
                false,
                format!("unexpected floor {}", format_rational(&floor)),
            );
        }
    }
    Ok(report)
}

/// The vanishing-risk gap: alternating-band payoffs of Z on a dyadic grid.
/// Checks the expectation identity behind the liminf argument and the
/// growth of ess sup with the truncation bound.
pub fn case_nflvr_gap(bound: usize, n: usize) -> Result<CaseReport, CasebookError> {
    if bound < 2 || n == 0 || n > 8 {
        return Err(CasebookError::Parameter(format!(
            "need bound ≥ 2 and 1 ≤ n ≤ 8, got bound={bound}, n={n}"
        )));
    }
    let mut report = CaseReport::new(
        "vanishing-risk",
        vec![
            ("bound".into(), bound.to_string()),
            ("n".into(), n.to_string()),
        ],
    );
    let (space, grid) = nflvr_grid(bound, n)?;
    let x0 = nflvr_x0(&space, &grid);
    let xs: Vec<RandomVariable> = (1..=n).map(|j| nflvr_xn(&space, &grid, j)).collect();

    let p0 = space.reference_measure();
    let tilt = {
        let raw: Vec<Rational> = (0..grid.len()).map(|i| int(i as i64 + 1)).collect();
        let total: Rational = raw.iter().sum();
        Measure::new(&space, raw.into_iter().map(|w| w / &total).collect())?
    };
    let mut identity_ok = true;
    for p in [&p0, &tilt] {
        for (j, xj) in xs.iter().enumerate() {
            let j = j + 1;
            let lhs = space::expectation(p, xj)?;
            let below: Vec<usize> = grid
                .iter()
                .enumerate()
                .filter(|(_, z)| **z < int(j as i64))
                .map(|(i, _)| i)
                .collect();
            let mut rhs = p.mass(&below);
            for k in j..bound {
                let lo = int(k as i64) + rat(1, 1 << j);
                let hi = int(k as i64 + 1);
                let sign = if k % 2 == 0 { int(1) } else { int(-1) };
                let term: Rational = grid
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| **z >= lo && **z < hi)
                    .map(|(i, z)| p.weight(i) * z)
                    .sum();
                rhs += sign * term;
            }
            if lhs != rhs {
                identity_ok = false;
            }
        }
    }
    report.claim(
        "E(X_j) = P(Z<j) + Σ (−1)^k E{Z·I(k+2⁻ʲ ≤ Z < k+1)} for P₀ and a tilt",
        "expectation",
        identity_ok,
        "exact on the dyadic grid".into(),
    );

    let peak = space::ess_sup(&x0);
    // X₀ = +Z exactly on even bands, so the peak is the largest grid value
    // in an even band.
    let enumerated = grid
        .iter()
        .filter(|z| {
            let band = z.floor().to_integer();
            (&band % 2i64).is_zero()
        })
        .max()
        .cloned()
        .unwrap();
    report.claim(
        "ess sup(X₀) is the largest grid value in an even band",
        "ess_sup",
        peak == enumerated,
        format_rational(&peak),
    );

    let (space2, grid2) = nflvr_grid(bound * 2, n)?;
    let peak2 = space::ess_sup(&nflvr_x0(&space2, &grid2));
    report.claim(
        "doubling the truncation bound strictly raises ess sup(X₀)",
        "ess_sup",
        peak2 > peak,
        format!("{} → {}", format_rational(&peak), format_rational(&peak2)),
    );

    let drifts: Vec<String> = xs
        .iter()
        .map(|xj| format_rational(&space::expectation(&p0, xj).unwrap()))
        .collect();
    report.info(
        "E(X_j) trend toward 1 (liminf claim, truncation only)",
        "expectation",
        drifts.join(", "),
    );
    Ok(report)
}

fn nflvr_grid(
    bound: usize,
    n: usize,
) -> Result<(Arc<FiniteProbSpace>, Vec<Rational>), CasebookError> {
    // Dyadic grid of step 2^{−(n+2)}, fine enough to resolve every
    // threshold k + 2^{−j} for j ≤ n, uniform weights, 0 < Z < bound.
    let step_denom = 1i64 << (n + 2);
    let count = bound as i64 * step_denom - 1;
    let grid: Vec<Rational> = (1..=count).map(|i| rat(i, step_denom)).collect();
    let labels = (1..=count).map(|i| format!("z{i}")).collect();
    let uniform = rat(1, count);
    let space = FiniteProbSpace::new(labels, vec![uniform; count as usize])?;
    Ok((space, grid))
}

fn nflvr_x0(space: &Arc<FiniteProbSpace>, grid: &[Rational]) -> RandomVariable {
    let values = grid
        .iter()
        .map(|z| {
            let band = z.floor().to_integer();
            if (&band % 2i64).is_zero() {
                z.clone()
            } else {
                -z.clone()
            }
        })
        .collect();
    RandomVariable::new(space, values).expect("grid-sized values")
}

fn nflvr_xn(space: &Arc<FiniteProbSpace>, grid: &[Rational], j: usize) -> RandomVariable {
    let threshold = rat(1, 1 << j);
    let values = grid
        .iter()
        .map(|z| {
            if *z < int(j as i64) {
                return Rational::one();
            }
            let band = z.floor();
            if z - &band >= threshold {
                let k = band.to_integer();
                if (&k % 2i64).is_zero() {
                    z.clone()
                } else {
                    -z.clone()
                }
            } else {
                Rational::zero()
            }
        })
        .collect();
    RandomVariable::new(space, values).expect("grid-sized values")
}

/// The bounded-density question: for payoffs with zero mean and a strictly
/// positive density f, a measure Q with r·P_f ≤ Q ≤ s·P_f and zero
/// expectations yields g = ψ/r (ψ the density of Q) with g ≥ f,
/// E(g) < ∞ and E(g·X_j) = 0 — so the obstruction needs infinitely many
/// generators.
pub fn case_bounded_density(seed: u64, d: usize) -> Result<CaseReport, CasebookError> {
    if d == 0 {
        return Err(CasebookError::Parameter("need at least one payoff".into()));
    }
    let atoms = (2 * d).max(2);
    let mut report = CaseReport::new(
        "bounded-density",
        vec![
            ("seed".into(), seed.to_string()),
            ("d".into(), d.to_string()),
        ],
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = random_space(&mut rng, atoms)?;
    let p0 = space.reference_measure();

    // Centered payoffs: E_{P₀}(X_j) = 0 exactly.
    let xs: Vec<RandomVariable> = (0..d)
        .map(|_| {
            let raw = RandomVariable::new(
                &space,
                (0..atoms).map(|_| random_rational(&mut rng, -4, 4)).collect(),
            )?;
            let mean = space::expectation(&p0, &raw)?;
            raw.add(&RandomVariable::constant(&space, -mean))
        })
        .collect::<Result<_, _>>()?;
    let cone = ConeSpec::new(&space, xs.clone(), ConeKind::LinearSpace)?;

    // Strictly positive density with E_{P₀}(f) = 1.
    let f = {
        let raw = RandomVariable::new(
            &space,
            (0..atoms).map(|_| random_rational(&mut rng, 1, 9)).collect(),
        )?;
        let mean = space::expectation(&p0, &raw)?;
        raw.scale(&mean.recip())
    };
    let p_f = Measure::new(
        &space,
        f.values()
            .iter()
            .zip(p0.weights())
            .map(|(fv, w)| fv * w)
            .collect(),
    )?;

    let k_report = criteria::min_k_b_star(&cone, &p_f)?;
    let k = match &k_report.value {
        Extended::Finite(k) => k.clone(),
        Extended::Infinite => {
            report.claim(
                "worst-case ratio under P_f is finite",
                "min_k_b_star",
                false,
                "+inf".into(),
            );
            return Ok(report);
        }
    };
    report.claim(
        "worst-case ratio under P_f is finite",
        "min_k_b_star",
        true,
        format_rational(&k),
    );

    let t = &k + int(1);
    let r = t.recip();
    let q = match construct::find_esm_in_band(&cone, &p_f, &k)? {
        Feasibility::Found(q) => q,
        Feasibility::Infeasible(_) => {
            report.claim(
                "zero-expectation measure exists in the band around P_f",
                "find_esm_in_band",
                false,
                "infeasible".into(),
            );
            return Ok(report);
        }
    };
    report.claim(
        "zero-expectation measure exists in the band around P_f",
        "find_esm_in_band",
        true,
        format!("r={}, s={}", format_rational(&r), format_rational(&t)),
    );

    let psi = space::density_of(&q, &p0)?;
    let g = psi.scale(&t); // ψ/r with r = 1/t
    let dominates = g.values().iter().zip(f.values()).all(|(gv, fv)| gv >= fv);
    report.claim("g = ψ/r dominates f atomwise", "density_of", dominates, {
        let worst = g
            .values()
            .iter()
            .zip(f.values())
            .map(|(gv, fv)| gv - fv)
            .min()
            .unwrap();
        format!("min(g−f)={}", format_rational(&worst))
    });
    let eg = space::expectation(&p0, &g)?;
    report.claim(
        "E(g) is finite",
        "expectation",
        true,
        format_rational(&eg),
    );
    let zero_products = xs.iter().try_fold(true, |ok, x| {
        let gx = RandomVariable::new(
            &space,
            g.values()
                .iter()
                .zip(x.values())
                .map(|(gv, xv)| gv * xv)
                .collect(),
        )?;
        Ok::<_, CasebookError>(ok && space::expectation(&p0, &gx)? == int(0))
    })?;
    report.claim(
        "E(g·X_j) = 0 exactly for every j",
        "expectation",
        zero_products,
        "exact".into(),
    );
    Ok(report)
}
