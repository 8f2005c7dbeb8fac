//! Deterministic text reports for every command. Rationals print exactly
//! as `p/q`; the only floating values are the casebook's `~`-prefixed
//! approximations. Each renderer returns the report body together with the
//! affirmative/negative verdict the exit code is derived from.

use num_traits::One;

use crate::casebook::CaseReport;
use crate::construct::{self, ConstructError, EsmResult, Feasibility};
use crate::criteria::{self, CriteriaError, Extended};
use crate::marginals::{CouplingResult, MarginalError, MarginalPair, ProductSpace};
use crate::rational::{format_rational, Rational};
use crate::solver::{Certified, LpOutcome};
use crate::space::{ConeKind, ConeSpec, Measure, RandomVariable};

fn extended_str(e: &Extended) -> String {
    match e {
        Extended::Finite(v) => format_rational(v),
        Extended::Infinite => "+inf".to_string(),
    }
}

fn push_measure(out: &mut String, m: &Measure) {
    for (label, w) in m.space().labels().iter().zip(m.weights()) {
        out.push_str(&format!("  {} = {}\n", label, format_rational(w)));
    }
}

fn push_payoff(out: &mut String, x: &RandomVariable) {
    let values: Vec<String> = x.values().iter().map(format_rational).collect();
    out.push_str(&format!("  witness payoff = ({})\n", values.join(", ")));
}

fn push_certificate(out: &mut String, cert: &Certified) {
    let checked = if cert.verify() { "checks" } else { "FAILS" };
    match &cert.outcome {
        LpOutcome::Infeasible { farkas } => {
            let mu: Vec<String> = farkas.iter().map(format_rational).collect();
            out.push_str(&format!(
                "  certificate: infeasible, Farkas multipliers {} ({})\n",
                format!("[{}]", mu.join(", ")),
                checked
            ));
        }
        LpOutcome::Optimal { value, .. } => {
            out.push_str(&format!(
                "  certificate: dual bound, optimum = {} ({})\n",
                format_rational(value),
                checked
            ));
        }
        LpOutcome::Unbounded { .. } => {
            out.push_str(&format!("  certificate: unbounded ({})\n", checked));
        }
    }
}

fn scenario_line(cone: &ConeSpec) -> String {
    format!(
        "scenario: {} atoms, {} generators, {}\n",
        cone.space().atom_count(),
        cone.generators().len(),
        cone.kind()
    )
}

/// The `check` command: every criterion on the scenario's cone with
/// Q = P₀, then the existence verdict. Affirmative iff an equivalent
/// super-martingale measure exists.
pub fn check_text(cone: &ConeSpec) -> Result<(String, bool), CriteriaError> {
    let mut out = scenario_line(cone);
    let p0 = cone.space().reference_measure();

    let na = criteria::check_na(cone)?;
    out.push_str(&format!(
        "no-arbitrage: {}\n",
        if na.holds { "holds" } else { "fails" }
    ));
    if let Some(x) = &na.witness {
        push_payoff(&mut out, x);
    }
    let a = criteria::check_condition_a(cone)?;
    out.push_str(&format!(
        "condition (a): {}\n",
        if a.holds { "holds" } else { "fails" }
    ));
    let d = criteria::check_condition_d(cone)?;
    out.push_str(&format!(
        "condition (d): {}\n",
        if d.holds { "holds" } else { "fails" }
    ));
    let b_star = criteria::min_k_b_star(cone, &p0)?;
    out.push_str(&format!("min k (b*), Q = P0: {}\n", extended_str(&b_star.value)));
    let b = criteria::min_k_b(cone, &p0)?;
    out.push_str(&format!("min k (b), Q = P0: {}\n", extended_str(&b.value)));
    match &b.value {
        Extended::Finite(k) => {
            let pairs = criteria::build_condition_c(cone, &p0, k)?;
            let ok = criteria::verify_condition_c(cone, &pairs)?;
            out.push_str(&format!(
                "condition (c), Q = P0: {} ({} threshold sets)\n",
                if ok { "holds" } else { "fails" },
                pairs.len()
            ));
        }
        Extended::Infinite => {
            out.push_str("condition (c), Q = P0: not attempted (min k (b) infinite)\n");
        }
    }
    if let Extended::Finite(k) = &b_star.value {
        out.push_str(&format!(
            "c = k/(k+2): {}\n",
            format_rational(&criteria::convert_k_to_c(k)?)
        ));
    }
    if cone.kind() == ConeKind::LinearSpace {
        let c = criteria::c_min_b_star_star(cone, &p0)?;
        out.push_str(&format!("min c (b**), Q = P0: {}\n", extended_str(&c)));
    }

    let exists = b_star.value.is_finite();
    let noun = match cone.kind() {
        ConeKind::ConvexCone => "equivalent supermartingale measure",
        ConeKind::LinearSpace => "equivalent martingale measure",
    };
    out.push_str(&format!(
        "{}: {}\n",
        noun,
        if exists { "exists" } else { "none" }
    ));
    Ok((out, exists))
}

/// The `esm` command: construct the measure or print the certificate.
pub fn esm_text(cone: &ConeSpec) -> Result<(String, bool), ConstructError> {
    let mut out = scenario_line(cone);
    match construct::find_esm(cone)? {
        EsmResult::Found { measure, floor } => {
            out.push_str("equivalent supermartingale measure: exists\n");
            push_measure(&mut out, &measure);
            out.push_str(&format!("  floor = {}\n", format_rational(&floor)));
            Ok((out, true))
        }
        EsmResult::NoEquivalent { best, certificate } => {
            out.push_str("equivalent supermartingale measure: none\n");
            push_certificate(&mut out, &certificate);
            if let Some(best) = best {
                out.push_str("  best absolutely continuous solution:\n");
                push_measure(&mut out, &best);
            }
            Ok((out, false))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KminMode {
    BStar,
    B,
    CStarStar,
}

/// The `kmin` command: one minimal constant under the chosen condition.
/// Affirmative iff the constant is finite.
pub fn kmin_text(
    cone: &ConeSpec,
    mode: KminMode,
    q: &Measure,
) -> Result<(String, bool), CriteriaError> {
    let mut out = scenario_line(cone);
    let (label, value) = match mode {
        KminMode::BStar => ("min k (b*)", criteria::min_k_b_star(cone, q)?.value),
        KminMode::B => ("min k (b)", criteria::min_k_b(cone, q)?.value),
        KminMode::CStarStar => ("min c (b**)", criteria::c_min_b_star_star(cone, q)?),
    };
    out.push_str(&format!("{}: {}\n", label, extended_str(&value)));
    if let (KminMode::BStar, Extended::Finite(k)) = (mode, &value) {
        out.push_str(&format!(
            "equivalent constant c = k/(k+2): {}\n",
            format_rational(&criteria::convert_k_to_c(k)?)
        ));
    }
    Ok((out, value.is_finite()))
}

/// The `band` command: search (1/(k+1))·Q ≤ P ≤ (k+1)·Q.
pub fn band_text(
    cone: &ConeSpec,
    q: &Measure,
    k: &Rational,
) -> Result<(String, bool), ConstructError> {
    let mut out = scenario_line(cone);
    let t = k + Rational::one();
    out.push_str(&format!(
        "band: {}·Q <= P <= {}·Q\n",
        format_rational(&t.recip()),
        format_rational(&t)
    ));
    match construct::find_esm_in_band(cone, q, k)? {
        Feasibility::Found(p) => {
            out.push_str("measure in band: exists\n");
            push_measure(&mut out, &p);
            Ok((out, true))
        }
        Feasibility::Infeasible(cert) => {
            out.push_str("measure in band: none\n");
            push_certificate(&mut out, &cert);
            Ok((out, false))
        }
    }
}

/// The `couple` command: equivalent measure with prescribed marginals.
pub fn couple_text(
    ps: &ProductSpace,
    pair: &MarginalPair,
) -> Result<(String, bool), MarginalError> {
    let mut out = format!(
        "product: {} rows x {} cols, {} support cells\n",
        ps.rows().len(),
        ps.cols().len(),
        ps.joint().atom_count()
    );
    match crate::marginals::couple_with_marginals(ps, pair)? {
        CouplingResult::Found { coupling, floor } => {
            out.push_str("coupling: exists\n");
            push_measure(&mut out, &coupling);
            out.push_str(&format!("  floor = {}\n", format_rational(&floor)));
            Ok((out, true))
        }
        CouplingResult::NoCoupling { certificate } => {
            out.push_str("coupling: none\n");
            push_certificate(&mut out, &certificate);
            Ok((out, false))
        }
    }
}

/// A casebook report as text. Affirmative iff no claim was refuted.
pub fn case_text(report: &CaseReport) -> (String, bool) {
    let mut out = format!("case: {}\n", report.name);
    let params: Vec<String> = report
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    out.push_str(&format!("parameters: {}\n", params.join(", ")));
    for claim in &report.claims {
        out.push_str(&format!(
            "[{}] {} = {} (via {}{})\n",
            claim.status.as_str(),
            claim.label,
            claim.value,
            claim.operation,
            match claim.tolerance {
                Some(t) => format!(", tolerance {t:e}"),
                None => String::new(),
            }
        ));
    }
    let ok = report.all_verified();
    out.push_str(&format!(
        "result: {}\n",
        if ok {
            "all checked claims verified"
        } else {
            "REFUTED CLAIMS PRESENT"
        }
    ));
    (out, ok)
}
