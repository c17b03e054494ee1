//! Existence decisions for irreducible `SO(3)`-structures, two-fields and
//! low-rank bundles. Every verdict carries the criterion it rests on and an
//! ordered trace of the conditions that were checked.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charclass::{necessary_conditions, obstruction_report, Bundle3Data, Bundle5Data, CharClassError};
use crate::fgab::{has_element_of_order, solve_divisibility, FgabError, GroupElement};
use crate::topology::{F2Vector, ManifoldProfile, TopologyError, Violation};

/// Names of the criteria cited by decisions.
pub mod tags {
    pub const IRREDUCIBLE_SPIN: &str = "irreducible-spin";
    pub const IRREDUCIBLE_NONSPIN: &str = "irreducible-nonspin";
    pub const SIMPLY_CONNECTED: &str = "simply-connected-shortcut";
    pub const NECESSARY_CONDITIONS: &str = "necessary-conditions";
    pub const ORDER4_OPEN: &str = "order-4-torsion-open";
    pub const THOMAS: &str = "thomas-two-field";
    pub const ATIYAH: &str = "atiyah-two-field";
    pub const STANDARD_REFORMULATION: &str = "standard-structure-reformulation";
    pub const RANK3: &str = "rank3-pontryagin-square";
    pub const RANK5: &str = "rank5-relation";
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("invalid profile: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidProfile(Vec<Violation>),
    #[error("criterion inapplicable: {0}")]
    CriterionInapplicable(String),
    #[error("insufficient ring data: {0}")]
    InsufficientRingData(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Group(#[from] FgabError),
    #[error(transparent)]
    Bundle(#[from] CharClassError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "Yes",
            Verdict::No => "No",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub condition: String,
    pub value: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub theorem: String,
    pub trace: Vec<TraceEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Decision {
    fn new(theorem: &str) -> Self {
        Self {
            verdict: Verdict::Unknown,
            theorem: theorem.to_string(),
            trace: Vec::new(),
            notes: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn check(&mut self, condition: &str, value: impl fmt::Display, ok: bool) -> bool {
        self.trace.push(TraceEntry {
            condition: condition.to_string(),
            value: value.to_string(),
            ok,
        });
        ok
    }

    pub fn render(&self) -> String {
        let mut s = format!("verdict: {}\ntheorem: {}\n", self.verdict, self.theorem);
        for t in &self.trace {
            let mark = if t.ok { "ok" } else { "FAIL" };
            s.push_str(&format!("  [{mark}] {}: {}\n", t.condition, t.value));
        }
        for n in &self.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        for w in &self.warnings {
            s.push_str(&format!("  warning: {w}\n"));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    Thomas,
    Atiyah,
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thomas" => Ok(Criterion::Thomas),
            "atiyah" => Ok(Criterion::Atiyah),
            other => Err(format!("unknown criterion {other:?} (expected thomas or atiyah)")),
        }
    }
}

fn ensure_valid(m: &ManifoldProfile) -> Result<(), DecideError> {
    let v = m.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(DecideError::InvalidProfile(v))
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Whether `M` admits an irreducible `SO(3)`-structure.
pub fn decide_irreducible_so3(m: &ManifoldProfile) -> Result<Decision, DecideError> {
    ensure_valid(m)?;
    let tangent = Bundle5Data::tangent(Arc::new(m.clone()));
    let nc = necessary_conditions(&tangent);
    let report = obstruction_report(&tangent);
    let simply = m.is_simply_connected_homologically();
    let mut d = Decision::new("");
    if m.spin {
        d.check("spin branch: w2(M) = 0", "true", true);
    } else {
        d.check("non-spin branch: w2(M) != 0", "true", true);
    }
    let w4 = d.check("w4(M) = 0", flag(m.w4_zero), m.w4_zero);
    let div5 = d.check("p1(M) divisible by 5", &m.p1, nc.p1_divisible_by_5);
    if report.k1_mod5_part_zero != nc.p1_divisible_by_5 {
        d.warnings
            .push("divisibility of p1 by 5 disagrees with the vanishing of its reduction mod 5".into());
    }
    let chi = m.semicharacteristic();
    let k = m.kervaire_semicharacteristic();
    if m.spin {
        let ok = d.check("semicharacteristic = 0", format!("chi_hat = {chi}"), chi == 0);
        d.verdict = Verdict::from_bool(w4 && div5 && ok);
        d.theorem = tags::IRREDUCIBLE_SPIN.into();
        if let Some(k2) = report.k2_value {
            d.notes.push(format!("secondary obstruction k2(tau_M) = {k2}"));
        }
        if let Some(r) = reformulation_check(m)? {
            if !r.agrees {
                d.warnings.push(format!(
                    "two-field reformulation gives {} while the direct criterion gives {}",
                    flag(r.combined_thomas),
                    d.verdict
                ));
            }
            if r.thomas != r.atiyah {
                d.warnings.push(format!(
                    "two-field criteria disagree on a spin profile: chi_hat = {chi}, k = {k}"
                ));
            }
        }
    } else {
        let order4 = has_element_of_order(&m.h4(), 4)?;
        d.check("H^4(M;Z) has no element of order 4", m.h4(), !order4);
        if !order4 {
            d.verdict = Verdict::from_bool(w4 && div5);
            d.theorem = tags::IRREDUCIBLE_NONSPIN.into();
            if d.verdict == Verdict::Yes {
                if let Some(eta) = reconstruct_rank3(m)? {
                    d.notes.push(format!(
                        "rank-3 bundle with w2 = w2(M) and p1 = {} realises tau_M as its trace-free symmetric square",
                        eta.p1
                    ));
                }
            }
        } else {
            d.check("w5(M) = 0", "forced: mod-2 Euler class in odd dimension", nc.w5_zero);
            if nc.passes() {
                d.verdict = Verdict::Unknown;
                d.theorem = tags::ORDER4_OPEN.into();
                d.notes
                    .push("necessary conditions hold, but no criterion covers order-4 torsion in H^4".into());
            } else {
                d.verdict = Verdict::No;
                d.theorem = tags::NECESSARY_CONDITIONS.into();
            }
        }
    }
    d.notes.push(format!(
        "chi_hat = {chi}, k = {k}, k - chi_hat = {} mod 2",
        m.semicharacteristic_gap()
    ));
    if simply {
        let dim = m.h2_mod2_dimension();
        let predicted = !m.spin || dim % 2 == 1;
        d.theorem = format!("{}/{}", tags::SIMPLY_CONNECTED, d.theorem);
        d.notes.push(format!(
            "H1 = 0: parity rule with dim H2(M;Z2) = {dim} predicts {}",
            Verdict::from_bool(predicted)
        ));
        if Verdict::from_bool(predicted) != d.verdict {
            d.warnings.push("parity rule for simply connected profiles disagrees".into());
        }
    }
    Ok(d)
}

/// Whether `M` admits two pointwise independent vector fields.
pub fn decide_two_field(m: &ManifoldProfile, criterion: Criterion) -> Result<Decision, DecideError> {
    ensure_valid(m)?;
    let chi = m.semicharacteristic();
    let k = m.kervaire_semicharacteristic();
    let mut d;
    match criterion {
        Criterion::Atiyah => {
            d = Decision::new(tags::ATIYAH);
            let ok = d.check("Kervaire semicharacteristic = 0", format!("k = {k}"), k == 0);
            d.verdict = Verdict::from_bool(ok);
        }
        Criterion::Thomas => {
            if !m.spin {
                return Err(DecideError::CriterionInapplicable("manifold is not spin".into()));
            }
            d = Decision::new(tags::THOMAS);
            d.check("w2(M) = 0", "true", true);
            d.check("w4(M) = 0", "forced by Wu formula (w4 = w2^2)", m.w4_zero);
            let ok = d.check("semicharacteristic = 0", format!("chi_hat = {chi}"), chi == 0);
            d.verdict = Verdict::from_bool(ok);
            if chi != k {
                d.warnings.push(format!("Kervaire semicharacteristic differs: k = {k}"));
            }
        }
    }
    d.notes.push(format!(
        "chi_hat = {chi}, k = {k}, k - chi_hat = {} mod 2",
        m.semicharacteristic_gap()
    ));
    Ok(d)
}

/// For spin profiles: standard structure plus `5 | p₁` against the direct
/// irreducible criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reformulation {
    pub atiyah: bool,
    pub thomas: bool,
    pub p1_divisible_by_5: bool,
    pub combined_atiyah: bool,
    pub combined_thomas: bool,
    pub irreducible: bool,
    pub agrees: bool,
}

/// `None` for non-spin profiles, where the reformulation does not apply.
pub fn reformulation_check(m: &ManifoldProfile) -> Result<Option<Reformulation>, DecideError> {
    ensure_valid(m)?;
    if !m.spin {
        return Ok(None);
    }
    let atiyah = m.kervaire_semicharacteristic() == 0;
    let thomas = m.semicharacteristic() == 0;
    let div5 = solve_divisibility(&m.p1, 5).is_some();
    let irreducible = m.w4_zero && div5 && thomas;
    Ok(Some(Reformulation {
        atiyah,
        thomas,
        p1_divisible_by_5: div5,
        combined_atiyah: atiyah && div5,
        combined_thomas: thomas && div5,
        irreducible,
        agrees: (thomas && div5) == irreducible,
    }))
}

/// Standard `SO(3)`-structure, equivalent to a two-field. Uses the Atiyah
/// criterion and records the spin reformulation.
pub fn decide_standard_so3(m: &ManifoldProfile) -> Result<Decision, DecideError> {
    let mut d = decide_two_field(m, Criterion::Atiyah)?;
    match reformulation_check(m)? {
        Some(r) => {
            d.check("p1(M) divisible by 5", &m.p1, r.p1_divisible_by_5);
            d.notes.push(format!(
                "{}: standard structure and 5 | p1 gives {}, irreducible criterion gives {}",
                tags::STANDARD_REFORMULATION,
                flag(r.combined_atiyah),
                flag(r.irreducible)
            ));
            if r.combined_atiyah != r.irreducible {
                d.warnings
                    .push("reformulation with the Atiyah criterion disagrees with the irreducible verdict".into());
            }
            if !r.agrees {
                d.warnings
                    .push("reformulation with the Thomas criterion disagrees with the irreducible verdict".into());
            }
        }
        None => d
            .notes
            .push(format!("{}: skipped, profile is not spin", tags::STANDARD_REFORMULATION)),
    }
    Ok(d)
}

fn require_fragment(m: &ManifoldProfile) -> Result<&crate::topology::Mod2Fragment, DecideError> {
    m.mod2_fragment
        .as_ref()
        .ok_or_else(|| DecideError::InsufficientRingData("profile has no mod-2 fragment".into()))
}

fn check_class(m: &ManifoldProfile, w: &F2Vector) -> Result<(), DecideError> {
    let frag = require_fragment(m)?;
    if w.len() != frag.h2_dim {
        return Err(TopologyError::ClassLength {
            expected: frag.h2_dim,
            found: w.len(),
        }
        .into());
    }
    Ok(())
}

/// Whether some rank-3 bundle `η` has `w₂(η) = W` and `p₁(η) = P`, i.e.
/// whether `ρ₄ P = 𝒫 W`.
pub fn rank3_bundle_exists(m: &ManifoldProfile, w: &F2Vector, p: &GroupElement) -> Result<Decision, DecideError> {
    ensure_valid(m)?;
    check_class(m, w)?;
    if p.group() != &m.h4() {
        return Err(CharClassError::P1WrongGroup {
            expected: m.h4().to_string(),
        }
        .into());
    }
    let mut d = Decision::new(tags::RANK3);
    let order4 = has_element_of_order(&m.h4(), 4)?;
    d.check("H^4(M;Z) has no element of order 4", m.h4(), !order4);
    if order4 {
        d.theorem = tags::ORDER4_OPEN.into();
        d.notes.push("rank-3 classification needs H^4 without order-4 elements".into());
        return Ok(d);
    }
    let lhs = p.reduce_mod(4);
    let rhs = m.pontryagin_square(w)?;
    let ok = d.check("rho4(P) = P(W)", format!("{} vs {}", lhs, rhs), lhs == rhs);
    d.verdict = Verdict::from_bool(ok);
    Ok(d)
}

/// Evaluates `ρ₄ p₁(ξ) = 𝒫 w₂(ξ) + i_* w₄(ξ)` in `H⁴(M;ℤ₄)`.
pub fn rank5_relation_holds(m: &ManifoldProfile, b: &Bundle5Data) -> Result<bool, DecideError> {
    require_fragment(m)?;
    let w2 = b
        .w2_class
        .as_ref()
        .ok_or_else(|| DecideError::InsufficientRingData("bundle has no w2 class".into()))?;
    check_class(m, w2)?;
    let w4 = match &b.w4_class {
        Some(c) => c.clone(),
        None if b.w4_zero => GroupElement::zero(m.h4_mod(2)),
        None => return Err(DecideError::InsufficientRingData("bundle has no w4 class".into())),
    };
    let lhs = b.p1.reduce_mod(4);
    let rhs = m.pontryagin_square(w2)?.add(&m.include_mod2_in_mod4(&w4)?)?;
    Ok(lhs == rhs)
}

/// The rank-3 bundle `η` with `w₂(η) = w₂(M)` and `5 p₁(η) = p₁(M)`, when
/// the ring data show that it exists.
pub fn reconstruct_rank3(m: &ManifoldProfile) -> Result<Option<Bundle3Data>, DecideError> {
    let Some(frag) = &m.mod2_fragment else {
        return Ok(None);
    };
    if !m.w4_zero {
        return Ok(None);
    }
    let Some(p) = solve_divisibility(&m.p1, 5) else {
        return Ok(None);
    };
    let w = frag.w2_class.clone();
    if rank3_bundle_exists(m, &w, &p)?.verdict != Verdict::Yes {
        return Ok(None);
    }
    Ok(Some(Bundle3Data::from_class(Arc::new(m.clone()), w, p)?))
}

/// [`decide_irreducible_so3`] over many profiles, in input order.
pub fn decide_batch(profiles: &[ManifoldProfile]) -> Vec<Result<Decision, DecideError>> {
    profiles.par_iter().map(decide_irreducible_so3).collect()
}
