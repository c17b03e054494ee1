//! Characteristic-class records of rank-3 and rank-5 bundles over a profile,
//! the classes of the trace-free symmetric square, the degree-5 twist of
//! spin rank-3 bundles, and the lifting obstructions for the irreducible
//! `SO(3) ⊂ SO(5)`.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::fgab::{solve_divisibility, GroupElement};
use crate::topology::{F2Vector, ManifoldProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharClassError {
    #[error("p1 must lie in H^4(M;Z) = {expected}")]
    P1WrongGroup { expected: String },
    #[error("w2 class given but the base has no mod-2 fragment")]
    UnexpectedClass,
    #[error("base has a mod-2 fragment, so the w2 class is required")]
    MissingClass,
    #[error("w2 class has length {found}, expected {expected}")]
    ClassLength { expected: usize, found: usize },
    #[error("w2_zero flag disagrees with the w2 class")]
    InconsistentW2,
    #[error("w4 class must lie in H^4(M;Z2) and match the w4_zero flag")]
    InconsistentW4,
    #[error("the degree-5 twist needs a spin bundle (w2 = 0)")]
    NotSpin,
}

/// Classes of an oriented rank-3 bundle `η`: `w₂(η)` and `p₁(η)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle3Data {
    pub base: Arc<ManifoldProfile>,
    pub w2_zero: bool,
    pub w2_class: Option<F2Vector>,
    pub p1: GroupElement,
}

/// Classes of an oriented rank-5 bundle `ξ`: `w₂, w₄, w₅` and `p₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle5Data {
    pub base: Arc<ManifoldProfile>,
    pub w2_zero: bool,
    pub w4_zero: bool,
    pub w5_zero: bool,
    pub w2_class: Option<F2Vector>,
    pub w4_class: Option<GroupElement>,
    pub p1: GroupElement,
    /// set only for the tangent bundle of the base
    pub tangent: bool,
}

fn check_w2(base: &ManifoldProfile, w2_zero: bool, w2_class: Option<&F2Vector>) -> Result<(), CharClassError> {
    match (&base.mod2_fragment, w2_class) {
        (None, Some(_)) => Err(CharClassError::UnexpectedClass),
        (Some(_), None) => Err(CharClassError::MissingClass),
        (Some(frag), Some(w)) if w.len() != frag.h2_dim => Err(CharClassError::ClassLength {
            expected: frag.h2_dim,
            found: w.len(),
        }),
        (Some(_), Some(w)) if w.is_zero() != w2_zero => Err(CharClassError::InconsistentW2),
        _ => Ok(()),
    }
}

fn check_p1(base: &ManifoldProfile, p1: &GroupElement) -> Result<(), CharClassError> {
    let h4 = base.h4();
    if p1.group() == &h4 {
        Ok(())
    } else {
        Err(CharClassError::P1WrongGroup { expected: h4.to_string() })
    }
}

impl Bundle3Data {
    pub fn new(
        base: Arc<ManifoldProfile>,
        w2_zero: bool,
        w2_class: Option<F2Vector>,
        p1: GroupElement,
    ) -> Result<Self, CharClassError> {
        check_w2(&base, w2_zero, w2_class.as_ref())?;
        check_p1(&base, &p1)?;
        Ok(Self {
            base,
            w2_zero,
            w2_class,
            p1,
        })
    }

    /// Over a base with a fragment, from the class `w₂(η)`.
    pub fn from_class(base: Arc<ManifoldProfile>, w2: F2Vector, p1: GroupElement) -> Result<Self, CharClassError> {
        Self::new(base, w2.is_zero(), Some(w2), p1)
    }
}

impl Bundle5Data {
    /// The tangent bundle `τ_M`. `w₅(M) = 0` for every closed 5-manifold
    /// since it is the mod-2 Euler class and `χ(M) = 0` in odd dimension.
    pub fn tangent(base: Arc<ManifoldProfile>) -> Self {
        let frag = base.mod2_fragment.as_ref();
        Self {
            w2_zero: base.spin,
            w4_zero: base.w4_zero,
            w5_zero: true,
            w2_class: frag.map(|f| f.w2_class.clone()),
            w4_class: frag.map(|f| f.w4_class.clone()),
            p1: base.p1.clone(),
            tangent: true,
            base,
        }
    }

    pub fn new(
        base: Arc<ManifoldProfile>,
        w2_zero: bool,
        w2_class: Option<F2Vector>,
        w4_class_or_flag: W4Data,
        w5_zero: bool,
        p1: GroupElement,
    ) -> Result<Self, CharClassError> {
        check_w2(&base, w2_zero, w2_class.as_ref())?;
        check_p1(&base, &p1)?;
        let (w4_zero, w4_class) = match w4_class_or_flag {
            W4Data::Flag(z) => (z, None),
            W4Data::Class(c) => {
                if c.group() != &base.h4_mod(2) {
                    return Err(CharClassError::InconsistentW4);
                }
                (c.is_zero(), Some(c))
            }
        };
        Ok(Self {
            base,
            w2_zero,
            w4_zero,
            w5_zero,
            w2_class,
            w4_class,
            p1,
            tangent: false,
        })
    }

    /// Equality of characteristic data over the same base, ignoring whether
    /// the record came from the tangent bundle.
    pub fn same_classes(&self, other: &Bundle5Data) -> bool {
        *self.base == *other.base
            && self.w2_zero == other.w2_zero
            && self.w4_zero == other.w4_zero
            && self.w5_zero == other.w5_zero
            && self.w2_class == other.w2_class
            && self.w4_class == other.w4_class
            && self.p1 == other.p1
    }
}

/// `w₄` as either a vanishing flag or an explicit class in `H⁴(M;ℤ₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum W4Data {
    Flag(bool),
    Class(GroupElement),
}

fn five() -> BigInt {
    BigInt::from(5)
}

/// Classes of `Sym₀(η)`: `w₂` is unchanged, `w₄ = w₅ = 0` and `p₁` is
/// multiplied by 5.
pub fn sym0_classes(b: &Bundle3Data) -> Bundle5Data {
    let w4_class = b.base.mod2_fragment.as_ref().map(|_| GroupElement::zero(b.base.h4_mod(2)));
    Bundle5Data {
        base: b.base.clone(),
        w2_zero: b.w2_zero,
        w4_zero: true,
        w5_zero: true,
        w2_class: b.w2_class.clone(),
        w4_class,
        p1: b.p1.scale(&five()),
        tangent: false,
    }
}

/// Composition of a spin rank-3 bundle, seen as a map to `S⁴`, with a
/// degree-5 self map of `S⁴`: `p₁` is multiplied by 5 and the result is spin.
pub fn g_twist(b: &Bundle3Data) -> Result<Bundle3Data, CharClassError> {
    if !b.w2_zero {
        return Err(CharClassError::NotSpin);
    }
    Ok(Bundle3Data {
        base: b.base.clone(),
        w2_zero: true,
        w2_class: b.w2_class.clone(),
        p1: b.p1.scale(&five()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecessaryConditions {
    pub p1_divisible_by_5: bool,
    pub w4_zero: bool,
    pub w5_zero: bool,
}

impl NecessaryConditions {
    pub fn passes(&self) -> bool {
        self.p1_divisible_by_5 && self.w4_zero && self.w5_zero
    }
}

/// Conditions every rank-5 bundle with an irreducible `SO(3)`-reduction
/// satisfies: `5 | p₁`, `w₄ = 0`, `w₅ = 0`.
pub fn necessary_conditions(b: &Bundle5Data) -> NecessaryConditions {
    NecessaryConditions {
        p1_divisible_by_5: solve_divisibility(&b.p1, 5).is_some(),
        w4_zero: b.w4_zero,
        w5_zero: b.w5_zero,
    }
}

/// The two obstructions to lifting `ξ : M → BSO(5)` through the irreducible
/// representation. The primary one lives in `H⁴(M;ℤ₁₀) = H⁴(M;ℤ₅) ⊕ H⁴(M;ℤ₂)`
/// and equals `(-ρ₅ p₁(ξ), w₄(ξ))`. The secondary one is only reported for
/// the tangent bundle of a spin base, where it equals `χ̂(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub k1_vanishes: bool,
    pub k1_mod5_part_zero: bool,
    pub k1_mod2_part_zero: bool,
    pub k2_value: Option<u8>,
}

pub fn obstruction_report(b: &Bundle5Data) -> ObstructionReport {
    // ρ₅ p₁ lands in H⁴(M;ℤ)⊗ℤ₅ ≅ H⁴(M;ℤ₅)
    let k1_mod5_part_zero = b.p1.reduce_mod(5).is_zero();
    let k1_mod2_part_zero = b.w4_zero;
    let k1_vanishes = k1_mod5_part_zero && k1_mod2_part_zero;
    let k2_value = (k1_vanishes && b.tangent && b.base.spin).then(|| b.base.semicharacteristic());
    ObstructionReport {
        k1_vanishes,
        k1_mod5_part_zero,
        k1_mod2_part_zero,
        k2_value,
    }
}

/// One entry of the pullback table along `BSO(3) → BSO(5)` induced by the
/// irreducible representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackEntry {
    pub class: &'static str,
    pub image: &'static str,
}

const PULLBACKS: &[PullbackEntry] = &[
    PullbackEntry { class: "p1", image: "10*p1" },
    PullbackEntry { class: "p2", image: "9*p1^2" },
    PullbackEntry { class: "w2", image: "w2" },
    PullbackEntry { class: "w3", image: "w3" },
    PullbackEntry { class: "w4", image: "0" },
    PullbackEntry { class: "w5", image: "0" },
    PullbackEntry { class: "rho5(p1)", image: "0" },
    PullbackEntry { class: "rho5(p2)", image: "4*rho5(p1)^2" },
    PullbackEntry { class: "maximal torus", image: "z -> (z, z^2)" },
    PullbackEntry { class: "pi3(fibre)", image: "Z10" },
    PullbackEntry { class: "pi4(fibre)", image: "Z2" },
];

/// Documented constants: pullbacks of universal classes along the
/// irreducible representation, its restriction to maximal tori and the low
/// homotopy of the fibre `SO(5)/SO(3)`. Reference data only.
pub fn rep_pullback_constants() -> &'static [PullbackEntry] {
    PULLBACKS
}

pub fn lookup_pullback(class: &str) -> Option<&'static str> {
    PULLBACKS.iter().find(|e| e.class == class).map(|e| e.image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgAbGroup;
    use crate::topology::group;

    fn z() -> FgAbGroup {
        FgAbGroup::integers()
    }

    fn with_h4_z() -> Arc<ManifoldProfile> {
        // S^1 x S^4-like homology: H4 = Z, spin
        let p = ManifoldProfile::from_homology("s1xs4", [z(), z(), group(0, &[]), group(0, &[]), z(), z()], true, true)
            .unwrap();
        Arc::new(p)
    }

    fn elem(base: &ManifoldProfile, coords: &[i64]) -> GroupElement {
        GroupElement::from_i64(base.h4(), coords).unwrap()
    }

    #[test]
    fn sym0_multiplies_p1_by_five() {
        let base = with_h4_z();
        let b = Bundle3Data::new(base.clone(), false, None, elem(&base, &[3])).unwrap();
        let s = sym0_classes(&b);
        assert_eq!(s.p1, elem(&base, &[15]));
        assert!(s.w4_zero && s.w5_zero && !s.w2_zero);

        let t = Bundle3Data::new(base.clone(), true, None, elem(&base, &[0])).unwrap();
        assert!(sym0_classes(&t).p1.is_zero());
    }

    #[test]
    fn twist_scales_and_rejects_non_spin() {
        let base = with_h4_z();
        let b = Bundle3Data::new(base.clone(), true, None, elem(&base, &[2])).unwrap();
        assert_eq!(g_twist(&b).unwrap().p1, elem(&base, &[10]));
        let twice = g_twist(&g_twist(&b).unwrap()).unwrap();
        assert_eq!(twice.p1, elem(&base, &[50]));
        let ns = Bundle3Data::new(base, false, None, elem(&with_h4_z(), &[2])).unwrap();
        assert_eq!(g_twist(&ns), Err(CharClassError::NotSpin));
    }

    #[test]
    fn twist_in_z3() {
        let p = ManifoldProfile::from_homology(
            "z3",
            [z(), group(0, &[3]), group(1, &[]), group(1, &[3]), group(0, &[]), z()],
            true,
            true,
        )
        .unwrap();
        let base = Arc::new(p);
        let b = Bundle3Data::new(base.clone(), true, None, elem(&base, &[1])).unwrap();
        assert_eq!(g_twist(&b).unwrap().p1, elem(&base, &[2]));
    }

    #[test]
    fn necessary_condition_examples() {
        let base = with_h4_z();
        let seven = Bundle5Data::new(base.clone(), true, None, W4Data::Flag(true), true, elem(&base, &[7])).unwrap();
        let nc = necessary_conditions(&seven);
        assert!(!nc.p1_divisible_by_5 && !nc.passes());

        let w4 = Bundle5Data::new(base.clone(), true, None, W4Data::Flag(false), true, elem(&base, &[0])).unwrap();
        let nc = necessary_conditions(&w4);
        assert!(nc.p1_divisible_by_5 && !nc.w4_zero && !nc.passes());
        let r = obstruction_report(&w4);
        assert!(!r.k1_vanishes && r.k2_value.is_none());
    }

    #[test]
    fn sphere_tangent_obstructions() {
        let s5 = ManifoldProfile::from_homology(
            "s5",
            [z(), group(0, &[]), group(0, &[]), group(0, &[]), group(0, &[]), z()],
            true,
            true,
        )
        .unwrap();
        let t = Bundle5Data::tangent(Arc::new(s5));
        let r = obstruction_report(&t);
        assert!(r.k1_vanishes);
        assert_eq!(r.k2_value, Some(1));
    }

    #[test]
    fn wrong_group_rejected() {
        let base = with_h4_z();
        let bad = GroupElement::from_i64(FgAbGroup::cyclic(3), &[1]).unwrap();
        assert!(matches!(
            Bundle3Data::new(base, true, None, bad),
            Err(CharClassError::P1WrongGroup { .. })
        ));
    }

    #[test]
    fn pullback_table() {
        assert_eq!(lookup_pullback("w4"), Some("0"));
        assert_eq!(lookup_pullback("p1"), Some("10*p1"));
        assert_eq!(lookup_pullback("w2"), Some("w2"));
        assert_eq!(lookup_pullback("nope"), None);
    }
}
