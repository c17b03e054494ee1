//! Invariant profiles of closed, connected, oriented 5-manifolds.
//!
//! A profile stores integral homology `H₀ … H₅`, the vanishing of `w₂` and
//! `w₄`, the class `p₁ ∈ H⁴(M;ℤ)` and optionally a fragment of the mod-2 /
//! mod-4 cohomology ring. Cohomology with other coefficients is derived by
//! the universal coefficient theorem.
//!
//! `H⁵(M;ℤ) = ℤ` is torsion-free for every valid profile, so
//! `H⁴(M;ℤ_n) ≅ H⁴(M;ℤ) ⊗ ℤ_n` and classes in `H⁴(M;ℤ_n)` use the
//! coordinates of [`tensor_with_cyclic`].

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fgab::{
    change_coefficients, ext, hom, mod_p_dimension, tensor, tensor_with_cyclic, tor, FgAbGroup, FgabError,
    GroupElement,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("degree {0} is outside 0..=5")]
    DegreeOutOfRange(usize),
    #[error("invalid profile: {}", join_violations(.0))]
    InvalidProfile(Vec<Violation>),
    #[error("insufficient ring data: profile has no mod-2 fragment")]
    MissingFragment,
    #[error("class vector has length {found}, H^2(M;Z2) has dimension {expected}")]
    ClassLength { expected: usize, found: usize },
    #[error(transparent)]
    Group(#[from] FgabError),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Coefficient systems used for (co)homology. `Reals` only counts Betti numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Mod(u64),
    Reals,
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Mod(n) => write!(f, "Z{n}"),
            Coefficients::Reals => write!(f, "R"),
        }
    }
}

/// A vector over `𝔽₂`, serialised as a list of 0/1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct F2Vector(Vec<bool>);

impl F2Vector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn basis(i: usize, n: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = true;
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self(bits.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    pub fn add(&self, other: &F2Vector) -> F2Vector {
        assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }
}

impl TryFrom<Vec<u8>> for F2Vector {
    type Error = String;

    fn try_from(v: Vec<u8>) -> Result<Self, Self::Error> {
        v.into_iter()
            .map(|b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(format!("F2 entries must be 0 or 1, got {other}")),
            })
            .collect::<Result<_, _>>()
            .map(F2Vector)
    }
}

impl From<F2Vector> for Vec<u8> {
    fn from(v: F2Vector) -> Self {
        v.0.into_iter().map(u8::from).collect()
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.0.iter().map(|b| if *b { "1" } else { "0" }).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Part of the cohomology ring needed for bundle existence questions.
///
/// `H²(M;ℤ₂)` is given by a basis of size `h2_dim`. `cup[i][j]` is
/// `eᵢ ⌣ eⱼ ∈ H⁴(M;ℤ₂)` and `psquare[i]` the Pontryagin square
/// `𝒫(eᵢ) ∈ H⁴(M;ℤ₄)`. The square of a general class follows from the
/// quadratic law `𝒫(x+y) = 𝒫(x) + 𝒫(y) + i_*(x ⌣ y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Fragment {
    pub h2_dim: usize,
    pub cup: Vec<Vec<GroupElement>>,
    pub psquare: Vec<GroupElement>,
    pub w2_class: F2Vector,
    pub w4_class: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldProfile {
    pub name: String,
    pub homology: [FgAbGroup; 6],
    /// `w₂(M) = 0`
    pub spin: bool,
    pub w4_zero: bool,
    /// `p₁(M) ∈ H⁴(M;ℤ)`
    pub p1: GroupElement,
    pub mod2_fragment: Option<Mod2Fragment>,
}

/// A failed consistency constraint of a [`ManifoldProfile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    H0NotIntegers,
    H5NotIntegers,
    H4Torsion,
    BettiMismatch { low: usize, high: usize },
    TorsionMismatch,
    SpinWithNonzeroW4,
    NonSpinWithTrivialH2,
    NonzeroW4WithTrivialH4,
    P1WrongGroup,
    Fragment(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::H0NotIntegers => write!(f, "H0 must be Z (connected)"),
            Violation::H5NotIntegers => write!(f, "H5 must be Z (closed and oriented)"),
            Violation::H4Torsion => write!(f, "H4 must be torsion-free"),
            Violation::BettiMismatch { low, high } => {
                write!(f, "rank H{high} must equal rank H{low} (Poincare duality)")
            }
            Violation::TorsionMismatch => write!(f, "torsion of H1 must equal torsion of H3 (Poincare duality)"),
            Violation::SpinWithNonzeroW4 => write!(f, "spin profile must have w4 = 0 (w4 = w2^2)"),
            Violation::NonSpinWithTrivialH2 => write!(f, "non-spin profile needs H^2(M;Z2) != 0"),
            Violation::NonzeroW4WithTrivialH4 => write!(f, "w4 != 0 needs H^4(M;Z2) != 0"),
            Violation::P1WrongGroup => write!(f, "p1 must lie in H^4(M;Z)"),
            Violation::Fragment(msg) => write!(f, "mod-2 fragment: {msg}"),
        }
    }
}

impl ManifoldProfile {
    /// `H^k(M;R)` by the universal coefficient theorem. Does not require a
    /// valid profile; the formula is applied to whatever homology is stored.
    pub fn cohomology(&self, k: usize, coefficients: Coefficients) -> Result<FgAbGroup, TopologyError> {
        if k > 5 {
            return Err(TopologyError::DegreeOutOfRange(k));
        }
        let hk = &self.homology[k];
        let prev = (k > 0).then(|| &self.homology[k - 1]);
        let trivial = FgAbGroup::trivial();
        let prev = prev.unwrap_or(&trivial);
        Ok(match coefficients {
            Coefficients::Integers => {
                hom(hk, &FgAbGroup::integers()).direct_sum(&ext(prev, &FgAbGroup::integers()))
            }
            Coefficients::Mod(n) => {
                let c = FgAbGroup::cyclic(n);
                hom(hk, &c).direct_sum(&ext(prev, &c))
            }
            Coefficients::Reals => FgAbGroup::free(hk.free_rank()),
        })
    }

    /// `H_k(M;R)` by the universal coefficient theorem for homology.
    pub fn homology_with(&self, k: usize, coefficients: Coefficients) -> Result<FgAbGroup, TopologyError> {
        if k > 5 {
            return Err(TopologyError::DegreeOutOfRange(k));
        }
        let hk = &self.homology[k];
        Ok(match coefficients {
            Coefficients::Integers => hk.clone(),
            Coefficients::Mod(n) => {
                let c = FgAbGroup::cyclic(n);
                let t = if k > 0 {
                    tor(&self.homology[k - 1], &c)
                } else {
                    FgAbGroup::trivial()
                };
                tensor(hk, &c).direct_sum(&t)
            }
            Coefficients::Reals => FgAbGroup::free(hk.free_rank()),
        })
    }

    /// `H⁴(M;ℤ) = ℤ^{b₄} ⊕ T(H₃)`
    pub fn h4(&self) -> FgAbGroup {
        self.cohomology(4, Coefficients::Integers).expect("degree 4 is in range")
    }

    pub fn betti(&self, k: usize) -> usize {
        self.homology[k].free_rank()
    }

    /// `dim H_k(M;ℤ₂)`
    pub fn mod2_betti(&self, k: usize) -> usize {
        mod_p_dimension(&self.homology_with(k, Coefficients::Mod(2)).expect("k in range"), 2)
    }

    /// `χ̂(M) = Σ_{i=0}^{2} dim H_i(M;ℤ₂) mod 2`
    pub fn semicharacteristic(&self) -> u8 {
        ((0..=2).map(|i| self.mod2_betti(i)).sum::<usize>() % 2) as u8
    }

    /// `k(M) = b₀ + b₂ + b₄ mod 2`
    pub fn kervaire_semicharacteristic(&self) -> u8 {
        ((self.betti(0) + self.betti(2) + self.betti(4)) % 2) as u8
    }

    /// Number of even torsion summands of `H₂`, mod 2. For a valid profile
    /// this is exactly `χ̂(M) - k(M) mod 2`.
    pub fn semicharacteristic_gap(&self) -> u8 {
        (mod_p_dimension(&self.homology[2].torsion_subgroup(), 2) % 2) as u8
    }

    pub fn is_simply_connected_homologically(&self) -> bool {
        self.homology[1].is_trivial()
    }

    /// `dim H²(M;ℤ₂)`
    pub fn h2_mod2_dimension(&self) -> usize {
        mod_p_dimension(&self.cohomology(2, Coefficients::Mod(2)).expect("in range"), 2)
    }

    pub fn fragment(&self) -> Result<&Mod2Fragment, TopologyError> {
        self.mod2_fragment.as_ref().ok_or(TopologyError::MissingFragment)
    }

    /// `H⁴(M;ℤ₂)` in reduction coordinates.
    pub fn h4_mod(&self, n: u64) -> FgAbGroup {
        tensor_with_cyclic(&self.h4(), n)
    }

    /// `i_* : H⁴(M;ℤ₂) → H⁴(M;ℤ₄)` induced by `ℤ₂ → ℤ₄`, `1 ↦ 2`.
    pub fn include_mod2_in_mod4(&self, x: &GroupElement) -> Result<GroupElement, TopologyError> {
        Ok(change_coefficients(&self.h4(), x, 2, 4, 2)?)
    }

    /// `ρ₂ : H⁴(M;ℤ₄) → H⁴(M;ℤ₂)`
    pub fn reduce_mod4_to_mod2(&self, x: &GroupElement) -> Result<GroupElement, TopologyError> {
        Ok(change_coefficients(&self.h4(), x, 4, 2, 1)?)
    }

    fn check_class(&self, x: &F2Vector) -> Result<&Mod2Fragment, TopologyError> {
        let frag = self.fragment()?;
        if x.len() != frag.h2_dim {
            return Err(TopologyError::ClassLength {
                expected: frag.h2_dim,
                found: x.len(),
            });
        }
        Ok(frag)
    }

    /// `x ⌣ y ∈ H⁴(M;ℤ₂)` for `x, y ∈ H²(M;ℤ₂)`.
    pub fn cup_product(&self, x: &F2Vector, y: &F2Vector) -> Result<GroupElement, TopologyError> {
        let frag = self.check_class(x)?;
        self.check_class(y)?;
        let mut acc = GroupElement::zero(self.h4_mod(2));
        for i in x.support() {
            for j in y.support() {
                acc = acc.add(&frag.cup[i][j])?;
            }
        }
        Ok(acc)
    }

    /// Pontryagin square `𝒫(x) ∈ H⁴(M;ℤ₄)` from the basis values and the
    /// quadratic law.
    pub fn pontryagin_square(&self, x: &F2Vector) -> Result<GroupElement, TopologyError> {
        let frag = self.check_class(x)?;
        let support: Vec<usize> = x.support().collect();
        let mut acc = GroupElement::zero(self.h4_mod(4));
        for (a, &i) in support.iter().enumerate() {
            acc = acc.add(&frag.psquare[i])?;
            for &j in &support[a + 1..] {
                acc = acc.add(&self.include_mod2_in_mod4(&frag.cup[i][j])?)?;
            }
        }
        Ok(acc)
    }

    /// `w₂(M)` as a class, when the fragment is present.
    pub fn w2_class(&self) -> Option<&F2Vector> {
        self.mod2_fragment.as_ref().map(|f| &f.w2_class)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let z = FgAbGroup::integers();
        if self.homology[0] != z {
            out.push(Violation::H0NotIntegers);
        }
        if self.homology[5] != z {
            out.push(Violation::H5NotIntegers);
        }
        if !self.homology[4].is_torsion_free() {
            out.push(Violation::H4Torsion);
        }
        for (low, high) in [(1, 4), (2, 3)] {
            if self.betti(low) != self.betti(high) {
                out.push(Violation::BettiMismatch { low, high });
            }
        }
        if self.homology[1].torsion_subgroup() != self.homology[3].torsion_subgroup() {
            out.push(Violation::TorsionMismatch);
        }
        if self.spin && !self.w4_zero {
            out.push(Violation::SpinWithNonzeroW4);
        }
        if !self.spin && self.h2_mod2_dimension() == 0 {
            out.push(Violation::NonSpinWithTrivialH2);
        }
        if !self.w4_zero && self.h4_mod(2).is_trivial() {
            out.push(Violation::NonzeroW4WithTrivialH4);
        }
        if self.p1.group() != &self.h4() {
            out.push(Violation::P1WrongGroup);
        }
        if let Some(frag) = &self.mod2_fragment {
            self.validate_fragment(frag, &mut out);
        }
        out
    }

    fn validate_fragment(&self, frag: &Mod2Fragment, out: &mut Vec<Violation>) {
        let mut bad = |msg: String| out.push(Violation::Fragment(msg));
        let n = frag.h2_dim;
        if n != self.h2_mod2_dimension() {
            bad(format!("h2_dim {n} differs from dim H^2(M;Z2) = {}", self.h2_mod2_dimension()));
            return;
        }
        if frag.cup.len() != n || frag.cup.iter().any(|r| r.len() != n) || frag.psquare.len() != n {
            bad(format!("cup table must be {n}x{n} and psquare must have {n} entries"));
            return;
        }
        if frag.w2_class.len() != n {
            bad(format!("w2_class must have {n} entries"));
            return;
        }
        let h4_2 = self.h4_mod(2);
        let h4_4 = self.h4_mod(4);
        if frag.cup.iter().flatten().any(|c| c.group() != &h4_2) || frag.w4_class.group() != &h4_2 {
            bad("cup values and w4_class must lie in H^4(M;Z2)".into());
            return;
        }
        if frag.psquare.iter().any(|p| p.group() != &h4_4) {
            bad("psquare values must lie in H^4(M;Z4)".into());
            return;
        }
        for i in 0..n {
            for j in 0..i {
                if frag.cup[i][j] != frag.cup[j][i] {
                    bad(format!("cup table not symmetric at ({i},{j})"));
                }
            }
            match self.reduce_mod4_to_mod2(&frag.psquare[i]) {
                Ok(r) if r == frag.cup[i][i] => {}
                _ => bad(format!("psquare(e{i}) does not reduce to e{i}^2 mod 2")),
            }
        }
        if frag.w2_class.is_zero() != self.spin {
            bad("w2_class must vanish exactly when the profile is spin".into());
        }
        if frag.w4_class.is_zero() != self.w4_zero {
            bad("w4_class disagrees with the w4_zero flag".into());
        }
        if let Ok(sq) = self.cup_product(&frag.w2_class, &frag.w2_class) {
            if sq != frag.w4_class {
                bad("w4_class must equal w2_class^2 (Wu formula)".into());
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn validated(self) -> Result<Self, TopologyError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(TopologyError::InvalidProfile(v))
        }
    }

    /// Builds a profile without a fragment, with `p₁ = 0`, and validates it.
    pub fn from_homology(
        name: impl Into<String>,
        homology: [FgAbGroup; 6],
        spin: bool,
        w4_zero: bool,
    ) -> Result<Self, TopologyError> {
        let mut p = Self {
            name: name.into(),
            homology,
            spin,
            w4_zero,
            p1: GroupElement::zero(FgAbGroup::trivial()),
            mod2_fragment: None,
        };
        p.p1 = GroupElement::zero(p.h4());
        p.validated()
    }

    pub fn with_p1(mut self, p1: GroupElement) -> Result<Self, TopologyError> {
        self.p1 = p1;
        self.validated()
    }

    /// Fragment for profiles with `H⁴(M;ℤ₂) = 0`: all products vanish and
    /// only `w₂` carries information.
    pub fn trivial_fragment(&self, w2_class: F2Vector) -> Mod2Fragment {
        let n = self.h2_mod2_dimension();
        assert!(self.h4_mod(2).is_trivial(), "trivial fragment needs H^4(M;Z2) = 0");
        let zero2 = GroupElement::zero(self.h4_mod(2));
        let zero4 = GroupElement::zero(self.h4_mod(4));
        Mod2Fragment {
            h2_dim: n,
            cup: vec![vec![zero2.clone(); n]; n],
            psquare: vec![zero4; n],
            w2_class,
            w4_class: zero2,
        }
    }
}

/// Shorthand for a group given by free rank and torsion orders.
pub fn group(free: usize, torsion: &[u64]) -> FgAbGroup {
    FgAbGroup::from_cyclic_orders(free, torsion.iter().map(|&d| BigInt::from(d)))
}

/// `Σ (-1)^i dim H_i(M;ℤ₂)`; zero for every valid profile.
pub fn mod2_euler_characteristic(p: &ManifoldProfile) -> i64 {
    (0..=5)
        .map(|i| {
            let d = p.mod2_betti(i) as i64;
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .sum()
}
