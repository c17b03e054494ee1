//! Profiles from geometric recipes: catalog spaces, connected sums,
//! products `N³ × Σ_g`, hypersurfaces `Σ_d ⊂ ℂP³` and circle bundles over
//! simply connected 4-manifolds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fgab::{
    cokernel, content, lift_from_tensor, tensor, tor, DirectSum, FgAbGroup, FgabError, GroupElement, IntegerMatrix,
};
use crate::topology::{group, F2Vector, ManifoldProfile, Mod2Fragment, TopologyError};

pub const CATALOG_NAMES: [&str; 4] = ["s5", "wu", "s3xs2", "s3~xs2"];

const MAX_DEGREE: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("unknown catalog name {0:?} (known: s5, wu, s3xs2, s3~xs2)")]
    UnknownCatalogName(String),
    #[error("hypersurface degree must be in 1..={MAX_DEGREE}, got {0}")]
    InvalidDegree(u32),
    #[error("intersection form must be symmetric")]
    NotSymmetric,
    #[error("intersection form must be unimodular")]
    NotUnimodular,
    #[error("intersection form is needed but {0} has none")]
    MissingForm(String),
    #[error("vector has length {found}, expected b2 = {expected}")]
    VectorLength { expected: usize, found: usize },
    #[error("Euler class must be nonzero")]
    ZeroEulerClass,
    #[error("invalid 3-manifold homology: {0}")]
    InvalidThreeManifold(String),
    #[error("connected sum of no summands")]
    EmptySum,
    #[error("search box with {0} coordinates and bound {1} is too large")]
    SearchTooLarge(usize, u32),
    #[error("Gysin consistency failed: {0}")]
    Gysin(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Group(#[from] FgabError),
}

/// A closed, simply connected, oriented 4-manifold described by its
/// intersection form and characteristic numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourManifoldProfile {
    pub name: String,
    pub b2: usize,
    pub form: Option<IntegerMatrix>,
    /// characteristic element, reducing to `w₂`; absent when no basis is fixed
    pub w2_vector: Option<F2Vector>,
    pub spin: bool,
    pub euler_char: i64,
    /// `⟨p₁(X), [X]⟩`
    pub p1_eval: i64,
    pub signature: i64,
    /// hyperplane class, for hypersurfaces with an explicit form
    pub hyperplane: Option<Vec<BigInt>>,
}

impl FourManifoldProfile {
    /// From a unimodular symmetric form: `σ` by diagonalisation over `ℚ`,
    /// `w₂` as the unique characteristic element and `p₁ = 3σ`.
    pub fn from_form(name: impl Into<String>, form: IntegerMatrix) -> Result<Self, ConstructError> {
        if !form.is_square() || !form.is_symmetric() {
            return Err(ConstructError::NotSymmetric);
        }
        if !form.is_unimodular() {
            return Err(ConstructError::NotUnimodular);
        }
        let b2 = form.rows();
        let signature = signature(&form);
        let w2 = characteristic_element(&form);
        Ok(Self {
            name: name.into(),
            b2,
            spin: w2.is_zero(),
            w2_vector: Some(w2),
            form: Some(form),
            euler_char: b2 as i64 + 2,
            p1_eval: 3 * signature,
            signature,
            hyperplane: None,
        })
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.euler_char != self.b2 as i64 + 2 {
            out.push("euler_char must equal b2 + 2".to_string());
        }
        if self.p1_eval != 3 * self.signature {
            out.push("p1_eval must equal 3 * signature".to_string());
        }
        if let Some(w) = &self.w2_vector {
            if w.len() != self.b2 {
                out.push("w2_vector must have length b2".to_string());
            }
            if w.is_zero() != self.spin {
                out.push("w2_vector must vanish exactly when spin".to_string());
            }
        }
        if let Some(q) = &self.form {
            if q.rows() != self.b2 || !q.is_symmetric() || !q.is_unimodular() {
                out.push("form must be a symmetric unimodular b2 x b2 matrix".to_string());
            } else {
                if signature(q) != self.signature {
                    out.push("signature differs from the signature of the form".to_string());
                }
                if let Some(w) = &self.w2_vector {
                    if &characteristic_element(q) != w {
                        out.push("w2_vector is not characteristic for the form".to_string());
                    }
                }
            }
        }
        out
    }

    fn form_or_err(&self) -> Result<&IntegerMatrix, ConstructError> {
        self.form.as_ref().ok_or_else(|| ConstructError::MissingForm(self.name.clone()))
    }

    fn check_len(&self, v: &[BigInt]) -> Result<(), ConstructError> {
        if v.len() == self.b2 {
            Ok(())
        } else {
            Err(ConstructError::VectorLength {
                expected: self.b2,
                found: v.len(),
            })
        }
    }
}

/// Number of positive minus number of negative eigenvalues.
#[allow(clippy::needless_range_loop)]
pub fn signature(form: &IntegerMatrix) -> i64 {
    let n = form.rows();
    let mut a: Vec<Vec<BigRational>> = form
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut sig = 0i64;
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()).or_else(|| {
        // no nonzero diagonal entry left: make one from an off-diagonal entry
        let (i, j) = active
            .iter()
            .flat_map(|&i| active.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| i != j && !a[i][j].is_zero())?;
        for k in 0..n {
            let v = a[j][k].clone();
            a[i][k] += v;
        }
        for k in 0..n {
            let v = a[k][j].clone();
            a[k][i] += v;
        }
        active.iter().position(|&x| x == i)
    }) {
        let p = active.remove(pos);
        let piv = a[p][p].clone();
        sig += if piv.is_positive() { 1 } else { -1 };
        for &i in &active {
            let f = &a[i][p] / &piv;
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                let v = &f * &a[p][k];
                a[i][k] -= v;
            }
            for k in 0..n {
                let v = &f * &a[k][p];
                a[k][i] -= v;
            }
        }
    }
    sig
}

/// The unique `w` with `Q(x,x) ≡ Q(x,w) mod 2` for a form invertible mod 2.
pub fn characteristic_element(form: &IntegerMatrix) -> F2Vector {
    let n = form.rows();
    let two = BigInt::from(2);
    let bit = |x: &BigInt| x.mod_floor(&two).is_one();
    // augmented system Q w = diag(Q) over F2
    let mut rows: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            let mut r: Vec<bool> = (0..n).map(|j| bit(form.get(i, j))).collect();
            r.push(bit(form.get(i, i)));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..n).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..n {
            if i != r && rows[i][col] {
                let src = rows[r].clone();
                rows[i].iter_mut().zip(&src).for_each(|(a, b)| *a ^= *b);
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut w = vec![false; n];
    for (i, &col) in pivots.iter().enumerate() {
        w[col] = rows[i][n];
    }
    F2Vector::from_bits(&w)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Smooth hypersurface of degree `d` in `ℂP³`. Uses `⟨u², [Σ_d]⟩ = d`.
/// Explicit forms are attached for `d ≤ 3`.
pub fn hypersurface(d: u32) -> Result<FourManifoldProfile, ConstructError> {
    if d == 0 || d > MAX_DEGREE {
        return Err(ConstructError::InvalidDegree(d));
    }
    let di = i64::from(d);
    let b2 = (6 - 4 * di + di * di) * di - 2;
    let p1_eval = (4 - di * di) * di;
    assert_eq!(p1_eval % 3, 0, "d(2-d)(2+d) is divisible by 3");
    let signature = p1_eval / 3;
    let spin = d.is_multiple_of(2);
    let b2u = b2 as usize;
    let name = format!("hypersurface({d})");
    let explicit = match d {
        1 => Some((IntegerMatrix::from_i64(&[&[1]]), vec![1])),
        2 => Some((IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]), vec![1, 1])),
        3 => {
            let mut diag = vec![BigInt::from(-1); 7];
            diag[0] = BigInt::one();
            Some((IntegerMatrix::diagonal(&diag), vec![3, -1, -1, -1, -1, -1, -1]))
        }
        _ => None,
    };
    let profile = match explicit {
        Some((form, u)) => {
            let mut p = FourManifoldProfile::from_form(name, form)?;
            let u = ints(&u);
            assert_eq!(p.b2, b2u);
            assert_eq!(p.signature, signature);
            assert_eq!(p.form.as_ref().unwrap().pair(&u, &u), BigInt::from(d));
            let w2_from_u = F2Vector::from_bits(&u.iter().map(|x| d % 2 == 1 && x.is_odd()).collect::<Vec<_>>());
            assert_eq!(p.w2_vector.as_ref(), Some(&w2_from_u));
            p.hyperplane = Some(u);
            p
        }
        None => FourManifoldProfile {
            name,
            b2: b2u,
            form: None,
            w2_vector: spin.then(|| F2Vector::zeros(b2u)),
            spin,
            euler_char: b2 + 2,
            p1_eval,
            signature,
            hyperplane: None,
        },
    };
    Ok(profile)
}

/// Hardcoded profiles of `S⁵`, the Wu manifold `SU(3)/SO(3)` and the two
/// `S³`-bundles over `S²`.
pub fn catalog(name: &str) -> Result<ManifoldProfile, ConstructError> {
    let z = FgAbGroup::integers;
    let zero = FgAbGroup::trivial;
    let (homology, spin) = match name {
        "s5" => ([z(), zero(), zero(), zero(), zero(), z()], true),
        "wu" => ([z(), zero(), group(0, &[2]), zero(), zero(), z()], false),
        "s3xs2" => ([z(), zero(), z(), z(), zero(), z()], true),
        "s3~xs2" => ([z(), zero(), z(), z(), zero(), z()], false),
        other => return Err(ConstructError::UnknownCatalogName(other.to_string())),
    };
    let mut p = ManifoldProfile::from_homology(name, homology, spin, true)?;
    let n = p.h2_mod2_dimension();
    let w2 = if spin { F2Vector::zeros(n) } else { F2Vector::basis(0, n) };
    p.mod2_fragment = Some(p.trivial_fragment(w2));
    Ok(p.validated()?)
}

pub fn catalog_all() -> Vec<ManifoldProfile> {
    CATALOG_NAMES.iter().map(|n| catalog(n).expect("catalog entries are valid")).collect()
}

#[allow(clippy::needless_range_loop)]
fn sum_fragments(
    a: &ManifoldProfile,
    b: &ManifoldProfile,
    fa: &Mod2Fragment,
    fb: &Mod2Fragment,
    h4: &DirectSum,
) -> Result<Mod2Fragment, ConstructError> {
    // classes in H⁴(·;ℤ_n) are pushed through integral lifts
    let inject = |x: &GroupElement, from: &ManifoldProfile, left: bool, n: u64| -> Result<GroupElement, FgabError> {
        let lift = lift_from_tensor(&from.h4(), x, n)?;
        let y = if left { h4.inject_left(&lift)? } else { h4.inject_right(&lift)? };
        Ok(y.reduce_mod(n))
    };
    let n = fa.h2_dim + fb.h2_dim;
    let zero2 = GroupElement::zero(crate::fgab::tensor_with_cyclic(h4.group(), 2));
    let mut cup = vec![vec![zero2.clone(); n]; n];
    let mut psquare = Vec::with_capacity(n);
    for i in 0..fa.h2_dim {
        for j in 0..fa.h2_dim {
            cup[i][j] = inject(&fa.cup[i][j], a, true, 2)?;
        }
        psquare.push(inject(&fa.psquare[i], a, true, 4)?);
    }
    for i in 0..fb.h2_dim {
        for j in 0..fb.h2_dim {
            cup[fa.h2_dim + i][fa.h2_dim + j] = inject(&fb.cup[i][j], b, false, 2)?;
        }
        psquare.push(inject(&fb.psquare[i], b, false, 4)?);
    }
    let mut bits = fa.w2_class.bits().to_vec();
    bits.extend_from_slice(fb.w2_class.bits());
    let w4_class = inject(&fa.w4_class, a, true, 2)?.add(&inject(&fb.w4_class, b, false, 2)?)?;
    Ok(Mod2Fragment {
        h2_dim: n,
        cup,
        psquare,
        w2_class: F2Vector::from_bits(&bits),
        w4_class,
    })
}

/// `a # b`. Homology adds in degrees 1 to 4; `p₁` and `w₄` are additive.
/// Fragments are combined when both summands carry one.
pub fn connected_sum(a: &ManifoldProfile, b: &ManifoldProfile) -> Result<ManifoldProfile, ConstructError> {
    let a = a.clone().validated()?;
    let b = b.clone().validated()?;
    let z = FgAbGroup::integers();
    let mid = |i: usize| a.homology[i].direct_sum(&b.homology[i]);
    let homology = [z.clone(), mid(1), mid(2), mid(3), mid(4), z];
    let h4 = DirectSum::new(&a.h4(), &b.h4());
    let p1 = h4.pair(&a.p1, &b.p1)?;
    let mut out = ManifoldProfile {
        name: format!("{} # {}", a.name, b.name),
        homology,
        spin: a.spin && b.spin,
        w4_zero: a.w4_zero && b.w4_zero,
        p1,
        mod2_fragment: None,
    };
    debug_assert_eq!(h4.group(), &out.h4());
    if let (Some(fa), Some(fb)) = (&a.mod2_fragment, &b.mod2_fragment) {
        out.mod2_fragment = Some(sum_fragments(&a, &b, fa, fb, &h4)?);
    }
    Ok(out.validated()?)
}

/// Left fold of [`connected_sum`] over at least one summand.
pub fn connected_sum_all(parts: &[ManifoldProfile]) -> Result<ManifoldProfile, ConstructError> {
    let (first, rest) = parts.split_first().ok_or(ConstructError::EmptySum)?;
    rest.iter()
        .try_fold(first.clone().validated()?, |acc, p| connected_sum(&acc, p))
}

/// Integral homology `H₀ … H₃` of a closed oriented 3-manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeManifoldHomology {
    pub groups: [FgAbGroup; 4],
}

impl ThreeManifoldHomology {
    /// The homology forced by Poincaré duality from `H₁`.
    pub fn from_h1(h1: FgAbGroup) -> Self {
        let z = FgAbGroup::integers();
        let h2 = FgAbGroup::free(h1.free_rank());
        Self {
            groups: [z.clone(), h1, h2, z],
        }
    }

    pub fn validate(&self) -> Result<(), ConstructError> {
        let z = FgAbGroup::integers();
        let bad = |m: &str| Err(ConstructError::InvalidThreeManifold(m.to_string()));
        if self.groups[0] != z || self.groups[3] != z {
            return bad("H0 and H3 must be Z");
        }
        if !self.groups[2].is_torsion_free() {
            return bad("H2 must be free");
        }
        if self.groups[2].free_rank() != self.groups[1].free_rank() {
            return bad("rank H2 must equal rank H1");
        }
        Ok(())
    }
}

/// `N³ × Σ_g` by the Künneth formula. `N` is parallelizable, so the product
/// is spin with `w₄ = 0` and `p₁ = 0`.
pub fn product_3x2(n: &ThreeManifoldHomology, genus: usize) -> Result<ManifoldProfile, ConstructError> {
    n.validate()?;
    let surface = [FgAbGroup::integers(), FgAbGroup::free(2 * genus), FgAbGroup::integers()];
    let homology: [FgAbGroup; 6] = std::array::from_fn(|k| {
        let mut acc = FgAbGroup::trivial();
        for (i, hn) in n.groups.iter().enumerate() {
            for (j, hs) in surface.iter().enumerate() {
                if i + j == k {
                    acc = acc.direct_sum(&tensor(hn, hs));
                }
                if i + j + 1 == k {
                    acc = acc.direct_sum(&tor(hn, hs));
                }
            }
        }
        acc
    });
    let name = format!("N({}) x S_{genus}", n.groups[1]);
    Ok(ManifoldProfile::from_homology(name, homology, true, true)?)
}

/// Euler class data of a circle bundle over a 4-manifold with explicit form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleBundleSpec {
    pub base: FourManifoldProfile,
    pub euler_class: Vec<BigInt>,
}

/// Total space of the circle bundle with Euler class `c ≠ 0`, by the Gysin
/// sequence. With `φ = Q c` and `g = content(φ)`:
/// `H_* = (ℤ, ℤ_g, ℤ^{b₂-1}, ℤ^{b₂-1} ⊕ ℤ_g, 0, ℤ)`.
pub fn circle_bundle(spec: &CircleBundleSpec) -> Result<ManifoldProfile, ConstructError> {
    let base = &spec.base;
    let c = &spec.euler_class;
    let problems = base.validate();
    if !problems.is_empty() {
        return Err(ConstructError::Gysin(problems.join("; ")));
    }
    let q = base.form_or_err()?;
    base.check_len(c)?;
    if c.iter().all(Zero::is_zero) {
        return Err(ConstructError::ZeroEulerClass);
    }
    let w2 = base
        .w2_vector
        .as_ref()
        .ok_or_else(|| ConstructError::MissingForm(base.name.clone()))?;
    let phi = q.mul_vec(c);
    let g = content(&phi);
    if g != content(c) {
        return Err(ConstructError::Gysin("content(Qc) differs from content(c)".into()));
    }
    let gu = g.to_u64().ok_or_else(|| ConstructError::Gysin("torsion order too large".into()))?;
    let torsion = if gu > 1 { vec![gu] } else { vec![] };
    let zg = group(0, &torsion);
    let h2_torsion = cokernel(&IntegerMatrix::column(c)).torsion_subgroup();
    let h4 = cokernel(&IntegerMatrix::from_rows(vec![phi.clone()], phi.len())?);
    if h2_torsion != zg || h4 != zg {
        return Err(ConstructError::Gysin(format!(
            "coker(c) torsion {h2_torsion} and coker(phi) {h4} must both be Z_{g}"
        )));
    }
    let r = base.b2 - 1;
    let homology = [
        FgAbGroup::integers(),
        zg.clone(),
        FgAbGroup::free(r),
        group(r, &torsion),
        FgAbGroup::trivial(),
        FgAbGroup::integers(),
    ];
    let two = BigInt::from(2);
    let cbar = F2Vector::from_bits(&c.iter().map(|x| x.mod_floor(&two).is_one()).collect::<Vec<_>>());
    let spin = w2.is_zero() || *w2 == cbar;
    let w4_zero = base.euler_char % 2 == 0 || g.is_odd();
    // H⁴(M;ℤ) = ℤ_g is generated by the pullback of the orientation class
    let gen = if gu > 1 {
        GroupElement::from_i64(zg.clone(), &[1])?
    } else {
        GroupElement::zero(zg.clone())
    };
    let p1 = gen.scale(&BigInt::from(base.p1_eval));
    let mut m = ManifoldProfile {
        name: format!("circle bundle over {} with e = {}", base.name, fmt_vec(c)),
        homology,
        spin,
        w4_zero,
        p1,
        mod2_fragment: None,
    };
    m.mod2_fragment = Some(circle_bundle_fragment(q, w2, &cbar, base.euler_char, &gen));
    Ok(m.validated()?)
}

/// `H²(M;ℤ₂) = H²(X;ℤ₂)/⟨c̄⟩`; a coordinate `j` with `c̄_j = 1` is dropped.
fn circle_bundle_fragment(
    q: &IntegerMatrix,
    w2: &F2Vector,
    cbar: &F2Vector,
    euler_char: i64,
    gen: &GroupElement,
) -> Mod2Fragment {
    let pivot = cbar.support().next();
    let basis: Vec<usize> = (0..q.rows()).filter(|&i| Some(i) != pivot).collect();
    let project = |x: &F2Vector| {
        let x = match pivot {
            Some(j) if x.get(j) => x.add(cbar),
            _ => x.clone(),
        };
        F2Vector::from_bits(&basis.iter().map(|&i| x.get(i)).collect::<Vec<_>>())
    };
    let val = |k: &BigInt, n: u64| gen.scale(k).reduce_mod(n);
    let cup = basis
        .iter()
        .map(|&i| basis.iter().map(|&j| val(q.get(i, j), 2)).collect())
        .collect();
    let psquare = basis.iter().map(|&i| val(q.get(i, i), 4)).collect();
    Mod2Fragment {
        h2_dim: basis.len(),
        cup,
        psquare,
        w2_class: project(w2),
        w4_class: val(&BigInt::from(euler_char), 2),
    }
}

fn fmt_vec(v: &[BigInt]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

/// Result of [`find_euler_class`]: `c = u + w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerClassWitness {
    pub c: Vec<i64>,
    pub w: Vec<i64>,
}

/// Lexicographically first `w ∈ [-bound, bound]^{b₂}` with `Q(u,w) = 0`,
/// `w ≠ u` and `content(Q(u+w)) = g`. The box is searched in parallel; the
/// answer does not depend on scheduling.
pub fn find_euler_class(
    base: &FourManifoldProfile,
    u: &[i64],
    g: u64,
    bound: u32,
) -> Result<Option<EulerClassWitness>, ConstructError> {
    let q = base.form_or_err()?;
    let ub = ints(u);
    base.check_len(&ub)?;
    let n = base.b2;
    let side = 2 * u64::from(bound) + 1;
    let total = u32::try_from(n)
        .ok()
        .and_then(|e| side.checked_pow(e))
        .ok_or(ConstructError::SearchTooLarge(n, bound))?;
    let qu = q.mul_vec(&ub);
    let target = BigInt::from(g);
    let b = i64::from(bound);
    let decode = |mut idx: u64| {
        let mut w = vec![0i64; n];
        for slot in w.iter_mut().rev() {
            *slot = (idx % side) as i64 - b;
            idx /= side;
        }
        w
    };
    let hit = (0..total).into_par_iter().find_first(|&idx| {
        let w = decode(idx);
        if w == u {
            return false;
        }
        let dot: BigInt = qu.iter().zip(&w).map(|(a, &x)| a * x).sum();
        if !dot.is_zero() {
            return false;
        }
        let c: Vec<BigInt> = ub.iter().zip(&w).map(|(a, &x)| a + x).collect();
        content(&q.mul_vec(&c)) == target
    });
    Ok(hit.map(|idx| {
        let w = decode(idx);
        let c = u.iter().zip(&w).map(|(a, x)| a + x).collect();
        EulerClassWitness { c, w }
    }))
}

/// Recipe for a 4-dimensional base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseRecipe {
    Hypersurface {
        degree: u32,
    },
    Form {
        #[serde(default)]
        name: Option<String>,
        matrix: Vec<Vec<i64>>,
    },
}

impl BaseRecipe {
    pub fn build(&self) -> Result<FourManifoldProfile, ConstructError> {
        match self {
            BaseRecipe::Hypersurface { degree } => hypersurface(*degree),
            BaseRecipe::Form { name, matrix } => {
                let cols = matrix.first().map_or(0, Vec::len);
                let rows = matrix.iter().map(|r| ints(r)).collect();
                let q = IntegerMatrix::from_rows(rows, cols)?;
                FourManifoldProfile::from_form(name.clone().unwrap_or_else(|| "X".into()), q)
            }
        }
    }
}

/// Euler class given explicitly or found by [`find_euler_class`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EulerClassRecipe {
    Explicit(Vec<i64>),
    Search {
        u: Vec<i64>,
        torsion: u64,
        #[serde(default)]
        bound: Option<u32>,
    },
}

/// Default box size for Euler class searches without an explicit bound.
pub const DEFAULT_SEARCH_BOUND: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeManifoldRecipe {
    pub h1: crate::json::GroupJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case", deny_unknown_fields)]
pub enum Recipe {
    Catalog {
        name: String,
    },
    ConnectedSum {
        parts: Vec<Recipe>,
    },
    #[serde(rename = "product_3x2")]
    Product3x2 {
        n3_homology: ThreeManifoldRecipe,
        genus: usize,
    },
    CircleBundle {
        base: BaseRecipe,
        euler_class: EulerClassRecipe,
    },
}

impl Recipe {
    /// Evaluates the recipe; `bound` is used by searches that give none.
    pub fn build(&self, default_bound: u32) -> Result<ManifoldProfile, ConstructError> {
        match self {
            Recipe::Catalog { name } => catalog(name),
            Recipe::ConnectedSum { parts } => {
                let built = parts
                    .iter()
                    .map(|p| p.build(default_bound))
                    .collect::<Result<Vec<_>, _>>()?;
                connected_sum_all(&built)
            }
            Recipe::Product3x2 { n3_homology, genus } => {
                let h1 = n3_homology
                    .h1
                    .to_group()
                    .map_err(|e| ConstructError::InvalidThreeManifold(e.to_string()))?;
                product_3x2(&ThreeManifoldHomology::from_h1(h1), *genus)
            }
            Recipe::CircleBundle { base, euler_class } => {
                let base = base.build()?;
                let c = match euler_class {
                    EulerClassRecipe::Explicit(c) => c.clone(),
                    EulerClassRecipe::Search { u, torsion, bound } => {
                        let bound = bound.unwrap_or(default_bound);
                        find_euler_class(&base, u, *torsion, bound)?
                            .ok_or_else(|| ConstructError::Gysin(format!("no Euler class found within bound {bound}")))?
                            .c
                    }
                };
                circle_bundle(&CircleBundleSpec {
                    base,
                    euler_class: ints(&c),
                })
            }
        }
    }
}
