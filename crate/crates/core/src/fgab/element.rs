use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{FgAbGroup, FgabError};

/// An element of a [`FgAbGroup`], stored by coordinates: one integer per
/// free summand and one residue in `[0, dᵢ)` per torsion summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FgAbGroup,
    free: Vec<BigInt>,
    torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(group: FgAbGroup, free: Vec<BigInt>, torsion: Vec<BigInt>) -> Result<Self, FgabError> {
        if free.len() != group.free_rank() || torsion.len() != group.torsion_coefficients().len() {
            return Err(FgabError::CoordinateShape {
                group: group.to_string(),
                free: free.len(),
                torsion: torsion.len(),
            });
        }
        let torsion = torsion
            .into_iter()
            .zip(group.torsion_coefficients())
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        Ok(Self { group, free, torsion })
    }

    /// Flat coordinates: free coordinates followed by torsion coordinates.
    pub fn from_coords(group: FgAbGroup, coords: &[BigInt]) -> Result<Self, FgabError> {
        if coords.len() != group.coordinate_count() {
            return Err(FgabError::CoordinateShape {
                group: group.to_string(),
                free: coords.len().min(group.free_rank()),
                torsion: coords.len().saturating_sub(group.free_rank()),
            });
        }
        let (free, torsion) = coords.split_at(group.free_rank());
        Self::new(group, free.to_vec(), torsion.to_vec())
    }

    pub fn from_i64(group: FgAbGroup, coords: &[i64]) -> Result<Self, FgabError> {
        let coords: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_coords(group, &coords)
    }

    pub fn zero(group: FgAbGroup) -> Self {
        let free = vec![BigInt::zero(); group.free_rank()];
        let torsion = vec![BigInt::zero(); group.torsion_coefficients().len()];
        Self { group, free, torsion }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn free_coords(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion_coords(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn coords(&self) -> Vec<BigInt> {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }

    /// Coordinates in the order of [`FgAbGroup::cyclic_factors`].
    pub(crate) fn presentation_vector(&self) -> Vec<BigInt> {
        self.torsion.iter().chain(&self.free).cloned().collect()
    }

    pub(crate) fn expect_group(&self, group: &FgAbGroup) -> Result<(), FgabError> {
        if &self.group == group {
            Ok(())
        } else {
            Err(FgabError::GroupMismatch {
                left: self.group.to_string(),
                right: group.to_string(),
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement, FgabError> {
        other.expect_group(&self.group)?;
        let free = self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect();
        let torsion = self.torsion.iter().zip(&other.torsion).map(|(a, b)| a + b).collect();
        GroupElement::new(self.group.clone(), free, torsion)
    }

    pub fn neg(&self) -> GroupElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> GroupElement {
        let free = self.free.iter().map(|a| a * k).collect();
        let torsion = self.torsion.iter().map(|a| a * k).collect();
        GroupElement::new(self.group.clone(), free, torsion).expect("same shape")
    }

    /// Order of the element, `None` when it has infinite order.
    pub fn order(&self) -> Option<BigInt> {
        if self.free.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            self.torsion
                .iter()
                .zip(self.group.torsion_coefficients())
                .fold(BigInt::one(), |acc, (x, d)| acc.lcm(&(d / d.gcd(x)))),
        )
    }

    /// Image under the coefficient reduction `G → G ⊗ ℤ_n`, landing in
    /// [`tensor_with_cyclic`]`(G, n)`.
    pub fn reduce_mod(&self, n: u64) -> GroupElement {
        let layout = TensorLayout::new(&self.group, n);
        let mut coords = vec![BigInt::zero(); layout.target.torsion_coefficients().len()];
        for (x, slot) in self.presentation_vector().iter().zip(&layout.slots) {
            if let Some((idx, modulus)) = slot {
                coords[*idx] = x.mod_floor(modulus);
            }
        }
        GroupElement::new(layout.target, Vec::new(), coords).expect("layout shape")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.group.is_trivial() {
            return write!(f, "0");
        }
        let c: Vec<String> = self.coords().iter().map(|x| x.to_string()).collect();
        write!(f, "({}) in {}", c.join(", "), self.group)
    }
}

/// How the cyclic factors of `G` sit inside `G ⊗ ℤ_n`.
struct TensorLayout {
    target: FgAbGroup,
    /// per cyclic factor of `G`: target coordinate and its modulus
    slots: Vec<Option<(usize, BigInt)>>,
}

impl TensorLayout {
    fn new(base: &FgAbGroup, n: u64) -> Self {
        assert!(n >= 1, "coefficient modulus must be positive");
        let n = BigInt::from(n);
        let mut target = Vec::new();
        let mut slots = Vec::new();
        for d in base.cyclic_factors() {
            let m = if d.is_zero() { n.clone() } else { d.gcd(&n) };
            if m.is_one() {
                slots.push(None);
            } else {
                slots.push(Some((target.len(), m.clone())));
                target.push(m);
            }
        }
        let target = FgAbGroup::new(0, target).expect("gcds with n form a divisibility chain");
        Self { target, slots }
    }
}

/// `G ⊗ ℤ_n` with the coordinate layout used by [`GroupElement::reduce_mod`].
pub fn tensor_with_cyclic(g: &FgAbGroup, n: u64) -> FgAbGroup {
    TensorLayout::new(g, n).target
}

/// An element of `G` whose reduction in `G ⊗ ℤ_n` is `x`.
pub fn lift_from_tensor(base: &FgAbGroup, x: &GroupElement, n: u64) -> Result<GroupElement, FgabError> {
    let layout = TensorLayout::new(base, n);
    x.expect_group(&layout.target)?;
    let mut pres = vec![BigInt::zero(); layout.slots.len()];
    for (slot, v) in layout.slots.iter().zip(pres.iter_mut()) {
        if let Some((idx, _)) = slot {
            *v = x.torsion[*idx].clone();
        }
    }
    let k = base.torsion_coefficients().len();
    let free = pres.split_off(k);
    GroupElement::new(base.clone(), free, pres)
}

/// Map `G ⊗ ℤ_from → G ⊗ ℤ_to` induced by the coefficient homomorphism
/// `ℤ_from → ℤ_to`, `1 ↦ multiplier`. Needs `to | multiplier · from`.
///
/// With `(from, to, multiplier)` = `(2, 4, 2)` this is `i_*`, with `(4, 2, 1)`
/// the mod-2 reduction `ρ₂`.
pub fn change_coefficients(
    base: &FgAbGroup,
    x: &GroupElement,
    from: u64,
    to: u64,
    multiplier: u64,
) -> Result<GroupElement, FgabError> {
    if (u128::from(multiplier) * u128::from(from)) % u128::from(to) != 0 {
        return Err(FgabError::IllDefinedCoefficientMap { from, to, multiplier });
    }
    let src = TensorLayout::new(base, from);
    x.expect_group(&src.target)?;
    let dst = TensorLayout::new(base, to);
    let k = BigInt::from(multiplier);
    let mut coords = vec![BigInt::zero(); dst.target.torsion_coefficients().len()];
    for (s, t) in src.slots.iter().zip(&dst.slots) {
        if let (Some((si, _)), Some((ti, m))) = (s, t) {
            coords[*ti] = (&x.torsion[*si] * &k).mod_floor(m);
        }
    }
    GroupElement::new(dst.target, Vec::new(), coords)
}

/// Some `y` with `n · y = x`, or `None` when `x` is not divisible by `n`.
///
/// A free coordinate is solvable iff `n` divides it; a `ℤ_d` coordinate iff
/// `gcd(n, d)` divides it.
pub fn solve_divisibility(x: &GroupElement, n: u64) -> Option<GroupElement> {
    let n = BigInt::from(n);
    let mut free = Vec::with_capacity(x.free.len());
    for c in &x.free {
        if n.is_zero() {
            if !c.is_zero() {
                return None;
            }
            free.push(BigInt::zero());
            continue;
        }
        let (q, r) = c.div_rem(&n);
        if !r.is_zero() {
            return None;
        }
        free.push(q);
    }
    let mut torsion = Vec::with_capacity(x.torsion.len());
    for (c, d) in x.torsion.iter().zip(x.group.torsion_coefficients()) {
        let g = n.gcd(d);
        if !c.is_multiple_of(&g) {
            return None;
        }
        let modulus = d / &g;
        let unit = (&n / &g).mod_floor(&modulus);
        let inv = mod_inverse(&unit, &modulus);
        torsion.push(((c / &g) * inv).mod_floor(&modulus));
    }
    Some(GroupElement::new(x.group.clone(), free, torsion).expect("same shape"))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> FgAbGroup {
        FgAbGroup::cyclic(3)
    }

    #[test]
    fn arithmetic_examples() {
        let a = GroupElement::from_i64(z3(), &[1]).unwrap();
        let b = GroupElement::from_i64(z3(), &[2]).unwrap();
        assert!(a.add(&b).unwrap().is_zero());

        let v = GroupElement::from_i64(FgAbGroup::free(2), &[1, 0]).unwrap();
        assert_eq!(v.scale(&BigInt::from(5)).coords(), vec![BigInt::from(5), BigInt::zero()]);

        assert!(a.scale(&BigInt::from(3)).is_zero());
    }

    #[test]
    fn mixed_groups_rejected() {
        let a = GroupElement::from_i64(z3(), &[1]).unwrap();
        let b = GroupElement::from_i64(FgAbGroup::cyclic(4), &[1]).unwrap();
        assert!(matches!(a.add(&b), Err(FgabError::GroupMismatch { .. })));
    }

    #[test]
    fn coordinates_are_reduced() {
        let a = GroupElement::from_i64(z3(), &[-1]).unwrap();
        assert_eq!(a.coords(), vec![BigInt::from(2)]);
        assert!(GroupElement::from_i64(z3(), &[1, 2]).is_err());
    }

    #[test]
    fn divisibility_examples() {
        let ten = GroupElement::from_i64(FgAbGroup::integers(), &[10]).unwrap();
        assert_eq!(solve_divisibility(&ten, 5).unwrap().coords(), vec![BigInt::from(2)]);

        let one3 = GroupElement::from_i64(z3(), &[1]).unwrap();
        assert_eq!(solve_divisibility(&one3, 5).unwrap().coords(), vec![BigInt::from(2)]);

        let one5 = GroupElement::from_i64(FgAbGroup::cyclic(5), &[1]).unwrap();
        assert!(solve_divisibility(&one5, 5).is_none());

        let seven = GroupElement::from_i64(FgAbGroup::integers(), &[7]).unwrap();
        assert!(solve_divisibility(&seven, 5).is_none());
    }

    #[test]
    fn reduction_layout_matches_tensor() {
        let g = FgAbGroup::from_cyclic_orders(2, [2, 4, 3].map(BigInt::from));
        for n in 1..=12 {
            assert_eq!(tensor_with_cyclic(&g, n), super::super::tensor(&g, &FgAbGroup::cyclic(n)));
        }
        let x = GroupElement::from_i64(g.clone(), &[5, 7, 1, 3]).unwrap();
        let r = x.reduce_mod(4);
        assert_eq!(r.group(), &tensor_with_cyclic(&g, 4));
        for n in [2, 3, 4, 6] {
            let r = x.reduce_mod(n);
            assert_eq!(lift_from_tensor(&g, &r, n).unwrap().reduce_mod(n), r);
        }
    }

    #[test]
    fn inclusion_and_reduction_of_coefficients() {
        // G = Z ⊕ Z_2 ⊕ Z_4 (invariant factors 2 | 4, one free)
        let g = FgAbGroup::from_cyclic_orders(1, [2, 4].map(BigInt::from));
        let x = GroupElement::from_i64(g.clone(), &[1, 1, 1]).unwrap();
        let x2 = x.reduce_mod(2);
        let up = change_coefficients(&g, &x2, 2, 4, 2).unwrap();
        // i_* ∘ ρ₂ = multiplication by 2 on G ⊗ Z_4
        assert_eq!(up, x.scale(&BigInt::from(2)).reduce_mod(4));
        let down = change_coefficients(&g, &x.reduce_mod(4), 4, 2, 1).unwrap();
        assert_eq!(down, x2);
        assert!(change_coefficients(&g, &x2, 2, 4, 1).is_err());
    }
}
