use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FgabError, GroupElement, IntegerMatrix, Quotient};

/// A finitely generated abelian group `ℤ^r ⊕ ℤ_{d₁} ⊕ … ⊕ ℤ_{d_k}` in
/// invariant-factor form: every `dᵢ ≥ 2` and `dᵢ | dᵢ₊₁`. The form is
/// canonical, so structural equality is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    /// Accepts only canonical data; use [`FgAbGroup::from_cyclic_orders`]
    /// for arbitrary cyclic decompositions.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, FgabError> {
        let two = BigInt::from(2);
        if let Some(d) = torsion.iter().find(|d| **d < two) {
            return Err(FgabError::NonCanonical(format!("torsion coefficient {d} is below 2")));
        }
        if let Some(w) = torsion.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(FgabError::NonCanonical(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(Self { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        Self {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn integers() -> Self {
        Self::free(1)
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `ℤ_n`; `n = 0` gives `ℤ` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(0, [BigInt::from(n)])
    }

    /// Direct sum of `ℤ^free_rank` and cyclic groups of the given orders
    /// (0 meaning `ℤ`, 1 meaning trivial), normalised to invariant factors.
    pub fn from_cyclic_orders(free_rank: usize, orders: impl IntoIterator<Item = BigInt>) -> Self {
        let mut diag: Vec<BigInt> = orders.into_iter().map(|d| d.abs()).collect();
        if diag.iter().all(|d| d.is_zero() || d.is_one()) {
            let extra = diag.iter().filter(|d| d.is_zero()).count();
            return Self::free(free_rank + extra);
        }
        diag.extend(std::iter::repeat_n(BigInt::zero(), free_rank));
        Quotient::of(&IntegerMatrix::diagonal(&diag)).into_group()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_coefficients(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of a finite group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn torsion_subgroup(&self) -> FgAbGroup {
        Self {
            free_rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    /// Cyclic decomposition in coordinate order: torsion orders first, then
    /// a 0 for every free summand.
    pub fn cyclic_factors(&self) -> Vec<BigInt> {
        let mut f = self.torsion.clone();
        f.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        f
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        DirectSum::new(self, other).group().clone()
    }

    /// Number of coordinates an element carries.
    pub fn coordinate_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Every element of a finite group, in lexicographic coordinate order.
    /// Intended for brute-force checks on small groups.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::<BigInt>::new()];
        for d in &self.torsion {
            let d = d.to_u64()?;
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(BigInt::from(x));
                        p
                    })
                })
                .collect();
        }
        Some(
            out.into_iter()
                .map(|t| GroupElement::new(self.clone(), Vec::new(), t).expect("in range"))
                .collect(),
        )
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// `a ⊕ b` in canonical form with the two coordinate embeddings.
#[derive(Clone, Debug)]
pub struct DirectSum {
    left: FgAbGroup,
    right: FgAbGroup,
    quotient: Quotient,
}

impl DirectSum {
    pub fn new(left: &FgAbGroup, right: &FgAbGroup) -> Self {
        let mut diag = left.cyclic_factors();
        diag.extend(right.cyclic_factors());
        Self {
            left: left.clone(),
            right: right.clone(),
            quotient: Quotient::of(&IntegerMatrix::diagonal(&diag)),
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        self.quotient.group()
    }

    pub fn inject_left(&self, x: &GroupElement) -> Result<GroupElement, FgabError> {
        x.expect_group(&self.left)?;
        let mut v = x.presentation_vector();
        v.resize(v.len() + self.right.coordinate_count(), BigInt::zero());
        Ok(self.quotient.project(&v))
    }

    pub fn inject_right(&self, y: &GroupElement) -> Result<GroupElement, FgabError> {
        y.expect_group(&self.right)?;
        let mut v = vec![BigInt::zero(); self.left.coordinate_count()];
        v.extend(y.presentation_vector());
        Ok(self.quotient.project(&v))
    }

    /// `inject_left(x) + inject_right(y)`
    pub fn pair(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, FgabError> {
        self.inject_left(x)?.add(&self.inject_right(y)?)
    }
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

// Binary functors on cyclic factors; an order of 0 stands for ℤ.
fn apply_functor(g: &FgAbGroup, h: &FgAbGroup, rule: impl Fn(&BigInt, &BigInt) -> BigInt) -> FgAbGroup {
    let mut orders = Vec::new();
    for a in g.cyclic_factors() {
        for b in h.cyclic_factors() {
            orders.push(rule(&a, &b));
        }
    }
    FgAbGroup::from_cyclic_orders(0, orders)
}

/// `G ⊗ H`
pub fn tensor(g: &FgAbGroup, h: &FgAbGroup) -> FgAbGroup {
    apply_functor(g, h, |a, b| match (a.is_zero(), b.is_zero()) {
        (true, true) => BigInt::zero(),
        (true, false) => b.clone(),
        (false, true) => a.clone(),
        (false, false) => gcd(a, b),
    })
}

/// `Tor(G, H)`
pub fn tor(g: &FgAbGroup, h: &FgAbGroup) -> FgAbGroup {
    apply_functor(g, h, |a, b| {
        if a.is_zero() || b.is_zero() {
            BigInt::one()
        } else {
            gcd(a, b)
        }
    })
}

/// `Hom(G, H)`
pub fn hom(g: &FgAbGroup, h: &FgAbGroup) -> FgAbGroup {
    apply_functor(g, h, |a, b| match (a.is_zero(), b.is_zero()) {
        (true, _) => b.clone(),
        (false, true) => BigInt::one(),
        (false, false) => gcd(a, b),
    })
}

/// `Ext(G, H)`
pub fn ext(g: &FgAbGroup, h: &FgAbGroup) -> FgAbGroup {
    apply_functor(g, h, |a, b| match (a.is_zero(), b.is_zero()) {
        (true, _) => BigInt::one(),
        (false, true) => a.clone(),
        (false, false) => gcd(a, b),
    })
}

/// `dim_{𝔽_p} (G ⊗ ℤ_p)` for a prime `p`.
pub fn mod_p_dimension(g: &FgAbGroup, p: u64) -> usize {
    assert!(is_prime(p), "mod_p_dimension needs a prime, got {p}");
    let p = BigInt::from(p);
    g.free_rank() + g.torsion_coefficients().iter().filter(|d| d.is_multiple_of(&p)).count()
}

/// Whether `G` contains an element of exact order `n`.
///
/// An element of order `n` exists iff `n` divides the largest invariant
/// factor (the exponent of the torsion subgroup); for a prime power this is
/// the same as some `dᵢ` being divisible by `n`.
pub fn has_element_of_order(g: &FgAbGroup, n: u64) -> Result<bool, FgabError> {
    if n == 0 {
        return Err(FgabError::ZeroOrder);
    }
    if n == 1 {
        return Ok(true);
    }
    Ok(g.torsion_coefficients()
        .last()
        .is_some_and(|d| d.is_multiple_of(&BigInt::from(n))))
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
