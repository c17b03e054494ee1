use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FgAbGroup, GroupElement, IntegerMatrix};

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal, nonnegative,
/// with each diagonal entry dividing the next (zeros last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form by elementary row/column operations, always pivoting
/// on an entry of least absolute value in the remaining block.
pub fn smith_normal_form(a: &IntegerMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = least_nonzero(&d, t) else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..m {
                let q = d.get(i, t).div_floor(&pivot);
                let q = -q;
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole remaining block
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(u: IntegerMatrix, d: IntegerMatrix, v: IntegerMatrix) -> SnfDecomposition {
    SnfDecomposition { u, d, v }
}

fn least_nonzero(d: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| &ax < b) {
                let one = ax.is_one();
                best = Some((i, j, ax));
                if one {
                    break;
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// `ℤ^rows / image(a)` together with the projection taking integer vectors
/// to canonical coordinates of the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    group: FgAbGroup,
    /// rows of `u` feeding the torsion coordinates, in canonical order
    torsion_rows: Vec<Vec<BigInt>>,
    /// rows of `u` feeding the free coordinates
    free_rows: Vec<Vec<BigInt>>,
}

impl Quotient {
    pub fn of(a: &IntegerMatrix) -> Self {
        let snf = smith_normal_form(a);
        let diag = snf.diagonal();
        let mut torsion = Vec::new();
        let mut torsion_rows = Vec::new();
        let mut free_rows = Vec::new();
        for i in 0..a.rows() {
            let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if di.is_zero() {
                free_rows.push(snf.u.row(i).to_vec());
            } else if !di.is_one() {
                torsion.push(di);
                torsion_rows.push(snf.u.row(i).to_vec());
            }
        }
        let group = FgAbGroup::new(free_rows.len(), torsion).expect("smith normal form yields a divisibility chain");
        Self {
            group,
            torsion_rows,
            free_rows,
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn into_group(self) -> FgAbGroup {
        self.group
    }

    /// Class of the integer vector `x` in canonical coordinates.
    pub fn project(&self, x: &[BigInt]) -> GroupElement {
        let dot = |row: &Vec<BigInt>| -> BigInt { row.iter().zip(x).map(|(a, b)| a * b).sum() };
        let free = self.free_rows.iter().map(dot).collect();
        let torsion = self.torsion_rows.iter().map(dot).collect();
        GroupElement::new(self.group.clone(), free, torsion).expect("projection has the group's shape")
    }
}

/// Cokernel of the map `ℤ^cols → ℤ^rows` represented by `a`.
pub fn cokernel(a: &IntegerMatrix) -> FgAbGroup {
    Quotient::of(a).into_group()
}
