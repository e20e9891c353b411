//! Integer presentation matrices and their Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense integer matrix; rows are relations, columns generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= k · row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let d = self.get(src, j) * k;
            self.data[dst * self.cols + j] -= d;
        }
    }

    /// col[dst] -= k · col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let d = self.get(i, src) * k;
            self.data[i * self.cols + dst] -= d;
        }
    }

    /// Diagonal entries `d_1 | d_2 | … | d_r` of the Smith normal form, all
    /// positive; `r` is the rank.
    pub fn smith_diagonal(&self) -> Vec<BigInt> {
        let mut m = self.clone();
        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.rows.min(m.cols) {
            // Pivot on the smallest nonzero entry of the trailing block.
            let Some((pi, pj)) = m.smallest_entry(t) else { break };
            m.swap_rows(t, pi);
            m.swap_cols(t, pj);
            loop {
                let pivot = m.get(t, t).clone();
                let mut dirty = false;
                for i in t + 1..m.rows {
                    let q = m.get(i, t).div_floor(&pivot);
                    if !q.is_zero() {
                        m.row_axpy(i, t, &q);
                    }
                    dirty |= !m.get(i, t).is_zero();
                }
                for j in t + 1..m.cols {
                    let q = m.get(t, j).div_floor(&pivot);
                    if !q.is_zero() {
                        m.col_axpy(j, t, &q);
                    }
                    dirty |= !m.get(t, j).is_zero();
                }
                if dirty {
                    // A remainder is smaller than the pivot; move it up.
                    let (pi, pj) = m.smallest_in_cross(t);
                    m.swap_rows(t, pi);
                    m.swap_cols(t, pj);
                    continue;
                }
                // Enforce divisibility into the trailing block.
                let bad = (t + 1..m.rows)
                    .flat_map(|i| (t + 1..m.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !m.get(i, j).is_multiple_of(&pivot));
                match bad {
                    Some((i, _)) => m.row_axpy(t, i, &-BigInt::one()),
                    None => break,
                }
            }
            diag.push(m.get(t, t).abs());
            t += 1;
        }
        diag
    }

    fn smallest_entry(&self, t: usize) -> Option<(usize, usize)> {
        (t..self.rows)
            .flat_map(|i| (t..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.get(i, j).is_zero())
            .min_by_key(|&(i, j)| self.get(i, j).abs())
    }

    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let col = (t..self.rows).map(|i| (i, t));
        let row = (t..self.cols).map(|j| (t, j));
        col.chain(row)
            .filter(|&(i, j)| !self.get(i, j).is_zero())
            .min_by_key(|&(i, j)| self.get(i, j).abs())
            .expect("pivot cross is nonzero")
    }

    /// Order of the presented group: the product of the Smith diagonal, or
    /// `0` if the group is infinite.
    pub fn group_order(&self) -> BigInt {
        let diag = self.smith_diagonal();
        if diag.len() < self.cols {
            return BigInt::zero();
        }
        diag.iter().product()
    }

    /// Invariant factors of the cokernel, with `0` for each free summand and
    /// trivial factors dropped.
    pub fn cokernel_invariants(&self) -> Vec<BigInt> {
        let diag = self.smith_diagonal();
        let free = self.cols - diag.len();
        diag.into_iter()
            .filter(|d| !d.is_one())
            .chain(std::iter::repeat_n(BigInt::zero(), free))
            .collect()
    }
}

/// Presentation of `H₁` of a space built from `S² × S¹` minus discs by
/// attaching, for each pair `(a, b)`, a solid torus whose meridian is
/// `a·c + b·h` (`c` the section boundary, `h` the fiber).
///
/// Generators `c_1 … c_n, h`; relations `Σ c_i = 0` and `a_i c_i + b_i h = 0`.
/// Pairs with `a = 0` or `|a| = 1` are allowed, so the same routine serves
/// fillings along the fiber and homology-only fillings.
pub fn filled_presentation(pairs: &[(BigInt, BigInt)]) -> IntMatrix {
    let n = pairs.len();
    let mut m = IntMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        m.set(0, i, BigInt::one());
        m.set(i + 1, i, pairs[i].0.clone());
        m.set(i + 1, n, pairs[i].1.clone());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn smith_of_small_matrices() {
        assert_eq!(mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]).smith_diagonal(), ints(&[2, 6, 12]));
        assert_eq!(mat(&[&[6, 0], &[0, 4]]).smith_diagonal(), ints(&[2, 12]));
        assert_eq!(mat(&[&[0, 0], &[0, 0]]).smith_diagonal(), ints(&[]));
        assert_eq!(mat(&[&[3, 6]]).cokernel_invariants(), ints(&[3, 0]));
    }

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(a, b)| (a.into(), b.into())).collect()
    }

    #[test]
    fn presentation_examples() {
        // S² × S¹
        assert_eq!(filled_presentation(&pairs(&[(1, 0)])).group_order(), 0.into());
        // Poincaré homology sphere: (2,1),(3,1),(5,1) and integer part −1.
        let p = filled_presentation(&pairs(&[(2, 1), (3, 1), (5, 1), (1, -1)]));
        assert_eq!(p.group_order(), 1.into());
        // Filling along the fibre itself.
        assert_eq!(filled_presentation(&pairs(&[(3, 1), (0, 1)])).group_order(), 3.into());
    }

    // Leibniz expansion; exponential but exact, used only as an oracle.
    fn det(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * det(&minor)
            })
            .sum()
    }

    #[test]
    fn single_fibre_matches_two_by_two_determinant() {
        for alpha in 1..=9i64 {
            for beta in -12..=12i64 {
                if alpha.gcd(&beta) != 1 {
                    continue;
                }
                for b in -4..=4i64 {
                    let p = filled_presentation(&pairs(&[(alpha, beta), (1, b)]));
                    assert_eq!(p.group_order(), BigInt::from((b * alpha + beta).abs()));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn order_is_abs_determinant(v in proptest::collection::vec(-9i64..10, 16)) {
            let rows: Vec<Vec<i64>> = v.chunks(4).map(|c| c.to_vec()).collect();
            let m = IntMatrix::from_rows(rows.iter().map(|r| ints(r)).collect());
            prop_assert_eq!(m.group_order(), BigInt::from(det(&rows).abs()));
        }

        #[test]
        fn smith_diagonal_divides(v in proptest::collection::vec(-20i64..21, 12)) {
            let rows: Vec<Vec<BigInt>> = v.chunks(4).map(|c| ints(c)).collect();
            let d = IntMatrix::from_rows(rows).smith_diagonal();
            for w in d.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }
}
