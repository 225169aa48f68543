//! Smith normal form over the integers with unimodular transforms.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with exact entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
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

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    /// Diagonal entries `S[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `S = U · A · V` with `U`, `V` unimodular and `S` diagonal, non-negative,
/// each diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Non-zero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.s.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for k in 0..m.min(n) {
        // smallest non-zero entry of the remaining block as pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if !s[(i, j)].is_zero() && pivot.is_none_or(|(pi, pj)| s[(i, j)].abs() < s[(pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(k, pi);
        u.swap_rows(k, pi);
        s.swap_cols(k, pj);
        v.swap_cols(k, pj);

        loop {
            let mut changed = false;
            // clear column k below the pivot
            for i in k + 1..m {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = -s[(i, k)].div_floor(&s[(k, k)]);
                s.add_row(i, k, &q);
                u.add_row(i, k, &q);
                if !s[(i, k)].is_zero() {
                    // remainder is smaller than the pivot: swap it in
                    s.swap_rows(k, i);
                    u.swap_rows(k, i);
                    changed = true;
                }
            }
            // clear row k right of the pivot
            for j in k + 1..n {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = -s[(k, j)].div_floor(&s[(k, k)]);
                s.add_col(j, k, &q);
                v.add_col(j, k, &q);
                if !s[(k, j)].is_zero() {
                    s.swap_cols(k, j);
                    v.swap_cols(k, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: the pivot must divide the rest of the block
            let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| !s[(i, j)].is_multiple_of(&s[(k, k)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                }
                None => break,
            }
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
    }
    SmithForm { s, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.s);
        assert!(f.s.is_diagonal());
        assert!(f.u.is_unimodular() && f.v.is_unimodular());
        let d = f.s.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        f
    }

    #[test]
    fn diag_2_3() {
        let f = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(3, 2);
        let f = check(&a);
        assert_eq!(f.s, a);
        assert_eq!(f.u, IntMatrix::identity(3));
        assert_eq!(f.v, IntMatrix::identity(2));
    }

    #[test]
    fn empty_matrices() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
    }

    #[test]
    fn needs_divisibility_fix() {
        let f = check(&IntMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]));
        assert_eq!(
            f.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(60)]
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).determinant(),
            BigInt::from(-1)
        );
        assert_eq!(
            IntMatrix::from_rows(&[vec![2, 1, 3], vec![0, -1, 4], vec![5, 2, 0]]).determinant(),
            BigInt::from(19)
        );
    }
}
