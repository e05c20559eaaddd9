//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision: determinants come from
//! fraction-free Bareiss elimination, so no intermediate result is ever
//! rounded. The text format read and written by [`IntMatrix::parse_text`] and
//! [`IntMatrix::to_text`] is a `rows cols` header line followed by one
//! whitespace-separated row per line.

use crate::{Error, Result};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Exact rational scalar used throughout the covering-radius code.
pub type Rational = num_rational::BigRational;

/// Dense integer matrix, row major, arbitrary precision entries.
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

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, BigInt::from(f(i, j)));
            }
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Builds a matrix whose columns are the given integer vectors.
    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        Self::from_fn(r, c, |i, j| cols[j][i])
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

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// First `k` columns as a new matrix.
    pub fn leading_columns(&self, k: usize) -> IntMatrix {
        assert!(k <= self.cols);
        let mut m = IntMatrix::zeros(self.rows, k);
        for i in 0..self.rows {
            for j in 0..k {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// The matrix with one extra row appended so that every column sums to
    /// zero.
    pub fn extend_zero_sum_row(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows + 1, self.cols);
        for j in 0..self.cols {
            let mut col_sum = BigInt::from(0);
            for i in 0..self.rows {
                let v = self.get(i, j).clone();
                col_sum += &v;
                out.set(i, j, v);
            }
            out.set(self.rows, j, -col_sum);
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Gram matrix `A^T A`.
    pub fn gram(&self) -> IntMatrix {
        self.transpose().mul(self)
    }

    /// Exact determinant by fraction-free Bareiss elimination with row
    /// pivoting. All intermediate divisions are exact.
    pub fn bareiss_det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::from(1));
        }
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = 1i32;
        let mut prev = BigInt::from(1);
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[idx(i, k)].is_zero()) {
                    Some(p) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(p, j));
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)];
                    a[idx(i, j)] = num / &prev;
                }
            }
            prev = a[idx(k, k)].clone();
        }
        let mut det = a[idx(n - 1, n - 1)].clone();
        if sign < 0 {
            det = -det;
        }
        Ok(det)
    }

    /// Rank over the integers (= rank over the rationals), by fraction-free
    /// elimination with full column scanning.
    pub fn integer_rank(&self) -> usize {
        let mut a = self.data.clone();
        let (r, c) = (self.rows, self.cols);
        let idx = |i: usize, j: usize| i * c + j;
        let mut rank = 0;
        let mut prev = BigInt::from(1);
        for col in 0..c {
            let pivot = (rank..r).find(|&i| !a[idx(i, col)].is_zero());
            let Some(p) = pivot else { continue };
            if p != rank {
                for j in 0..c {
                    a.swap(idx(rank, j), idx(p, j));
                }
            }
            for i in rank + 1..r {
                for j in col + 1..c {
                    let num = &a[idx(i, j)] * &a[idx(rank, col)] - &a[idx(i, col)] * &a[idx(rank, j)];
                    a[idx(i, j)] = num / &prev;
                }
                a[idx(i, col)] = BigInt::zero();
            }
            prev = a[idx(rank, col)].clone();
            rank += 1;
            if rank == r {
                break;
            }
        }
        rank
    }

    /// Column-style Hermite normal form: returns a matrix with the same
    /// integer column span, lower echelon, pivots positive, entries right of
    /// each pivot zero and entries left of it reduced to `[0, pivot)`.
    /// Zero columns are moved to the end.
    pub fn column_hnf(&self) -> IntMatrix {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivot_col = 0;
        for row in 0..rows {
            if pivot_col == cols {
                break;
            }
            // eliminate across columns pivot_col.. by gcd steps in this row
            loop {
                let mut nonzero: Vec<usize> =
                    (pivot_col..cols).filter(|&j| !m.get(row, j).is_zero()).collect();
                if nonzero.is_empty() {
                    break;
                }
                if nonzero.len() == 1 {
                    let j = nonzero[0];
                    if j != pivot_col {
                        m.swap_columns(j, pivot_col);
                    }
                    break;
                }
                // pick column with smallest nonzero |entry| in this row
                nonzero.sort_by_key(|&j| m.get(row, j).abs());
                let jmin = nonzero[0];
                for &j in &nonzero[1..] {
                    let q = div_round(m.get(row, j), m.get(row, jmin));
                    if !q.is_zero() {
                        m.add_column_multiple(j, jmin, &-q);
                    }
                }
            }
            if m.get(row, pivot_col).is_zero() {
                continue;
            }
            if m.get(row, pivot_col).is_negative() {
                m.negate_column(pivot_col);
            }
            // reduce earlier pivot columns' entries in this row into [0, pivot)
            let p = m.get(row, pivot_col).clone();
            for j in 0..pivot_col {
                let e = m.get(row, j).clone();
                let q = e.div_euclid(&p);
                if !q.is_zero() {
                    m.add_column_multiple(j, pivot_col, &-q);
                }
            }
            pivot_col += 1;
        }
        m
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            let x = self.get(i, a).clone();
            let y = self.get(i, b).clone();
            self.set(i, a, y);
            self.set(i, b, x);
        }
    }

    /// column[target] += q * column[source]
    fn add_column_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, target) + q * self.get(i, source);
            self.set(i, target, v);
        }
    }

    fn negate_column(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Serializes as `rows cols` then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row = (0..self.cols).map(|j| self.get(i, j).to_string()).join(" ");
            s.push_str(&row);
            s.push('\n');
        }
        s
    }

    /// Parses the text format produced by [`IntMatrix::to_text`].
    pub fn parse_text(text: &str) -> Result<IntMatrix> {
        let mut tokens = text.split_whitespace();
        let rows: usize = tokens
            .next()
            .ok_or_else(|| Error::ParseMatrix("missing row count".into()))?
            .parse()
            .map_err(|_| Error::ParseMatrix("bad row count".into()))?;
        let cols: usize = tokens
            .next()
            .ok_or_else(|| Error::ParseMatrix("missing column count".into()))?
            .parse()
            .map_err(|_| Error::ParseMatrix("bad column count".into()))?;
        let mut data = Vec::with_capacity(rows * cols);
        for tok in tokens.by_ref().take(rows * cols) {
            let v: BigInt = tok
                .parse()
                .map_err(|_| Error::ParseMatrix(format!("bad entry {tok:?}")))?;
            data.push(v);
        }
        if data.len() != rows * cols {
            return Err(Error::ParseMatrix(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        if tokens.next().is_some() {
            return Err(Error::ParseMatrix("trailing data after matrix".into()));
        }
        Ok(IntMatrix { rows, cols, data })
    }
}

/// Nearest-integer division, ties toward the quotient of smaller magnitude.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two_a = BigInt::from(2) * a;
    let q = a / b;
    let r = a - &q * b;
    if (BigInt::from(2) * &r).abs() > b.abs() {
        if (two_a * b).is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

trait DivEuclidBig {
    fn div_euclid(&self, other: &BigInt) -> BigInt;
}

impl DivEuclidBig for BigInt {
    fn div_euclid(&self, other: &BigInt) -> BigInt {
        let q = self / other;
        let r = self - &q * other;
        if r.is_negative() {
            if other.is_negative() {
                q + 1
            } else {
                q - 1
            }
        } else {
            q
        }
    }
}

/// Checks the Cauchy–Binet identity for a tall matrix `A`:
/// `det(A^T A) = sum over row subsets S of size cols of det(A_S)^2`.
///
/// Refuses matrices with more than 16 rows; the subset sum is exponential and
/// this is a test oracle, not a production path.
pub fn cauchy_binet_check(a: &IntMatrix) -> Result<(BigInt, BigInt)> {
    if a.rows() > 16 {
        return Err(Error::Shape(format!("cauchy-binet oracle capped at 16 rows, got {}", a.rows())));
    }
    if a.rows() < a.cols() {
        return Err(Error::Shape("need rows >= cols".into()));
    }
    let lhs = a.gram().bareiss_det()?;
    let mut rhs = BigInt::zero();
    for subset in (0..a.rows()).combinations(a.cols()) {
        let mut sq = IntMatrix::zeros(a.cols(), a.cols());
        for (ri, &r) in subset.iter().enumerate() {
            for c in 0..a.cols() {
                sq.set(ri, c, a.get(r, c).clone());
            }
        }
        let d = sq.bareiss_det()?;
        rhs += &d * &d;
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Cofactor-expansion determinant: the slow independent oracle.
    fn cofactor_det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return BigInt::from(1);
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut det = BigInt::zero();
        for j in 0..n {
            if m.get(0, j).is_zero() {
                continue;
            }
            let mut minor = IntMatrix::zeros(n - 1, n - 1);
            for i in 1..n {
                let mut cc = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    minor.set(i - 1, cc, m.get(i, c).clone());
                    cc += 1;
                }
            }
            let term = m.get(0, j) * cofactor_det(&minor);
            if j % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }

    #[test]
    fn bareiss_matches_cofactor_expansion_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let m = IntMatrix::from_fn(n, n, |_, _| rng.gen_range(-9..=9));
            assert_eq!(m.bareiss_det().unwrap(), cofactor_det(&m));
        }
    }

    #[test]
    fn bareiss_handles_zero_pivots_and_singular_matrices() {
        let m = IntMatrix::from_rows_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.bareiss_det().unwrap(), BigInt::from(-1));
        let s = IntMatrix::from_rows_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.bareiss_det().unwrap(), BigInt::zero());
        let z = IntMatrix::zeros(3, 3);
        assert_eq!(z.bareiss_det().unwrap(), BigInt::zero());
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(IntMatrix::zeros(2, 3).bareiss_det().is_err());
    }

    #[test]
    fn gram_of_simple_tall_matrix() {
        // columns e1 - e3, e2 - e3 in Z^3
        let b = IntMatrix::from_rows_i64(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
        let g = b.gram();
        assert_eq!(g, IntMatrix::from_rows_i64(&[vec![2, 1], vec![1, 2]]));
        assert_eq!(g.bareiss_det().unwrap(), BigInt::from(3));
    }

    #[test]
    fn rank_of_rank_deficient_matrix() {
        let m = IntMatrix::from_rows_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]);
        assert_eq!(m.integer_rank(), 2);
        assert_eq!(IntMatrix::zeros(4, 2).integer_rank(), 0);
        let id = IntMatrix::from_fn(5, 5, |i, j| (i == j) as i64);
        assert_eq!(id.integer_rank(), 5);
    }

    #[test]
    fn hnf_diagonal_example() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(m.column_hnf(), m);
    }

    #[test]
    fn hnf_collapses_dependent_columns() {
        let m = IntMatrix::from_rows_i64(&[vec![4, 2], vec![0, 0]]);
        let h = m.column_hnf();
        assert_eq!(h, IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 0]]));
    }

    #[test]
    fn hnf_preserves_column_span() {
        // span check: HNF columns and original columns mutually reduce to zero
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let r = rng.gen_range(2..=5);
            let c = rng.gen_range(1..=5);
            let m = IntMatrix::from_fn(r, c, |_, _| rng.gen_range(-6..=6));
            let h = m.column_hnf();
            assert_eq!(h.integer_rank(), m.integer_rank());
            // gram dets agree when square spans match is too weak for tall;
            // test membership: each original column solves over the HNF by
            // forward substitution on pivot rows.
            for j in 0..c {
                assert!(in_column_span(&h, &m.column(j)), "col {j} of {m:?} not in span of {h:?}");
            }
            for j in 0..c {
                assert!(in_column_span(&m.column_hnf(), &h.column(j)));
            }
        }
    }

    /// Membership of v in the integer column span of an HNF matrix.
    fn in_column_span(h: &IntMatrix, v: &[BigInt]) -> bool {
        let mut rem: Vec<BigInt> = v.to_vec();
        for j in 0..h.cols() {
            let pivot_row = (0..h.rows()).find(|&i| !h.get(i, j).is_zero());
            let Some(pi) = pivot_row else { break };
            let p = h.get(pi, j);
            let q = &rem[pi] / p;
            if !(&rem[pi] - &q * p).is_zero() {
                return false;
            }
            for i in 0..h.rows() {
                rem[i] = &rem[i] - &q * h.get(i, j);
            }
        }
        rem.iter().all(|x| x.is_zero())
    }

    #[test]
    fn cauchy_binet_on_printed_cyclic_column_block() {
        // first 2 columns of the 3x2 tridiagonal block: minors 3, -3, 3
        let b = IntMatrix::from_rows_i64(&[vec![-2, 1], vec![1, -2], vec![1, 1]]);
        let (lhs, rhs) = cauchy_binet_check(&b).unwrap();
        assert_eq!(lhs, BigInt::from(27));
        assert_eq!(rhs, BigInt::from(27));
    }

    #[test]
    fn cauchy_binet_random_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let c = rng.gen_range(1..=4);
            let r = rng.gen_range(c..=7);
            let a = IntMatrix::from_fn(r, c, |_, _| rng.gen_range(-3..=3));
            let (lhs, rhs) = cauchy_binet_check(&a).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cauchy_binet_row_cap() {
        assert!(cauchy_binet_check(&IntMatrix::zeros(17, 2)).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let m = IntMatrix::from_rows_i64(&[vec![1, -2, 3], vec![0, 5, -6]]);
        let text = m.to_text();
        assert_eq!(text, "2 3\n1 -2 3\n0 5 -6\n");
        assert_eq!(IntMatrix::parse_text(&text).unwrap(), m);
    }

    #[test]
    fn text_format_rejects_malformed_input() {
        assert!(IntMatrix::parse_text("2 2\n1 2 3").is_err());
        assert!(IntMatrix::parse_text("2 2\n1 2 3 4 5").is_err());
        assert!(IntMatrix::parse_text("x 2\n1 2").is_err());
        assert!(IntMatrix::parse_text("").is_err());
        assert!(IntMatrix::parse_text("1 1\nbad").is_err());
    }

    #[test]
    fn rational_is_reduced_and_sign_normalized() {
        let r = Rational::new(BigInt::from(4), BigInt::from(-6));
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
    }
}
