//! Admissible arrays: an ordering of the nonzero group elements paired with
//! an n x n column matrix of lattice vectors in those coordinates, plus the
//! extended (n+1) x n form with the balancing row appended.
//!
//! Every constructor in this file runs the same exact checker before
//! returning, so a transcription slip in any literal array is caught at the
//! source instead of propagating into assembled bases.

use crate::groups::{FiniteAbelianGroup, GroupElement};
use crate::linalg::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

#[derive(Debug, Clone)]
pub struct AdmissibleArray {
    group: FiniteAbelianGroup,
    labels: Vec<GroupElement>,
    m: IntMatrix,
    m_ext: IntMatrix,
    det: BigInt,
    column_norm_sq: i64,
}

impl AdmissibleArray {
    /// Builds and fully verifies an array: labels must be a permutation of
    /// the nonzero elements, every extended column must be a lattice member
    /// with the uniform squared norm, |det M| must equal |G|, and the
    /// extended Gram determinant must equal |G|^3.
    pub fn new(
        group: FiniteAbelianGroup,
        labels: Vec<GroupElement>,
        m: IntMatrix,
        expected_norm_sq: i64,
    ) -> Result<Self> {
        let n = group.n();
        if m.rows() != n || m.cols() != n || labels.len() != n {
            return Err(Error::Shape(format!(
                "array for {} needs {n} labels and an {n}x{n} matrix",
                group.spec()
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        let mut nonzero = group.nonzero_elements();
        nonzero.sort();
        if sorted != nonzero {
            return Err(Error::VerifyFailed(format!(
                "labels are not a permutation of the nonzero elements of {}",
                group.spec()
            )));
        }
        let mut m_ext = IntMatrix::zeros(n + 1, n);
        for j in 0..n {
            let mut col_sum = BigInt::from(0);
            for i in 0..n {
                let v = m.get(i, j).clone();
                col_sum += &v;
                m_ext.set(i, j, v);
            }
            m_ext.set(n, j, -col_sum);
        }
        for j in 0..n {
            let mut acc = group.zero();
            let mut norm = BigInt::from(0);
            for i in 0..n {
                let e = m_ext.get(i, j);
                norm += e * e;
                if let Some(x) = e.to_i64() {
                    if x != 0 {
                        acc = group.add(&acc, &group.scale(x, &labels[i]));
                    }
                } else {
                    return Err(Error::Shape(format!("entry ({i},{j}) exceeds i64")));
                }
            }
            let last = m_ext.get(n, j);
            norm += last * last;
            if !group.is_zero(&acc) {
                return Err(Error::VerifyFailed(format!(
                    "column {} of the {} array is not a lattice member",
                    j + 1,
                    group.spec()
                )));
            }
            if norm != BigInt::from(expected_norm_sq) {
                return Err(Error::VerifyFailed(format!(
                    "column {} of the {} array has squared norm {norm}, expected {expected_norm_sq}",
                    j + 1,
                    group.spec()
                )));
            }
        }
        let det = m.bareiss_det()?;
        let order = BigInt::from(group.order());
        if det != order && det != -&order {
            return Err(Error::VerifyFailed(format!(
                "array determinant {det} differs from +-{order} for {}",
                group.spec()
            )));
        }
        let gram_det = m_ext.gram().bareiss_det()?;
        if gram_det != order.pow(3) {
            return Err(Error::VerifyFailed(format!(
                "extended Gram determinant {gram_det} differs from |G|^3 for {}",
                group.spec()
            )));
        }
        Ok(Self { group, labels, m, m_ext, det, column_norm_sq: expected_norm_sq })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn labels(&self) -> &[GroupElement] {
        &self.labels
    }

    pub fn m(&self) -> &IntMatrix {
        &self.m
    }

    pub fn m_ext(&self) -> &IntMatrix {
        &self.m_ext
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn column_norm_sq(&self) -> i64 {
        self.column_norm_sq
    }

    /// Same array with rows permuted into a new label order.
    pub fn reorder(&self, new_labels: Vec<GroupElement>) -> Result<AdmissibleArray> {
        let n = self.group.n();
        let mut m2 = IntMatrix::zeros(n, n);
        for (i2, lab) in new_labels.iter().enumerate() {
            let i = self
                .labels
                .iter()
                .position(|l| l == lab)
                .ok_or_else(|| Error::Shape(format!("label {lab} absent from array")))?;
            for j in 0..n {
                m2.set(i2, j, self.m.get(i, j).clone());
            }
        }
        AdmissibleArray::new(self.group.clone(), new_labels, m2, self.column_norm_sq)
    }
}

/// Tridiagonal (m-1) x (m-1) matrix with -2 on the diagonal and 1 beside it.
pub fn t_matrix(m: u64) -> IntMatrix {
    let s = (m - 1) as usize;
    IntMatrix::from_fn(s, s, |i, j| {
        if i == j {
            -2
        } else if i.abs_diff(j) == 1 {
            1
        } else {
            0
        }
    })
}

/// Lower bidiagonal matrix of ones whose last column is replaced by
/// (0,...,0,-1,-1,-1,0)^T.
pub fn u_matrix(m: u64) -> IntMatrix {
    let s = (m - 1) as usize;
    let mut u = IntMatrix::from_fn(s, s, |i, j| (i == j || i == j + 1) as i64);
    for i in 0..s {
        u.set(i, s - 1, BigInt::from(0));
    }
    for i in s - 4..=s - 2 {
        u.set(i, s - 1, BigInt::from(-1));
    }
    u
}

/// Basis-of-minimal-vectors array for the cyclic group Z_m, m >= 5: labels
/// are the residues 1..m-1 and M = T_m * U_m, a tetradiagonal Toeplitz matrix
/// up to its final column.
pub fn cyclic_minimal_array(m: u64) -> Result<AdmissibleArray> {
    if m < 5 {
        return Err(Error::Shape(format!(
            "cyclic construction needs modulus >= 5, got {m}"
        )));
    }
    let group = FiniteAbelianGroup::new(vec![m])?;
    let labels: Vec<GroupElement> = (1..m).map(|r| GroupElement(vec![r])).collect();
    let mat = t_matrix(m).mul(&u_matrix(m));
    AdmissibleArray::new(group, labels, mat, 4)
}

/// The hand-sized arrays for Z2, Z3, and Z2xZ2.
pub fn small_group_array(group: &FiniteAbelianGroup) -> Result<AdmissibleArray> {
    match group.moduli() {
        [2] => AdmissibleArray::new(
            group.clone(),
            vec![GroupElement(vec![1])],
            IntMatrix::from_rows_i64(&[vec![-2]]),
            8,
        ),
        [3] => AdmissibleArray::new(
            group.clone(),
            vec![GroupElement(vec![1]), GroupElement(vec![2])],
            IntMatrix::from_rows_i64(&[vec![-2, 1], vec![1, -2]]),
            6,
        ),
        [2, 2] => AdmissibleArray::new(
            group.clone(),
            vec![
                GroupElement(vec![0, 1]),
                GroupElement(vec![1, 0]),
                GroupElement(vec![1, 1]),
            ],
            IntMatrix::from_rows_i64(&[vec![1, -1, 1], vec![1, 1, -1], vec![-1, 1, 1]]),
            4,
        ),
        _ => Err(Error::Shape(format!(
            "no small array for {}; only Z2, Z3, Z2xZ2",
            group.spec()
        ))),
    }
}

/// The three special product arrays for Z2xZ4, Z3xZ3, and Z4xZ4.
pub fn special_array(group: &FiniteAbelianGroup) -> Result<AdmissibleArray> {
    match group.moduli() {
        [2, 4] => special_z2z4(group),
        [3, 3] => special_z3z3(group),
        [4, 4] => special_z4z4(group),
        _ => Err(Error::Shape(format!(
            "no special array for {}; only Z2xZ4, Z3xZ3, Z4xZ4",
            group.spec()
        ))),
    }
}

fn special_z2z4(group: &FiniteAbelianGroup) -> Result<AdmissibleArray> {
    let labels: Vec<GroupElement> = [
        [1, 0],
        [1, 3],
        [0, 3],
        [1, 2],
        [1, 1],
        [0, 1],
        [0, 2],
    ]
    .iter()
    .map(|p| GroupElement(p.to_vec()))
    .collect();
    let columns: &[&[([u64; 2], i64)]] = &[
        &[([1, 0], 1), ([1, 3], 1), ([0, 3], -1)],
        &[([1, 3], 1), ([0, 3], 1), ([1, 2], -1)],
        &[([0, 3], 1), ([1, 2], 1), ([1, 1], -1)],
        &[([0, 3], -1), ([1, 2], 1), ([1, 1], 1)],
        &[([1, 0], 1), ([1, 3], -1), ([1, 2], -1), ([1, 1], 1)],
        &[([0, 3], -1), ([0, 1], 1), ([0, 2], 1)],
        &[([1, 0], -1), ([1, 2], -1), ([0, 2], 1)],
    ];
    let mut m = IntMatrix::zeros(7, 7);
    for (j, col) in columns.iter().enumerate() {
        for (lab, v) in col.iter() {
            let i = labels
                .iter()
                .position(|l| l.0 == lab.to_vec())
                .expect("label in list");
            m.set(i, j, BigInt::from(*v));
        }
    }
    AdmissibleArray::new(group.clone(), labels, m, 4)
}

fn special_z3z3(group: &FiniteAbelianGroup) -> Result<AdmissibleArray> {
    let labels: Vec<GroupElement> = [
        [0, 1],
        [0, 2],
        [1, 0],
        [1, 1],
        [1, 2],
        [2, 0],
        [2, 1],
        [2, 2],
    ]
    .iter()
    .map(|p| GroupElement(p.to_vec()))
    .collect();
    let rows = [
        vec![1, 0, 0, 0, -1, 0, -1, 0],
        vec![0, 1, 1, 0, 0, -1, 0, 0],
        vec![1, 0, 0, 1, 1, 1, 0, 0],
        vec![-1, 0, 0, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 1, -1],
        vec![0, 1, -1, 0, 0, 0, 0, 1],
        vec![0, 0, 1, -1, 1, 0, 0, 0],
        vec![0, -1, 0, 0, 0, 1, 1, 1],
    ];
    AdmissibleArray::new(group.clone(), labels, IntMatrix::from_rows_i64(&rows), 4)
}

fn special_z4z4(group: &FiniteAbelianGroup) -> Result<AdmissibleArray> {
    let labels: Vec<GroupElement> = [
        [0, 1],
        [0, 2],
        [0, 3],
        [1, 0],
        [1, 1],
        [1, 2],
        [1, 3],
        [2, 0],
        [2, 1],
        [2, 2],
        [2, 3],
        [3, 0],
        [3, 1],
        [3, 2],
        [3, 3],
    ]
    .iter()
    .map(|p| GroupElement(p.to_vec()))
    .collect();
    let rows = [
        vec![1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, -1, 0, 0, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        vec![1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, -1, 0, -1, 0],
        vec![-1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, -1, 0, 0],
        vec![0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0],
        vec![0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        vec![0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, -1],
        vec![0, 0, 0, 0, 0, 0, -1, 0, -1, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 1, -1, 0, -1, 0, 0, 0, 1, 1],
        vec![0, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 1, 0, 0, 1],
        vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    ];
    AdmissibleArray::new(group.clone(), labels, IntMatrix::from_rows_i64(&rows), 4)
}
