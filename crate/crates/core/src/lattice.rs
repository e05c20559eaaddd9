//! The lattice of a finite Abelian group inside the root lattice.
//!
//! For a group G of order n+1 the ambient lattice is A_n, the integer vectors
//! of length n+1 with zero coordinate sum. Coordinates 1..n are indexed by the
//! nonzero group elements in canonical order; the last coordinate is the
//! balancing slot (it corresponds to the zero element, which contributes
//! nothing to the weighted sum). A vector belongs to the group lattice when
//! additionally the coordinate-weighted sum of group elements vanishes.

use crate::groups::{FiniteAbelianGroup, GroupElement};
use crate::linalg::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Integer vector of length n+1 with zero coordinate sum.
pub type LatticeVector = Vec<i64>;

/// Squared Euclidean norm, accumulated wide.
pub fn norm_sq(v: &[i64]) -> i128 {
    v.iter().map(|&x| (x as i128) * (x as i128)).sum()
}

/// Membership test for a full-length vector (n+1 coordinates).
pub fn membership(group: &FiniteAbelianGroup, coords: &[i64]) -> Result<bool> {
    let n1 = group.order() as usize;
    if coords.len() != n1 {
        return Err(Error::Shape(format!(
            "expected {} coordinates, got {}",
            n1,
            coords.len()
        )));
    }
    let sum: i128 = coords.iter().map(|&x| x as i128).sum();
    if sum != 0 {
        return Ok(false);
    }
    Ok(weighted_sum_is_zero(group, &coords[..n1 - 1]))
}

/// Completes a length-n coordinate vector with the balancing coordinate and
/// tests membership of the result.
pub fn complete(group: &FiniteAbelianGroup, first_n: &[i64]) -> Result<LatticeVector> {
    let n = group.n();
    if first_n.len() != n {
        return Err(Error::Shape(format!(
            "expected {} coordinates, got {}",
            n,
            first_n.len()
        )));
    }
    let sum: i128 = first_n.iter().map(|&x| x as i128).sum();
    let last = i64::try_from(-sum)
        .map_err(|_| Error::Shape("balancing coordinate overflows".into()))?;
    let mut v = first_n.to_vec();
    v.push(last);
    Ok(v)
}

fn weighted_sum_is_zero(group: &FiniteAbelianGroup, first_n: &[i64]) -> bool {
    let mut acc = group.zero();
    for (x, g) in first_n.iter().zip(group.nonzero_elements()) {
        if *x != 0 {
            acc = group.add(&acc, &group.scale(*x, &g));
        }
    }
    group.is_zero(&acc)
}

/// The standard-generator elements of the group, one per cyclic factor.
pub fn standard_generators(group: &FiniteAbelianGroup) -> Vec<GroupElement> {
    let k = group.moduli().len();
    (0..k)
        .map(|i| {
            let mut e = vec![0u64; k];
            e[i] = 1;
            GroupElement(e)
        })
        .collect()
}

/// Basis matrix of the group lattice, (n+1) rows by n columns, one column per
/// nonzero element in canonical order.
///
/// The column for the i-th standard generator has the factor modulus m_i at
/// the generator's coordinate and -m_i at the balancing slot. The column for
/// any other element g = (j_1,...,j_k) has 1 at g's coordinate, -j_i at each
/// generator coordinate, and (sum of j_i) - 1 at the balancing slot.
pub fn canonical_basis(group: &FiniteAbelianGroup) -> IntMatrix {
    let n = group.n();
    let moduli = group.moduli().to_vec();
    let gens = standard_generators(group);
    let gen_coord: Vec<usize> = gens.iter().map(|e| group.canonical_index(e) - 1).collect();
    let mut b = IntMatrix::zeros(n + 1, n);
    for (idx, el) in group.nonzero_elements().into_iter().enumerate() {
        if let Some(i) = gens.iter().position(|e| *e == el) {
            b.set(idx, idx, BigInt::from(moduli[i]));
            b.set(n, idx, -BigInt::from(moduli[i]));
        } else {
            b.set(idx, idx, BigInt::from(1));
            let mut s: i64 = 0;
            for (i, &ji) in el.0.iter().enumerate() {
                let cur = b.get(gen_coord[i], idx) - BigInt::from(ji);
                b.set(gen_coord[i], idx, cur);
                s += ji as i64;
            }
            let cur = b.get(n, idx) + BigInt::from(s - 1);
            b.set(n, idx, cur);
        }
    }
    b
}

/// A verified basis of the group lattice.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    group: FiniteAbelianGroup,
    matrix: IntMatrix,
}

impl LatticeBasis {
    /// Validates shape, column membership, and the Gram determinant |G|^3.
    pub fn new(group: FiniteAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        let n = group.n();
        if matrix.rows() != n + 1 || matrix.cols() != n {
            return Err(Error::Shape(format!(
                "basis for {} must be {}x{}, got {}x{}",
                group.spec(),
                n + 1,
                n,
                matrix.rows(),
                matrix.cols()
            )));
        }
        for j in 0..n {
            let col = column_i64(&matrix, j)?;
            if !membership(&group, &col)? {
                return Err(Error::VerifyFailed(format!(
                    "column {} is not a lattice member",
                    j + 1
                )));
            }
        }
        let det = matrix.gram().bareiss_det()?;
        let want = BigInt::from(group.order()).pow(3);
        if det != want {
            return Err(Error::VerifyFailed(format!(
                "Gram determinant {det}, expected {want}"
            )));
        }
        Ok(Self { group, matrix })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        column_i64(&self.matrix, j).expect("validated basis has i64 entries")
    }

    /// Serializes as a `group <spec>` header line followed by the matrix text.
    pub fn to_text(&self) -> String {
        format!("group {}\n{}", self.group.spec(), self.matrix.to_text())
    }

    /// Parses the serialization produced by [`LatticeBasis::to_text`],
    /// re-running full validation.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.splitn(2, '\n');
        let header = lines
            .next()
            .ok_or_else(|| Error::ParseMatrix("empty basis file".into()))?;
        let spec = header
            .strip_prefix("group ")
            .ok_or_else(|| Error::ParseMatrix("first line must be `group <spec>`".into()))?;
        let group = FiniteAbelianGroup::parse(spec.trim())?;
        let rest = lines
            .next()
            .ok_or_else(|| Error::ParseMatrix("missing matrix body".into()))?;
        let matrix = IntMatrix::parse_text(rest)?;
        Self::new(group, matrix)
    }
}

fn column_i64(m: &IntMatrix, j: usize) -> Result<Vec<i64>> {
    (0..m.rows())
        .map(|i| {
            m.get(i, j)
                .to_i64()
                .ok_or_else(|| Error::Shape(format!("entry ({i},{j}) exceeds i64")))
        })
        .collect()
}

/// Computes the canonical-basis Gram determinant and compares it to |G|^3.
pub fn verify_det_identity(group: &FiniteAbelianGroup) -> Result<(BigInt, bool)> {
    let det = canonical_basis(group).gram().bareiss_det()?;
    let want = BigInt::from(group.order()).pow(3);
    let holds = det == want;
    Ok((det, holds))
}

/// Gram determinant of the ambient root lattice basis e_i - e_{n+1},
/// which equals n+1.
pub fn ambient_gram_det(n: usize) -> BigInt {
    let mut b = IntMatrix::zeros(n + 1, n);
    for j in 0..n {
        b.set(j, j, BigInt::from(1));
        b.set(n, j, BigInt::from(-1));
    }
    b.gram().bareiss_det().expect("square gram")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(spec: &str) -> FiniteAbelianGroup {
        FiniteAbelianGroup::parse(spec).unwrap()
    }

    #[test]
    fn membership_examples() {
        let z4 = g("Z4");
        assert!(membership(&z4, &[1, 1, -1, -1]).unwrap());
        assert!(!membership(&z4, &[1, -1, 0, 0]).unwrap());
        assert!(!membership(&z4, &[1, 1, -1, 0]).unwrap());
        let z3 = g("Z3");
        assert!(membership(&z3, &[-2, 1, 1]).unwrap());
        assert!(membership(&z4, &[1, 2]).is_err());
    }

    #[test]
    fn complete_appends_balancing_coordinate() {
        let z4 = g("Z4");
        assert_eq!(complete(&z4, &[1, 1, -1]).unwrap(), vec![1, 1, -1, -1]);
        assert!(complete(&z4, &[1, 1]).is_err());
    }

    #[test]
    fn canonical_basis_det_identity_for_small_groups() {
        for spec in ["Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z2xZ4", "Z3xZ3", "Z12", "Z2xZ2xZ2"] {
            let group = g(spec);
            let (det, holds) = verify_det_identity(&group).unwrap();
            assert!(holds, "{spec}: det {det}");
        }
    }

    #[test]
    fn canonical_basis_z2x4_has_seven_columns_and_det_512() {
        let group = g("Z2xZ4");
        let b = canonical_basis(&group);
        assert_eq!((b.rows(), b.cols()), (8, 7));
        assert_eq!(b.gram().bareiss_det().unwrap(), BigInt::from(512));
    }

    #[test]
    fn canonical_basis_z2_is_single_doubled_column() {
        let b = canonical_basis(&g("Z2"));
        assert_eq!(b.to_text(), "2 1\n2\n-2\n");
    }

    #[test]
    fn basis_columns_are_members() {
        for spec in ["Z6", "Z2xZ8", "Z4xZ4", "Z2xZ2xZ2xZ2"] {
            let group = g(spec);
            let b = canonical_basis(&group);
            for j in 0..b.cols() {
                let col = column_i64(&b, j).unwrap();
                assert!(membership(&group, &col).unwrap(), "{spec} col {j}");
            }
        }
    }

    #[test]
    fn quotient_index_identity_orders_up_to_16() {
        for order in 2u64..=16 {
            for group in crate::groups::FiniteAbelianGroup::all_of_order(order) {
                let lat = canonical_basis(&group).gram().bareiss_det().unwrap();
                let amb = ambient_gram_det(group.n());
                assert_eq!(amb, BigInt::from(group.order()));
                let idx_sq = &lat / &amb;
                assert_eq!(&idx_sq * &amb, lat, "non-exact quotient for {}", group.spec());
                assert_eq!(idx_sq, BigInt::from(group.order()).pow(2), "{}", group.spec());
            }
        }
    }

    #[test]
    fn membership_closed_under_negation_and_addition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in ["Z5", "Z2xZ4", "Z3xZ3"] {
            let group = g(spec);
            let b = canonical_basis(&group);
            let n = group.n();
            for _ in 0..40 {
                let mut x = vec![0i64; n + 1];
                let mut y = vec![0i64; n + 1];
                for j in 0..n {
                    let cx = rng.gen_range(-2..=2);
                    let cy = rng.gen_range(-2..=2);
                    for i in 0..=n {
                        let e = b.get(i, j).to_i64().unwrap();
                        x[i] += cx * e;
                        y[i] += cy * e;
                    }
                }
                assert!(membership(&group, &x).unwrap());
                let neg: Vec<i64> = x.iter().map(|v| -v).collect();
                let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                assert!(membership(&group, &neg).unwrap());
                assert!(membership(&group, &sum).unwrap());
            }
        }
    }

    #[test]
    fn lattice_basis_round_trip_and_validation() {
        let group = g("Z2xZ4");
        let basis = LatticeBasis::new(group.clone(), canonical_basis(&group)).unwrap();
        let text = basis.to_text();
        assert!(text.starts_with("group Z2xZ4\n8 7\n"));
        let back = LatticeBasis::parse_text(&text).unwrap();
        assert_eq!(back.matrix(), basis.matrix());

        let bad = IntMatrix::zeros(8, 7);
        assert!(LatticeBasis::new(group.clone(), bad).is_err());
        let wrong_shape = IntMatrix::zeros(3, 2);
        assert!(LatticeBasis::new(group, wrong_shape).is_err());
        assert!(LatticeBasis::parse_text("Z2\n1 1\n2\n").is_err());
    }
}
