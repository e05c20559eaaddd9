//! Block assembly of admissible arrays: the product construction, the three
//! attachment constructions for a leftover Z2/Z3/Z4 factor, and the exact
//! re-indexing of a finished array onto a caller-supplied presentation of the
//! same group.

use super::arrays::AdmissibleArray;
use crate::groups::{FiniteAbelianGroup, GroupElement};
use crate::lattice::LatticeBasis;
use crate::linalg::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;

/// Sorted-presentation view of a concatenated factor list: maps labels given
/// in concatenation order to group elements of the sorted presentation.
struct Resort {
    group: FiniteAbelianGroup,
    perm: Vec<usize>,
}

impl Resort {
    fn new(concat: Vec<u64>) -> Result<Self> {
        let mut idx: Vec<usize> = (0..concat.len()).collect();
        idx.sort_by_key(|&i| (concat[i], i));
        let group = FiniteAbelianGroup::new(concat)?;
        Ok(Self { group, perm: idx })
    }

    fn label(&self, concat_label: &[u64]) -> GroupElement {
        GroupElement(self.perm.iter().map(|&p| concat_label[p]).collect())
    }
}

fn concat_pair(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn product_operand_check(arr: &AdmissibleArray, side: &str) -> Result<()> {
    if arr.column_norm_sq() != 4 {
        return Err(Error::Hypothesis(format!(
            "{side} operand {} has column norm^2 {}, the product construction needs 4",
            arr.group().spec(),
            arr.column_norm_sq()
        )));
    }
    Ok(())
}

/// Product construction: given arrays for G and H with d = 2, produces the
/// array for G x H whose extra columns tie each pair label (g_i, h_j) to the
/// i-th G row and the j-th H row.
pub fn combine_product(a: &AdmissibleArray, b: &AdmissibleArray) -> Result<AdmissibleArray> {
    product_operand_check(a, "left")?;
    product_operand_check(b, "right")?;
    let (ga, gb) = (a.group(), b.group());
    let rs = Resort::new(concat_pair(ga.moduli(), gb.moduli()))?;
    let (n, m) = (ga.n(), gb.n());
    let za = ga.zero().0;
    let zb = gb.zero().0;
    let mut labels = Vec::with_capacity(n + m + n * m);
    for l in a.labels() {
        labels.push(rs.label(&concat_pair(&l.0, &zb)));
    }
    for l in b.labels() {
        labels.push(rs.label(&concat_pair(&za, &l.0)));
    }
    for li in a.labels() {
        for lj in b.labels() {
            labels.push(rs.label(&concat_pair(&li.0, &lj.0)));
        }
    }
    let total = n + m + n * m;
    let mut mat = IntMatrix::zeros(total, total);
    for i in 0..n {
        for j in 0..n {
            mat.set(i, j, a.m().get(i, j).clone());
        }
    }
    for i in 0..m {
        for j in 0..m {
            mat.set(n + i, n + j, b.m().get(i, j).clone());
        }
    }
    for ii in 0..n {
        for jj in 0..m {
            let c = n + m + ii * m + jj;
            mat.set(c, c, BigInt::from(1));
            mat.set(ii, c, BigInt::from(-1));
            mat.set(n + jj, c, BigInt::from(-1));
        }
    }
    AdmissibleArray::new(rs.group.clone(), labels, mat, 4)
}

/// Attaches one small cyclic factor Z_m (m in {2, 3, 4}) to an existing
/// array, producing the array for Z_m x G.
pub fn attach_small(m: u64, arr: &AdmissibleArray) -> Result<AdmissibleArray> {
    match m {
        2 => attach2(arr),
        3 => attach3(arr),
        4 => attach4(arr),
        _ => Err(Error::Shape(format!(
            "attachment is defined for factors 2, 3, 4; got {m}"
        ))),
    }
}

fn attach_operand_check(arr: &AdmissibleArray, m: u64) -> Result<()> {
    if arr.column_norm_sq() != 4 {
        return Err(Error::Hypothesis(format!(
            "operand {} has column norm^2 {}, attaching Z{m} needs 4",
            arr.group().spec(),
            arr.column_norm_sq()
        )));
    }
    if arr.group().n() < 3 {
        return Err(Error::Hypothesis(format!(
            "operand {} has rank {} < 3, too small for the attachment construction",
            arr.group().spec(),
            arr.group().n()
        )));
    }
    Ok(())
}

/// Row index of a construction-order label.
fn position(labels: &[Vec<u64>], want: &[u64]) -> usize {
    labels
        .iter()
        .position(|l| l == want)
        .expect("attachment label present by construction")
}

fn attach2(a: &AdmissibleArray) -> Result<AdmissibleArray> {
    attach_operand_check(a, 2)?;
    let g = a.group();
    let n = g.n();
    let rs = Resort::new(concat_pair(&[2], g.moduli()))?;
    let z = g.zero().0;
    let with2 = |t: u64, l: &[u64]| concat_pair(&[t], l);

    let mut raw: Vec<Vec<u64>> = Vec::with_capacity(2 * n + 1);
    for l in a.labels() {
        raw.push(with2(0, &l.0));
    }
    raw.push(with2(1, &z));
    for l in a.labels() {
        raw.push(with2(1, &l.0));
    }
    let one_zero = position(&raw, &with2(1, &z));
    let one_g1 = position(&raw, &with2(1, &a.labels()[0].0));

    let total = 2 * n + 1;
    let mut mat = IntMatrix::zeros(total, total);
    for i in 0..n {
        for j in 0..n {
            mat.set(i, j, a.m().get(i, j).clone());
        }
    }
    mat.set(0, n, BigInt::from(-1));
    mat.set(one_zero, n, BigInt::from(1));
    mat.set(one_g1, n, BigInt::from(1));
    mat.set(0, n + 1, BigInt::from(-1));
    mat.set(one_zero, n + 1, BigInt::from(-1));
    mat.set(one_g1, n + 1, BigInt::from(1));
    for j in 1..n {
        let c = n + 1 + j;
        let one_gj = position(&raw, &with2(1, &a.labels()[j].0));
        mat.set(j, c, BigInt::from(-1));
        mat.set(one_zero, c, BigInt::from(-1));
        mat.set(one_gj, c, BigInt::from(1));
    }
    let labels = raw.iter().map(|l| rs.label(l)).collect();
    AdmissibleArray::new(rs.group.clone(), labels, mat, 4)
}

fn attach3(a: &AdmissibleArray) -> Result<AdmissibleArray> {
    attach_operand_check(a, 3)?;
    let g = a.group().clone();
    let n = g.n();
    let g1 = a
        .labels()
        .iter()
        .find(|cand| {
            let two = g.add(cand, cand);
            !g.is_zero(&two) && two != **cand && two != g.neg(cand)
        })
        .cloned()
        .ok_or_else(|| {
            Error::Hypothesis(format!(
                "no element of {} has a double outside {{0, itself, its negative}}",
                g.spec()
            ))
        })?;
    let g2 = g.neg(&g1);
    let g3 = g.add(&g1, &g1);
    let mut new_order = vec![g1.clone(), g2.clone(), g3.clone()];
    for l in a.labels() {
        if *l != g1 && *l != g2 && *l != g3 {
            new_order.push(l.clone());
        }
    }
    let a = a.reorder(new_order.clone())?;

    let rs = Resort::new(concat_pair(&[3], g.moduli()))?;
    let z = g.zero().0;
    let with3 = |t: u64, l: &[u64]| concat_pair(&[t], l);

    let mut raw: Vec<Vec<u64>> = Vec::with_capacity(3 * n + 2);
    for l in &new_order {
        raw.push(with3(0, &l.0));
    }
    raw.push(with3(1, &z));
    raw.push(with3(1, &g1.0));
    raw.push(with3(2, &g1.0));
    for l in &new_order[1..] {
        raw.push(with3(1, &l.0));
    }
    raw.push(with3(2, &z));
    for l in &new_order[1..] {
        raw.push(with3(2, &l.0));
    }

    let total = 3 * n + 2;
    let mut mat = IntMatrix::zeros(total, total);
    for i in 0..n {
        for j in 0..n {
            mat.set(i, j, a.m().get(i, j).clone());
        }
    }
    let r_1z = position(&raw, &with3(1, &z));
    let r_1g1 = position(&raw, &with3(1, &g1.0));
    let r_2g1 = position(&raw, &with3(2, &g1.0));
    let mut c = n;
    mat.set(r_1z, c, BigInt::from(1));
    mat.set(r_1g1, c, BigInt::from(1));
    mat.set(r_2g1, c, BigInt::from(-1));
    c += 1;
    mat.set(position(&raw, &with3(0, &g3.0)), c, BigInt::from(-1));
    mat.set(r_1g1, c, BigInt::from(1));
    mat.set(r_2g1, c, BigInt::from(1));
    c += 1;
    mat.set(position(&raw, &with3(0, &g1.0)), c, BigInt::from(-1));
    mat.set(r_1z, c, BigInt::from(-1));
    mat.set(r_1g1, c, BigInt::from(1));
    c += 1;
    for l in &new_order[1..] {
        mat.set(position(&raw, &with3(0, &l.0)), c, BigInt::from(-1));
        mat.set(r_1z, c, BigInt::from(-1));
        mat.set(position(&raw, &with3(1, &l.0)), c, BigInt::from(1));
        c += 1;
    }
    let mut twos: Vec<GroupElement> = vec![g.zero()];
    twos.extend(new_order[1..].iter().cloned());
    for x in &twos {
        let diff = g.add(x, &g.neg(&g1));
        mat.set(position(&raw, &with3(2, &x.0)), c, BigInt::from(1));
        mat.set(r_2g1, c, BigInt::from(-1));
        mat.set(position(&raw, &with3(0, &diff.0)), c, BigInt::from(-1));
        c += 1;
    }
    debug_assert_eq!(c, total);
    let labels = raw.iter().map(|l| rs.label(l)).collect();
    AdmissibleArray::new(rs.group.clone(), labels, mat, 4)
}

fn attach4(a: &AdmissibleArray) -> Result<AdmissibleArray> {
    attach_operand_check(a, 4)?;
    let g = a.group().clone();
    let n = g.n();
    let g1 = a
        .labels()
        .iter()
        .find(|cand| **cand != g.neg(cand))
        .cloned()
        .ok_or_else(|| {
            Error::Hypothesis(format!(
                "every element of {} is its own negative",
                g.spec()
            ))
        })?;
    let gn = g.neg(&g1);
    let mut new_order = vec![g1.clone()];
    for l in a.labels() {
        if *l != g1 && *l != gn {
            new_order.push(l.clone());
        }
    }
    new_order.push(gn.clone());
    let a = a.reorder(new_order.clone())?;

    let rs = Resort::new(concat_pair(&[4], g.moduli()))?;
    let z = g.zero().0;
    let with4 = |t: u64, l: &[u64]| concat_pair(&[t], l);

    let mut raw: Vec<Vec<u64>> = Vec::with_capacity(4 * n + 3);
    for l in &new_order {
        raw.push(with4(0, &l.0));
    }
    raw.push(with4(1, &z));
    raw.push(with4(2, &z));
    raw.push(with4(3, &z));
    for l in &new_order {
        raw.push(with4(1, &l.0));
        raw.push(with4(2, &l.0));
        raw.push(with4(3, &l.0));
    }

    let total = 4 * n + 3;
    let mut mat = IntMatrix::zeros(total, total);
    for i in 0..n {
        for j in 0..n {
            mat.set(i, j, a.m().get(i, j).clone());
        }
    }
    let rz: Vec<usize> = (1..=3).map(|t| position(&raw, &with4(t, &z))).collect();
    let mut c = n;
    mat.set(rz[0], c, BigInt::from(1));
    mat.set(rz[1], c, BigInt::from(1));
    mat.set(rz[2], c, BigInt::from(-1));
    c += 1;
    mat.set(rz[0], c, BigInt::from(-1));
    mat.set(rz[1], c, BigInt::from(1));
    mat.set(rz[2], c, BigInt::from(1));
    c += 1;
    mat.set(position(&raw, &with4(0, &g1.0)), c, BigInt::from(-1));
    mat.set(position(&raw, &with4(0, &gn.0)), c, BigInt::from(-1));
    mat.set(rz[0], c, BigInt::from(1));
    mat.set(rz[2], c, BigInt::from(1));
    c += 1;
    for l in &new_order {
        for t in 1..=3u64 {
            mat.set(position(&raw, &with4(0, &l.0)), c, BigInt::from(-1));
            mat.set(rz[(t - 1) as usize], c, BigInt::from(-1));
            mat.set(position(&raw, &with4(t, &l.0)), c, BigInt::from(1));
            c += 1;
        }
    }
    debug_assert_eq!(c, total);
    let labels = raw.iter().map(|l| rs.label(l)).collect();
    AdmissibleArray::new(rs.group.clone(), labels, mat, 4)
}

/// Splits a modulus into its prime-power parts, ascending.
pub fn prime_power_split(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rem = m;
    let mut p = 2;
    while p * p <= rem {
        if rem % p == 0 {
            let mut q = 1;
            while rem % p == 0 {
                rem /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if rem > 1 {
        out.push(rem);
    }
    out.sort_unstable();
    out
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Residue mod the product for a system of pairwise-coprime congruences.
fn crt(pairs: &[(u64, u64)]) -> u64 {
    let mut r: i128 = 0;
    let mut m: i128 = 1;
    for &(ri, mi) in pairs {
        let (ri, mi) = (ri as i128, mi as i128);
        let (g, inv, _) = ext_gcd(m % mi, mi);
        debug_assert_eq!(g, 1);
        let t = ((ri - r) % mi * inv).rem_euclid(mi);
        r += m * t;
        m *= mi;
        r = r.rem_euclid(m);
    }
    r as u64
}

/// Group isomorphism between two presentations of the same Abelian group,
/// built by matching prime-power cyclic parts through the Chinese remainder
/// decomposition.
pub struct Isomorphism {
    src_factors: Vec<Vec<u64>>,
    dst_factors: Vec<Vec<u64>>,
    slot_map: Vec<usize>,
    dst_slot_of_factor: Vec<Vec<usize>>,
}

impl Isomorphism {
    pub fn between(src: &FiniteAbelianGroup, dst: &FiniteAbelianGroup) -> Result<Self> {
        let src_factors: Vec<Vec<u64>> =
            src.moduli().iter().map(|&m| prime_power_split(m)).collect();
        let dst_factors: Vec<Vec<u64>> =
            dst.moduli().iter().map(|&m| prime_power_split(m)).collect();
        let flat = |fs: &[Vec<u64>]| -> Vec<u64> { fs.iter().flatten().copied().collect() };
        let src_flat = flat(&src_factors);
        let dst_flat = flat(&dst_factors);
        let sorted_idx = |f: &[u64]| -> Vec<usize> {
            let mut idx: Vec<usize> = (0..f.len()).collect();
            idx.sort_by_key(|&i| (f[i], i));
            idx
        };
        let si = sorted_idx(&src_flat);
        let di = sorted_idx(&dst_flat);
        if si.len() != di.len()
            || si.iter().zip(&di).any(|(&a, &b)| src_flat[a] != dst_flat[b])
        {
            return Err(Error::Shape(format!(
                "{} and {} are not isomorphic",
                src.spec(),
                dst.spec()
            )));
        }
        let mut slot_map = vec![0usize; si.len()];
        for (&s, &d) in si.iter().zip(&di) {
            slot_map[s] = d;
        }
        let mut dst_slot_of_factor = Vec::new();
        let mut next = 0;
        for f in &dst_factors {
            dst_slot_of_factor.push((next..next + f.len()).collect());
            next += f.len();
        }
        Ok(Self { src_factors, dst_factors, slot_map, dst_slot_of_factor })
    }

    pub fn map(&self, label: &GroupElement) -> GroupElement {
        let mut dst_res = vec![0u64; self.slot_map.len()];
        let mut slot = 0;
        for (f, &r) in self.src_factors.iter().zip(&label.0) {
            for &pp in f {
                dst_res[self.slot_map[slot]] = r % pp;
                slot += 1;
            }
        }
        let mut out = Vec::with_capacity(self.dst_factors.len());
        for (f, slots) in self.dst_factors.iter().zip(&self.dst_slot_of_factor) {
            let pairs: Vec<(u64, u64)> = slots
                .iter()
                .zip(f)
                .map(|(&s, &pp)| (dst_res[s], pp))
                .collect();
            out.push(crt(&pairs));
        }
        GroupElement(out)
    }
}

/// Re-indexes a finished array onto the caller's presentation of the group
/// and validates the result as a lattice basis.
pub fn array_to_basis(arr: &AdmissibleArray, user: &FiniteAbelianGroup) -> Result<LatticeBasis> {
    let iso = Isomorphism::between(arr.group(), user)?;
    let n = user.n();
    let mut b = IntMatrix::zeros(n + 1, n);
    for (row, label) in arr.labels().iter().enumerate() {
        let target = user.canonical_index(&iso.map(label)) - 1;
        for c in 0..n {
            b.set(target, c, arr.m_ext().get(row, c).clone());
        }
    }
    for c in 0..n {
        b.set(n, c, arr.m_ext().get(n, c).clone());
    }
    LatticeBasis::new(user.clone(), b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::arrays::{cyclic_minimal_array, small_group_array, special_array};

    fn g(spec: &str) -> FiniteAbelianGroup {
        FiniteAbelianGroup::parse(spec).unwrap()
    }

    #[test]
    fn combine_two_cyclic_groups() {
        let a = combine_product(
            &cyclic_minimal_array(5).unwrap(),
            &cyclic_minimal_array(5).unwrap(),
        )
        .unwrap();
        assert_eq!(a.group().spec(), "Z5xZ5");
        assert_eq!(
            a.m_ext().gram().bareiss_det().unwrap(),
            BigInt::from(25u64).pow(3)
        );
    }

    #[test]
    fn combine_mixed_block_kinds() {
        let a = combine_product(
            &small_group_array(&g("Z2xZ2")).unwrap(),
            &cyclic_minimal_array(5).unwrap(),
        )
        .unwrap();
        assert_eq!(a.group().spec(), "Z2xZ2xZ5");
        assert_eq!(
            a.m_ext().gram().bareiss_det().unwrap(),
            BigInt::from(20u64).pow(3)
        );
    }

    #[test]
    fn combine_rejects_high_norm_operands() {
        let z2 = small_group_array(&g("Z2")).unwrap();
        let z5 = cyclic_minimal_array(5).unwrap();
        let err = combine_product(&z2, &z5).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)), "{err}");
        let z3 = small_group_array(&g("Z3")).unwrap();
        assert!(combine_product(&z5, &z3).is_err());
    }

    #[test]
    fn attach_each_factor_to_z5() {
        let z5 = cyclic_minimal_array(5).unwrap();
        for (m, want_spec) in [(2u64, "Z2xZ5"), (3, "Z3xZ5"), (4, "Z4xZ5")] {
            let a = attach_small(m, &z5).unwrap();
            assert_eq!(a.group().spec(), want_spec);
            let order = BigInt::from(5 * m);
            assert_eq!(a.m_ext().gram().bareiss_det().unwrap(), order.pow(3));
        }
        assert!(attach_small(5, &z5).is_err());
    }

    #[test]
    fn attach_hypothesis_failures() {
        let z3z3 = special_array(&g("Z3xZ3")).unwrap();
        assert!(matches!(attach_small(3, &z3z3), Err(Error::Hypothesis(_))));
        let z22 = small_group_array(&g("Z2xZ2")).unwrap();
        assert!(matches!(attach_small(4, &z22), Err(Error::Hypothesis(_))));
        assert!(attach_small(2, &z22).is_ok());
    }

    #[test]
    fn attach_to_special_array() {
        let a = attach_small(4, &special_array(&g("Z2xZ4")).unwrap()).unwrap();
        assert_eq!(a.group().spec(), "Z2xZ4xZ4");
        assert_eq!(
            a.m_ext().gram().bareiss_det().unwrap(),
            BigInt::from(32u64).pow(3)
        );
    }

    #[test]
    fn prime_power_splitting() {
        assert_eq!(prime_power_split(12), vec![3, 4]);
        assert_eq!(prime_power_split(8), vec![8]);
        assert_eq!(prime_power_split(6), vec![2, 3]);
        assert_eq!(prime_power_split(360), vec![5, 8, 9]);
    }

    #[test]
    fn isomorphism_respects_addition() {
        let src = g("Z6");
        let dst = g("Z2xZ3");
        let iso = Isomorphism::between(&src, &dst).unwrap();
        for a in src.elements() {
            for b in src.elements() {
                let lhs = iso.map(&src.add(&a, &b));
                let rhs = dst.add(&iso.map(&a), &iso.map(&b));
                assert_eq!(lhs, rhs);
            }
        }
        let back = Isomorphism::between(&dst, &src).unwrap();
        for a in src.elements() {
            assert_eq!(back.map(&iso.map(&a)), a);
        }
        assert!(Isomorphism::between(&g("Z4"), &g("Z2xZ2")).is_err());
    }

    #[test]
    fn array_converts_to_basis_in_any_presentation() {
        let arr = cyclic_minimal_array(6).unwrap();
        let as_z6 = array_to_basis(&arr, &g("Z6")).unwrap();
        assert_eq!(as_z6.group().spec(), "Z6");
        let as_product = array_to_basis(&arr, &g("Z2xZ3")).unwrap();
        assert_eq!(as_product.group().spec(), "Z2xZ3");
        assert_eq!(
            as_product.matrix().gram().bareiss_det().unwrap(),
            BigInt::from(216)
        );
    }
}
