//! Randomized fallback basis search: when no block construction applies,
//! draw minimal vectors at random, grow an independent set greedily, then
//! walk random single-vector swaps downhill until the chosen set spans the
//! whole lattice.

use crate::groups::FiniteAbelianGroup;
use crate::lattice::{standard_generators, LatticeBasis};
use crate::linalg::IntMatrix;
use crate::minvec;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default number of greedy restarts before giving up.
pub const DEFAULT_RESTARTS: u32 = 64;

/// Default swap budget per restart.
pub fn default_swap_budget(n: usize) -> u64 {
    (10 * n * n) as u64
}

/// Expresses a lattice vector in coordinates with respect to the canonical
/// basis. Exact by the basis shape: each non-generator element's column is
/// the only one touching that element's coordinate, and what remains after
/// peeling those off lies in the span of the generator columns.
pub fn decompose(group: &FiniteAbelianGroup, v: &[i64]) -> Result<Vec<i64>> {
    let n = group.n();
    if v.len() != n + 1 {
        return Err(Error::Shape(format!(
            "vector length {} does not match ambient dimension {}",
            v.len(),
            n + 1
        )));
    }
    let gen_coord: Vec<usize> = standard_generators(group)
        .iter()
        .map(|e| group.canonical_index(e) - 1)
        .collect();
    let mut rem: Vec<i64> = v.to_vec();
    let mut coeff = vec![0i64; n];
    for (c, el) in group.nonzero_elements().iter().enumerate() {
        let nz: Vec<(usize, u64)> = el
            .0
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r != 0)
            .map(|(i, &r)| (i, r))
            .collect();
        if nz.len() == 1 && nz[0].1 == 1 {
            continue;
        }
        let k = rem[c];
        if k == 0 {
            continue;
        }
        coeff[c] = k;
        rem[c] = 0;
        let mut digit_sum: i64 = 0;
        for &(i, r) in &nz {
            rem[gen_coord[i]] += k * r as i64;
            digit_sum += r as i64;
        }
        rem[n] -= k * (digit_sum - 1);
    }
    for (i, &gc) in gen_coord.iter().enumerate() {
        let m = group.moduli()[i] as i64;
        if rem[gc] % m != 0 {
            return Err(Error::Shape(
                "vector is not in the span of the canonical basis".into(),
            ));
        }
        coeff[gc] = rem[gc] / m;
        rem[n] += coeff[gc] * m;
        rem[gc] = 0;
    }
    if rem.iter().any(|&x| x != 0) {
        return Err(Error::Shape(
            "vector is not in the span of the canonical basis".into(),
        ));
    }
    Ok(coeff)
}

/// Fraction-free staircase for incremental independence tests.
struct Staircase {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Staircase {
    fn new() -> Self {
        Self { rows: Vec::new(), pivots: Vec::new() }
    }

    /// Adds the vector if it is independent of the rows held so far.
    fn try_add(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let a = w[p].clone();
            let b = row[p].clone();
            for k in 0..w.len() {
                w[k] = &w[k] * &b - &row[k] * &a;
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push(w);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }
}

fn abs_det_of(coeffs: &[Vec<i64>], chosen: &[usize]) -> BigInt {
    let rows: Vec<Vec<i64>> = chosen.iter().map(|&i| coeffs[i].clone()).collect();
    IntMatrix::from_rows_i64(&rows)
        .bareiss_det()
        .expect("square by construction")
        .abs()
}

/// Searches for a basis of minimal vectors by seeded random restarts.
///
/// Each restart shuffles S(G), grows a maximal independent subset greedily,
/// then tries up to the swap budget of random single-vector replacements,
/// keeping a swap whenever the coefficient determinant does not grow and
/// stays nonzero. Success is determinant one: the chosen vectors then span
/// the same lattice as the canonical basis.
pub fn fallback_greedy_basis(
    group: &FiniteAbelianGroup,
    seed: u64,
    restarts: u32,
    swap_budget: Option<u64>,
) -> Result<LatticeBasis> {
    let report = minvec::minimum_distance(group)?;
    let n = group.n();
    if report.rank != n {
        return Err(Error::NotWellRounded(group.spec()));
    }
    let coeffs: Vec<Vec<i64>> = report
        .vectors
        .iter()
        .map(|v| decompose(group, v))
        .collect::<Result<_>>()?;
    let budget = swap_budget.unwrap_or_else(|| default_swap_budget(n));
    let total = coeffs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let mut order: Vec<usize> = (0..total).collect();
        order.shuffle(&mut rng);
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        let mut stair = Staircase::new();
        for &cand in &order {
            if chosen.len() == n {
                break;
            }
            if stair.try_add(&coeffs[cand]) {
                chosen.push(cand);
            }
        }
        if chosen.len() < n {
            continue;
        }
        let mut d = abs_det_of(&coeffs, &chosen);
        let mut steps = 0u64;
        while d != BigInt::one() && steps < budget {
            steps += 1;
            let pos = rng.gen_range(0..n);
            let cand = rng.gen_range(0..total);
            if chosen.contains(&cand) {
                continue;
            }
            let old = chosen[pos];
            chosen[pos] = cand;
            let nd = abs_det_of(&coeffs, &chosen);
            if nd.is_zero() || nd > d {
                chosen[pos] = old;
            } else {
                d = nd;
            }
        }
        if d == BigInt::one() {
            let cols: Vec<Vec<i64>> =
                chosen.iter().map(|&i| report.vectors[i].clone()).collect();
            return LatticeBasis::new(group.clone(), IntMatrix::from_columns(&cols));
        }
    }
    Err(Error::FallbackBudget(format!(
        "{} (seed {seed}, {restarts} restarts)",
        group.spec()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::canonical_basis;

    fn g(spec: &str) -> FiniteAbelianGroup {
        FiniteAbelianGroup::parse(spec).unwrap()
    }

    #[test]
    fn decompose_inverts_basis_multiplication() {
        for spec in ["Z5", "Z2xZ4", "Z3xZ3", "Z8"] {
            let group = g(spec);
            let basis = canonical_basis(&group);
            let report = minvec::minimum_distance(&group).unwrap();
            for v in &report.vectors {
                let coeff = decompose(&group, v).unwrap();
                let rebuilt: Vec<BigInt> = (0..=group.n())
                    .map(|r| {
                        (0..group.n())
                            .map(|c| basis.get(r, c) * BigInt::from(coeff[c]))
                            .sum()
                    })
                    .collect();
                let want: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
                assert_eq!(rebuilt, want);
            }
        }
    }

    #[test]
    fn decompose_rejects_non_members() {
        let group = g("Z5");
        assert!(decompose(&group, &[1, 0, 0, 0, 0]).is_err());
        assert!(decompose(&group, &[1, -1]).is_err());
    }

    #[test]
    fn staircase_counts_independent_rows() {
        let mut s = Staircase::new();
        assert!(s.try_add(&[1, 2, 3]));
        assert!(s.try_add(&[0, 1, 1]));
        assert!(!s.try_add(&[1, 3, 4]));
        assert!(s.try_add(&[0, 0, 7]));
        assert!(!s.try_add(&[5, 5, 5]));
    }

    #[test]
    fn fallback_finds_bases_for_small_groups() {
        for spec in ["Z5", "Z2xZ2", "Z3xZ3", "Z2xZ4"] {
            let group = g(spec);
            let basis = fallback_greedy_basis(&group, 0, DEFAULT_RESTARTS, None).unwrap();
            let order = BigInt::from(group.order());
            assert_eq!(
                basis.matrix().gram().bareiss_det().unwrap(),
                order.pow(3),
                "{spec}"
            );
        }
    }

    #[test]
    fn fallback_is_deterministic_in_the_seed() {
        let group = g("Z3xZ3");
        let a = fallback_greedy_basis(&group, 7, DEFAULT_RESTARTS, None).unwrap();
        let b = fallback_greedy_basis(&group, 7, DEFAULT_RESTARTS, None).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        let c = fallback_greedy_basis(&group, 8, DEFAULT_RESTARTS, None).unwrap();
        assert_eq!(c.matrix().cols(), group.n());
    }

    #[test]
    fn fallback_budget_exhaustion_is_reported() {
        let err = fallback_greedy_basis(&g("Z3xZ3"), 0, 0, None).unwrap_err();
        assert!(matches!(err, Error::FallbackBudget(_)));
    }

    #[test]
    fn fallback_refuses_the_non_well_rounded_group() {
        let err = fallback_greedy_basis(&g("Z4"), 0, DEFAULT_RESTARTS, None).unwrap_err();
        assert!(matches!(err, Error::NotWellRounded(_)));
    }
}
