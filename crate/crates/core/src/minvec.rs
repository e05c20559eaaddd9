//! Minimal vectors of the group lattice.
//!
//! Every group lattice contains a vector of squared norm at most 8 (double a
//! generator column of norm 2 pattern), so enumerating zero-sum vectors of
//! squared norm <= 8 suffices to find the minimum distance. The support
//! patterns below are the complete list of zero-sum integer multisets with
//! norm 2, 4, 6, 8; completeness is pinned by the brute-force comparison in
//! the tests and the acceptance suite.

use crate::groups::FiniteAbelianGroup;
use crate::lattice::{membership, norm_sq, LatticeVector};
use crate::linalg::IntMatrix;
use crate::{Error, Result};
use itertools::Itertools;
use std::collections::{BTreeMap, BTreeSet};

const PATTERNS_2: &[&[i64]] = &[&[1, -1]];
#[cfg(test)]
const PATTERNS_4: &[&[i64]] = &[&[1, 1, -1, -1]];
const PATTERNS_6: &[&[i64]] = &[&[2, -1, -1], &[-2, 1, 1], &[1, 1, 1, -1, -1, -1]];
const PATTERNS_8: &[&[i64]] = &[
    &[2, -2],
    &[2, 1, -1, -1, -1],
    &[-2, -1, 1, 1, 1],
    &[1, 1, 1, 1, -1, -1, -1, -1],
];

/// d(G) and S(G) data.
#[derive(Debug, Clone)]
pub struct MinimalVectorReport {
    pub d_squared: i64,
    pub vectors: Vec<LatticeVector>,
    pub rank: usize,
    pub well_rounded: bool,
}

/// All nonzero lattice members with squared norm <= `max_norm_sq`, in
/// lexicographic order.
pub fn enumerate_short_vectors(
    group: &FiniteAbelianGroup,
    max_norm_sq: i64,
) -> Result<Vec<LatticeVector>> {
    if !matches!(max_norm_sq, 2 | 4 | 6 | 8) {
        return Err(Error::Shape(format!(
            "short-vector threshold must be 2, 4, 6, or 8, got {max_norm_sq}"
        )));
    }
    let mut out: BTreeSet<LatticeVector> = BTreeSet::new();
    if max_norm_sq >= 4 {
        for v in norm4_vectors(group) {
            out.insert(v);
        }
    }
    let mut tiers: Vec<&[&[i64]]> = vec![PATTERNS_2];
    if max_norm_sq >= 6 {
        tiers.push(PATTERNS_6);
    }
    if max_norm_sq >= 8 {
        tiers.push(PATTERNS_8);
    }
    for tier in tiers {
        for pat in tier {
            place_pattern(group, pat, &mut out)?;
        }
    }
    Ok(out.into_iter().collect())
}

/// Norm-4 vectors {1,1,-1,-1} by the pairwise-sum table: the +1 pair and the
/// -1 pair must have equal element sums (the balancing coordinate acts as the
/// zero element).
fn norm4_vectors(group: &FiniteAbelianGroup) -> Vec<LatticeVector> {
    let n1 = group.order() as usize;
    let mut elements = group.nonzero_elements();
    elements.push(group.zero());
    let mut by_sum: BTreeMap<Vec<u64>, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..n1 {
        for b in a + 1..n1 {
            let s = group.add(&elements[a], &elements[b]);
            by_sum.entry(s.0).or_default().push((a, b));
        }
    }
    let mut out = Vec::new();
    for pairs in by_sum.values() {
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[i + 1..] {
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                let mut v = vec![0i64; n1];
                v[a] = 1;
                v[b] = 1;
                v[c] = -1;
                v[d] = -1;
                let mut w = vec![0i64; n1];
                w[a] = -1;
                w[b] = -1;
                w[c] = 1;
                w[d] = 1;
                out.push(v);
                out.push(w);
            }
        }
    }
    out
}

/// Places a value pattern on all coordinate subsets and keeps the members.
fn place_pattern(
    group: &FiniteAbelianGroup,
    pattern: &[i64],
    out: &mut BTreeSet<LatticeVector>,
) -> Result<()> {
    let n1 = group.order() as usize;
    if pattern.len() > n1 {
        return Ok(());
    }
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &v in pattern {
        *counts.entry(v).or_default() += 1;
    }
    let values: Vec<(i64, usize)> = counts.into_iter().collect();
    let all: Vec<usize> = (0..n1).collect();
    fn rec(
        group: &FiniteAbelianGroup,
        values: &[(i64, usize)],
        avail: &[usize],
        partial: &mut Vec<(usize, i64)>,
        out: &mut BTreeSet<LatticeVector>,
        n1: usize,
    ) -> Result<()> {
        let Some(&(val, cnt)) = values.first() else {
            let mut v = vec![0i64; n1];
            for &(pos, x) in partial.iter() {
                v[pos] = x;
            }
            if membership(group, &v)? {
                out.insert(v);
            }
            return Ok(());
        };
        for combo in avail.iter().copied().combinations(cnt) {
            let rest: Vec<usize> = avail.iter().copied().filter(|p| !combo.contains(p)).collect();
            for &p in &combo {
                partial.push((p, val));
            }
            rec(group, &values[1..], &rest, partial, out, n1)?;
            for _ in &combo {
                partial.pop();
            }
        }
        Ok(())
    }
    rec(group, &values, &all, &mut Vec::new(), out, n1)
}

/// Minimum distance, the full set of minimal vectors, and their rank.
pub fn minimum_distance(group: &FiniteAbelianGroup) -> Result<MinimalVectorReport> {
    for threshold in [4i64, 6, 8] {
        let found = enumerate_short_vectors(group, threshold)?;
        if found.is_empty() {
            continue;
        }
        let d_squared = found
            .iter()
            .map(|v| norm_sq(v) as i64)
            .min()
            .expect("nonempty");
        let vectors: Vec<LatticeVector> = found
            .into_iter()
            .filter(|v| norm_sq(v) as i64 == d_squared)
            .collect();
        let rows: Vec<Vec<i64>> = vectors.clone();
        let rank = IntMatrix::from_rows_i64(&rows).integer_rank();
        let n = group.n();
        return Ok(MinimalVectorReport {
            d_squared,
            vectors,
            rank,
            well_rounded: rank == n,
        });
    }
    Err(Error::VerifyFailed(format!(
        "no vector of squared norm <= 8 found for {}",
        group.spec()
    )))
}

pub fn well_rounded(group: &FiniteAbelianGroup) -> Result<bool> {
    Ok(minimum_distance(group)?.well_rounded)
}

/// d(G)² by the classification: 8 for the order-2 group, 6 for order 3,
/// 4 for everything else. Confirmed against enumeration in the tests; use
/// this where enumerating all of S(G) would be wasteful.
pub fn classified_d_squared(group: &FiniteAbelianGroup) -> i64 {
    match group.order() {
        2 => 8,
        3 => 6,
        _ => 4,
    }
}
