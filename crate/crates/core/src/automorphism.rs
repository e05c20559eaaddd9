//! Group automorphisms and the coordinate permutations preserving the lattice.
//!
//! Relabeling the nonzero elements by a group automorphism permutes the first
//! n coordinate slots, keeps the balancing slot fixed, and maps the lattice
//! onto itself. The converse is checked computationally: the stabilizer of the
//! lattice inside the permutations of the element slots is enumerated by brute
//! force and compared with the automorphism group as a set of index
//! permutations.

use crate::groups::{FiniteAbelianGroup, GroupElement};
use crate::lattice::canonical_basis;
use crate::{Error, Result};
use itertools::Itertools;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeSet;

/// Default cap on the group order for automorphism enumeration.
pub const DEFAULT_ORDER_CAP: u64 = 32;

/// Default cap on the number of permuted slots (n = |G| - 1) for the
/// stabilizer search, which walks all n! permutations.
pub const DEFAULT_INDEX_CAP: u64 = 10;

/// A set of permutations of the canonical nonzero-element indices, verified
/// to form a group under composition.
///
/// Each permutation is stored zero-based: `perm[i]` is the image slot of slot
/// `i`, where slot `i` holds the nonzero element with canonical index `i + 1`.
/// The list is kept sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationSet {
    n: usize,
    perms: Vec<Vec<usize>>,
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn invert(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

impl PermutationSet {
    /// Validates that every entry is a permutation of 0..n and that the set
    /// contains the identity and is closed under composition and inverse.
    pub fn new(n: usize, mut perms: Vec<Vec<usize>>) -> Result<Self> {
        perms.sort();
        perms.dedup();
        for p in &perms {
            if p.len() != n {
                return Err(Error::Shape(format!(
                    "permutation of length {} in a set on {} indices",
                    p.len(),
                    n
                )));
            }
            let mut seen = vec![false; n];
            for &i in p {
                if i >= n || seen[i] {
                    return Err(Error::Shape(format!("{p:?} is not a permutation")));
                }
                seen[i] = true;
            }
        }
        let identity: Vec<usize> = (0..n).collect();
        if perms.binary_search(&identity).is_err() {
            return Err(Error::Shape("permutation set is missing the identity".into()));
        }
        for a in &perms {
            if perms.binary_search(&invert(a)).is_err() {
                return Err(Error::Shape(format!("{a:?} has no inverse in the set")));
            }
            for b in &perms {
                if perms.binary_search(&compose(a, b)).is_err() {
                    return Err(Error::Shape(format!(
                        "composition of {a:?} and {b:?} is missing from the set"
                    )));
                }
            }
        }
        Ok(Self { n, perms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of permutations in the set.
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// The permutations in lexicographic order.
    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn contains(&self, perm: &[usize]) -> bool {
        self.perms.binary_search_by(|p| p.as_slice().cmp(perm)).is_ok()
    }

    /// A small generating set, built greedily: each step adds the permutation
    /// whose inclusion reaches the most elements, earliest in lexicographic
    /// order on ties. Empty exactly when the set is trivial.
    pub fn generating_set(&self) -> Vec<Vec<usize>> {
        let mut gens: Vec<Vec<usize>> = Vec::new();
        let mut reach = close_under(self.n, &gens);
        while reach.len() < self.perms.len() {
            let mut best: Option<(usize, &Vec<usize>)> = None;
            for p in &self.perms {
                if reach.contains(p) {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push(p.clone());
                let size = close_under(self.n, &trial).len();
                if best.map_or(true, |(s, _)| size > s) {
                    best = Some((size, p));
                }
            }
            let (_, pick) = best.expect("some element is unreached");
            gens.push(pick.clone());
            reach = close_under(self.n, &gens);
        }
        gens
    }
}

/// Closure of `gens` under composition, always containing the identity.
fn close_under(n: usize, gens: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let mut reach: BTreeSet<Vec<usize>> = BTreeSet::new();
    reach.insert((0..n).collect());
    let mut frontier: Vec<Vec<usize>> = reach.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = compose(g, &p);
            if reach.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    reach
}

/// All automorphisms of the group, as permutations of the canonical
/// nonzero-element indices.
///
/// Candidate images of each standard generator are the elements annihilated
/// by the factor modulus; partial assignments are kept only while the induced
/// map is injective on the subgroup the assigned generators span, and an
/// injective endomorphism of a finite group is an automorphism.
pub fn enumerate_group_automorphisms(
    group: &FiniteAbelianGroup,
    order_cap: u64,
) -> Result<PermutationSet> {
    if group.order() > order_cap {
        return Err(Error::CapExceeded {
            what: "group order",
            limit: order_cap,
            requested: group.order(),
        });
    }
    let elements = group.elements();
    let candidates: Vec<Vec<GroupElement>> = group
        .moduli()
        .iter()
        .map(|&m| {
            elements
                .iter()
                .filter(|x| group.is_zero(&group.scale(m as i64, x)))
                .cloned()
                .collect()
        })
        .collect();
    let mut perms = Vec::new();
    let mut images: Vec<GroupElement> = Vec::new();
    extend_images(group, &candidates, &mut images, &mut perms);
    PermutationSet::new(group.n(), perms)
}

fn extend_images(
    group: &FiniteAbelianGroup,
    candidates: &[Vec<GroupElement>],
    images: &mut Vec<GroupElement>,
    out: &mut Vec<Vec<usize>>,
) {
    let i = images.len();
    if i == candidates.len() {
        out.push(induced_index_permutation(group, images));
        return;
    }
    for cand in &candidates[i] {
        images.push(cand.clone());
        if injective_on_assigned_span(group, images) {
            extend_images(group, candidates, images, out);
        }
        images.pop();
    }
}

/// Whether the map sending the first `images.len()` standard generators to
/// `images` is injective on the subgroup those generators span.
fn injective_on_assigned_span(group: &FiniteAbelianGroup, images: &[GroupElement]) -> bool {
    let moduli = &group.moduli()[..images.len()];
    let span_size: u64 = moduli.iter().product();
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    let mut coeffs = vec![0u64; images.len()];
    loop {
        let mut acc = group.zero();
        for (c, img) in coeffs.iter().zip(images) {
            if *c != 0 {
                acc = group.add(&acc, &group.scale(*c as i64, img));
            }
        }
        if !seen.insert(acc) {
            return false;
        }
        let mut pos = 0;
        loop {
            if pos == coeffs.len() {
                debug_assert_eq!(seen.len() as u64, span_size);
                return true;
            }
            coeffs[pos] += 1;
            if coeffs[pos] < moduli[pos] {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}

/// The slot permutation induced by the automorphism with the given generator
/// images: slot i (canonical index i + 1) maps to the slot of the element's
/// image.
fn induced_index_permutation(group: &FiniteAbelianGroup, images: &[GroupElement]) -> Vec<usize> {
    group
        .nonzero_elements()
        .iter()
        .map(|g| {
            let mut acc = group.zero();
            for (&r, img) in g.0.iter().zip(images) {
                if r != 0 {
                    acc = group.add(&acc, &group.scale(r as i64, img));
                }
            }
            group.canonical_index(&acc) - 1
        })
        .collect()
}

/// All slot permutations that map the lattice onto itself.
///
/// A permutation sends a vector x to the vector y with y[perm[i]] = x[i] on
/// the first n slots, balancing slot untouched. It suffices to check the n
/// canonical basis columns: the lattice is their integer span, the action is
/// linear, and a volume-preserving injection of the lattice into itself is
/// onto.
pub fn lattice_coordinate_stabilizer(
    group: &FiniteAbelianGroup,
    index_cap: u64,
) -> Result<PermutationSet> {
    let n = group.n();
    if n as u64 > index_cap {
        return Err(Error::CapExceeded {
            what: "permutation degree",
            limit: index_cap,
            requested: n as u64,
        });
    }
    let moduli = group.moduli().to_vec();
    let residues: Vec<Vec<u64>> = group.nonzero_elements().into_iter().map(|e| e.0).collect();
    let basis = canonical_basis(group);
    let sparse: Vec<Vec<(usize, i64)>> = (0..n)
        .map(|j| {
            (0..n)
                .filter_map(|i| {
                    let x = basis.get(i, j).to_i64().expect("basis entry fits in i64");
                    (x != 0).then_some((i, x))
                })
                .collect()
        })
        .collect();
    let mut perms = Vec::new();
    for perm in (0..n).permutations(n) {
        if sparse.iter().all(|col| scattered_weight_is_zero(&moduli, &residues, &perm, col)) {
            perms.push(perm);
        }
    }
    PermutationSet::new(n, perms)
}

/// Whether the scattered column still has group-weighted sum zero. Permuting
/// slots preserves the coordinate sum, so this is the whole membership test.
fn scattered_weight_is_zero(
    moduli: &[u64],
    residues: &[Vec<u64>],
    perm: &[usize],
    col: &[(usize, i64)],
) -> bool {
    let k = moduli.len();
    let mut acc = vec![0u64; k];
    for &(i, x) in col {
        let g = &residues[perm[i]];
        for t in 0..k {
            let m = moduli[t];
            acc[t] = (acc[t] + x.rem_euclid(m as i64) as u64 * g[t]) % m;
        }
    }
    acc.iter().all(|&r| r == 0)
}

/// Outcome of comparing the automorphism permutations with the lattice
/// stabilizer.
#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    pub equal: bool,
    /// Common size of the two sets (size of the automorphism side if they
    /// differ).
    pub order: u64,
    /// Small generating set of the automorphism-side permutations, written
    /// with one-based canonical indices.
    pub generators: Vec<Vec<usize>>,
}

/// Enumerates both permutation sets and compares them elementwise.
pub fn verify_symmetry_correspondence(
    group: &FiniteAbelianGroup,
    order_cap: u64,
    index_cap: u64,
) -> Result<CorrespondenceReport> {
    let auts = enumerate_group_automorphisms(group, order_cap)?;
    let stab = lattice_coordinate_stabilizer(group, index_cap)?;
    let generators = auts
        .generating_set()
        .into_iter()
        .map(|p| p.into_iter().map(|i| i + 1).collect())
        .collect();
    Ok(CorrespondenceReport {
        equal: auts == stab,
        order: auts.order() as u64,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::membership;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn group(spec: &str) -> FiniteAbelianGroup {
        FiniteAbelianGroup::parse(spec).unwrap()
    }

    #[test]
    fn cyclic_automorphism_counts_match_unit_counts() {
        for m in 2..=11u64 {
            let g = FiniteAbelianGroup::new(vec![m]).unwrap();
            let auts = enumerate_group_automorphisms(&g, DEFAULT_ORDER_CAP).unwrap();
            let units = (1..m).filter(|&j| gcd(j, m) == 1).count();
            assert_eq!(auts.order(), units, "Z{m}");
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn automorphism_counts_for_known_groups() {
        let expected: &[(&str, usize)] = &[
            ("Z2", 1),
            ("Z5", 4),
            ("Z2xZ2", 6),
            ("Z2xZ4", 8),
            ("Z7", 6),
            ("Z2xZ2xZ2", 168),
            ("Z9", 6),
            ("Z3xZ3", 48),
            ("Z11", 10),
        ];
        for &(spec, count) in expected {
            let auts = enumerate_group_automorphisms(&group(spec), DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(auts.order(), count, "{spec}");
        }
    }

    #[test]
    fn permutation_set_checks_group_axioms() {
        assert!(PermutationSet::new(3, vec![vec![0, 1, 2]]).is_ok());
        let err = PermutationSet::new(3, vec![vec![1, 2, 0]]).unwrap_err();
        assert!(err.to_string().contains("identity"), "{err}");
        let err =
            PermutationSet::new(3, vec![vec![0, 1, 2], vec![1, 2, 0]]).unwrap_err();
        assert!(err.to_string().contains("no inverse"), "{err}");
        let err = PermutationSet::new(
            3,
            vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 2, 1]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("missing from the set"), "{err}");
        assert!(PermutationSet::new(3, vec![vec![0, 1, 1]]).is_err());
        assert!(PermutationSet::new(3, vec![vec![0, 1]]).is_err());
        let cyclic = PermutationSet::new(3, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
        assert_eq!(cyclic.unwrap().order(), 3);
    }

    #[test]
    fn stabilizer_for_small_cyclic_groups_is_known() {
        let z3 = lattice_coordinate_stabilizer(&group("Z3"), DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(z3.perms(), &[vec![0, 1], vec![1, 0]]);
        let z4 = lattice_coordinate_stabilizer(&group("Z4"), DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(z4.perms(), &[vec![0, 1, 2], vec![2, 1, 0]]);
        let z2 = lattice_coordinate_stabilizer(&group("Z2"), DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(z2.perms(), &[vec![0]]);
    }

    #[test]
    fn stabilizer_matches_automorphisms_up_to_order_eleven() {
        for order in 2..=11u64 {
            for g in FiniteAbelianGroup::all_of_order(order) {
                let auts = enumerate_group_automorphisms(&g, DEFAULT_ORDER_CAP).unwrap();
                let stab = lattice_coordinate_stabilizer(&g, DEFAULT_INDEX_CAP).unwrap();
                assert_eq!(auts, stab, "{}", g.spec());
            }
        }
    }

    #[test]
    fn basis_columns_decide_the_same_stabilizer_as_random_vectors() {
        for spec in ["Z5", "Z2xZ3"] {
            let g = group(spec);
            let n = g.n();
            let basis = canonical_basis(&g);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut samples: Vec<Vec<i64>> = Vec::new();
            for _ in 0..25 {
                let mut v = vec![0i64; n + 1];
                for j in 0..n {
                    let c = rng.gen_range(-3..=3i64);
                    for i in 0..=n {
                        v[i] += c * basis.get(i, j).to_i64().unwrap();
                    }
                }
                samples.push(v);
            }
            let stab = lattice_coordinate_stabilizer(&g, DEFAULT_INDEX_CAP).unwrap();
            for perm in (0..n).permutations(n) {
                let keeps_samples = samples.iter().all(|v| {
                    let mut w = v.clone();
                    for i in 0..n {
                        w[perm[i]] = v[i];
                    }
                    membership(&g, &w).unwrap()
                });
                assert_eq!(stab.contains(&perm), keeps_samples, "{spec} {perm:?}");
            }
        }
    }

    #[test]
    fn generating_sets_are_small_and_regenerate() {
        let auts = enumerate_group_automorphisms(&group("Z2xZ2xZ2"), DEFAULT_ORDER_CAP).unwrap();
        let gens = auts.generating_set();
        assert!(gens.len() <= 2, "{} generators", gens.len());
        assert_eq!(close_under(auts.n(), &gens).len(), auts.order());

        let cyclic = enumerate_group_automorphisms(&group("Z11"), DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(cyclic.generating_set().len(), 1);

        let trivial = enumerate_group_automorphisms(&group("Z2"), DEFAULT_ORDER_CAP).unwrap();
        assert!(trivial.generating_set().is_empty());
    }

    #[test]
    fn caps_are_enforced_and_overridable() {
        let err = enumerate_group_automorphisms(&group("Z33"), DEFAULT_ORDER_CAP).unwrap_err();
        assert!(matches!(
            err,
            Error::CapExceeded { requested: 33, limit: 32, .. }
        ));
        let err = lattice_coordinate_stabilizer(&group("Z12"), DEFAULT_INDEX_CAP).unwrap_err();
        assert!(matches!(
            err,
            Error::CapExceeded { requested: 11, limit: 10, .. }
        ));
        assert!(lattice_coordinate_stabilizer(&group("Z2"), 1).is_ok());
    }

    #[test]
    fn correspondence_reports_for_known_groups() {
        let cases: &[(&str, u64)] = &[("Z2xZ2", 6), ("Z7", 6), ("Z2xZ4", 8)];
        for &(spec, order) in cases {
            let g = group(spec);
            let report =
                verify_symmetry_correspondence(&g, DEFAULT_ORDER_CAP, DEFAULT_INDEX_CAP).unwrap();
            assert!(report.equal, "{spec}");
            assert_eq!(report.order, order, "{spec}");
            assert!(!report.generators.is_empty());
            for gen in &report.generators {
                assert_eq!(gen.len(), g.n());
                assert!(gen.iter().all(|&i| (1..=g.n()).contains(&i)));
            }
        }
    }
}
