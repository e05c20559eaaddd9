//! Finite Abelian groups presented as products of cyclic factors.
//!
//! A group is written `Z{m1}x...x{mk}` with every modulus at least 2, e.g.
//! `Z6` or `Z2xZ4`. Elements are residue tuples. The *canonical order* of
//! elements is lexicographic on residue tuples; the zero tuple comes first,
//! and the n = |G| − 1 nonzero elements carry 1-based indices 1..=n used
//! everywhere a lattice coordinate refers to a group element.

use crate::{Error, Result};
use std::fmt;

/// A finite Abelian group `Z_{m1} x ... x Z_{mk}`, moduli ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    moduli: Vec<u64>,
    order: u64,
}

/// An element of a [`FiniteAbelianGroup`]: one residue per factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<u64>);

impl FiniteAbelianGroup {
    /// Builds a group from cyclic moduli. Moduli are sorted ascending; each
    /// must be at least 2, and the order must fit in `u64`.
    pub fn new(mut moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::ParseGroup("need at least one factor".into()));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::ParseGroup(format!("modulus {m} < 2")));
        }
        moduli.sort_unstable();
        let mut order: u64 = 1;
        for &m in &moduli {
            order = order
                .checked_mul(m)
                .ok_or_else(|| Error::ParseGroup("group order overflows u64".into()))?;
        }
        Ok(Self { moduli, order })
    }

    /// Parses specs like `Z2xZ4`, `z12`, or a bare comma list `2,4`.
    /// Case-insensitive; factor order does not matter.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        if s.is_empty() {
            return Err(Error::ParseGroup("empty spec".into()));
        }
        let mut moduli = Vec::new();
        let tokens: Vec<&str> = if s.contains(',') {
            s.split(',').collect()
        } else {
            s.split(['x', 'X']).collect()
        };
        for tok in tokens {
            let t = tok.trim();
            let digits = t.strip_prefix(['Z', 'z']).unwrap_or(t);
            let m: u64 = digits
                .parse()
                .map_err(|_| Error::ParseGroup(format!("bad token {t:?} in {spec:?}")))?;
            moduli.push(m);
        }
        Self::new(moduli)
    }

    /// Canonical spec string, `Z{m1}x...`, moduli ascending. Parsing it back
    /// yields an equal group.
    pub fn spec(&self) -> String {
        self.moduli
            .iter()
            .map(|m| format!("Z{m}"))
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Lattice dimension: n = |G| − 1.
    pub fn n(&self) -> usize {
        (self.order - 1) as usize
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.moduli.len()])
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            self.moduli
                .iter()
                .zip(a.0.iter().zip(&b.0))
                .map(|(&m, (&x, &y))| (x + y) % m)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            self.moduli
                .iter()
                .zip(&a.0)
                .map(|(&m, &x)| (m - x) % m)
                .collect(),
        )
    }

    /// `k·a` for any signed integer k.
    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement(
            self.moduli
                .iter()
                .zip(&a.0)
                .map(|(&m, &x)| {
                    let r = (k as i128 * x as i128).rem_euclid(m as i128);
                    r as u64
                })
                .collect(),
        )
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        self.moduli
            .iter()
            .zip(&a.0)
            .map(|(&m, &x)| {
                if x == 0 {
                    1
                } else {
                    m / gcd(m, x)
                }
            })
            .fold(1, lcm)
    }

    /// All elements in canonical (lexicographic) order; zero first.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(self.order as usize);
        let mut cur = vec![0u64; self.moduli.len()];
        loop {
            out.push(GroupElement(cur.clone()));
            let mut i = self.moduli.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.moduli[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Nonzero elements in canonical order; entry `i` is the element with
    /// canonical index `i + 1`.
    pub fn nonzero_elements(&self) -> Vec<GroupElement> {
        let mut v = self.elements();
        v.remove(0);
        v
    }

    /// Canonical index of a nonzero element (1..=n), or 0 for zero.
    /// This is the element's lexicographic rank, i.e. its mixed-radix value.
    pub fn canonical_index(&self, a: &GroupElement) -> usize {
        let mut rank: u64 = 0;
        for (&m, &x) in self.moduli.iter().zip(&a.0) {
            rank = rank * m + x;
        }
        rank as usize
    }

    pub fn is_zero(&self, a: &GroupElement) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    /// All isomorphism classes of Abelian groups of the given order, one
    /// representative each, sorted by factor list.
    pub fn all_of_order(order: u64) -> Vec<FiniteAbelianGroup> {
        assert!(order >= 2, "order must be at least 2");
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rem = order;
        let mut p = 2;
        while p * p <= rem {
            if rem % p == 0 {
                let mut e = 0;
                while rem % p == 0 {
                    rem /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += 1;
        }
        if rem > 1 {
            factors.push((rem, 1));
        }
        let mut choices: Vec<Vec<Vec<u64>>> = Vec::new();
        for &(p, e) in &factors {
            choices.push(
                partitions(e)
                    .into_iter()
                    .map(|parts| parts.into_iter().map(|a| p.pow(a)).collect())
                    .collect(),
            );
        }
        let mut out = vec![vec![]];
        for eh in &choices {
            let mut next = Vec::new();
            for prefix in &out {
                for opt in eh {
                    let mut m: Vec<u64> = prefix.clone();
                    m.extend_from_slice(opt);
                    next.push(m);
                }
            }
            out = next;
        }
        let mut groups: Vec<FiniteAbelianGroup> = out
            .into_iter()
            .map(|m| FiniteAbelianGroup::new(m).expect("valid moduli"))
            .collect();
        groups.sort_by(|a, b| a.moduli.cmp(&b.moduli));
        groups
    }
}

/// Partitions of `e` as non-increasing part lists.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let top = rest.min(max);
        for part in (1..=top).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(e, e, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_normalizes_factor_order_and_case() {
        let g = FiniteAbelianGroup::parse("z4xZ2").unwrap();
        assert_eq!(g.spec(), "Z2xZ4");
        assert_eq!(g.order(), 8);
        assert_eq!(g.n(), 7);
        let h = FiniteAbelianGroup::parse("2,4").unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn parse_round_trips_through_spec() {
        for s in ["Z2", "Z6", "Z2xZ4", "Z2xZ2xZ3", "Z3xZ5"] {
            let g = FiniteAbelianGroup::parse(s).unwrap();
            assert_eq!(FiniteAbelianGroup::parse(&g.spec()).unwrap(), g);
        }
    }

    #[test]
    fn all_of_order_counts_isomorphism_classes() {
        let counts: Vec<usize> = (2u64..=16)
            .map(|o| FiniteAbelianGroup::all_of_order(o).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
        assert_eq!(counts.iter().sum::<usize>(), 24);
        let of8: Vec<String> = FiniteAbelianGroup::all_of_order(8)
            .iter()
            .map(|g| g.spec())
            .collect();
        assert_eq!(of8, vec!["Z2xZ2xZ2", "Z2xZ4", "Z8"]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(FiniteAbelianGroup::parse("Z1").is_err());
        assert!(FiniteAbelianGroup::parse("Z0xZ2").is_err());
        assert!(FiniteAbelianGroup::parse("").is_err());
        assert!(FiniteAbelianGroup::parse("Zx").is_err());
        assert!(FiniteAbelianGroup::parse("Z-3").is_err());
    }

    #[test]
    fn canonical_element_order_is_lexicographic() {
        let g = FiniteAbelianGroup::parse("Z2xZ2").unwrap();
        let els: Vec<Vec<u64>> = g.elements().into_iter().map(|e| e.0).collect();
        assert_eq!(els, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        for (i, e) in g.nonzero_elements().iter().enumerate() {
            assert_eq!(g.canonical_index(e), i + 1);
        }
    }

    #[test]
    fn arithmetic_and_orders() {
        let g = FiniteAbelianGroup::parse("Z2xZ4").unwrap();
        let a = GroupElement(vec![1, 3]);
        let b = GroupElement(vec![1, 2]);
        assert_eq!(g.add(&a, &b).0, vec![0, 1]);
        assert_eq!(g.neg(&a).0, vec![1, 1]);
        assert_eq!(g.scale(-3, &b).0, vec![1, 2]);
        assert_eq!(g.element_order(&a), 4);
        assert_eq!(g.element_order(&GroupElement(vec![1, 0])), 2);
        assert_eq!(g.element_order(&g.zero()), 1);
    }

    #[test]
    fn element_order_divides_group_order() {
        for spec in ["Z6", "Z2xZ4", "Z3xZ3", "Z12"] {
            let g = FiniteAbelianGroup::parse(spec).unwrap();
            for e in g.elements() {
                assert_eq!(g.order() % g.element_order(&e), 0);
            }
        }
    }
}
