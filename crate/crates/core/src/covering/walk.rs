//! Rounding a rational point into the lattice: exact nearest-vector decoding
//! in the ambient root lattice, then one correcting step that lands in L(G).
//! The correction moves by a vector of squared norm 2, which is where the
//! mu(A_n) + sqrt(2) bound comes from.

use super::round_rational;
use crate::groups::FiniteAbelianGroup;
use crate::linalg::Rational;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact nearest vector of the root lattice A_n (integer vectors with zero
/// sum): round every coordinate, then repair the sum by stepping the
/// coordinates whose rounding error is most in the repair direction.
pub fn nearest_in_root_lattice(point: &[Rational]) -> Result<Vec<BigInt>> {
    if point.is_empty() {
        return Err(Error::Shape("empty point".into()));
    }
    let sum = point.iter().fold(Rational::zero(), |acc, x| acc + x);
    if !sum.is_zero() {
        return Err(Error::Shape("point must have zero coordinate sum".into()));
    }
    let mut rounded: Vec<BigInt> = point.iter().map(round_rational).collect();
    let deficit: BigInt = rounded.iter().sum();
    if deficit.is_zero() {
        return Ok(rounded);
    }
    let mut residuals: Vec<(Rational, usize)> = rounded
        .iter()
        .zip(point)
        .enumerate()
        .map(|(i, (r, p))| (Rational::from_integer(r.clone()) - p, i))
        .collect();
    let count = deficit
        .abs()
        .to_usize()
        .expect("rounding deficit is at most half the dimension");
    if deficit.is_positive() {
        // drop the coordinates rounded up the most
        residuals.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, i) in residuals.iter().take(count) {
            rounded[i] -= 1;
        }
    } else {
        residuals.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, i) in residuals.iter().take(count) {
            rounded[i] += 1;
        }
    }
    Ok(rounded)
}

/// A lattice point reached by rounding, with its exact squared distance to
/// the start.
#[derive(Debug, Clone)]
pub struct WalkResult {
    pub point: Vec<BigInt>,
    pub dist_sq: Rational,
}

/// Rounds a zero-sum rational point to a point of L(G): decode in A_n, then,
/// if the decoded vector's weighted element sum is some g != 0, decrement the
/// coordinate of g and increment the balancing coordinate. The result is
/// always a lattice member within mu(A_n) + sqrt(2) of the start.
pub fn rounding_walk(group: &FiniteAbelianGroup, point: &[Rational]) -> Result<WalkResult> {
    let n1 = group.order() as usize;
    if point.len() != n1 {
        return Err(Error::Shape(format!(
            "point length {} does not match group order {n1}",
            point.len()
        )));
    }
    let mut v = nearest_in_root_lattice(point)?;
    let order = BigInt::from(group.order());
    let mut acc = group.zero();
    for (i, el) in group.nonzero_elements().iter().enumerate() {
        let k = v[i].mod_floor(&order).to_i64().expect("residue fits");
        if k != 0 {
            acc = group.add(&acc, &group.scale(k, el));
        }
    }
    if !group.is_zero(&acc) {
        let j = group.canonical_index(&acc) - 1;
        v[j] -= 1;
        v[n1 - 1] += 1;
    }
    let dist_sq = v
        .iter()
        .zip(point)
        .map(|(a, p)| {
            let d = Rational::from_integer(a.clone()) - p;
            &d * &d
        })
        .fold(Rational::zero(), |acc, x| acc + x);
    Ok(WalkResult { point: v, dist_sq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::membership;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(spec: &str) -> FiniteAbelianGroup {
        FiniteAbelianGroup::parse(spec).unwrap()
    }

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    /// Random zero-sum rational point with denominator 8 and numerators in
    /// [-16, 16].
    fn random_point(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
        let mut p: Vec<Rational> = (0..len - 1)
            .map(|_| rat(rng.gen_range(-16i64..=16), 8))
            .collect();
        let sum = p.iter().fold(Rational::zero(), |acc, x| acc + x);
        p.push(-sum);
        p
    }

    /// Brute-force nearest A_n vector within a box around the rounding.
    fn brute_nearest_dist(point: &[Rational]) -> Rational {
        let base: Vec<BigInt> = point.iter().map(round_rational).collect();
        let len = point.len();
        let mut best: Option<Rational> = None;
        let mut offs = vec![-2i64; len];
        loop {
            let cand: Vec<BigInt> =
                base.iter().zip(&offs).map(|(b, &o)| b + BigInt::from(o)).collect();
            if cand.iter().sum::<BigInt>().is_zero() {
                let d = cand
                    .iter()
                    .zip(point)
                    .map(|(a, p)| {
                        let d = Rational::from_integer(a.clone()) - p;
                        &d * &d
                    })
                    .fold(Rational::zero(), |acc, x| acc + x);
                if best.as_ref().map_or(true, |b| d < *b) {
                    best = Some(d);
                }
            }
            let mut i = 0;
            loop {
                if i == len {
                    return best.expect("box contains a zero-sum vector");
                }
                offs[i] += 1;
                if offs[i] <= 2 {
                    break;
                }
                offs[i] = -2;
                i += 1;
            }
        }
    }

    #[test]
    fn decoding_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let p = random_point(&mut rng, 4);
            let v = nearest_in_root_lattice(&p).unwrap();
            assert!(v.iter().sum::<BigInt>().is_zero());
            let d = v
                .iter()
                .zip(&p)
                .map(|(a, q)| {
                    let d = Rational::from_integer(a.clone()) - q;
                    &d * &d
                })
                .fold(Rational::zero(), |acc, x| acc + x);
            assert_eq!(d, brute_nearest_dist(&p));
        }
    }

    #[test]
    fn decoding_validates_input() {
        assert!(nearest_in_root_lattice(&[]).is_err());
        assert!(nearest_in_root_lattice(&[rat(1, 2), rat(1, 2)]).is_err());
    }

    #[test]
    fn walk_lands_in_the_lattice_within_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for spec in ["Z2", "Z3", "Z5", "Z2xZ2", "Z2xZ4", "Z3xZ3"] {
            let group = g(spec);
            let n = group.n();
            let bound = super::super::mu_root_lattice(n as u64) + 2f64.sqrt();
            for _ in 0..40 {
                let p = random_point(&mut rng, n + 1);
                let w = rounding_walk(&group, &p).unwrap();
                let as_i64: Vec<i64> =
                    w.point.iter().map(|x| x.to_i64().unwrap()).collect();
                assert!(membership(&group, &as_i64).unwrap(), "{spec}");
                let dist = w.dist_sq.to_f64().unwrap().sqrt();
                assert!(dist <= bound + 1e-12, "{spec}: {dist} > {bound}");
            }
        }
    }

    #[test]
    fn walk_fixes_lattice_points() {
        let group = g("Z5");
        let member = [1i64, 1, -1, 0, -1];
        assert!(membership(&group, &member).unwrap());
        let p: Vec<Rational> = member.iter().map(|&x| rat(x, 1)).collect();
        let w = rounding_walk(&group, &p).unwrap();
        assert!(w.dist_sq.is_zero());
        let back: Vec<BigInt> = member.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(w.point, back);
    }
}
