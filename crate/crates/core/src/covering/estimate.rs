//! Empirical lower bounds on the covering radius: sample points in the
//! fundamental cell, measure their exact CVP distance, and push the best
//! candidates uphill by coordinate-pair steps inside the zero-sum hyperplane.
//! Every reported value is the exact distance of a concrete point, so the
//! estimate never exceeds the true covering radius.

use super::cvp::cvp_nearest;
use crate::groups::FiniteAbelianGroup;
use crate::lattice::{canonical_basis, LatticeBasis};
use crate::linalg::Rational;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Grid resolution for cell samples.
const SAMPLE_DENOM: u64 = 4096;
/// How many of the best samples get the ascent treatment.
const ASCENT_CANDIDATES: usize = 8;
/// Ascent sweeps per candidate; the step halves after a sweep without
/// improvement.
const ASCENT_SWEEPS: usize = 40;

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Lower-bound estimate of the covering radius of L(G), as max over seeded
/// cell samples and the half-integer corner point of the exact CVP distance,
/// refined by hill climbing. Deterministic for a fixed seed.
pub fn deep_hole_estimate(group: &FiniteAbelianGroup, samples: u64, seed: u64) -> Result<f64> {
    let (_, dist_sq) = deep_hole_witness(group, samples, seed)?;
    Ok(dist_sq.to_f64().expect("finite rational").sqrt())
}

/// The point behind [`deep_hole_estimate`] and its exact squared CVP
/// distance, for independent checking of the reported bound.
pub fn deep_hole_witness(
    group: &FiniteAbelianGroup,
    samples: u64,
    seed: u64,
) -> Result<(Vec<Rational>, Rational)> {
    if samples == 0 {
        return Err(Error::Shape("estimator needs at least one sample".into()));
    }
    let basis = LatticeBasis::new(group.clone(), canonical_basis(group))?;
    let n = group.n();
    let n1 = n + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Best candidates first, ties keep the earlier arrival.
    let mut top: Vec<(Rational, Vec<Rational>)> = Vec::new();
    let push = |top: &mut Vec<(Rational, Vec<Rational>)>, d: Rational, p: Vec<Rational>| {
        let pos = top.partition_point(|(existing, _)| *existing >= d);
        top.insert(pos, (d, p));
        top.truncate(ASCENT_CANDIDATES);
    };

    let mut corner: Vec<Rational> = vec![rat(1, 2); n1];
    corner[n] = rat(-(n as i64), 2);
    let d = cvp_nearest(&basis, &corner)?.dist_sq;
    push(&mut top, d, corner);

    for _ in 0..samples {
        let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..SAMPLE_DENOM)).collect();
        let mut point = vec![Rational::zero(); n1];
        for (j, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let scale = Rational::new(BigInt::from(c), BigInt::from(SAMPLE_DENOM));
            for (coord, b) in point.iter_mut().zip(basis.column(j)) {
                *coord += &scale * Rational::from_integer(BigInt::from(b));
            }
        }
        let d = cvp_nearest(&basis, &point)?.dist_sq;
        push(&mut top, d, point);
    }

    let (mut best, mut best_point) = top.first().expect("corner always present").clone();
    for (start_d, start_p) in top.clone() {
        let mut p = start_p;
        let mut cur = start_d;
        let mut step = rat(1, 4);
        for _ in 0..ASCENT_SWEEPS {
            let mut improved = false;
            for i in 0..n1 {
                for j in (i + 1)..n1 {
                    for sign in [1i64, -1] {
                        let delta = &step * rat(sign, 1);
                        let mut q = p.clone();
                        q[i] += &delta;
                        q[j] -= &delta;
                        let d = cvp_nearest(&basis, &q)?.dist_sq;
                        if d > cur {
                            cur = d;
                            p = q;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step = step / rat(2, 1);
            }
        }
        if cur > best {
            best = cur;
            best_point = p;
        }
    }
    Ok((best_point, best))
}
