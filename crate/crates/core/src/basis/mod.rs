//! Construction of lattice bases made of minimal vectors.
//!
//! The builder splits the group into prime-power cyclic factors, covers them
//! with blocks that have known minimal arrays (cyclic of order at least 5,
//! the hand-checked special arrays, the tiny groups), glues the blocks with
//! the product construction, attaches at most one leftover small factor, and
//! finally re-indexes the result onto the caller's presentation. If an
//! attachment hypothesis fails, the randomized fallback search takes over.

pub mod arrays;
pub mod assemble;
pub mod fallback;

pub use arrays::{cyclic_minimal_array, small_group_array, special_array, AdmissibleArray};
pub use assemble::{array_to_basis, attach_small, combine_product, prime_power_split, Isomorphism};
pub use fallback::{decompose, default_swap_budget, fallback_greedy_basis, DEFAULT_RESTARTS};

use crate::groups::FiniteAbelianGroup;
use crate::lattice::{norm_sq, LatticeBasis};
use crate::minvec;
use crate::{Error, Result};
use serde::Serialize;
use std::cmp::Reverse;

/// One applied construction, for the build report.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub tag: &'static str,
    pub operands: Vec<String>,
}

/// Record of how a basis was built.
#[derive(Debug, Clone, Serialize)]
pub struct BuildTrace {
    pub steps: Vec<TraceStep>,
    pub fallback_used: bool,
    pub seed: u64,
}

/// Knobs for the randomized fallback; the defaults match the CLI defaults.
#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub seed: u64,
    pub restarts: u32,
    pub swap_budget: Option<u64>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { seed: 0, restarts: DEFAULT_RESTARTS, swap_budget: None }
    }
}

fn step(tag: &'static str, operands: Vec<String>) -> TraceStep {
    TraceStep { tag, operands }
}

/// Runs the block plan over the prime-power factors. Errors with
/// `Error::Hypothesis` exactly when some construction's hypothesis fails, so
/// the caller can fall back.
fn assemble_plan(group: &FiniteAbelianGroup) -> Result<(AdmissibleArray, Vec<TraceStep>)> {
    let pps: Vec<u64> = group
        .moduli()
        .iter()
        .flat_map(|&m| prime_power_split(m))
        .collect();
    if pps == [2] || pps == [3] {
        let arr = small_group_array(group)?;
        return Ok((arr, vec![step("small", vec![group.spec()])]));
    }
    let mut twos = pps.iter().filter(|&&p| p == 2).count();
    let mut threes = pps.iter().filter(|&&p| p == 3).count();
    let mut fours = pps.iter().filter(|&&p| p == 4).count();
    let mut large: Vec<u64> = pps.iter().copied().filter(|&p| p >= 5).collect();
    large.sort_unstable();

    let mut blocks: Vec<(&'static str, AdmissibleArray)> = Vec::new();
    for &m in &large {
        blocks.push(("cyclic", cyclic_minimal_array(m)?));
    }
    while fours >= 2 {
        blocks.push(("special", special_array(&FiniteAbelianGroup::new(vec![4, 4])?)?));
        fours -= 2;
    }
    if fours == 1 && twos >= 1 {
        blocks.push(("special", special_array(&FiniteAbelianGroup::new(vec![2, 4])?)?));
        fours -= 1;
        twos -= 1;
    }
    if fours == 1 && threes >= 1 {
        blocks.push(("merge-cyclic", cyclic_minimal_array(12)?));
        fours -= 1;
        threes -= 1;
    }
    while threes >= 2 {
        blocks.push(("special", special_array(&FiniteAbelianGroup::new(vec![3, 3])?)?));
        threes -= 2;
    }
    if threes == 1 && twos >= 1 {
        blocks.push(("merge-cyclic", cyclic_minimal_array(6)?));
        threes -= 1;
        twos -= 1;
    }
    while twos >= 2 {
        blocks.push(("small", small_group_array(&FiniteAbelianGroup::new(vec![2, 2])?)?));
        twos -= 2;
    }
    let mut leftover: Vec<u64> = Vec::new();
    leftover.extend(std::iter::repeat(2).take(twos));
    leftover.extend(std::iter::repeat(3).take(threes));
    leftover.extend(std::iter::repeat(4).take(fours));
    debug_assert!(leftover.len() <= 1, "pairing leaves at most one small factor");

    blocks.sort_by_key(|(_, arr)| (Reverse(arr.group().order()), arr.group().spec()));
    let mut steps: Vec<TraceStep> = blocks
        .iter()
        .map(|(tag, arr)| step(tag, vec![arr.group().spec()]))
        .collect();

    let mut iter = blocks.into_iter().map(|(_, arr)| arr);
    let mut acc = iter
        .next()
        .ok_or_else(|| Error::Shape(format!("no block covers {}", group.spec())))?;
    for next in iter {
        steps.push(step(
            "product",
            vec![acc.group().spec(), next.group().spec()],
        ));
        acc = combine_product(&acc, &next)?;
    }
    for &m in &leftover {
        steps.push(step(
            match m {
                2 => "attach2",
                3 => "attach3",
                _ => "attach4",
            },
            vec![format!("Z{m}"), acc.group().spec()],
        ));
        acc = attach_small(m, &acc)?;
    }
    Ok((acc, steps))
}

/// Builds a basis of minimal vectors for L(G), together with a trace of the
/// constructions used. Fails with `Error::NotWellRounded` for Z4, the one
/// group whose minimal vectors do not span.
pub fn build_minimal_basis(
    group: &FiniteAbelianGroup,
    opts: &BuildOptions,
) -> Result<(LatticeBasis, BuildTrace)> {
    if group.moduli() == [4] {
        return Err(Error::NotWellRounded(group.spec()));
    }
    let (basis, trace) = match assemble_plan(group) {
        Ok((arr, steps)) => {
            let basis = array_to_basis(&arr, group)?;
            (basis, BuildTrace { steps, fallback_used: false, seed: opts.seed })
        }
        Err(Error::Hypothesis(_)) => {
            let basis =
                fallback_greedy_basis(group, opts.seed, opts.restarts, opts.swap_budget)?;
            let steps = vec![step("fallback", vec![group.spec()])];
            (basis, BuildTrace { steps, fallback_used: true, seed: opts.seed })
        }
        Err(e) => return Err(e),
    };
    let d_squared = minvec::classified_d_squared(group);
    for c in 0..group.n() {
        let col = basis.column(c);
        if norm_sq(&col) != d_squared as i128 {
            return Err(Error::VerifyFailed(format!(
                "basis column {c} has norm^2 {} but d(G)^2 = {d_squared}",
                norm_sq(&col)
            )));
        }
    }
    Ok((basis, trace))
}
