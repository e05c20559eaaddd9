//! Covering-radius bounds for the group lattices.
//!
//! Three analytic upper bounds are available for every dimension (the root
//! lattice covering radius, a refined bound with a logarithmic correction,
//! and the rounding bound mu(A_n) + sqrt(2)), plus an exact rational
//! recursive bound driven by leading-minor determinants, an exact CVP
//! solver, and a seeded empirical deep-hole estimator that produces lower
//! bounds.

pub mod cvp;
pub mod estimate;
pub mod walk;

pub use cvp::{cvp_nearest, CvpResult};
pub use estimate::{deep_hole_estimate, deep_hole_witness};
pub use walk::{nearest_in_root_lattice, rounding_walk, WalkResult};

use crate::basis::arrays::t_matrix;
use crate::groups::FiniteAbelianGroup;
use crate::lattice::LatticeBasis;
use crate::linalg::{IntMatrix, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Default largest n for which the table computes the recursive column.
pub const RECURSIVE_CAP: u64 = 512;

/// Covering radius of the root lattice A_n.
pub fn mu_root_lattice(n: u64) -> f64 {
    let x = (n + 1) as f64;
    if n % 2 == 1 {
        0.5 * x.sqrt()
    } else {
        0.5 * (x - 1.0 / x).sqrt()
    }
}

/// The analytic upper bounds in one bundle.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticBounds {
    /// Covering radius of the ambient root lattice.
    pub mu_an: f64,
    /// Half the square root of n + 4 ln(n-1) + 7 - 4 ln 2 + 10/n (natural
    /// logarithm; pinned by a digit test against the reference table).
    pub log_bound: f64,
    /// mu(A_n) + sqrt(2): round into the root lattice, then take one
    /// correcting step of length at most sqrt(2).
    pub plus_sqrt2: f64,
}

/// Evaluates the three analytic bounds; needs n >= 2 so that ln(n-1) is
/// defined.
pub fn analytic_bounds(n: u64) -> Result<AnalyticBounds> {
    if n < 2 {
        return Err(Error::Shape(format!("analytic bounds need n >= 2, got {n}")));
    }
    let x = n as f64;
    let mu_an = mu_root_lattice(n);
    let inner = x + 4.0 * (x - 1.0).ln() + 7.0 - 4.0 * 2f64.ln() + 10.0 / x;
    Ok(AnalyticBounds {
        mu_an,
        log_bound: 0.5 * inner.sqrt(),
        plus_sqrt2: mu_an + std::f64::consts::SQRT_2,
    })
}

/// A bound value formatted the way the tables print it: four digits after
/// the decimal point.
pub fn four_digits(x: f64) -> String {
    format!("{x:.4}")
}

/// The chain basis of L(Z_m): the tridiagonal columns (1, -2, 1) extended by
/// the zero-sum row. Valid for every m >= 2; its columns are minimal vectors
/// only for m >= 5.
pub fn chain_basis(m: u64) -> Result<LatticeBasis> {
    if m < 2 {
        return Err(Error::Shape(format!("chain basis needs modulus >= 2, got {m}")));
    }
    let group = FiniteAbelianGroup::new(vec![m])?;
    LatticeBasis::new(group, t_matrix(m).extend_zero_sum_row())
}

/// Gram of the first k chain-basis columns together with its determinant
/// evaluated twice: by the closed form and by Bareiss elimination.
#[derive(Debug, Clone)]
pub struct ClosedFormGram {
    pub gram: IntMatrix,
    pub det_closed: BigInt,
    pub det_bareiss: BigInt,
}

fn closed_minor_det(n: usize, k: usize) -> BigInt {
    if k == n {
        BigInt::from((n + 1) as u64).pow(3)
    } else {
        let k = k as u64;
        BigInt::from(k + 1) * BigInt::from(k + 2).pow(2) * BigInt::from(k + 3) / BigInt::from(12)
    }
}

/// Builds the Gram of the first k columns of the chain basis in ambient
/// dimension n, checks it against the predicted banded shape (6 on the
/// diagonal, -4 beside it, 1 two off, plus wraparound corner terms when
/// k = n), and evaluates the determinant both ways.
pub fn closed_form_grams(n: usize, k: usize) -> Result<ClosedFormGram> {
    if n < 2 || k < 1 || k > n {
        return Err(Error::Shape(format!(
            "closed-form Gram needs 1 <= k <= n and n >= 2, got n={n} k={k}"
        )));
    }
    let b = t_matrix((n + 1) as u64)
        .extend_zero_sum_row()
        .leading_columns(k);
    let gram = b.gram();
    let mut predicted = IntMatrix::from_fn(k, k, |i, j| match i.abs_diff(j) {
        0 => 6,
        1 => -4,
        2 => 1,
        _ => 0,
    });
    if k == n {
        let corner = |m: &IntMatrix, i: usize, j: usize| m.get(i, j) + BigInt::one();
        let c = corner(&predicted, 0, n - 1);
        predicted.set(0, n - 1, c);
        let c = corner(&predicted, n - 1, 0);
        predicted.set(n - 1, 0, c);
    }
    if gram != predicted {
        return Err(Error::VerifyFailed(format!(
            "chain Gram (n={n}, k={k}) does not match the banded prediction"
        )));
    }
    let det_bareiss = gram.bareiss_det()?;
    Ok(ClosedFormGram { gram, det_closed: closed_minor_det(n, k), det_bareiss })
}

/// Exact trace of the recursive covering bound.
#[derive(Debug, Clone)]
pub struct RecursiveBoundTrace {
    /// v_sq[k-1] is the Gram determinant of the first k basis columns.
    pub v_sq: Vec<BigInt>,
    /// r_sq[k-1] is the k-th squared bound; the last entry bounds mu(G)^2.
    pub r_sq: Vec<Rational>,
}

/// Runs the recursion r_{k+1}^2 = r_k^2 + V_{k+1}^2 / (4 V_k^2) over the
/// basis columns in their given order. The first term r_1^2 is supplied by
/// the caller (squared length of the first column over 4).
pub fn recursive_bound(basis: &LatticeBasis, r1_sq: Rational) -> Result<RecursiveBoundTrace> {
    let a = basis.matrix();
    let n = a.cols();
    let mut v_sq = Vec::with_capacity(n);
    for k in 1..=n {
        let det = a.leading_columns(k).gram().bareiss_det()?;
        if det.is_zero() {
            return Err(Error::Shape(format!(
                "leading {k}-column block of the basis is degenerate"
            )));
        }
        v_sq.push(det);
    }
    let mut r_sq = vec![r1_sq];
    for k in 1..n {
        let prev = r_sq[k - 1].clone();
        let term = Rational::new(v_sq[k].clone(), BigInt::from(4) * &v_sq[k - 1]);
        r_sq.push(prev + term);
    }
    Ok(RecursiveBoundTrace { v_sq, r_sq })
}

/// The recursive bound specialized to the chain basis, using the closed-form
/// minor determinants instead of Bareiss elimination; O(n) exact rational
/// work, which keeps the large table rows affordable.
pub fn cyclic_recursive_sq(n: u64) -> Rational {
    let nn = n as usize;
    let mut prev = closed_minor_det(nn, 1);
    let mut r = Rational::new(prev.clone(), BigInt::from(4));
    for k in 2..=nn {
        let cur = closed_minor_det(nn, k);
        r += Rational::new(cur.clone(), BigInt::from(4) * &prev);
        prev = cur;
    }
    r
}

/// One table row.
#[derive(Debug, Clone)]
pub struct CoveringReport {
    pub n: u64,
    pub mu_an: f64,
    pub log_bound: f64,
    pub plus_sqrt2: f64,
    /// Exact square of the recursive bound; skipped above the cap.
    pub recursive_sq: Option<Rational>,
    /// Filled by the estimator command, never by the table.
    pub deep_hole_estimate: Option<f64>,
}

/// Bounds for each requested dimension. The recursive column is computed
/// only for n <= recursive_cap.
pub fn bounds_table(ns: &[u64], recursive_cap: u64) -> Result<Vec<CoveringReport>> {
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let b = analytic_bounds(n)?;
        let recursive_sq = (n <= recursive_cap).then(|| cyclic_recursive_sq(n));
        out.push(CoveringReport {
            n,
            mu_an: b.mu_an,
            log_bound: b.log_bound,
            plus_sqrt2: b.plus_sqrt2,
            recursive_sq,
            deep_hole_estimate: None,
        });
    }
    Ok(out)
}

/// Nearest integer to a rational, halves going up.
pub(crate) fn round_rational(c: &Rational) -> BigInt {
    (c + Rational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer()
}
