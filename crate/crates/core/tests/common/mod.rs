//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use kscolor::coloring::ProjectionRep;
use kscolor::kscheck::RaySet;
use kscolor::{GMatrix, GaussianRational, QuadHermitian, Rational};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::Zero;

/// Smallest eigenvalue of a Hermitian matrix, via the real symmetric
/// embedding `[[A, -B], [B, A]]` of `A + iB`, whose spectrum is that of
/// the matrix with every eigenvalue doubled.
pub fn min_eigenvalue(m: &QuadHermitian) -> f64 {
    let f = m.to_f64();
    let n = f.len();
    let big = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (re, im) = f[r % n][c % n];
        match (r < n, c < n) {
            (true, true) | (false, false) => re,
            (true, false) => -im,
            (false, true) => im,
        }
    });
    big.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn den_divisible(x: &Rational, d: u32) -> bool {
    (x.denom() % BigInt::from(d)).is_zero()
}

/// The literal divisibility reading of matrix trueness for `3^k·M`:
/// every real part and every off-diagonal imaginary part nonzero, the
/// (1,1) denominator divisible by 9 and no other denominator divisible by 9.
pub fn literal_true_at(m: &GMatrix, k: i64) -> bool {
    let s = GaussianRational::real(Rational::pow3(k));
    let m = m.scale(&s);
    let n = m.dim();
    let mut comps = Vec::new();
    for i in 0..n {
        for j in 0..n {
            comps.push(m.get(i, j).re.clone());
            if i != j {
                comps.push(m.get(i, j).im.clone());
            }
        }
    }
    if comps.iter().any(Rational::is_zero) {
        return false;
    }
    den_divisible(&comps[0], 9) && comps[1..].iter().all(|x| !den_divisible(x, 9))
}

/// Whether any shift `3^k`, `k` in `[-10, 10]`, passes [`literal_true_at`].
pub fn shift_oracle(rep: &ProjectionRep) -> Option<i64> {
    (-10..=10).find(|&k| literal_true_at(rep.matrix(), k))
}

/// Exact pairwise orthogonality and all size-`dimension` orthogonal sets,
/// found by scanning every subset of that size.
#[allow(clippy::needless_range_loop)]
pub fn brute_structure(rs: &RaySet) -> (Vec<u64>, Vec<u64>) {
    let k = rs.len();
    assert!(k <= 64);
    let mut adj = vec![0u64; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && rs.rays()[i].inner(&rs.rays()[j]).is_zero() {
                adj[i] |= 1 << j;
            }
        }
    }
    let n = rs.dimension();
    let mut contexts = Vec::new();
    let mut subset: Vec<usize> = (0..n).collect();
    if n <= k {
        loop {
            if subset
                .iter()
                .all(|&a| subset.iter().all(|&b| a == b || adj[a] >> b & 1 == 1))
            {
                contexts.push(subset.iter().fold(0u64, |m, &i| m | 1 << i));
            }
            let Some(p) = (0..n).rev().find(|&p| subset[p] < k - n + p) else {
                break;
            };
            subset[p] += 1;
            for q in p + 1..n {
                subset[q] = subset[q - 1] + 1;
            }
        }
    }
    (adj, contexts)
}

/// Checks a 0/1 assignment against the ray set itself.
pub fn independent_valid(rs: &RaySet, assignment: &[u8]) -> bool {
    let (adj, contexts) = brute_structure(rs);
    let mask = assignment
        .iter()
        .enumerate()
        .fold(0u64, |m, (i, &a)| m | u64::from(a) << i);
    mask_valid(mask, &adj, &contexts)
}

fn mask_valid(mask: u64, adj: &[u64], contexts: &[u64]) -> bool {
    (0..adj.len()).all(|i| mask >> i & 1 == 0 || mask & adj[i] == 0)
        && contexts.iter().all(|c| (mask & c).count_ones() == 1)
}

/// Exhaustive search over all `2^k` assignments; the first valid one.
pub fn brute_force_coloring(rs: &RaySet) -> Option<u64> {
    let k = rs.len();
    assert!(k <= 24, "brute force is for small instances");
    let (adj, contexts) = brute_structure(rs);
    (0..1u64 << k).find(|&m| mask_valid(m, &adj, &contexts))
}
