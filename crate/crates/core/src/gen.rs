//! Seeded random instances for tests, benchmarks and the `gen-*` commands.
//!
//! Every generator draws from a caller-supplied RNG; [`rng`] builds the
//! reproducible ChaCha stream used throughout.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::coloring::{ProjectionRep, TruthValue};
use crate::fields::{GaussianRational, QuadComplex, QuadRational, Rational};
use crate::linalg::{GMatrix, GVector, QuadHermitian};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which 3-adic shape a generated rational's denominator takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Denominator {
    /// Divisible by 3 with a numerator prime to 3.
    Div3,
    /// Prime to 3.
    Coprime3,
    Any,
}

/// A nonzero rational `p/q` with `q <= max_den` and `|p| <= q`.
pub fn rational<R: Rng>(rng: &mut R, max_den: u64, shape: Denominator) -> Rational {
    let max_den = max_den.max(3);
    let q = match shape {
        Denominator::Div3 => 3 * rng.random_range(1..=max_den / 3),
        Denominator::Coprime3 => loop {
            let q = rng.random_range(1..=max_den);
            if q % 3 != 0 {
                break q;
            }
        },
        Denominator::Any => rng.random_range(1..=max_den),
    };
    let p = loop {
        let p = rng.random_range(1..=q as i64);
        if shape != Denominator::Div3 || p % 3 != 0 {
            break if rng.random_bool(0.5) { -p } else { p };
        }
    };
    Rational::new(BigInt::from(p), BigInt::from(q)).expect("nonzero denominator")
}

/// A ray in C^n that classifies TRUE, every coordinate with denominator at
/// most `max_den`.
pub fn true_ray<R: Rng>(rng: &mut R, n: usize, max_den: u64) -> GVector {
    let coords: Vec<Rational> = (0..2 * n)
        .map(|k| {
            rational(
                rng,
                max_den,
                if k == 0 {
                    Denominator::Div3
                } else {
                    Denominator::Coprime3
                },
            )
        })
        .collect();
    GVector::from_coords(&coords).expect("nonzero coordinates")
}

/// A ray with arbitrary nonzero rational coordinates.
pub fn rational_ray<R: Rng>(rng: &mut R, n: usize, max_den: u64) -> GVector {
    let coords: Vec<Rational> = (0..2 * n)
        .map(|_| rational(rng, max_den, Denominator::Any))
        .collect();
    GVector::from_coords(&coords).expect("nonzero coordinates")
}

/// A unit vector of C^n drawn uniformly, as interleaved `(re, im)`.
pub fn haar_ray<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn cdot(u: &[f64], v: &[f64]) -> (f64, f64) {
    u.chunks(2)
        .zip(v.chunks(2))
        .fold((0.0, 0.0), |(re, im), (a, b)| {
            (
                re + a[0] * b[0] + a[1] * b[1],
                im + a[0] * b[1] - a[1] * b[0],
            )
        })
}

/// Columns of a Haar-random unitary: Gram–Schmidt, applied twice, on
/// Gaussian vectors.
pub fn haar_frame<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut legs: Vec<Vec<f64>> = Vec::with_capacity(n);
    while legs.len() < n {
        let mut v = haar_ray(rng, n);
        for _ in 0..2 {
            for u in &legs {
                let (re, im) = cdot(u, &v);
                for (k, c) in u.chunks(2).enumerate() {
                    v[2 * k] -= re * c[0] - im * c[1];
                    v[2 * k + 1] -= re * c[1] + im * c[0];
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            legs.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    legs
}

fn quad<R: Rng>(rng: &mut R, max_den: u64) -> QuadRational {
    let part = |rng: &mut R| {
        if rng.random_bool(0.3) {
            Rational::zero()
        } else {
            rational(rng, max_den, Denominator::Any)
        }
    };
    let rat = part(rng);
    QuadRational::new(rat, part(rng))
}

/// A Hermitian matrix with independent small Q(√2) entries.
pub fn quad_hermitian<R: Rng>(rng: &mut R, n: usize, max_den: u64) -> QuadHermitian {
    let mut rows = vec![vec![QuadComplex::zero(); n]; n];
    for i in 0..n {
        rows[i][i] = QuadComplex::real(quad(rng, max_den));
        for j in i + 1..n {
            let z = QuadComplex::new(quad(rng, max_den), quad(rng, max_den));
            rows[j][i] = z.conj();
            rows[i][j] = z;
        }
    }
    QuadHermitian::from_rows(rows).expect("Hermitian by construction")
}

/// A mix aimed at both sides of the PSD boundary: plain random Hermitian
/// matrices, Gram matrices `L·L*` of random rank, and Gram matrices shifted
/// down by a small multiple of the identity.
pub fn psd_test_matrix<R: Rng>(rng: &mut R, n: usize) -> QuadHermitian {
    match rng.random_range(0..3) {
        0 => quad_hermitian(rng, n, 12),
        mode => {
            let rank = rng.random_range(1..=n);
            let cols: Vec<Vec<QuadComplex>> = (0..rank)
                .map(|_| {
                    (0..n)
                        .map(|_| QuadComplex::new(quad(rng, 6), quad(rng, 6)))
                        .collect()
                })
                .collect();
            let mut rows = vec![vec![QuadComplex::zero(); n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    *e = cols.iter().map(|c| &c[i] * &c[j].conj()).sum();
                }
            }
            let gram = QuadHermitian::from_rows(rows).expect("Gram matrices are Hermitian");
            if mode == 1 {
                gram
            } else {
                let shift = QuadRational::rational(rational(rng, 64, Denominator::Any).abs());
                gram.sub(&QuadHermitian::identity(n).scale(&shift))
                    .expect("same dimension")
            }
        }
    }
}

type CMat = Vec<Vec<(f64, f64)>>;

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn gaussian_gram<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let x: CMat = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold((0.0, 0.0), |acc, k| {
                        let p = cmul(x[i][k], (x[j][k].0, -x[j][k].1));
                        (acc.0 + p.0, acc.1 + p.1)
                    })
                })
                .collect()
        })
        .collect()
}

/// Lower-triangular `L` with `L·L* = a`, for positive definite `a`.
fn cholesky(a: &CMat) -> CMat {
    let n = a.len();
    let mut l = vec![vec![(0.0, 0.0); n]; n];
    for j in 0..n {
        let d = a[j][j].0
            - (0..j)
                .map(|k| l[j][k].0 * l[j][k].0 + l[j][k].1 * l[j][k].1)
                .sum::<f64>();
        let d = d.sqrt();
        l[j][j] = (d, 0.0);
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                let p = cmul(l[i][k], (l[j][k].0, -l[j][k].1));
                s = (s.0 - p.0, s.1 - p.1);
            }
            l[i][j] = (s.0 / d, s.1 / d);
        }
    }
    l
}

/// Solves `L·x = b` by forward substitution.
fn forward(l: &CMat, b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut x: Vec<(f64, f64)> = Vec::with_capacity(b.len());
    for i in 0..b.len() {
        let mut s = b[i];
        for (k, xk) in x.iter().enumerate() {
            let p = cmul(l[i][k], *xk);
            s = (s.0 - p.0, s.1 - p.1);
        }
        let d = l[i][i].0;
        x.push((s.0 / d, s.1 / d));
    }
    x
}

/// `m` random positive definite elements of dimension `n` summing to the
/// identity up to rounding: Gaussian Gram matrices `G_i` whitened as
/// `L^-1 G_i L^-*` where `L·L* = sum G_i`.
pub fn povm<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<CMat> {
    let gs: Vec<CMat> = (0..m).map(|_| gaussian_gram(rng, n)).collect();
    let total: CMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    gs.iter()
                        .fold((0.0, 0.0), |a, g| (a.0 + g[i][j].0, a.1 + g[i][j].1))
                })
                .collect()
        })
        .collect();
    let l = cholesky(&total);
    gs.iter()
        .map(|g| {
            // L^-1 G, column by column, then (L^-1 (L^-1 G)*)* = L^-1 G L^-*.
            let half: Vec<Vec<(f64, f64)>> = (0..n)
                .map(|j| forward(&l, &(0..n).map(|i| g[i][j]).collect::<Vec<_>>()))
                .collect();
            let half_adj: Vec<Vec<(f64, f64)>> = (0..n)
                .map(|i| {
                    forward(
                        &l,
                        &(0..n)
                            .map(|j| (half[j][i].0, -half[j][i].1))
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            let mut out: CMat = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (half_adj[j][i].0, -half_adj[j][i].1))
                        .collect()
                })
                .collect();
            for i in 0..n {
                out[i][i].1 = 0.0;
                for j in i + 1..n {
                    let avg = (
                        (out[i][j].0 + out[j][i].0) / 2.0,
                        (out[i][j].1 - out[j][i].1) / 2.0,
                    );
                    out[i][j] = avg;
                    out[j][i] = (avg.0, -avg.1);
                }
            }
            out
        })
        .collect()
}

fn outer(v: &GVector) -> GMatrix {
    let e = v.entries();
    GMatrix::from_rows(
        e.iter()
            .map(|a| e.iter().map(|b| a * &b.conj()).collect())
            .collect(),
    )
    .expect("square")
}

/// A projection representative of rank 1 or `n - 1` with small rational
/// entries, rescaled by `3^k·u` for `|k| <= 2` and `u` a ratio of small
/// integers prime to 3, so that any certifying shift stays small.
pub fn projection_rep<R: Rng>(rng: &mut R, n: usize, rank: usize) -> ProjectionRep {
    let v = if rng.random_bool(0.5) {
        true_ray(rng, n, 30)
    } else {
        rational_ray(rng, n, 30)
    };
    let m = if rank == 1 {
        outer(&v)
    } else {
        assert_eq!(rank, n - 1, "ranks 1 and n-1 are supported");
        GMatrix::identity(n)
            .scale(&GaussianRational::real(v.norm_sqr()))
            .sub(&outer(&v))
            .expect("same dimension")
    };
    const PRIME_TO_3: [i64; 6] = [1, 2, 4, 5, 7, 8];
    let pick = |rng: &mut R| PRIME_TO_3[rng.random_range(0..PRIME_TO_3.len())];
    let unit = Rational::frac(pick(rng), pick(rng));
    let scale = &unit * &Rational::pow3(rng.random_range(-2..=2));
    ProjectionRep::new(m.scale(&GaussianRational::real(scale)))
        .expect("positive multiple of a projection")
}

/// A rank-1 projection representative that classifies TRUE.
pub fn true_projection_rep<R: Rng>(rng: &mut R, n: usize, max_den: u64) -> ProjectionRep {
    loop {
        let rep =
            ProjectionRep::new(outer(&true_ray(rng, n, max_den))).expect("rank-1 Gram matrix");
        if crate::coloring::classify_projection_matrix(&rep) == TruthValue::True {
            return rep;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::classify_ray;

    #[test]
    fn true_rays_classify_true() {
        let mut r = rng(1);
        for _ in 0..200 {
            let v = true_ray(&mut r, 3, 10_000);
            assert_eq!(classify_ray(&v), TruthValue::True);
            assert!(v
                .entries()
                .iter()
                .all(|z| z.re.denom() <= &BigInt::from(10_000)
                    && z.im.denom() <= &BigInt::from(10_000)));
        }
    }

    #[test]
    fn haar_frame_is_orthonormal() {
        let mut r = rng(2);
        let f = haar_frame(&mut r, 4);
        for (i, u) in f.iter().enumerate() {
            for (j, v) in f.iter().enumerate() {
                let (re, im) = cdot(u, v);
                assert!((re - f64::from(u8::from(i == j))).abs() < 1e-12 && im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn povm_sums_to_identity() {
        let mut r = rng(3);
        let els = povm(&mut r, 3, 4);
        for i in 0..3 {
            for j in 0..3 {
                let s = els
                    .iter()
                    .fold((0.0, 0.0), |a, e| (a.0 + e[i][j].0, a.1 + e[i][j].1));
                assert!((s.0 - f64::from(u8::from(i == j))).abs() < 1e-10 && s.1.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn same_seed_same_stream() {
        assert_eq!(true_ray(&mut rng(9), 3, 100), true_ray(&mut rng(9), 3, 100));
    }

    #[test]
    fn projection_reps_have_requested_rank() {
        let mut r = rng(4);
        for rank in [1, 2] {
            let rep = projection_rep(&mut r, 3, rank);
            assert_eq!(rep.rank(), rank);
        }
    }
}
