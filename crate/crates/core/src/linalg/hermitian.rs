use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::fields::{QuadComplex, QuadRational, Rational};

/// A Hermitian matrix with entries in Q(√2) + iQ(√2), row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct QuadHermitian {
    rows: Vec<Vec<QuadComplex>>,
}

impl QuadHermitian {
    pub fn from_rows(rows: Vec<Vec<QuadComplex>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix must be square and nonempty"));
        }
        for i in 0..n {
            for j in i..n {
                if rows[i][j] != rows[j][i].conj() {
                    return Err(Error::invalid(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        Ok(QuadHermitian { rows })
    }

    pub fn zero(n: usize) -> Self {
        QuadHermitian {
            rows: vec![vec![QuadComplex::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = QuadComplex::one();
        }
        m
    }

    /// `value · E11`: zero everywhere except `value` at entry (1,1).
    pub fn e11(n: usize, value: QuadRational) -> Self {
        let mut m = Self::zero(n);
        m.rows[0][0] = QuadComplex::real(value);
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadComplex {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<QuadComplex>] {
        &self.rows
    }

    /// The real diagonal entry at `(i, i)`.
    pub fn diag(&self, i: usize) -> &QuadRational {
        &self.rows[i][i].re
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&QuadComplex, &QuadComplex) -> QuadComplex,
    ) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(QuadHermitian { rows })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Multiplication by a real scalar keeps the matrix Hermitian.
    pub fn scale(&self, k: &QuadRational) -> Self {
        QuadHermitian {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|z| z.scale(k)).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(QuadComplex::is_zero)
    }

    /// `Tr((A - B)(A - B)†)` in Q(√2).
    pub fn frob_dist2(&self, other: &Self) -> Result<QuadRational> {
        Ok(self
            .sub(other)?
            .rows
            .iter()
            .flatten()
            .map(QuadComplex::norm_sqr)
            .sum())
    }

    /// Entries as `(re, im)` doubles, row-major.
    pub fn to_f64(&self) -> Vec<Vec<(f64, f64)>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(QuadComplex::to_f64).collect())
            .collect()
    }

    /// Exact value of a Hermitian matrix of doubles given as `(re, im)` pairs.
    /// The strict lower triangle is taken from the upper one.
    pub fn from_f64(m: &[Vec<(f64, f64)>]) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix must be square"));
        }
        let mut rows = vec![vec![QuadComplex::zero(); n]; n];
        for i in 0..n {
            let re = Rational::from_f64_exact(m[i][i].0)?;
            rows[i][i] = QuadComplex::from(re);
            for j in i + 1..n {
                let z = QuadComplex::new(
                    Rational::from_f64_exact(m[i][j].0)?.into(),
                    Rational::from_f64_exact(m[i][j].1)?.into(),
                );
                rows[j][i] = z.conj();
                rows[i][j] = z;
            }
        }
        Ok(QuadHermitian { rows })
    }
}

impl std::fmt::Debug for QuadHermitian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

impl<'de> Deserialize<'de> for QuadHermitian {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<QuadComplex>>::deserialize(d)?;
        QuadHermitian::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Exact positive-semidefiniteness test by pivoted LDL* elimination.
///
/// At each step a negative diagonal entry, or a zero diagonal entry whose
/// row is not entirely zero, refutes PSD. Otherwise a positive pivot is
/// eliminated and the test recurses on its Schur complement.
pub fn psd_check(a: &QuadHermitian) -> bool {
    let mut m: Vec<Vec<QuadComplex>> = a.rows.clone();
    let mut active: Vec<usize> = (0..a.dim()).collect();
    while !active.is_empty() {
        let mut pivot = None;
        for &i in &active {
            match m[i][i].re.signum() {
                Ordering::Less => return false,
                Ordering::Equal => {
                    if active.iter().any(|&j| !m[i][j].is_zero()) {
                        return false;
                    }
                }
                Ordering::Greater => {
                    if pivot.is_none() {
                        pivot = Some(i);
                    }
                }
            }
        }
        let Some(p) = pivot else {
            // Every remaining row vanished.
            return true;
        };
        active.retain(|&i| i != p);
        let inv = m[p][p].re.inverse().expect("positive pivot");
        for &i in &active {
            if m[i][p].is_zero() {
                continue;
            }
            let f = m[i][p].scale(&inv);
            for &j in &active {
                let delta = &f * &m[p][j];
                m[i][j] = &m[i][j] - &delta;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr(a: &str, b: &str) -> QuadRational {
        QuadRational::new(a.parse().unwrap(), b.parse().unwrap())
    }

    fn diag(d: &[QuadRational]) -> QuadHermitian {
        let mut m = QuadHermitian::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.rows[i][i] = QuadComplex::real(x.clone());
        }
        m
    }

    #[test]
    fn psd_examples() {
        assert!(psd_check(&QuadHermitian::identity(4)));
        assert!(!psd_check(&diag(&[qr("1", "0"), qr("-1", "0")])));
        assert!(psd_check(&diag(&[qr("1", "-1/2"), qr("1", "0")])));
        assert!(!psd_check(&diag(&[qr("1", "-1"), qr("1", "0")])));
        assert!(psd_check(&QuadHermitian::zero(3)));
    }

    #[test]
    fn zero_diagonal_forces_zero_row() {
        // [[0, 1], [1, 1]] has determinant -1.
        let one = QuadComplex::one();
        let m = QuadHermitian::from_rows(vec![
            vec![QuadComplex::zero(), one.clone()],
            vec![one.clone(), one],
        ])
        .unwrap();
        assert!(!psd_check(&m));
    }

    #[test]
    fn rank_one_is_psd_but_perturbed_is_not() {
        // [[1, 1], [1, 1]] is PSD; lowering a diagonal entry by any amount is not.
        let one = QuadComplex::one();
        let m = QuadHermitian::from_rows(vec![
            vec![one.clone(), one.clone()],
            vec![one.clone(), one.clone()],
        ])
        .unwrap();
        assert!(psd_check(&m));
        let eps = QuadHermitian::e11(2, qr("0", "1/1000"));
        assert!(!psd_check(&m.sub(&eps).unwrap()));
    }

    #[test]
    fn rejects_non_hermitian() {
        let i = QuadComplex::new(QuadRational::zero(), QuadRational::one());
        assert!(QuadHermitian::from_rows(vec![
            vec![i.clone(), QuadComplex::zero()],
            vec![QuadComplex::zero(), i]
        ])
        .is_err());
    }
}
