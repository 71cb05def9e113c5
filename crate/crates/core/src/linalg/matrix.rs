use serde::{Deserialize, Deserializer, Serialize};

use super::{inner_product, GVector};
use crate::error::{Error, Result};
use crate::fields::{GaussianRational, Rational};

/// A square matrix over the Gaussian rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GMatrix {
    rows: Vec<Vec<GaussianRational>>,
}

impl GMatrix {
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix must be square and nonempty"));
        }
        Ok(GMatrix { rows })
    }

    pub fn zero(n: usize) -> Self {
        GMatrix {
            rows: vec![vec![GaussianRational::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = GaussianRational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<GaussianRational>] {
        &self.rows
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GaussianRational)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, z)| (i, j, z)))
    }

    fn zip_with(
        &self,
        other: &GMatrix,
        f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
    ) -> Result<GMatrix> {
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
        Ok(GMatrix { rows })
    }

    pub fn add(&self, other: &GMatrix) -> Result<GMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GMatrix) -> Result<GMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &GMatrix) -> Result<GMatrix> {
        let n = self.dim();
        if n != other.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: {} vs {}",
                n,
                other.dim()
            )));
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(GMatrix { rows })
    }

    pub fn scale(&self, k: &GaussianRational) -> GMatrix {
        GMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|z| z * k).collect())
                .collect(),
        }
    }

    pub fn adjoint(&self) -> GMatrix {
        let n = self.dim();
        GMatrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| self.rows[j][i].conj()).collect())
                .collect(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(GaussianRational::is_zero)
    }

    pub fn trace(&self) -> GaussianRational {
        (0..self.dim()).map(|i| self.rows[i][i].clone()).sum()
    }

    /// Gauss–Jordan inverse. Fails with a degenerate-input error when singular.
    pub fn inverse(&self) -> Result<GMatrix> {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut inv = GMatrix::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::degenerate("singular matrix"))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].inverse()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &p;
                inv[col][j] = &inv[col][j] * &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
        Ok(GMatrix { rows: inv })
    }
}

impl std::fmt::Debug for GMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

impl<'de> Deserialize<'de> for GMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<GaussianRational>>::deserialize(d)?;
        GMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Cayley transform `U = (I - iH)(I + iH)^-1` of a Hermitian matrix.
///
/// `U` is exactly unitary and tends to `I` as `H` tends to 0. `I + iH` is
/// always invertible because the eigenvalues of `iH` are purely imaginary.
pub fn cayley_unitary(h: &GMatrix) -> Result<GMatrix> {
    if !h.is_hermitian() {
        return Err(Error::invalid("Cayley transform needs a Hermitian matrix"));
    }
    let n = h.dim();
    let ih = h.scale(&GaussianRational::i());
    let id = GMatrix::identity(n);
    id.sub(&ih)?.mul(&id.add(&ih)?.inverse()?)
}

/// The rank-1 projector `v v† / <v, v>`, exactly rational.
pub fn projector_of(v: &GVector) -> Result<GMatrix> {
    let norm = v.norm_sqr();
    if norm.is_zero() {
        return Err(Error::invalid("projector of the zero vector"));
    }
    let inv = GaussianRational::real(norm.recip()?);
    let e = v.entries();
    let rows = e
        .iter()
        .map(|a| e.iter().map(|b| &(a * &b.conj()) * &inv).collect())
        .collect();
    Ok(GMatrix { rows })
}

/// `Tr((A - B)(A - B)†)`, the squared Frobenius distance.
pub fn frob_dist2(a: &GMatrix, b: &GMatrix) -> Result<Rational> {
    Ok(a.sub(b)?
        .rows
        .iter()
        .flatten()
        .map(GaussianRational::norm_sqr)
        .sum())
}

/// Squared Frobenius distance between the normalized projectors of two rays,
/// `2(1 - |<u,v>|^2 / (<u,u><v,v>))`.
pub fn ray_dist2(u: &GVector, v: &GVector) -> Result<Rational> {
    let ip = inner_product(u, v)?;
    let overlap = ip.norm_sqr() / (u.norm_sqr() * v.norm_sqr());
    Ok(Rational::from(2) * (Rational::one() - overlap))
}
