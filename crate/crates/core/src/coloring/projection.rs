use serde::{Deserialize, Deserializer, Serialize};

use super::TruthValue;
use crate::error::{Error, Result};
use crate::fields::{GaussianRational, Rational};
use crate::linalg::GMatrix;

/// A projection written as `N·M` with `M` a rational Hermitian matrix and
/// `N > 0` a scalar. The idempotency condition `(N·M)^2 = N·M` is stored as
/// the rational `c` with `M^2 = c·M`, so `N = 1/c`.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionRep {
    matrix: GMatrix,
    #[serde(skip)]
    c: Rational,
}

impl ProjectionRep {
    pub fn new(matrix: GMatrix) -> Result<Self> {
        if !matrix.is_hermitian() {
            return Err(Error::invalid("projection matrix must be Hermitian"));
        }
        let (i, j, m_ij) = matrix
            .entries()
            .find(|(_, _, z)| !z.is_zero())
            .ok_or_else(|| Error::invalid("projection matrix must be nonzero"))?;
        let sq = matrix.mul(&matrix)?;
        let c = sq.get(i, j) / m_ij;
        if !c.im.is_zero() || !c.re.is_positive() || sq != matrix.scale(&c) {
            return Err(Error::invalid(
                "matrix is not a positive multiple of a projection",
            ));
        }
        Ok(ProjectionRep { matrix, c: c.re })
    }

    pub fn matrix(&self) -> &GMatrix {
        &self.matrix
    }

    /// The normalizing scalar `N`.
    pub fn scale(&self) -> Rational {
        self.c.recip().expect("c > 0")
    }

    /// The projection itself, `N·M`.
    pub fn projection(&self) -> GMatrix {
        self.matrix.scale(&GaussianRational::real(self.scale()))
    }

    pub fn rank(&self) -> usize {
        let t = self.projection().trace().re;
        t.numer().try_into().expect("rank fits in usize")
    }

    /// Real parts of every entry followed by imaginary parts of off-diagonal
    /// entries, each tagged with its position; `(0, 0, false)` is `a11`.
    fn components(m: &GMatrix) -> Vec<(usize, usize, bool, &Rational)> {
        let mut out = Vec::new();
        for (i, j, z) in m.entries() {
            out.push((i, j, false, &z.re));
            if i != j {
                out.push((i, j, true, &z.im));
            }
        }
        out
    }

    /// Exponent `s` such that `3^s·M` satisfies the trueness conditions
    /// literally, if any rational rescaling does.
    ///
    /// Rescaling shifts every valuation equally, so such a scale exists iff
    /// all components are nonzero and `v3(a11) <= v3(x) - 1` for every other
    /// component `x`. The shift then puts `a11` at valuation exactly -2.
    pub fn witness_shift(&self) -> Option<i64> {
        let comps = Self::components(&self.matrix);
        let vals: Option<Vec<i64>> = comps.iter().map(|c| c.3.v3()).collect();
        let vals = vals?;
        let a11 = vals[0];
        vals[1..].iter().all(|&v| a11 < v).then_some(-2 - a11)
    }

    /// `3^s·M` for the witness shift `s`, when the projection is TRUE.
    pub fn witness_matrix(&self) -> Option<GMatrix> {
        self.witness_shift().map(|s| {
            self.matrix
                .scale(&GaussianRational::real(Rational::pow3(s)))
        })
    }
}

impl std::fmt::Debug for ProjectionRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ProjectionRep({:?} / {:?})", self.matrix, self.c)
    }
}

impl<'de> Deserialize<'de> for ProjectionRep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Wrapped { matrix: GMatrix },
            Bare(GMatrix),
        }
        let (Repr::Wrapped { matrix } | Repr::Bare(matrix)) = Repr::deserialize(d)?;
        ProjectionRep::new(matrix).map_err(serde::de::Error::custom)
    }
}

/// TRUE iff some rational rescaling of the stored matrix has all real parts
/// and off-diagonal imaginary parts nonzero, with `a11` the only component
/// whose lowest-terms denominator is divisible by 9. Diagonal imaginary
/// parts of a Hermitian matrix are forced to zero and are exempt.
pub fn classify_projection_matrix(rep: &ProjectionRep) -> TruthValue {
    if rep.witness_shift().is_some() {
        TruthValue::True
    } else {
        TruthValue::Undetermined
    }
}

/// Values for a decomposition of the identity into mutually orthogonal
/// projections. Fails unless the members are pairwise orthogonal and their
/// normalized projections sum exactly to `I`.
pub fn classify_decomposition(projs: &[ProjectionRep]) -> Result<Vec<TruthValue>> {
    let n = projs
        .first()
        .ok_or_else(|| Error::invalid("empty decomposition"))?
        .matrix
        .dim();
    if projs.iter().any(|p| p.matrix.dim() != n) {
        return Err(Error::invalid("projections of differing dimension"));
    }
    for (i, p) in projs.iter().enumerate() {
        for q in &projs[i + 1..] {
            if !p.matrix.mul(&q.matrix)?.is_zero() {
                return Err(Error::invalid("projections are not mutually orthogonal"));
            }
        }
    }
    let mut sum = GMatrix::zero(n);
    for p in projs {
        sum = sum.add(&p.projection())?;
    }
    if sum != GMatrix::identity(n) {
        return Err(Error::invalid("projections do not sum to the identity"));
    }
    let raw: Vec<TruthValue> = projs.iter().map(classify_projection_matrix).collect();
    if !raw.contains(&TruthValue::True) {
        return Ok(raw);
    }
    debug_assert_eq!(raw.iter().filter(|&&t| t == TruthValue::True).count(), 1);
    Ok(raw
        .into_iter()
        .map(|t| {
            if t == TruthValue::True {
                t
            } else {
                TruthValue::False
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{projector_of, GVector};

    fn vec_of(coords: &[&str]) -> GVector {
        let c: Vec<Rational> = coords.iter().map(|s| s.parse().unwrap()).collect();
        GVector::from_coords(&c).unwrap()
    }

    fn true_rank_one() -> ProjectionRep {
        // v v† for a TRUE ray: a11 = |v1|^2 = 1/9 + 1/4 has valuation -2.
        let v = vec_of(&["1/3", "1/2", "1/2", "1/2", "1/2", "1/4"]);
        let e = v.entries();
        let rows = e
            .iter()
            .map(|a| e.iter().map(|b| a * &b.conj()).collect())
            .collect();
        ProjectionRep::new(GMatrix::from_rows(rows).unwrap()).unwrap()
    }

    /// Literal test on `3^k·M`: reduce every component and inspect its
    /// denominator for a factor of 9.
    fn literal_true(rep: &ProjectionRep, k: i64) -> bool {
        let t = GaussianRational::real(Rational::pow3(k));
        let m = rep.matrix().scale(&t);
        let nine = num_bigint::BigInt::from(9);
        let comps = ProjectionRep::components(&m);
        comps.iter().all(|c| !c.3.is_zero())
            && comps.iter().all(|c| {
                let div9 = (c.3.denom() % &nine) == num_bigint::BigInt::from(0);
                div9 == (c.0 == 0 && c.1 == 0 && !c.2)
            })
    }

    #[test]
    fn true_rank_one_rep() {
        let rep = true_rank_one();
        assert_eq!(rep.rank(), 1);
        assert_eq!(rep.witness_shift(), Some(0));
        assert_eq!(classify_projection_matrix(&rep), TruthValue::True);
        assert!(literal_true(&rep, 0));
    }

    #[test]
    fn shift_search_agrees_on_rescaled_reps() {
        let base = true_rank_one();
        for k in -3..=3 {
            let m = base
                .matrix()
                .scale(&GaussianRational::real(Rational::pow3(k)));
            let rep = ProjectionRep::new(m).unwrap();
            let s = rep.witness_shift().unwrap();
            assert_eq!(s, -k);
            assert!(literal_true(&rep, s));
        }
    }

    #[test]
    fn zero_entries_are_not_true() {
        let rows = vec![
            vec![
                GaussianRational::one(),
                GaussianRational::zero(),
                GaussianRational::zero(),
            ],
            vec![
                GaussianRational::zero(),
                GaussianRational::one(),
                GaussianRational::zero(),
            ],
            vec![
                GaussianRational::zero(),
                GaussianRational::zero(),
                GaussianRational::zero(),
            ],
        ];
        let rep = ProjectionRep::new(GMatrix::from_rows(rows).unwrap()).unwrap();
        assert_eq!(rep.rank(), 2);
        assert_eq!(classify_projection_matrix(&rep), TruthValue::Undetermined);
    }

    #[test]
    fn rejects_non_projections() {
        let m = GMatrix::from_rows(vec![
            vec![GaussianRational::one(), GaussianRational::zero()],
            vec![
                GaussianRational::zero(),
                GaussianRational::real(Rational::from(2)),
            ],
        ])
        .unwrap();
        assert!(ProjectionRep::new(m).is_err());
        assert!(ProjectionRep::new(GMatrix::zero(2)).is_err());
        assert!(ProjectionRep::new(
            GMatrix::identity(2).scale(&GaussianRational::real(Rational::from(-1)))
        )
        .is_err());
    }

    #[test]
    fn true_and_complement_decomposition() {
        let p = true_rank_one();
        let q = ProjectionRep::new(GMatrix::identity(3).sub(&p.projection()).unwrap()).unwrap();
        assert_eq!(q.rank(), 2);
        let vals = classify_decomposition(&[p.clone(), q.clone()]).unwrap();
        assert_eq!(vals, vec![TruthValue::True, TruthValue::False]);
        assert!(classify_decomposition(&[p.clone(), p.clone()]).is_err());
        assert!(classify_decomposition(&[p]).is_err());
    }

    #[test]
    fn standard_basis_decomposition_undetermined() {
        let reps: Vec<ProjectionRep> = (0..3)
            .map(|k| ProjectionRep::new(projector_of(&GVector::basis(3, k)).unwrap()).unwrap())
            .collect();
        let vals = classify_decomposition(&reps).unwrap();
        assert!(vals.iter().all(|&t| t == TruthValue::Undetermined));
    }

    #[test]
    fn true_pair_trace_has_low_valuation() {
        let p = true_rank_one();
        let v = vec_of(&["2/3", "1/5", "1/5", "1/5", "1/7", "1/5"]);
        let e = v.entries();
        let rows = e
            .iter()
            .map(|a| e.iter().map(|b| a * &b.conj()).collect())
            .collect();
        let q = ProjectionRep::new(GMatrix::from_rows(rows).unwrap()).unwrap();
        assert_eq!(classify_projection_matrix(&q), TruthValue::True);
        let tr = p
            .witness_matrix()
            .unwrap()
            .mul(&q.witness_matrix().unwrap())
            .unwrap()
            .trace();
        assert!(tr.re.v3().unwrap() <= -4);
    }
}
