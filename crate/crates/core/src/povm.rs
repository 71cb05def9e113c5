//! The truth function on positive operators.
//!
//! An operator is TRUE when the √2-coefficient of its (1,1) entry is
//! strictly positive. A POVM is *suitable* when exactly one of its elements
//! is TRUE; the others are then FALSE.

use serde::{Serialize, Serializer};

use crate::coloring::TruthValue;
use crate::error::{Error, Result};
use crate::fields::{rationalize, rationalize_exact, QuadComplex, QuadRational, Rational};
use crate::linalg::{psd_check, QuadHermitian};
use num_bigint::BigInt;

/// A positive semidefinite Hermitian matrix over Q(√2) + iQ(√2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PovmElement(QuadHermitian);

impl PovmElement {
    pub fn new(m: QuadHermitian) -> Result<Self> {
        if !psd_check(&m) {
            return Err(Error::invalid("POVM element is not positive semidefinite"));
        }
        Ok(PovmElement(m))
    }

    pub fn matrix(&self) -> &QuadHermitian {
        &self.0
    }

    /// The (1,1) entry, which is real.
    pub fn a11(&self) -> &QuadRational {
        self.0.diag(0)
    }
}

/// Elements summing exactly to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PovmDecomposition {
    elements: Vec<PovmElement>,
}

impl PovmDecomposition {
    pub fn new(elements: Vec<PovmElement>) -> Result<Self> {
        let n = elements
            .first()
            .ok_or_else(|| Error::invalid("empty decomposition"))?
            .0
            .dim();
        let mut sum = QuadHermitian::zero(n);
        for e in &elements {
            sum = sum.add(&e.0)?;
        }
        if sum != QuadHermitian::identity(n) {
            return Err(Error::invalid("elements do not sum to the identity"));
        }
        Ok(PovmDecomposition { elements })
    }

    /// Validates PSD-ness of each matrix and the exact identity sum.
    pub fn from_matrices(ms: Vec<QuadHermitian>) -> Result<Self> {
        Self::new(
            ms.into_iter()
                .map(PovmElement::new)
                .collect::<Result<_>>()?,
        )
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].0.dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn matrices(&self) -> Vec<QuadHermitian> {
        self.elements.iter().map(|e| e.0.clone()).collect()
    }
}

impl Serialize for PovmDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::io::DecompositionFile::new(self.matrices()).serialize(s)
    }
}

/// TRUE iff the √2-coefficient of `a11` is positive. A non-TRUE element is
/// only FALSE relative to a suitable decomposition containing it, so it is
/// reported UNDETERMINED here.
pub fn classify_element(a: &PovmElement) -> TruthValue {
    if a.a11().sqrt2.is_positive() {
        TruthValue::True
    } else {
        TruthValue::Undetermined
    }
}

pub fn is_suitable(d: &PovmDecomposition) -> bool {
    d.elements
        .iter()
        .filter(|e| classify_element(e) == TruthValue::True)
        .count()
        == 1
}

/// Values of every element: on a suitable decomposition one TRUE and the
/// rest FALSE, otherwise the raw element classifications.
pub fn classify_in_decomposition(d: &PovmDecomposition) -> Vec<TruthValue> {
    let raw: Vec<TruthValue> = d.elements.iter().map(classify_element).collect();
    if !is_suitable(d) {
        return raw;
    }
    raw.into_iter()
        .map(|t| {
            if t == TruthValue::True {
                t
            } else {
                TruthValue::False
            }
        })
        .collect()
}

/// `sum_i p(A_i)` over a suitable decomposition. Always 1.
pub fn verify_eq2(d: &PovmDecomposition) -> Result<u32> {
    if !is_suitable(d) {
        return Err(Error::NotApplicable("decomposition is not suitable".into()));
    }
    Ok(classify_in_decomposition(d)
        .into_iter()
        .filter_map(TruthValue::p)
        .sum())
}

/// Outcome of [`classify_with_witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PovmVerdict {
    True,
    False {
        witness: PovmDecomposition,
    },
    /// No suitable decomposition contains the element.
    UndeterminedNoWitness,
}

impl Serialize for PovmVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            value: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            witness: Option<&'a PovmDecomposition>,
        }
        let out = match self {
            PovmVerdict::True => Out {
                value: "TRUE",
                witness: None,
            },
            PovmVerdict::False { witness } => Out {
                value: "FALSE",
                witness: Some(witness),
            },
            PovmVerdict::UndeterminedNoWitness => Out {
                value: "UNDETERMINED_NO_WITNESS",
                witness: None,
            },
        };
        out.serialize(s)
    }
}

const WITNESS_HALVINGS: u32 = 64;

/// Classifies an element and, when it is not TRUE, looks for a suitable
/// decomposition containing it.
///
/// With `C = I - A`: if `a11` has a negative √2-part, `{A, C}` is suitable.
/// Otherwise `{A, δ√2·E11, C - δ√2·E11}` is tried for shrinking `δ`, and
/// when `C` has no slack at (1,1), `{A, (√2/2)·C, (1 - √2/2)·C}`. When
/// `C` is not PSD, or `C11 = 0`, every complement element has a zero (1,1)
/// entry and none can be TRUE.
pub fn classify_with_witness(a: &PovmElement) -> PovmVerdict {
    if classify_element(a) == TruthValue::True {
        return PovmVerdict::True;
    }
    let n = a.0.dim();
    let c = QuadHermitian::identity(n)
        .sub(&a.0)
        .expect("same dimension");
    if !psd_check(&c) || c.diag(0).is_zero() {
        return PovmVerdict::UndeterminedNoWitness;
    }
    let witness = |ms: Vec<QuadHermitian>| {
        let mut all = vec![a.0.clone()];
        all.extend(ms);
        PovmDecomposition::from_matrices(all)
            .ok()
            .filter(is_suitable)
    };
    if a.a11().sqrt2.is_negative() {
        if let Some(w) = witness(vec![c.clone()]) {
            return PovmVerdict::False { witness: w };
        }
    }
    let mut delta = Rational::one();
    for _ in 0..WITNESS_HALVINGS {
        let slice = QuadHermitian::e11(n, QuadRational::new(Rational::zero(), delta.clone()));
        let rest = c.sub(&slice).expect("same dimension");
        if psd_check(&rest) {
            if let Some(w) = witness(vec![slice, rest]) {
                return PovmVerdict::False { witness: w };
            }
        }
        delta = delta / Rational::from(2);
    }
    let half_root2 = QuadRational::new(Rational::zero(), Rational::frac(1, 2));
    let split = vec![
        c.scale(&half_root2),
        c.scale(&(QuadRational::one() - half_root2.clone())),
    ];
    match witness(split) {
        Some(w) => PovmVerdict::False { witness: w },
        None => PovmVerdict::UndeterminedNoWitness,
    }
}

/// Options for [`make_suitable_near_exact`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuitableOptions {
    /// Split a single-element target `{I}` into two elements instead of
    /// failing with a degenerate-input error.
    pub split_single: bool,
}

/// A suitable decomposition together with its worst per-element squared
/// distance to the targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PovmApprox {
    pub decomposition: PovmDecomposition,
    pub achieved_dist2: QuadRational,
}

const INPUT_TOL: &str = "1/100000000";
const MAX_ROUNDS: u32 = 40;

fn within_tol(x: &QuadRational, tol: &Rational) -> bool {
    let t = QuadRational::rational(tol.clone());
    x <= &t && x >= &-t
}

fn check_targets(targets: &[QuadHermitian]) -> Result<usize> {
    let n = targets
        .first()
        .ok_or_else(|| Error::invalid("no target elements"))?
        .dim();
    if targets.iter().any(|t| t.dim() != n) {
        return Err(Error::invalid("target elements of differing dimension"));
    }
    let tol: Rational = INPUT_TOL.parse()?;
    let slack = QuadHermitian::identity(n).scale(&QuadRational::rational(tol.clone()));
    let mut sum = QuadHermitian::zero(n);
    for (i, t) in targets.iter().enumerate() {
        if !psd_check(&t.add(&slack)?) {
            return Err(Error::invalid(format!(
                "target element {i} is not PSD within 1e-8"
            )));
        }
        sum = sum.add(t)?;
    }
    let resid = sum.sub(&QuadHermitian::identity(n))?;
    if !resid
        .rows()
        .iter()
        .flatten()
        .all(|z| within_tol(&z.re, &tol) && within_tol(&z.im, &tol))
    {
        return Err(Error::invalid(
            "targets do not sum to the identity within 1e-8",
        ));
    }
    Ok(n)
}

fn round_entry(x: &QuadRational, den: &BigInt) -> Result<Rational> {
    if x.sqrt2.is_zero() {
        rationalize_exact(&x.rat, den)
    } else {
        let d: u64 = den
            .try_into()
            .map_err(|_| Error::invalid("denominator bound too large"))?;
        rationalize(x.to_f64(), d)
    }
}

/// Rounds every entry to a rational with denominator at most `den`,
/// keeping the matrix Hermitian.
fn round_hermitian(m: &QuadHermitian, den: &BigInt) -> Result<QuadHermitian> {
    let n = m.dim();
    let mut rows = vec![vec![QuadComplex::zero(); n]; n];
    for i in 0..n {
        rows[i][i] = QuadComplex::from(round_entry(&m.get(i, i).re, den)?);
        for j in i + 1..n {
            let z = m.get(i, j);
            let r = QuadComplex::new(
                round_entry(&z.re, den)?.into(),
                round_entry(&z.im, den)?.into(),
            );
            rows[j][i] = r.conj();
            rows[i][j] = r;
        }
    }
    QuadHermitian::from_rows(rows)
}

fn worst_dist2(ms: &[QuadHermitian], targets: &[QuadHermitian]) -> Result<QuadRational> {
    let mut worst = QuadRational::zero();
    for (m, t) in ms.iter().zip(targets) {
        worst = worst.max(m.frob_dist2(t)?);
    }
    Ok(worst)
}

fn rational_norm_estimate(ms: &[QuadHermitian], m: usize) -> f64 {
    let n = ms[0].dim();
    let centre = 1.0 / m as f64;
    ms.iter()
        .map(|t| {
            t.to_f64()
                .iter()
                .enumerate()
                .flat_map(|(i, r)| {
                    r.iter()
                        .enumerate()
                        .map(move |(j, &(re, im))| (i, j, re, im))
                })
                .map(|(i, j, re, im)| {
                    let re = if i == j { re - centre } else { re };
                    re * re + im * im
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
        .max(1.0 / n as f64)
}

/// An exact suitable POVM with each element within `eps` (Frobenius) of the
/// corresponding target.
///
/// Each round blends the targets towards `I/m` by a rational weight θ to
/// create a PSD margin, rounds all but the last element to a rational grid,
/// defines the last as the identity minus the rest, then moves `δ√2` of
/// (1,1) weight from the element with the largest (1,1) entry to the next
/// largest, which becomes the one TRUE element. An exact target that is
/// already suitable is returned unchanged.
pub fn make_suitable_near_exact(
    targets: &[QuadHermitian],
    eps: &Rational,
    opts: SuitableOptions,
) -> Result<PovmApprox> {
    if !eps.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let n = check_targets(targets)?;
    if let Ok(d) = PovmDecomposition::from_matrices(targets.to_vec()) {
        if is_suitable(&d) {
            return Ok(PovmApprox {
                decomposition: d,
                achieved_dist2: QuadRational::zero(),
            });
        }
    }
    let eps2 = QuadRational::rational(eps.square());
    let m = targets.len();
    if m == 1 {
        return split_single(&targets[0], &eps2, eps, opts);
    }
    let m_q = Rational::from(m as i64);
    let spread = rational_norm_estimate(targets, m);
    let mut theta = rationalize(eps.to_f64() / (4.0 * (1.0 + spread)), 1 << 40)?;
    if !theta.is_positive() {
        theta = Rational::new(1, BigInt::from(1u64 << 40))?;
    }
    let mut delta = eps / Rational::from(8);
    let mut den = (Rational::from(16 * (m * m * n) as i64) / &theta).ceil_int();
    let identity = QuadHermitian::identity(n);
    let mut best = None;
    for _ in 0..MAX_ROUNDS {
        let keep = QuadRational::rational(Rational::one() - &theta);
        let share = identity.scale(&QuadRational::rational(&theta / &m_q));
        let mut ms = Vec::with_capacity(m);
        for t in &targets[..m - 1] {
            ms.push(round_hermitian(&t.scale(&keep).add(&share)?, &den)?);
        }
        let mut last = identity.clone();
        for e in &ms {
            last = last.sub(e)?;
        }
        ms.push(last);
        if !ms.iter().all(psd_check) {
            den *= 4;
            continue;
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| ms[b].diag(0).cmp(ms[a].diag(0)).then(a.cmp(&b)));
        let (donor, recipient) = (order[0], order[1]);
        if !ms[donor].diag(0).is_positive() {
            return Err(Error::degenerate(
                "no element has a positive (1,1) entry to donate",
            ));
        }
        let mut d = delta.clone();
        let mut moved = None;
        for _ in 0..MAX_ROUNDS {
            let slice = QuadHermitian::e11(n, QuadRational::new(Rational::zero(), d.clone()));
            let given = ms[donor].sub(&slice)?;
            if psd_check(&given) {
                moved = Some((given, ms[recipient].add(&slice)?));
                break;
            }
            d = d / Rational::from(2);
        }
        let Some((given, received)) = moved else {
            den *= 4;
            continue;
        };
        ms[donor] = given;
        ms[recipient] = received;
        let d2 = worst_dist2(&ms, targets)?;
        if d2 <= eps2 {
            let decomposition = PovmDecomposition::from_matrices(ms)?;
            debug_assert!(is_suitable(&decomposition));
            return Ok(PovmApprox {
                decomposition,
                achieved_dist2: d2,
            });
        }
        best = Some(d2);
        theta = theta / Rational::from(2);
        delta = delta / Rational::from(2);
        den *= 4;
    }
    Err(Error::ResourceLimit {
        message: format!("suitable POVM: epsilon not reached within {MAX_ROUNDS} rounds"),
        achieved: best.map(|b| format!("{b:?}")),
    })
}

/// `{T}` with `T ≈ I` becomes `{I - δ√2·E11, δ√2·E11}` when allowed.
fn split_single(
    target: &QuadHermitian,
    eps2: &QuadRational,
    eps: &Rational,
    opts: SuitableOptions,
) -> Result<PovmApprox> {
    if !opts.split_single {
        return Err(Error::degenerate(
            "a single-element decomposition has no second element to balance a TRUE one; enable splitting",
        ));
    }
    let n = target.dim();
    let zero = QuadHermitian::zero(n);
    let mut delta = eps / Rational::from(4);
    for _ in 0..MAX_ROUNDS {
        let slice = QuadHermitian::e11(n, QuadRational::new(Rational::zero(), delta.clone()));
        let rest = QuadHermitian::identity(n).sub(&slice)?;
        let d2 = rest.frob_dist2(target)?.max(slice.frob_dist2(&zero)?);
        if psd_check(&rest) && &d2 <= eps2 {
            let decomposition = PovmDecomposition::from_matrices(vec![rest, slice])?;
            return Ok(PovmApprox {
                decomposition,
                achieved_dist2: d2,
            });
        }
        delta = delta / Rational::from(2);
    }
    Err(Error::ResourceLimit {
        message: "could not split the single element within epsilon".into(),
        achieved: None,
    })
}

/// [`make_suitable_near_exact`] for machine-real Hermitian targets given as
/// `(re, im)` entries.
pub fn make_suitable_near(
    targets: &[Vec<Vec<(f64, f64)>>],
    eps: f64,
    opts: SuitableOptions,
) -> Result<PovmApprox> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::invalid("epsilon must be a positive finite real"));
    }
    let exact = targets
        .iter()
        .map(|t| QuadHermitian::from_f64(t))
        .collect::<Result<Vec<_>>>()?;
    make_suitable_near_exact(&exact, &Rational::from_f64_exact(eps)?, opts)
}
