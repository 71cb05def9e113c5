mod common;

use kscolor::coloring::{classify_ray, TruthValue};
use kscolor::fields::{adjust_denominator, rationalize, reduce};
use kscolor::io::DecompositionFile;
use kscolor::kscheck::{build_graph, find_ks_coloring, Field, QuadRay, RaySet};
use kscolor::linalg::{cayley_unitary, gram_schmidt, inner_product, projector_of, psd_check};
use kscolor::{
    GMatrix, GVector, GaussianRational, QuadComplex, QuadHermitian, QuadRational, Rational,
};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=60).prop_map(|(p, q)| Rational::frac(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (small_rational(), small_rational()).prop_map(|(a, b)| GaussianRational::new(a, b))
}

fn quad() -> impl Strategy<Value = QuadRational> {
    (small_rational(), small_rational()).prop_map(|(a, b)| QuadRational::new(a, b))
}

fn gvector(n: usize) -> impl Strategy<Value = GVector> {
    prop::collection::vec(gaussian(), n).prop_filter_map("nonzero", |e| GVector::new(e).ok())
}

fn hermitian(n: usize) -> impl Strategy<Value = GMatrix> {
    prop::collection::vec(gaussian(), n * n).prop_map(move |e| {
        let mut rows = vec![vec![GaussianRational::zero(); n]; n];
        for i in 0..n {
            rows[i][i] = GaussianRational::real(e[i * n + i].re.clone());
            for j in i + 1..n {
                rows[i][j] = e[i * n + j].clone();
                rows[j][i] = e[i * n + j].conj();
            }
        }
        GMatrix::from_rows(rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduce_is_lowest_terms(p in any::<i64>(), q in any::<i64>().prop_filter("nonzero", |q| *q != 0)) {
        let r = reduce(p, q).unwrap();
        prop_assert!(r.denom() > &BigInt::from(0));
        prop_assert_eq!(r.numer().gcd(r.denom()), BigInt::from(1));
        prop_assert_eq!(&r * &Rational::from(q), Rational::from(p));
    }

    #[test]
    fn v3_is_a_valuation(x in nonzero_rational(), y in nonzero_rational()) {
        let (vx, vy) = (x.v3().unwrap(), y.v3().unwrap());
        prop_assert_eq!((&x * &y).v3().unwrap(), vx + vy);
        match (&x + &y).v3() {
            None => prop_assert_eq!(vx, vy),
            Some(v) => {
                prop_assert!(v >= vx.min(vy));
                if vx != vy {
                    prop_assert_eq!(v, vx.min(vy));
                }
            }
        }
    }

    #[test]
    fn rationalize_matches_exhaustive_search(x in -3.0f64..3.0, max_den in 1u64..=500) {
        let r = rationalize(x, max_den).unwrap();
        let exact = Rational::from_f64_exact(x).unwrap();
        prop_assert!(r.denom() <= &BigInt::from(max_den));
        let bound = (Rational::from(BigInt::from(max_den)) * Rational::from(r.denom().clone())).recip().unwrap();
        prop_assert!((&exact - &r).abs() <= bound);
        let mut below: Option<Rational> = None;
        let mut above: Option<Rational> = None;
        for q in 1..=max_den as i64 {
            let qr = Rational::from(q);
            let lo = Rational::new((&exact * &qr).floor_int(), BigInt::from(q)).unwrap();
            let hi = Rational::new((&exact * &qr).ceil_int(), BigInt::from(q)).unwrap();
            if below.as_ref().is_none_or(|b| &lo > b) { below = Some(lo); }
            if above.as_ref().is_none_or(|a| &hi < a) { above = Some(hi); }
        }
        prop_assert!(Some(&r) == below.as_ref() || Some(&r) == above.as_ref());
    }

    #[test]
    fn adjust_denominator_contract(r in nonzero_rational(), want in any::<bool>(), e in 1i64..=1000) {
        let eps = Rational::frac(1, e);
        let out = adjust_denominator(&r, want, &eps).unwrap();
        prop_assert!(!out.is_zero());
        prop_assert!((&out - &r).abs() <= eps);
        let divisible = out.denom().mod_floor(&BigInt::from(3)) == BigInt::from(0);
        prop_assert_eq!(divisible, want);
    }

    #[test]
    fn quad_field_axioms(a in quad(), b in quad(), c in quad()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), QuadRational::one());
        }
        prop_assert_eq!(a.signum(), a.to_f64().partial_cmp(&0.0).unwrap());
    }

    #[test]
    fn gram_schmidt_orthogonal(vs in prop::collection::vec(gvector(3), 3)) {
        if let Ok(frame) = gram_schmidt(&vs) {
            for (i, u) in frame.legs().iter().enumerate() {
                for v in &frame.legs()[i + 1..] {
                    prop_assert!(inner_product(u, v).unwrap().is_zero());
                }
            }
            prop_assert_eq!(&frame.legs()[0], &vs[0]);
        }
    }

    #[test]
    fn cayley_is_unitary(h in hermitian(3)) {
        let u = cayley_unitary(&h).unwrap();
        prop_assert_eq!(u.adjoint().mul(&u).unwrap(), GMatrix::identity(3));
    }

    #[test]
    fn projectors_are_idempotent(v in gvector(4)) {
        let p = projector_of(&v).unwrap();
        prop_assert_eq!(p.mul(&p).unwrap(), p.clone());
        prop_assert!(p.is_hermitian());
        prop_assert_eq!(p.trace(), GaussianRational::one());
    }

    #[test]
    fn gram_matrices_are_psd(cols in prop::collection::vec(prop::collection::vec((quad(), quad()), 3), 1..=3)) {
        let mut rows = vec![vec![QuadComplex::zero(); 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = cols.iter().map(|c| {
                    let a = QuadComplex::new(c[i].0.clone(), c[i].1.clone());
                    let b = QuadComplex::new(c[j].0.clone(), c[j].1.clone());
                    &a * &b.conj()
                }).sum();
            }
        }
        prop_assert!(psd_check(&QuadHermitian::from_rows(rows).unwrap()));
    }

    #[test]
    fn zero_corner_forces_zero_row(h in hermitian(3)) {
        // With a zero (1,1) entry, PSD holds only if the whole first row vanishes.
        let mut rows: Vec<Vec<QuadComplex>> = h.rows().iter().map(|r| r.iter().cloned().map(QuadComplex::from).collect()).collect();
        rows[0][0] = QuadComplex::zero();
        let m = QuadHermitian::from_rows(rows).unwrap();
        if m.rows()[0].iter().any(|z| !z.is_zero()) {
            prop_assert!(!psd_check(&m));
        }
    }

    #[test]
    fn classify_ray_tracks_valuation_shifts(v in gvector(3), k in -4i64..=4) {
        let w = v.scale(&GaussianRational::real(Rational::pow3(k))).unwrap();
        let coords = v.coords();
        let predicted = coords.iter().all(|c| !c.is_zero())
            && coords[0].v3().unwrap() + k <= -1
            && coords[1..].iter().all(|c| c.v3().unwrap() + k >= 0);
        prop_assert_eq!(classify_ray(&w) == TruthValue::True, predicted);
    }

    #[test]
    fn serde_round_trips(r in small_rational(), g in gaussian(), q in quad(), v in gvector(3)) {
        let back: Rational = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
        let back: GaussianRational = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
        let back: QuadRational = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        prop_assert_eq!(back, q.clone());
        let back: GVector = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!(back, v);
        let doc = DecompositionFile::new(vec![QuadHermitian::identity(2).scale(&q)]);
        let back: DecompositionFile = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(back, doc);
    }
}

fn small_int_set() -> impl Strategy<Value = RaySet> {
    let ray =
        prop::collection::vec(-1i64..=1, 3).prop_filter("nonzero", |r| r.iter().any(|&x| x != 0));
    prop::collection::vec(ray, 2..=12).prop_map(|rays| {
        let rays: Vec<QuadRay> = rays
            .into_iter()
            .map(|r| {
                QuadRay::new(
                    r.into_iter()
                        .map(|x| QuadComplex::from(Rational::from(x)))
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let labels = (0..rays.len()).map(|i| format!("r{i}")).collect();
        RaySet::new(3, Field::Rational, rays, labels).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_agrees_with_brute_force(rs in small_int_set()) {
        let g = build_graph(&rs);
        let (_, contexts) = common::brute_structure(&rs);
        prop_assert_eq!(g.contexts().len(), contexts.len());
        match find_ks_coloring(&g) {
            Some(c) => {
                prop_assert!(c.is_valid(&g));
                prop_assert!(common::independent_valid(&rs, c.assignment()));
            }
            None => prop_assert!(common::brute_force_coloring(&rs).is_none()),
        }
    }

    #[test]
    fn ray_set_text_round_trip(rs in small_int_set()) {
        prop_assert_eq!(RaySet::parse(&rs.to_text()).unwrap(), rs);
    }
}
