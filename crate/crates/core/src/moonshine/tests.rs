use super::*;
use crate::groups::FinGroup;
use crate::tate::hecke;
use proptest::prelude::*;

fn q(terms: &[(i64, i64)], known_below: Bound) -> QSeries<Rational> {
    let terms = terms.iter().map(|&(e, c)| (Rational::from(e), Rational::from(c)));
    QSeries::from_terms(&(), 1, terms, known_below).with_low(Rational::from(-1))
}

fn ints(p: &Poly<Rational>) -> Vec<i64> {
    p.coefficients().iter().map(|c| c.to_i64().unwrap()).collect()
}

/// `(E₄³ − 744Δ)/Δ` through the `τ(n)`-free route: `j = 1/q + 744 + …` is
/// fixed by `j·Δ = E₄³`, solved coefficientwise in integers.
fn j_by_recursion(order: usize) -> Vec<i64> {
    let n = order + 2;
    let sigma3 = |k: usize| (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| (d * d * d) as i128).sum::<i128>();
    let e4: Vec<i128> = (0..n).map(|k| if k == 0 { 1 } else { 240 * sigma3(k) }).collect();
    let mul = |a: &[i128], b: &[i128]| {
        let mut out = vec![0i128; n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(n - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let e4_cubed = mul(&mul(&e4, &e4), &e4);
    // Δ/q = Π(1 − qᵏ)²⁴ via the pentagonal-number expansion of Π(1 − qᵏ).
    let mut euler = vec![0i128; n];
    for k in -(n as i64)..=(n as i64) {
        let p = k * (3 * k - 1) / 2;
        if (0..n as i64).contains(&p) {
            euler[p as usize] += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    let mut delta = vec![0i128; n];
    delta[0] = 1;
    for _ in 0..24 {
        delta = mul(&delta, &euler);
    }
    // (q·j)·(Δ/q) = E₄³ solved for q·j.
    let mut qj = vec![0i128; n];
    for i in 0..n {
        let acc: i128 = (1..=i).map(|k| delta[k] * qj[i - k]).sum();
        qj[i] = e4_cubed[i] - acc;
    }
    qj[1] -= 744;
    qj.into_iter().take(order + 2).map(|c| c as i64).collect()
}

#[test]
fn j_matches_independent_recursion() {
    let j = j_oracle(13).unwrap();
    let expected = j_by_recursion(12);
    for (i, c) in expected.iter().enumerate() {
        assert_eq!(j.coefficient(&Rational::from(i as i64 - 1)), Some(Rational::from(*c)));
    }
    assert_eq!(j.coefficient(&Rational::from(-1)), Some(Rational::one()));
    assert_eq!(j.coefficient(&Rational::zero()), Some(Rational::zero()));
    assert_eq!(j.known_below(), &Bound::finite(13));
    assert!(matches!(j_oracle(J_ORDER_CAP + 1), Err(MoonshineError::CapExceeded { .. })));
}

#[test]
fn faber_examples() {
    let inv_q = q(&[(-1, 1)], Bound::finite(6));
    for (m, p) in faber(&inv_q, 5).unwrap().iter().enumerate() {
        let mut expected = vec![0; m + 2];
        expected[m + 1] = 1;
        assert_eq!(ints(p), expected);
    }
    let a1 = 7;
    let f = q(&[(-1, 1), (1, a1)], Bound::finite(4));
    let phis = faber(&f, 2).unwrap();
    assert_eq!(ints(&phis[1]), vec![-2 * a1, 0, 1]);

    let j = j_oracle(7).unwrap();
    let a1 = j.coefficient(&Rational::one()).unwrap().to_i64().unwrap();
    let phis = faber(&j, 3).unwrap();
    assert_eq!(ints(&phis[1]), vec![-2 * a1, 0, 1]);
    assert!(phis.iter().all(|p| p.is_monic()));

    let short = q(&[(-1, 1)], Bound::finite(1));
    assert!(matches!(faber(&short, 3), Err(MoonshineError::Series(QError::InsufficientPrecision { .. }))));
    assert!(matches!(faber(&q(&[(-2, 1)], Bound::finite(4)), 2), Err(MoonshineError::Shape(_))));
}

#[test]
fn hecke_classical_examples() {
    let inv_q = q(&[(-1, 1)], Bound::Infinite);
    assert_eq!(hecke_classical(&inv_q, 1), inv_q);
    let t2 = hecke_classical(&inv_q, 2);
    assert_eq!(t2.terms().map(|(e, c)| (e.clone(), c.clone())).collect::<Vec<_>>(), vec![(Rational::from(-2), Rational::new(1, 2))]);

    // Root-of-unity filter oracle: (1/m) Σ_{ad=m} Σ_b F((aτ+b)/d) with the
    // sum over b evaluated by exact cyclotomic arithmetic.
    let f = q(&[(-1, 1), (1, 3), (2, -5), (3, 2), (4, 11), (5, 1), (6, -4)], Bound::finite(7));
    for m in 1..=3 {
        let direct = hecke_classical(&f, m);
        let mut filter = QSeries::<Cyclotomic>::zero(&());
        for d in (1..=m).filter(|d| m % d == 0) {
            let a = m / d;
            for b in 0..d {
                let fc = f.map_coefficients(&(), |c| Cyclotomic::from_rational(c.clone()));
                let zeta = Cyclotomic::root_of_unity(d as u64, b as i64);
                filter = filter.add(&fc.twist_substitute(&Rational::new(a as i64, d as i64), &zeta).unwrap());
            }
        }
        let filter = filter.scale(&Rational::new(1, m as i64));
        assert_eq!(direct.map_coefficients(&(), |c| Cyclotomic::from_rational(c.clone())), filter, "m = {m}");
    }
}

#[test]
fn hecke_classical_matches_tate_hecke() {
    let f = q(&[(-1, 1), (1, 3), (2, -5), (3, 2), (4, 11), (5, 1), (6, -4), (7, 9), (8, 2)], Bound::finite(9));
    let mt = McKayThompson::from_scalar(&f).unwrap();
    for m in 1..=4 {
        let tate = hecke(mt.base(), m).unwrap();
        let via_tate = tate.component(0).map_coefficients(&(), |chi: &VirtualCharacter| chi.values[0].to_rational().unwrap());
        assert_eq!(via_tate, hecke_classical(&f, m), "m = {m}");
    }
}

#[test]
fn replicate_examples() {
    let c2 = TateFrame::new(Arc::new(FinGroup::cyclic(2)));
    let e = c2.group.class_of(c2.group.identity());
    let sign = VirtualCharacter::from_fn(c2.group.clone(), |x| Cyclotomic::from_int(if x == 0 { 1 } else { -1 }));
    let triv = VirtualCharacter::trivial(c2.group.clone());
    let base = TateElement::from_terms(
        c2.clone(),
        [(e, Rational::from(-1), triv.clone()), (e, Rational::one(), sign)],
        Bound::finite(4),
        true,
    )
    .unwrap();
    let f = McKayThompson::new(base).unwrap();
    assert_eq!(replicate(&f, 1), f);
    let f2 = replicate(&f, 2);
    assert_eq!(f2.base().component(e).coefficient(&Rational::one()), Some(triv));
    assert_eq!(replicate(&f2, 3), replicate(&f, 6));

    let j = McKayThompson::from_scalar(&j_oracle(4).unwrap()).unwrap();
    assert_eq!(replicate(&j, 5), j);
}

#[test]
fn shape_is_enforced() {
    assert!(McKayThompson::from_scalar(&q(&[(-1, 1), (0, 3)], Bound::finite(3))).is_err());
    assert!(McKayThompson::from_scalar(&q(&[(-1, 2)], Bound::finite(3))).is_err());
    assert!(McKayThompson::from_scalar(&q(&[(-1, 1), (2, 3)], Bound::finite(3))).is_ok());
}

#[test]
fn inverse_q_is_replicable() {
    let f = McKayThompson::from_scalar(&q(&[(-1, 1)], Bound::Infinite)).unwrap();
    let report = replicability_check(&f, 4, 6).unwrap();
    assert!(report.replicable);
    assert_eq!(report.per_m.len(), 4);
}

#[test]
fn j_is_replicable_to_small_order() {
    let j = McKayThompson::from_scalar(&j_oracle(21).unwrap()).unwrap();
    let report = replicability_check(&j, 2, 4).unwrap();
    assert!(report.replicable, "{report:?}");
}

#[test]
fn verdicts_are_reported() {
    let f = McKayThompson::from_scalar(&q(&[(-1, 1), (1, 1)], Bound::Infinite)).unwrap();
    let report = replicability_check(&f, 2, 4).unwrap();
    let m2 = &report.per_m[1];
    assert_eq!(m2.faber_vs_hecke == Verdict::Pass, m2.first_mismatch.is_none());
    assert_eq!(report.replicable, report.two_variable.verdict == Verdict::Pass);

    // F² − 2 and 2T₂F differ at q³ for F = q⁻¹ + q + q².
    let f = McKayThompson::from_scalar(&q(&[(-1, 1), (1, 1), (2, 1)], Bound::Infinite)).unwrap();
    let report = replicability_check(&f, 2, 4).unwrap();
    assert!(!report.replicable);
    let m2 = report.per_m[1].first_mismatch.as_ref().unwrap();
    assert_eq!(m2.exponent, Rational::from(3));
    assert_eq!((m2.lhs.clone(), m2.rhs.clone()), (Cyclotomic::from_int(2), Cyclotomic::from_int(0)));
    assert_eq!(report.two_variable.verdict, Verdict::Fail);
}

#[test]
fn twisted_thompson_series_over_c2() {
    // F with a sign-twisted q¹ coefficient: F_e = q⁻¹ + q and F_g = q⁻¹ − q.
    let c2 = TateFrame::new(Arc::new(FinGroup::cyclic(2)));
    let e = c2.group.class_of(c2.group.identity());
    let sign = VirtualCharacter::from_fn(c2.group.clone(), |x| Cyclotomic::from_int(if x == 0 { 1 } else { -1 }));
    let triv = VirtualCharacter::trivial(c2.group.clone());
    let base = TateElement::from_terms(c2.clone(), [(e, Rational::from(-1), triv), (e, Rational::one(), sign)], Bound::Infinite, true).unwrap();
    let f = McKayThompson::new(base).unwrap();
    let report = replicability_check(&f, 3, 4).unwrap();
    let agree = report.per_m.iter().all(|p| p.faber_vs_hecke == Verdict::Pass);
    assert_eq!(agree, report.two_variable.verdict == Verdict::Pass);
}

#[test]
fn insufficient_precision_is_refused() {
    let j = McKayThompson::from_scalar(&j_oracle(6).unwrap()).unwrap();
    assert!(matches!(
        replicability_check(&j, 3, 8),
        Err(MoonshineError::Series(QError::InsufficientPrecision { .. }))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn faber_characterization(cs in prop::collection::vec(-9i64..10, 6)) {
        let terms: Vec<(i64, i64)> = std::iter::once((-1, 1)).chain(cs.iter().enumerate().map(|(i, &c)| (i as i64 + 1, c))).collect();
        let f = q(&terms, Bound::finite(7));
        let phis = faber(&f, 5).unwrap();
        for (i, p) in phis.iter().enumerate() {
            prop_assert_eq!(p.degree(), Some(i + 1));
            prop_assert!(p.coefficients().iter().all(Rational::is_integer));
        }
    }

    #[test]
    fn verdicts_agree(cs in prop::collection::vec(-3i64..4, 4)) {
        let terms: Vec<(i64, i64)> = std::iter::once((-1, 1)).chain(cs.iter().enumerate().map(|(i, &c)| (i as i64 + 1, c))).collect();
        let f = McKayThompson::from_scalar(&q(&terms, Bound::Infinite)).unwrap();
        let report = replicability_check(&f, 2, 3).unwrap();
        let agree = report.per_m.iter().all(|p| p.faber_vs_hecke == Verdict::Pass);
        prop_assert_eq!(agree, report.two_variable.verdict == Verdict::Pass);
    }
}
