//! Laurent series in `q` with rational exponents over a pluggable exact
//! coefficient ring, with the truncation bound carried as data; truncated
//! power series in a second formal variable `t`; polynomials in `w`.

mod poly;
mod series;
mod tseries;

pub use poly::Poly;
pub use series::{QSeries, SeriesFile, TermEntry};
pub use tseries::TSeries;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::charring::{CharError, VirtualCharacter};
use crate::exactnum::{Bound, Cyclotomic, Rational};
use crate::groups::FinGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("leading coefficient is not a unit")]
    NonUnit,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient precision: need coefficients below {needed}, known below {available}")]
    InsufficientPrecision { needed: Box<Bound>, available: Box<Bound> },
    #[error("exponent {0} is not a multiple of 1/{1}")]
    OffGrid(Rational, u64),
    #[error("{0} is not a root of unity")]
    NotRootOfUnity(String),
    #[error("coefficient ring does not admit the cyclotomic scalar {0}")]
    NoCyclotomicScalars(String),
    #[error("invalid series file: {0}")]
    Format(String),
    #[error(transparent)]
    Char(#[from] CharError),
}

/// The exact ring a series takes coefficients in. `Ctx` carries whatever is
/// needed to build `0` and `1` (the group, for characters).
pub trait Coefficient: Clone + fmt::Debug + PartialEq {
    type Ctx: Clone + fmt::Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, r: &Rational) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn is_one_elem(&self) -> bool {
        *self == Self::one_in(&self.ctx())
    }

    fn try_inverse(&self) -> Option<Self> {
        None
    }

    /// Multiplication by a cyclotomic scalar, when the ring contains it.
    fn times_cyclotomic(&self, _z: &Cyclotomic) -> Option<Self> {
        None
    }
}

impl Coefficient for Rational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: &()) -> Rational {
        Rational::zero()
    }
    fn one_in(_: &()) -> Rational {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Rational) -> Rational {
        self + other
    }
    fn negated(&self) -> Rational {
        -self
    }
    fn times(&self, other: &Rational) -> Rational {
        self * other
    }
    fn scaled(&self, r: &Rational) -> Rational {
        self * r
    }
    fn try_inverse(&self) -> Option<Rational> {
        self.recip().ok()
    }
    fn times_cyclotomic(&self, z: &Cyclotomic) -> Option<Rational> {
        z.to_rational().map(|r| self * &r)
    }
}

impl Coefficient for Cyclotomic {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: &()) -> Cyclotomic {
        Cyclotomic::zero()
    }
    fn one_in(_: &()) -> Cyclotomic {
        Cyclotomic::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(other)
    }
    fn negated(&self) -> Cyclotomic {
        self.neg()
    }
    fn times(&self, other: &Cyclotomic) -> Cyclotomic {
        self.mul(other)
    }
    fn scaled(&self, r: &Rational) -> Cyclotomic {
        self.scale(r)
    }
    fn try_inverse(&self) -> Option<Cyclotomic> {
        self.inverse().ok()
    }
    fn times_cyclotomic(&self, z: &Cyclotomic) -> Option<Cyclotomic> {
        Some(self.mul(z))
    }
}

/// Characters combine pointwise; mixing groups is a caller bug and panics.
impl Coefficient for VirtualCharacter {
    type Ctx = Arc<FinGroup>;

    fn ctx(&self) -> Arc<FinGroup> {
        self.group.clone()
    }
    fn zero_in(g: &Arc<FinGroup>) -> VirtualCharacter {
        VirtualCharacter::zero(g.clone())
    }
    fn one_in(g: &Arc<FinGroup>) -> VirtualCharacter {
        VirtualCharacter::trivial(g.clone())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &VirtualCharacter) -> VirtualCharacter {
        self.add(other).expect("characters on one group")
    }
    fn negated(&self) -> VirtualCharacter {
        self.neg()
    }
    fn times(&self, other: &VirtualCharacter) -> VirtualCharacter {
        self.mul(other).expect("characters on one group")
    }
    fn scaled(&self, r: &Rational) -> VirtualCharacter {
        self.scale(&Cyclotomic::from_rational(r.clone()))
    }
    /// Pointwise inverse in the ring of class functions.
    fn try_inverse(&self) -> Option<VirtualCharacter> {
        let values = self.values.iter().map(|v| v.inverse().ok()).collect::<Option<Vec<_>>>()?;
        Some(VirtualCharacter::new(self.group.clone(), values))
    }
    fn times_cyclotomic(&self, z: &Cyclotomic) -> Option<VirtualCharacter> {
        Some(self.scale(z))
    }
}

/// `ζ` must satisfy `ζ^{2c} = 1` for its conductor `c`; returns its order.
pub(crate) fn root_of_unity_order(z: &Cyclotomic) -> Option<u64> {
    let c = z.conductor().max(1);
    let bound = 2 * c;
    let mut p = z.clone();
    for k in 1..=bound {
        if p.is_one() {
            return Some(k);
        }
        p = p.mul(z);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ri(n: i64) -> Rational {
        Rational::from(n)
    }

    fn series(terms: &[(i64, i64, i64)], known_below: Bound) -> QSeries<Rational> {
        QSeries::from_terms(&(), 1, terms.iter().map(|&(n, d, c)| (r(n, d), ri(c))), known_below)
    }

    #[test]
    fn laurent_products() {
        let a = series(&[(-1, 1, 1)], Bound::Infinite);
        let b = series(&[(1, 1, 1)], Bound::Infinite);
        assert_eq!(a.mul(&b), QSeries::one(&()));
        let p = series(&[(0, 1, 1), (1, 1, 1)], Bound::Infinite);
        let m = series(&[(0, 1, 1), (1, 1, -1)], Bound::Infinite);
        assert_eq!(p.mul(&m), series(&[(0, 1, 1), (2, 1, -1)], Bound::Infinite));
    }

    #[test]
    fn product_bound_rule() {
        let f = series(&[(0, 1, 1), (1, 1, 2)], Bound::finite(3));
        let g = series(&[(1, 1, 1)], Bound::finite(2));
        assert_eq!(f.low(), &ri(0));
        assert_eq!(g.low(), &ri(1));
        assert_eq!(f.mul(&g).known_below(), &Bound::finite(2));
        assert_eq!(f.add(&g).known_below(), &Bound::finite(2));
    }

    #[test]
    fn inverses() {
        let q_inv = series(&[(-1, 1, 1)], Bound::Infinite);
        assert_eq!(q_inv.invert(&Bound::Infinite).unwrap(), series(&[(1, 1, 1)], Bound::Infinite));

        let one_minus_t = TSeries::new(&(), vec![ri(1), ri(-1)], 6);
        assert_eq!(one_minus_t.invert().unwrap(), TSeries::new(&(), vec![ri(1); 7], 6));

        // (1 − wt + a t²)⁻¹ = 1 + wt + (w² − a)t² + …
        let a = ri(5);
        let w = Poly::<Rational>::variable(&());
        let f = TSeries::new(&(), vec![Poly::one_in(&()), w.negated(), Poly::constant(a.clone())], 2);
        let inv = f.invert().unwrap();
        assert_eq!(inv.coefficient(1), &w);
        assert_eq!(inv.coefficient(2), &Poly::new(&(), vec![-a, ri(0), ri(1)]));

        let g = series(&[(0, 1, 1), (1, 2, -1)], Bound::Infinite);
        let g_inv = g.invert(&Bound::finite(4)).unwrap();
        assert_eq!(g_inv.known_below(), &Bound::finite(4));
        assert_eq!(g_inv.term_count(), 8);
        let prod = g.mul(&g_inv);
        assert_eq!(prod, QSeries::one(&()).truncate(&Bound::finite(4)));

        let non_unit = QSeries::<Rational>::zero(&()).truncate(&Bound::finite(2));
        assert_eq!(non_unit.invert(&Bound::finite(1)), Err(QError::NonUnit));
    }

    fn sigma1(m: usize) -> i64 {
        (1..=m).filter(|d| m.is_multiple_of(*d)).sum::<usize>() as i64
    }

    #[test]
    fn exp_of_divisor_sums_gives_partitions() {
        assert_eq!(TSeries::<Rational>::zero(&(), 5).exp().unwrap(), TSeries::one(&(), 5));
        let order = 12;
        for d in 1..=3 {
            let f = TSeries::new(&(), (0..=order).map(|m| if m == 0 { ri(0) } else { r(d * sigma1(m), m as i64) }).collect(), order);
            let e = f.exp().unwrap();
            // oracle: Π_k (1 − tᵏ)^{−d} by repeated geometric series
            let mut euler = TSeries::one(&(), order);
            for k in 1..=order {
                let geometric = TSeries::new(&(), (0..=order).map(|n| ri(i64::from(n % k == 0))).collect(), order);
                for _ in 0..d {
                    euler = euler.mul(&geometric);
                }
            }
            assert_eq!(e, euler);
            if d == 1 {
                let p: Vec<i64> = e.coefficients().iter().map(|c| c.to_i64().unwrap()).collect();
                assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
            }
        }
    }

    #[test]
    fn mercator_series() {
        let w = Poly::<Rational>::variable(&());
        let f = TSeries::new(&(), vec![Poly::one_in(&()), w.negated()], 6);
        let l = f.log().unwrap();
        for m in 1..=6 {
            let mut expected = vec![ri(0); m + 1];
            expected[m] = r(-1, m as i64);
            assert_eq!(l.coefficient(m), &Poly::new(&(), expected));
        }
        assert_eq!(l.exp().unwrap(), f);
    }

    #[test]
    fn twist_examples() {
        let f = series(&[(-1, 1, 1), (1, 1, 3), (2, 1, 5)], Bound::finite(4));
        assert_eq!(f.twist_substitute(&ri(1), &Cyclotomic::one()).unwrap(), f);
        let q_inv = series(&[(-1, 1, 1)], Bound::Infinite);
        let t = q_inv.twist_substitute(&r(1, 2), &Cyclotomic::from_int(-1)).unwrap();
        assert_eq!(t, series(&[(-1, 2, -1)], Bound::Infinite));
        assert_eq!(t.denominator(), 2);
        assert!(f.twist_substitute(&ri(1), &Cyclotomic::from_int(2)).is_err());
        let cyclo = f.map_coefficients(&(), |c| Cyclotomic::from_rational(c.clone()));
        assert!(f.twist_substitute(&ri(1), &Cyclotomic::root_of_unity(3, 1)).is_err());
        assert!(cyclo.twist_substitute(&ri(1), &Cyclotomic::root_of_unity(3, 1)).is_ok());
    }

    #[test]
    fn exp_log_on_q_series() {
        let f = series(&[(1, 2, 1), (1, 1, -2), (5, 2, 3)], Bound::finite(4));
        let e = f.exp(&Bound::Infinite).unwrap();
        assert_eq!(e.known_below(), &Bound::finite(4));
        assert_eq!(e.log(&Bound::Infinite).unwrap(), f);
        assert!(series(&[(0, 1, 1)], Bound::Infinite).exp(&Bound::finite(2)).is_err());
        assert!(series(&[(1, 1, 1)], Bound::Infinite).log(&Bound::finite(2)).is_err());
    }

    #[test]
    fn file_round_trip() {
        let f = series(&[(-1, 1, 1), (1, 3, 2), (2, 1, 5)], Bound::finite(3));
        let file = f.to_file();
        assert_eq!(file.denominator, 3);
        let json = serde_json::to_string(&file).unwrap();
        assert_eq!(
            json,
            r#"{"denominator":3,"terms":[{"num":-3,"coeff":"1"},{"num":1,"coeff":"2"},{"num":6,"coeff":"5"}],"known_below":"3","low":"-1"}"#
        );
        let back: SeriesFile<Rational> = serde_json::from_str(&json).unwrap();
        let g = QSeries::from_file_with(&back, &(), |c: &Rational| Ok(c.clone())).unwrap();
        assert_eq!(g, f);
        assert_eq!(g.low(), f.low());
        let bad: SeriesFile<Rational> =
            serde_json::from_str(r#"{"denominator":1,"terms":[{"num":4,"coeff":"1"}],"known_below":"3","low":"0"}"#).unwrap();
        assert!(QSeries::from_file_with(&bad, &(), |c: &Rational| Ok(c.clone())).is_err());
    }

    fn arb_series() -> impl Strategy<Value = QSeries<Rational>> {
        (prop::collection::vec((-2i64..8, -5i64..6), 0..6), prop_oneof![Just(None), (1i64..10).prop_map(Some)]).prop_map(
            |(terms, bound)| {
                let known_below = bound.map_or(Bound::Infinite, |b| Bound::finite(r(b, 2)));
                QSeries::from_terms(&(), 2, terms.into_iter().map(|(n, c)| (r(n, 2), ri(c))), known_below)
            },
        )
    }

    fn arb_positive() -> impl Strategy<Value = QSeries<Rational>> {
        prop::collection::vec((1i64..6, -3i64..4), 0..4)
            .prop_map(|terms| QSeries::from_terms(&(), 2, terms.into_iter().map(|(n, c)| (r(n, 2), ri(c))), Bound::Infinite))
    }

    fn common(a: &QSeries<Rational>, b: &QSeries<Rational>) -> Rational {
        match Bound::min(a.known_below(), b.known_below()) {
            Bound::Finite(x) => x,
            Bound::Infinite => ri(100),
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_series(), g in arb_series(), h in arb_series()) {
            let lhs = f.mul(&g.add(&h));
            let rhs = f.mul(&g).add(&f.mul(&h));
            prop_assert!(lhs.first_difference(&rhs, &common(&lhs, &rhs)).is_none());
            let a = f.mul(&g).mul(&h);
            let b = f.mul(&g.mul(&h));
            prop_assert!(a.first_difference(&b, &common(&a, &b)).is_none());
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.add(&g).sub(&g), f.add(&QSeries::zero(&())).truncate(g.known_below()));
        }

        #[test]
        fn bounds_never_overclaim(f in arb_positive(), g in arb_series(), cut_f in 1i64..8, cut_g in 1i64..8) {
            let exact = f.mul(&g);
            let tf = f.truncate(&Bound::finite(r(cut_f, 2)));
            let tg = g.truncate(&Bound::finite(r(cut_g, 2)));
            let approx = tf.mul(&tg);
            if let Bound::Finite(b) = approx.known_below() {
                prop_assert!(approx.first_difference(&exact, b).is_none());
            }
        }

        #[test]
        fn root_of_unity_filter(f in arb_series(), d in 1u64..5) {
            let f = f.with_denominator(1);
            let scale = Rational::new(1, d as i64);
            let cyclo = f.map_coefficients(&(), |c| Cyclotomic::from_rational(c.clone()));
            let mut acc = QSeries::<Cyclotomic>::zero(&());
            for b in 0..d {
                let t = cyclo.twist_substitute(&scale, &Cyclotomic::root_of_unity(d, b as i64)).unwrap();
                acc = acc.add(&t);
            }
            let acc = acc.scale(&scale);
            let step = Rational::new(d as i64, f.denominator() as i64);
            let expected = cyclo.remap(f.denominator() * d, cyclo.known_below().scale(&scale), cyclo.low() * &scale, |e, c| {
                let k = (e / &step).is_integer();
                k.then(|| (e * &scale, c.clone()))
            });
            prop_assert_eq!(acc, expected);
        }

        #[test]
        fn exp_is_exponential(f in arb_positive(), g in arb_positive()) {
            let to = Bound::finite(5);
            let lhs = f.add(&g).exp(&to).unwrap();
            let rhs = f.exp(&to).unwrap().mul(&g.exp(&to).unwrap());
            prop_assert!(lhs.first_difference(&rhs, &ri(5)).is_none());
            prop_assert!(rhs.known_below() >= &to);
        }
    }
}
