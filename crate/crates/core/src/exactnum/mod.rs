//! Exact scalars: arbitrary-precision rationals and elements of cyclotomic
//! fields. Every number produced by the library lives here.

mod approx;
mod cyclotomic;
mod rational;

pub use approx::complex_approximation;
pub use cyclotomic::{cyclotomic_polynomial, integral_coeffs, totient, Cyclotomic};
pub use rational::{gcd, lcm, Bound, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Binary field operation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact arithmetic on two cyclotomics after embedding both into the lcm
/// conductor.
pub fn cyclotomic_arithmetic(x: &Cyclotomic, y: &Cyclotomic, op: FieldOp) -> Result<Cyclotomic, NumError> {
    let m = lcm(x.conductor(), y.conductor());
    let (x, y) = (x.embed(m), y.embed(m));
    match op {
        FieldOp::Add => Ok(x.add(&y)),
        FieldOp::Sub => Ok(x.sub(&y)),
        FieldOp::Mul => Ok(x.mul(&y)),
        FieldOp::Div => x.div(&y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_cyclotomic(n: u64) -> impl Strategy<Value = Cyclotomic> {
        let d = totient(n);
        prop::collection::vec((-5i64..=5, 1i64..=3), d).prop_map(move |cs| {
            let coeffs: Vec<Rational> = cs.into_iter().map(|(p, q)| Rational::new(p, q)).collect();
            Cyclotomic::from_power_coeffs(n, &coeffs)
        })
    }

    fn arb_level() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![1u64, 3, 4, 5, 6, 8, 12])
    }

    proptest! {
        #[test]
        fn field_axioms((x, y, z) in arb_level().prop_flat_map(|n| (arb_cyclotomic(n), arb_cyclotomic(n), arb_cyclotomic(n)))) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            if !x.is_zero() {
                prop_assert_eq!(x.mul(&x.inverse().unwrap()), Cyclotomic::one());
            }
        }

        #[test]
        fn embedding_is_a_ring_map(x in arb_cyclotomic(6), y in arb_cyclotomic(6), m in 1u64..4) {
            let big = 6 * m;
            prop_assert_eq!(x.mul(&y).embed(big), x.embed(big).mul(&y.embed(big)));
            prop_assert_eq!(x.add(&y).embed(big), x.embed(big).add(&y.embed(big)));
            prop_assert_eq!(x.embed(big), x.clone());
        }

        #[test]
        fn root_orders(n in 1u64..25, k in -30i64..30) {
            let z = Cyclotomic::root_of_unity(n, k);
            let expected = n / gcd(n as i64, k).max(1) as u64;
            let expected = if k == 0 { 1 } else { expected };
            let mut acc = z.clone();
            let mut order = 1;
            while !acc.is_one() {
                acc = acc.mul(&z);
                order += 1;
            }
            prop_assert_eq!(order, expected);
        }
    }

    #[test]
    fn arithmetic_selector() {
        let a = Cyclotomic::root_of_unity(3, 1);
        let b = Cyclotomic::root_of_unity(4, 1);
        let s = cyclotomic_arithmetic(&a, &b, FieldOp::Add).unwrap();
        assert_eq!(s.conductor(), 12);
        assert_eq!(cyclotomic_arithmetic(&s, &b, FieldOp::Sub).unwrap(), a);
        assert!(cyclotomic_arithmetic(&a, &Cyclotomic::zero(), FieldOp::Div).is_err());
    }
}
