//! Decimal display of cyclotomic values. Nothing here feeds back into exact
//! computation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Cyclotomic, Rational};

/// `π` to within `10^{-prec}` via Machin's formula.
fn pi(prec: u32) -> Rational {
    let eps = Rational::new(1, BigInt::from(10).pow(prec + 2));
    let four = Rational::from(4);
    let a = arctan_inv(5, &eps);
    let b = arctan_inv(239, &eps);
    &four * &(&(&four * &a) - &b)
}

/// `arctan(1/x)` by its alternating Taylor series.
fn arctan_inv(x: i64, eps: &Rational) -> Rational {
    let x2 = Rational::from(x * x);
    let mut power = Rational::new(1, x);
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let term = &power / &Rational::from(2 * k + 1);
        if k % 2 == 0 {
            sum = &sum + &term;
        } else {
            sum = &sum - &term;
        }
        if term.abs() < *eps {
            return sum;
        }
        power = &power / &x2;
        k += 1;
    }
}

/// `(cos θ, sin θ)` for `θ` in `[0, 2π)`, by Taylor series.
fn cos_sin(theta: &Rational, eps: &Rational) -> (Rational, Rational) {
    let mut cos = Rational::zero();
    let mut sin = Rational::zero();
    let mut term = Rational::one();
    let mut n: i64 = 0;
    loop {
        match n % 4 {
            0 => cos = &cos + &term,
            1 => sin = &sin + &term,
            2 => cos = &cos - &term,
            _ => sin = &sin - &term,
        }
        n += 1;
        term = &(&term * theta) / &Rational::from(n);
        if n > 4 && term.abs() < *eps {
            return (cos, sin);
        }
    }
}

fn to_decimal(x: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = &(x * &Rational::from(scale.clone())) + &Rational::new(1, 2);
    let rounded = scaled.floor();
    let negative = rounded.is_negative();
    let abs = rounded.abs();
    let (int_part, frac_part) = abs.div_rem(&scale);
    let sign = if negative && !abs.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Real and imaginary parts of `x` rounded to `digits` decimal places.
pub fn complex_approximation(x: &Cyclotomic, digits: usize) -> (String, String) {
    assert!(digits >= 1, "need at least one digit");
    let n = x.conductor();
    let magnitude: Rational = x.coeffs().iter().map(Rational::abs).fold(Rational::one(), |a, b| &a + &b);
    let guard = magnitude.numer().to_string().len() as u32 + digits as u32 + 8;
    let eps = Rational::new(1, BigInt::from(10).pow(guard));
    let two_pi = &pi(guard + 2) * &Rational::from(2);
    let mut re = Rational::zero();
    let mut im = Rational::zero();
    for (k, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (cos, sin) = if k == 0 {
            (Rational::one(), Rational::zero())
        } else {
            let theta = &two_pi * &Rational::new(k as i64, n as i64);
            cos_sin(&theta, &eps)
        };
        re = &re + &(c * &cos);
        im = &im + &(c * &sin);
    }
    (to_decimal(&re, digits), to_decimal(&im, digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_examples() {
        assert_eq!(
            complex_approximation(&Cyclotomic::root_of_unity(4, 1), 3),
            ("0.000".to_string(), "1.000".to_string())
        );
        assert_eq!(
            complex_approximation(&Cyclotomic::from_int(-1), 2),
            ("-1.00".to_string(), "0.00".to_string())
        );
    }

    #[test]
    fn third_root() {
        // cos(2π/3) = -1/2, sin(2π/3) = √3/2 = 0.8660254...
        assert_eq!(
            complex_approximation(&Cyclotomic::root_of_unity(3, 1), 3),
            ("-0.500".to_string(), "0.866".to_string())
        );
        let (_, im) = complex_approximation(&Cyclotomic::root_of_unity(3, 1), 12);
        assert_eq!(im, "0.866025403784");
    }

    #[test]
    fn matches_float_evaluation() {
        for n in [5u64, 7, 8, 12] {
            for k in 0..n as i64 {
                let (re, im) = complex_approximation(&Cyclotomic::root_of_unity(n, k), 6);
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                assert!((re.parse::<f64>().unwrap() - t.cos()).abs() < 1e-6);
                assert!((im.parse::<f64>().unwrap() - t.sin()).abs() < 1e-6);
            }
        }
    }
}
