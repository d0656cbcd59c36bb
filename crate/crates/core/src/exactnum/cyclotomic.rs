use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::lcm;
use super::{NumError, Rational};

/// Precomputed data for the `N`-th cyclotomic field: the degree `φ(N)` and
/// the reduction of every power `x^e`, `0 <= e < N`, modulo `Φ_N(x)`.
#[derive(Debug)]
struct FieldData {
    degree: usize,
    powers: Vec<Vec<i64>>,
}

fn field_cache() -> &'static Mutex<HashMap<u64, Arc<FieldData>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn poly_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = exact_divide(&num, &div);
        }
    }
    let p = Arc::new(num);
    poly_cache().lock().unwrap().insert(n, p.clone());
    p
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn field(n: u64) -> Arc<FieldData> {
    if let Some(f) = field_cache().lock().unwrap().get(&n) {
        return f.clone();
    }
    let poly = cyclotomic_polynomial(n);
    let degree = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; degree];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x, then reduce the overflow coefficient with the monic relation
        let top = cur[degree - 1];
        let mut next = vec![0i64; degree];
        for i in (1..degree).rev() {
            next[i] = cur[i - 1];
        }
        if top != 0 {
            for i in 0..degree {
                next[i] = next[i]
                    .checked_sub(top.checked_mul(poly[i]).expect("overflow"))
                    .expect("overflow");
            }
        }
        cur = next;
    }
    let data = Arc::new(FieldData { degree, powers });
    field_cache().lock().unwrap().insert(n, data.clone());
    data
}

/// Euler's totient, the degree of the `n`-th cyclotomic field.
pub fn totient(n: u64) -> usize {
    field(n).degree
}

/// An exact element of `ℚ(ζ_N)`, stored in the power basis `1, ζ, …, ζ^{φ(N)-1}`.
#[derive(Clone)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Builds `Σ c_i ζ_N^i` from an arbitrary-length coefficient list,
    /// reducing modulo `Φ_N`.
    pub fn from_power_coeffs(conductor: u64, coeffs: &[Rational]) -> Cyclotomic {
        assert!(conductor >= 1, "conductor must be positive");
        let f = field(conductor);
        let n = conductor as usize;
        let mut folded = vec![Rational::zero(); n];
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                folded[i % n] = &folded[i % n] + c;
            }
        }
        Cyclotomic { conductor, coeffs: reduce(&f, &folded) }
    }

    pub fn from_rational(r: Rational) -> Cyclotomic {
        Cyclotomic { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_int(n: i64) -> Cyclotomic {
        Cyclotomic::from_rational(Rational::from(n))
    }

    pub fn zero() -> Cyclotomic {
        Cyclotomic::from_int(0)
    }

    pub fn one() -> Cyclotomic {
        Cyclotomic::from_int(1)
    }

    /// `e^{2πik/N}`.
    pub fn root_of_unity(n: u64, k: i64) -> Cyclotomic {
        assert!(n >= 1, "root_of_unity needs N >= 1");
        let e = k.rem_euclid(n as i64) as usize;
        let f = field(n);
        let coeffs = f.powers[e].iter().map(|&c| Rational::from(c)).collect();
        Cyclotomic { conductor: n, coeffs }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Whether the value lies in `ℤ[ζ_N]`; the power basis is an integral basis.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }

    /// Image under `ℚ(ζ_N) → ℚ(ζ_M)` for `N | M`.
    pub fn embed(&self, m: u64) -> Cyclotomic {
        assert!(m.is_multiple_of(self.conductor), "cannot embed level {} into {}", self.conductor, m);
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let f = field(m);
        let mut folded = vec![Rational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            folded[i * step] = c.clone();
        }
        Cyclotomic { conductor: m, coeffs: reduce(&f, &folded) }
    }

    /// Rewrites the value at conductor 1 when it is rational.
    pub fn normalized(&self) -> Cyclotomic {
        match self.to_rational() {
            Some(r) => Cyclotomic::from_rational(r),
            None => self.clone(),
        }
    }

    fn common(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = lcm(self.conductor, other.conductor);
        (self.embed(m), other.embed(m))
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        if other.conductor == self.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
            return Cyclotomic { conductor: self.conductor, coeffs };
        }
        let (a, b) = self.common(other);
        a.add(&b)
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        if other.conductor == 1 {
            return self.scale(&other.coeffs[0]);
        }
        if self.conductor == 1 {
            return other.scale(&self.coeffs[0]).embed(lcm(self.conductor, other.conductor));
        }
        if other.conductor != self.conductor {
            let (a, b) = self.common(other);
            return a.mul(&b);
        }
        let n = self.conductor as usize;
        let mut folded = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let e = (i + j) % n;
                    folded[e] = &folded[e] + &(a * b);
                }
            }
        }
        Cyclotomic { conductor: self.conductor, coeffs: reduce(&field(self.conductor), &folded) }
    }

    pub fn scale(&self, r: &Rational) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn pow(&self, e: u32) -> Cyclotomic {
        let mut acc = Cyclotomic::one().embed(self.conductor);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse by solving the linear system of multiplication
    /// by `self` in the power basis.
    pub fn inverse(&self) -> Result<Cyclotomic, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Cyclotomic::from_rational(r.recip()?).embed(self.conductor));
        }
        let d = self.coeffs.len();
        // column j holds self * ζ^j
        let mut mat: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d + 1]; d];
        for j in 0..d {
            let col = self.mul(&Cyclotomic::root_of_unity(self.conductor, j as i64));
            for (row, c) in mat.iter_mut().zip(&col.coeffs) {
                row[j] = c.clone();
            }
        }
        mat[0][d] = Rational::one();
        let sol = solve(mat).ok_or(NumError::DivisionByZero)?;
        Ok(Cyclotomic { conductor: self.conductor, coeffs: sol })
    }

    pub fn div(&self, other: &Cyclotomic) -> Result<Cyclotomic, NumError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyclotomic {
        let n = self.conductor as i64;
        let mut acc = Cyclotomic::zero().embed(self.conductor);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&Cyclotomic::root_of_unity(self.conductor, (n - i as i64) % n).scale(c));
            }
        }
        acc
    }
}

fn reduce(f: &FieldData, folded: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); f.degree];
    for (e, c) in folded.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if e < f.degree {
            out[e] = &out[e] + c;
            continue;
        }
        for (i, &p) in f.powers[e].iter().enumerate() {
            if p != 0 {
                out[i] = &out[i] + &(c * &Rational::from(p));
            }
        }
    }
    out
}

/// Gauss-Jordan elimination on an augmented `d × (d+1)` system.
#[allow(clippy::needless_range_loop)]
fn solve(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let d = m.len();
    for col in 0..d {
        let pivot = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip().ok()?;
        for k in col..=d {
            m[col][k] = &m[col][k] * &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for k in col..=d {
                    let t = &m[col][k] * &factor;
                    m[r][k] = &m[r][k] - &t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[d].clone()).collect())
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Cyclotomic) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl From<Rational> for Cyclotomic {
    fn from(r: Rational) -> Cyclotomic {
        Cyclotomic::from_rational(r)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z{}", self.conductor)?,
                _ => write!(f, "({c})*z{}^{i}", self.conductor)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CyclotomicRepr { conductor: self.conductor, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    /// Accepts `{"conductor": N, "coeffs": [...]}` or a bare rational.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Cyclotomic, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Full(CyclotomicRepr),
            Scalar(Rational),
        }
        match Repr::deserialize(d)? {
            Repr::Scalar(r) => Ok(Cyclotomic::from_rational(r)),
            Repr::Full(r) => {
                if r.conductor == 0 {
                    return Err(serde::de::Error::custom("conductor must be positive"));
                }
                Ok(Cyclotomic::from_power_coeffs(r.conductor, &r.coeffs))
            }
        }
    }
}

/// Integer power basis coefficients as `BigInt`s when the value is integral.
pub fn integral_coeffs(x: &Cyclotomic) -> Option<Vec<BigInt>> {
    x.coeffs
        .iter()
        .map(|c| c.is_integer().then(|| c.numer().clone()))
        .collect()
}

impl Cyclotomic {
    /// Sum of a list of values.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Cyclotomic>) -> Cyclotomic {
        items.into_iter().fold(Cyclotomic::zero(), |acc, x| acc.add(x))
    }
}
