use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{root_of_unity_order, Coefficient, QError};
use crate::exactnum::{lcm, Bound, Cyclotomic, Rational};

/// `Σ cₑ qᵉ` with exponents in `(1/N)ℤ`. Every coefficient with exponent below
/// `known_below` is exact (absent means zero); nothing at or above it is
/// stored. `low` bounds all exponents from below, known or not.
#[derive(Clone, Debug)]
pub struct QSeries<C: Coefficient> {
    ctx: C::Ctx,
    denominator: u64,
    terms: BTreeMap<Rational, C>,
    low: Rational,
    known_below: Bound,
}

/// Equality of the known parts and of the bounds.
impl<C: Coefficient> PartialEq for QSeries<C> {
    fn eq(&self, other: &QSeries<C>) -> bool {
        self.known_below == other.known_below && self.terms == other.terms
    }
}

fn grid_denominator(e: &Rational) -> u64 {
    e.denom().to_u64().expect("exponent denominator fits in u64")
}

fn bound_min(a: &Bound, b: &Bound) -> Bound {
    Bound::min(a, b)
}

impl<C: Coefficient> QSeries<C> {
    pub fn zero(ctx: &C::Ctx) -> QSeries<C> {
        QSeries { ctx: ctx.clone(), denominator: 1, terms: BTreeMap::new(), low: Rational::zero(), known_below: Bound::Infinite }
    }

    pub fn one(ctx: &C::Ctx) -> QSeries<C> {
        QSeries::constant(C::one_in(ctx))
    }

    pub fn constant(c: C) -> QSeries<C> {
        QSeries::monomial(c, Rational::zero())
    }

    /// `c·qᵉ`, exactly known.
    pub fn monomial(c: C, e: Rational) -> QSeries<C> {
        let ctx = c.ctx();
        let mut s = QSeries::zero(&ctx);
        s.denominator = grid_denominator(&e);
        s.low = e.clone();
        if !c.is_zero_elem() {
            s.terms.insert(e, c);
        }
        s
    }

    /// Builds a series from exponent/coefficient pairs. Repeated exponents are
    /// summed, zeros dropped and terms at or beyond `known_below` discarded.
    /// The grid denominator grows to fit every exponent.
    pub fn from_terms(
        ctx: &C::Ctx,
        denominator: u64,
        terms: impl IntoIterator<Item = (Rational, C)>,
        known_below: Bound,
    ) -> QSeries<C> {
        let mut map: BTreeMap<Rational, C> = BTreeMap::new();
        let mut den = denominator.max(1);
        for (e, c) in terms {
            if !known_below.covers(&e) {
                continue;
            }
            den = lcm(den, grid_denominator(&e));
            match map.get_mut(&e) {
                Some(acc) => *acc = acc.plus(&c),
                None => {
                    map.insert(e, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero_elem());
        let low = match (map.keys().next(), &known_below) {
            (Some(e), _) => e.clone(),
            (None, Bound::Finite(b)) => b.clone(),
            (None, Bound::Infinite) => Rational::zero(),
        };
        QSeries { ctx: ctx.clone(), denominator: den, terms: map, low, known_below }
    }

    /// Lowers the declared least exponent.
    pub fn with_low(mut self, low: Rational) -> QSeries<C> {
        if low < self.low {
            self.low = low;
        }
        self
    }

    /// Coarsens the exponent grid to `1/N` for a multiple `N` of the current one.
    pub fn with_denominator(mut self, n: u64) -> QSeries<C> {
        self.denominator = lcm(self.denominator, n.max(1));
        self
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn low(&self) -> &Rational {
        &self.low
    }

    pub fn known_below(&self) -> &Bound {
        &self.known_below
    }

    pub fn is_exact(&self) -> bool {
        self.known_below.is_infinite()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &C)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient at `e`, or `None` when it is beyond the known range.
    pub fn coefficient(&self, e: &Rational) -> Option<C> {
        if !self.known_below.covers(e) {
            return None;
        }
        Some(self.terms.get(e).cloned().unwrap_or_else(|| C::zero_in(&self.ctx)))
    }

    /// The lowest known non-zero term, when the known part is non-zero.
    pub fn leading(&self) -> Option<(&Rational, &C)> {
        self.terms.iter().next()
    }

    pub fn require_known_below(&self, needed: &Rational) -> Result<(), QError> {
        let needed = Bound::Finite(needed.clone());
        if self.known_below >= needed {
            Ok(())
        } else {
            Err(QError::InsufficientPrecision { needed: Box::new(needed), available: Box::new(self.known_below.clone()) })
        }
    }

    /// Forgets everything at or above `bound`.
    pub fn truncate(&self, bound: &Bound) -> QSeries<C> {
        let known_below = bound_min(&self.known_below, bound);
        let terms = self.terms.iter().filter(|(e, _)| known_below.covers(e)).map(|(e, c)| (e.clone(), c.clone())).collect::<Vec<_>>();
        let mut s = QSeries::from_terms(&self.ctx, self.denominator, terms, known_below);
        s.low = s.low.clone().min(self.low.clone());
        s
    }

    pub fn map_coefficients<D: Coefficient>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> D) -> QSeries<D> {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(c)));
        QSeries::from_terms(ctx, self.denominator, terms, self.known_below.clone()).with_low(self.low.clone())
    }

    /// Applies `f` to each term, which may move and recoefficient it; the
    /// caller supplies the resulting bound, least exponent and grid.
    pub(crate) fn remap(
        &self,
        denominator: u64,
        known_below: Bound,
        low: Rational,
        f: impl Fn(&Rational, &C) -> Option<(Rational, C)>,
    ) -> QSeries<C> {
        let terms: Vec<(Rational, C)> = self.terms.iter().filter_map(|(e, c)| f(e, c)).collect();
        QSeries::from_terms(&self.ctx, denominator, terms, known_below).with_low(low)
    }

    fn combine(&self, other: &QSeries<C>, negate: bool) -> QSeries<C> {
        let known_below = bound_min(&self.known_below, &other.known_below);
        let own = self.terms.iter().map(|(e, c)| (e.clone(), c.clone()));
        let theirs =
            other.terms.iter().map(|(e, c)| (e.clone(), if negate { c.negated() } else { c.clone() }));
        let den = lcm(self.denominator, other.denominator);
        let low = self.low.clone().min(other.low.clone());
        QSeries::from_terms(&self.ctx, den, own.chain(theirs), known_below).with_low(low)
    }

    pub fn add(&self, other: &QSeries<C>) -> QSeries<C> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &QSeries<C>) -> QSeries<C> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> QSeries<C> {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = c.negated();
        }
        s
    }

    fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.known_below.is_infinite()
    }

    /// Cauchy product, known below `min(E_f + low_g, E_g + low_f)`.
    pub fn mul(&self, other: &QSeries<C>) -> QSeries<C> {
        if self.is_exact_zero() || other.is_exact_zero() {
            return QSeries::zero(&self.ctx);
        }
        let known_below =
            bound_min(&self.known_below.shift(&other.low), &other.known_below.shift(&self.low));
        let mut acc: BTreeMap<Rational, C> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if !known_below.covers(&e) {
                    // exponents in `other` only grow from here
                    break;
                }
                let p = c1.times(c2);
                match acc.get_mut(&e) {
                    Some(a) => *a = a.plus(&p),
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        let den = lcm(self.denominator, other.denominator);
        QSeries::from_terms(&self.ctx, den, acc, known_below).with_low(&self.low + &other.low)
    }

    pub fn scale(&self, r: &Rational) -> QSeries<C> {
        if r.is_zero() {
            return QSeries::zero(&self.ctx).truncate(&self.known_below);
        }
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = c.scaled(r);
        }
        s
    }

    /// Multiplies every coefficient by `c` (on the left).
    pub fn mul_coefficient(&self, c: &C) -> QSeries<C> {
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), c.times(x)));
        QSeries::from_terms(&self.ctx, self.denominator, terms, self.known_below.clone()).with_low(self.low.clone())
    }

    /// Multiplication by `qᵉ`.
    pub fn shift(&self, e: &Rational) -> QSeries<C> {
        let den = lcm(self.denominator, grid_denominator(e));
        self.remap(den, self.known_below.shift(e), &self.low + e, |x, c| Some((x + e, c.clone())))
    }

    /// `q ↦ q^a` for a positive rational `a`.
    pub fn rescale(&self, a: &Rational) -> QSeries<C> {
        assert!(!a.is_negative() && !a.is_zero(), "exponent scale must be positive");
        let den = grid_denominator(&(Rational::new(1, self.denominator as i64) * a.clone()));
        self.remap(den, self.known_below.scale(a), &self.low * a, |e, c| Some((e * a, c.clone())))
    }

    /// `q^{n/N} ↦ ζⁿ q^{a·n/N}` on the current grid `1/N`.
    pub fn twist_substitute(&self, a: &Rational, zeta: &Cyclotomic) -> Result<QSeries<C>, QError> {
        let order = root_of_unity_order(zeta).ok_or_else(|| QError::NotRootOfUnity(zeta.to_string()))?;
        let n_den = Rational::from(self.denominator as i64);
        let mut twisted = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let n = (e * &n_den).to_i64().expect("grid exponent");
            let k = n.rem_euclid(order as i64) as u32;
            let z = zeta.pow(k);
            let c2 = c.times_cyclotomic(&z).ok_or_else(|| QError::NoCyclotomicScalars(z.to_string()))?;
            twisted.push((e.clone(), c2));
        }
        let base = QSeries::from_terms(&self.ctx, self.denominator, twisted, self.known_below.clone())
            .with_low(self.low.clone())
            .with_denominator(self.denominator);
        Ok(base.rescale(a))
    }

    /// The series `1/N`-grid index of `e`.
    fn grid_index(&self, e: &Rational, origin: &Rational) -> usize {
        let k = (e - origin) * Rational::from(self.denominator as i64);
        k.to_i64().expect("on grid") as usize
    }

    /// Number of grid steps from 0 strictly below `bound`.
    fn steps_below(&self, bound: &Rational) -> usize {
        let k = bound * &Rational::from(self.denominator as i64);
        k.ceil().max(BigInt::from(0)).to_usize().expect("series length fits in memory")
    }

    fn effective_bound(&self, bound: Bound, to: &Bound, what: &str) -> Result<Rational, QError> {
        match bound_min(&bound, to) {
            Bound::Finite(b) => Ok(b),
            Bound::Infinite => Err(QError::Precondition(format!("{what} of an exact series needs a target bound"))),
        }
    }

    /// `f⁻¹` for `f = c·qᵉ(1 + u)` with `c` a unit; exact below
    /// `min(E − 2e, to)`.
    pub fn invert(&self, to: &Bound) -> Result<QSeries<C>, QError> {
        let (e, c) = self.leading().ok_or(QError::NonUnit)?;
        let c_inv = c.try_inverse().ok_or(QError::NonUnit)?;
        let e = e.clone();
        let shift = Rational::from(2) * e.clone();
        let natural = self.known_below.shift(&-shift);
        if self.terms.len() == 1 && self.is_exact() {
            return Ok(QSeries::monomial(c_inv, -e));
        }
        let bound = self.effective_bound(natural, to, "inverse")?;
        // work with v = (f / (c qᵉ))⁻¹ on the grid starting at 0
        let rel_bound = &bound + &e;
        let n = self.steps_below(&rel_bound);
        let mut u: Vec<(usize, C)> = Vec::new();
        for (x, cx) in self.terms.iter().skip(1) {
            let k = self.grid_index(x, &e);
            if k >= n {
                break;
            }
            u.push((k, c_inv.times(cx)));
        }
        let mut v: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                v.push(C::one_in(&self.ctx));
                continue;
            }
            let mut acc = C::zero_in(&self.ctx);
            for (j, uj) in &u {
                if *j > k {
                    break;
                }
                acc = acc.plus(&uj.times(&v[k - j]));
            }
            v.push(acc.negated());
        }
        let step = Rational::new(1, self.denominator as i64);
        let terms = v.into_iter().enumerate().map(|(k, vk)| (&step * &Rational::from(k) - &e, vk.times(&c_inv)));
        Ok(QSeries::from_terms(&self.ctx, self.denominator, terms, Bound::Finite(bound)).with_low(-e.clone()))
    }

    fn positive_grid(&self, what: &str) -> Result<Vec<(usize, C)>, QError> {
        if self.low.is_negative() {
            return Err(QError::Precondition(format!("{what} needs a series without negative exponents")));
        }
        let zero = Rational::zero();
        Ok(self.terms.iter().map(|(e, c)| (self.grid_index(e, &zero), c.clone())).collect())
    }

    /// `exp(f)` for `f` with vanishing constant term; exact below `min(E, to)`.
    pub fn exp(&self, to: &Bound) -> Result<QSeries<C>, QError> {
        let a = self.positive_grid("exp")?;
        if a.first().is_some_and(|(k, _)| *k == 0) || !self.known_below.covers(&Rational::zero()) {
            return Err(QError::Precondition("exp needs constant term 0".into()));
        }
        if self.is_exact_zero() {
            return Ok(QSeries::one(&self.ctx));
        }
        let bound = self.effective_bound(self.known_below.clone(), to, "exp")?;
        let n = self.steps_below(&bound);
        let mut b: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(C::one_in(&self.ctx));
                continue;
            }
            let mut acc = C::zero_in(&self.ctx);
            for (j, aj) in &a {
                if *j > k {
                    break;
                }
                acc = acc.plus(&aj.times(&b[k - j]).scaled(&Rational::from(*j)));
            }
            b.push(acc.scaled(&Rational::new(1, k as i64)));
        }
        let step = Rational::new(1, self.denominator as i64);
        let terms = b.into_iter().enumerate().map(|(k, bk)| (&step * &Rational::from(k), bk));
        Ok(QSeries::from_terms(&self.ctx, self.denominator, terms, Bound::Finite(bound)))
    }

    /// `log(f)` for `f` with constant term 1; exact below `min(E, to)`.
    pub fn log(&self, to: &Bound) -> Result<QSeries<C>, QError> {
        let c = self.positive_grid("log")?;
        match c.first() {
            Some((0, c0)) if c0.is_one_elem() => {}
            _ => return Err(QError::Precondition("log needs constant term 1".into())),
        }
        let c = &c[1..];
        if c.is_empty() && self.is_exact() {
            return Ok(QSeries::zero(&self.ctx));
        }
        let bound = self.effective_bound(self.known_below.clone(), to, "log")?;
        let n = self.steps_below(&bound);
        let mut l: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                l.push(C::zero_in(&self.ctx));
                continue;
            }
            let mut acc = C::zero_in(&self.ctx);
            for (j, cj) in c {
                if *j >= k {
                    break;
                }
                acc = acc.plus(&l[k - j].times(cj).scaled(&Rational::from(k - j)));
            }
            let own = c.iter().find(|(j, _)| *j == k).map(|(_, x)| x.clone()).unwrap_or_else(|| C::zero_in(&self.ctx));
            l.push(own.minus(&acc.scaled(&Rational::new(1, k as i64))));
        }
        let step = Rational::new(1, self.denominator as i64);
        let terms = l.into_iter().enumerate().map(|(k, lk)| (&step * &Rational::from(k), lk));
        Ok(QSeries::from_terms(&self.ctx, self.denominator, terms, Bound::Finite(bound)))
    }

    /// Agreement of all coefficients below `bound`, which both must cover.
    pub fn agrees_below(&self, other: &QSeries<C>, bound: &Rational) -> Result<bool, QError> {
        self.require_known_below(bound)?;
        other.require_known_below(bound)?;
        Ok(self.first_difference(other, bound).is_none())
    }

    /// The least exponent below `bound` where the two known parts differ.
    pub fn first_difference(&self, other: &QSeries<C>, bound: &Rational) -> Option<Rational> {
        let mut exps: Vec<&Rational> = self.terms.keys().chain(other.terms.keys()).filter(|e| *e < bound).collect();
        exps.sort();
        exps.dedup();
        exps.into_iter()
            .find(|e| self.coefficient(e) != other.coefficient(e))
            .cloned()
    }

    pub fn to_file_with<T>(&self, f: impl Fn(&C) -> T) -> SeriesFile<T> {
        let n = Rational::from(self.denominator as i64);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| TermEntry { num: (e * &n).to_i64().expect("grid exponent"), coeff: f(c) })
            .collect();
        SeriesFile { denominator: self.denominator, terms, known_below: self.known_below.clone(), low: self.low.clone() }
    }

    pub fn from_file_with<T>(
        file: &SeriesFile<T>,
        ctx: &C::Ctx,
        f: impl Fn(&T) -> Result<C, QError>,
    ) -> Result<QSeries<C>, QError> {
        if file.denominator == 0 {
            return Err(QError::Format("denominator must be positive".into()));
        }
        let den = Rational::from(file.denominator as i64);
        let mut terms = Vec::with_capacity(file.terms.len());
        for t in &file.terms {
            let e = Rational::from(t.num) / den.clone();
            if !file.known_below.covers(&e) {
                return Err(QError::Format(format!("term at {e} lies beyond known_below {}", file.known_below)));
            }
            if e < file.low {
                return Err(QError::Format(format!("term at {e} lies below low {}", file.low)));
            }
            terms.push((e, f(&t.coeff)?));
        }
        let s = QSeries::from_terms(ctx, file.denominator, terms, file.known_below.clone());
        if s.denominator != file.denominator {
            return Err(QError::Format("exponent off the declared grid".into()));
        }
        Ok(s.with_low(file.low.clone()))
    }
}

impl<C: Coefficient + Serialize> QSeries<C> {
    pub fn to_file(&self) -> SeriesFile<C> {
        self.to_file_with(C::clone)
    }
}

impl QSeries<Rational> {
    /// Exact series from integer coefficients `cs[i]` at exponent `start + i`.
    pub fn from_integers(start: i64, cs: &[i64], known_below: Bound) -> QSeries<Rational> {
        let terms = cs.iter().enumerate().map(|(i, &c)| (Rational::from(start + i as i64), Rational::from(c)));
        QSeries::from_terms(&(), 1, terms, known_below).with_low(Rational::from(start))
    }
}

/// Series file: `{"denominator": N, "terms": [{"num": n, "coeff": …}], "known_below": "p/q", "low": "p/q"}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeriesFile<T> {
    pub denominator: u64,
    pub terms: Vec<TermEntry<T>>,
    pub known_below: Bound,
    pub low: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermEntry<T> {
    pub num: i64,
    pub coeff: T,
}

impl<C: Coefficient> Coefficient for QSeries<C> {
    type Ctx = C::Ctx;

    fn ctx(&self) -> C::Ctx {
        self.ctx.clone()
    }
    fn zero_in(ctx: &C::Ctx) -> QSeries<C> {
        QSeries::zero(ctx)
    }
    fn one_in(ctx: &C::Ctx) -> QSeries<C> {
        QSeries::one(ctx)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_exact_zero()
    }
    fn plus(&self, other: &QSeries<C>) -> QSeries<C> {
        self.add(other)
    }
    fn negated(&self) -> QSeries<C> {
        self.neg()
    }
    fn times(&self, other: &QSeries<C>) -> QSeries<C> {
        self.mul(other)
    }
    fn scaled(&self, r: &Rational) -> QSeries<C> {
        self.scale(r)
    }
    fn is_one_elem(&self) -> bool {
        self.is_exact() && self.terms.len() == 1 && self.leading().is_some_and(|(e, c)| e.is_zero() && c.is_one_elem())
    }
    fn times_cyclotomic(&self, z: &Cyclotomic) -> Option<QSeries<C>> {
        let terms = self.terms.iter().map(|(e, c)| c.times_cyclotomic(z).map(|c| (e.clone(), c))).collect::<Option<Vec<_>>>()?;
        Some(QSeries::from_terms(&self.ctx, self.denominator, terms, self.known_below.clone()).with_low(self.low.clone()))
    }
}
