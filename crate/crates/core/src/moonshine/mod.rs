//! McKay-Thompson series: Faber polynomials, weight-0 Hecke operators, an
//! independent `j` oracle, Adams replicates and replicability checks.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::charring::{adams, VirtualCharacter};
use crate::exactnum::{Bound, Cyclotomic, Rational};
use crate::qgraded::{Coefficient, Poly, QError, QSeries, TSeries};
use crate::tate::{exterior_tate, TateElement, TateError, TateFrame};

/// Largest order accepted by [`j_oracle`].
pub const J_ORDER_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoonshineError {
    #[error("not a McKay-Thompson series: {0}")]
    Shape(String),
    #[error("order {requested} exceeds the cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("Faber polynomial {m} fails its characterization at q^{exponent}")]
    Characterization { m: usize, exponent: Rational },
    #[error(transparent)]
    Series(#[from] QError),
    #[error(transparent)]
    Tate(#[from] TateError),
}

fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

fn require_covers<C: Coefficient>(s: &QSeries<C>, e: i64) -> Result<(), QError> {
    s.require_known_below(&Rational::from(e + 1))
}

/// `q⁻¹ + a₁q + a₂q² + …` in the identity component of a Laurent element.
/// The other components ride along untouched.
#[derive(Clone, Debug, PartialEq)]
pub struct McKayThompson {
    base: TateElement,
}

impl McKayThompson {
    pub fn new(base: TateElement) -> Result<McKayThompson, MoonshineError> {
        let grp = base.group().clone();
        let e = grp.class_of(grp.identity());
        let s = base.component(e);
        match s.leading() {
            Some((lead, chi)) if *lead == Rational::from(-1) && chi.values.iter().all(Cyclotomic::is_one) => {}
            _ => return Err(MoonshineError::Shape("identity component must start with the trivial character at q^-1".into())),
        }
        if s.terms().any(|(x, _)| !x.is_integer()) {
            return Err(MoonshineError::Shape("identity component has fractional exponents".into()));
        }
        if s.coefficient(&Rational::zero()).is_some_and(|c| !c.is_zero()) {
            return Err(MoonshineError::Shape("constant term must vanish".into()));
        }
        Ok(McKayThompson { base })
    }

    /// `F = Σ cₙqⁿ` over the trivial group.
    pub fn from_scalar(f: &QSeries<Rational>) -> Result<McKayThompson, MoonshineError> {
        let frame = TateFrame::new(Arc::new(crate::groups::FinGroup::trivial()));
        let cg = frame.classes[0].centralizer.group.clone();
        let terms = f
            .terms()
            .map(|(e, c)| (0, e.clone(), VirtualCharacter::constant(cg.clone(), Cyclotomic::from_rational(c.clone()))));
        McKayThompson::new(TateElement::from_terms(frame, terms, f.known_below().clone(), true)?)
    }

    pub fn base(&self) -> &TateElement {
        &self.base
    }

    pub fn known_below(&self) -> Bound {
        self.base.known_below()
    }

    /// `F_h(q)`: the identity component evaluated at `h`.
    pub fn thompson(&self, h: usize) -> Result<QSeries<Cyclotomic>, MoonshineError> {
        let grp = self.base.group();
        Ok(self.base.character_eval(grp.identity(), h)?.with_denominator(1))
    }

    /// The element with only its identity component kept.
    fn identity_part(&self) -> Result<TateElement, TateError> {
        let grp = self.base.group();
        let e = grp.class_of(grp.identity());
        let frame = self.base.frame().clone();
        let components = (0..frame.class_count())
            .map(|c| {
                if c == e {
                    self.base.component(c).clone()
                } else {
                    QSeries::zero(&frame.classes[c].centralizer.group).truncate(&self.base.known_below())
                }
            })
            .collect();
        TateElement::new(frame, components, true)
    }
}

/// `F^{(a)}`: coefficient Adams on every coefficient, exponents unchanged.
pub fn replicate(f: &McKayThompson, a: usize) -> McKayThompson {
    assert!(a >= 1, "replicates are indexed by positive integers");
    let frame = f.base.frame().clone();
    let components = f
        .base
        .components()
        .iter()
        .enumerate()
        .map(|(c, s)| s.map_coefficients(&frame.classes[c].centralizer.group, |chi| adams(chi, a)))
        .collect();
    let base = TateElement::new(frame, components, true).expect("same shape as the input");
    McKayThompson { base }
}

/// `Σ_{ad=m} (1/a) Σ_j c^{(a)}_{jd} q^{aj}` with `c^{(a)}` the coefficients of
/// `replicate(a)`.
pub fn hecke_with_replicates<C: Coefficient>(
    m: usize,
    replicate: impl Fn(usize) -> QSeries<C>,
) -> QSeries<C> {
    assert!(m >= 1, "Hecke operators are indexed by positive integers");
    let mut terms = Vec::new();
    let mut bound = Bound::Infinite;
    let mut low = Rational::zero();
    let mut ctx = None;
    for d in divisors(m) {
        let a = m / d;
        let f = replicate(a);
        let ratio = Rational::new(a as i64, d as i64);
        let weight = Rational::new(1, a as i64);
        for (e, c) in f.terms() {
            let j = e / &Rational::from(d);
            if j.is_integer() {
                terms.push((&j * &Rational::from(a), c.scaled(&weight)));
            }
        }
        bound = Bound::min(&bound, &f.known_below().scale(&ratio));
        low = low.min(f.low() * &ratio);
        ctx.get_or_insert_with(|| f.ctx().clone());
    }
    let ctx = ctx.expect("m has a divisor");
    QSeries::from_terms(&ctx, 1, terms, bound).with_low(low)
}

/// The classical weight-0 Hecke operator.
pub fn hecke_classical(f: &QSeries<Rational>, m: usize) -> QSeries<Rational> {
    hecke_with_replicates(m, |_| f.clone())
}

/// `j − 744 = E₄³/Δ − 744`, known below `q^order`.
pub fn j_oracle(order: usize) -> Result<QSeries<Rational>, MoonshineError> {
    if order > J_ORDER_CAP {
        return Err(MoonshineError::CapExceeded { requested: order, cap: J_ORDER_CAP });
    }
    let n = order as i64 + 1;
    let to = Bound::finite(n);
    let sigma3 = |k: i64| (1..=k).filter(|d| k % d == 0).map(|d| d * d * d).sum::<i64>();
    let e4_terms = (0..n).map(|k| (Rational::from(k), Rational::from(if k == 0 { 1 } else { 240 * sigma3(k) })));
    let e4 = QSeries::from_terms(&(), 1, e4_terms, to.clone());
    let mut euler = QSeries::<Rational>::one(&()).truncate(&to);
    for k in 1..n {
        let factor = QSeries::from_terms(&(), 1, [(Rational::zero(), Rational::one()), (Rational::from(k), Rational::from(-1))], Bound::Infinite);
        euler = euler.mul(&factor);
    }
    let mut eta24 = QSeries::<Rational>::one(&()).truncate(&to);
    for _ in 0..24 {
        eta24 = eta24.mul(&euler);
    }
    let quotient = e4.mul(&e4).mul(&e4).mul(&eta24.invert(&to)?);
    let j = quotient.shift(&Rational::from(-1));
    let constant = QSeries::constant(Rational::from(-744));
    Ok(j.add(&constant).truncate(&Bound::finite(order as i64)))
}

/// `Φ_{m,F}` for `m = 1..=m_max` from `log(t(F(t) − w)) = −Σ Φ_m(w) tᵐ/m`,
/// each checked against `Φ_m(F(q)) = q^{−m} + O(q)`.
pub fn faber<C: Coefficient>(f: &QSeries<C>, m_max: usize) -> Result<Vec<Poly<C>>, MoonshineError> {
    let ctx = f.ctx().clone();
    match f.leading() {
        Some((lead, c)) if *lead == Rational::from(-1) && c.is_one_elem() => {}
        _ => return Err(MoonshineError::Shape("series must start with q^-1".into())),
    }
    if f.terms().any(|(e, _)| !e.is_integer()) {
        return Err(MoonshineError::Shape("fractional exponents".into()));
    }
    if m_max == 0 {
        return Ok(Vec::new());
    }
    require_covers(f, m_max as i64 - 1)?;
    let coeff = |k: i64| f.coefficient(&Rational::from(k)).expect("checked precision");
    let mut t_coeffs = vec![Poly::one_in(&ctx)];
    for n in 1..=m_max as i64 {
        let mut p = Poly::constant(coeff(n - 1));
        if n == 1 {
            p = p.minus(&Poly::variable(&ctx));
        }
        t_coeffs.push(p);
    }
    let log = TSeries::new(&ctx, t_coeffs, m_max).log()?;
    let polys: Vec<Poly<C>> = (1..=m_max).map(|m| log.coefficient(m).scaled(&Rational::from(-(m as i64)))).collect();
    for (i, p) in polys.iter().enumerate() {
        let m = i as i64 + 1;
        let value = p.eval_series(f);
        let target = QSeries::monomial(C::one_in(&ctx), Rational::from(-m));
        if let Some(exponent) = value.first_difference(&target, &Rational::one()) {
            return Err(MoonshineError::Characterization { m: m as usize, exponent });
        }
    }
    Ok(polys)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn of(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    /// The element `h` whose Thompson series disagrees.
    pub element: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_degree: Option<usize>,
    pub exponent: Rational,
    pub lhs: Cyclotomic,
    pub rhs: Cyclotomic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerM {
    pub m: usize,
    pub faber_vs_hecke: Verdict,
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoVariable {
    pub verdict: Verdict,
    pub t_order: usize,
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicabilityReport {
    pub replicable: bool,
    pub m_max: usize,
    pub q_bound: usize,
    pub per_m: Vec<PerM>,
    pub two_variable: TwoVariable,
}

fn first_mismatch(
    element: usize,
    t_degree: Option<usize>,
    lhs: &QSeries<Cyclotomic>,
    rhs: &QSeries<Cyclotomic>,
    q_bound: usize,
) -> Result<Option<Mismatch>, QError> {
    require_covers(lhs, q_bound as i64)?;
    require_covers(rhs, q_bound as i64)?;
    Ok(lhs.first_difference(rhs, &Rational::from(q_bound as i64 + 1)).map(|exponent| Mismatch {
        element,
        t_degree,
        lhs: lhs.coefficient(&exponent).expect("known"),
        rhs: rhs.coefficient(&exponent).expect("known"),
        exponent,
    }))
}

/// For every `m ≤ m_max` and every class of `h`, compares `Φ_m(F_h)` with
/// `m·T_m(F)_h` built from the replicates `F^{(a)}_h` through `q^{q_bound}`,
/// then runs [`two_variable_check`] through `t^{m_max}`, the range on which
/// it carries the same information.
pub fn replicability_check(f: &McKayThompson, m_max: usize, q_bound: usize) -> Result<ReplicabilityReport, MoonshineError> {
    let reps = f.base.group().conjugacy().representatives.clone();
    let replicates: Vec<McKayThompson> = (1..=m_max).map(|a| replicate(f, a)).collect();

    let mut per_m = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut mismatch = None;
        for &h in &reps {
            let f_h = f.thompson(h)?;
            let phi = faber(&f_h, m)?.pop().expect("m ≥ 1");
            let lhs = phi.eval_series(&f_h);
            let thompson = replicates.iter().map(|r| r.thompson(h)).collect::<Result<Vec<_>, _>>()?;
            let rhs = hecke_with_replicates(m, |a| thompson[a - 1].clone()).scale(&Rational::from(m));
            mismatch = first_mismatch(h, None, &lhs, &rhs, q_bound)?;
            if mismatch.is_some() {
                break;
            }
        }
        per_m.push(PerM { m, faber_vs_hecke: Verdict::of(mismatch.is_none()), first_mismatch: mismatch });
    }

    let two_variable = two_variable_check(f, m_max, q_bound)?;
    let replicable = per_m.iter().all(|p| p.faber_vs_hecke == Verdict::Pass) && two_variable.verdict == Verdict::Pass;
    Ok(ReplicabilityReport { replicable, m_max, q_bound, per_m, two_variable })
}

/// `t(F_h(t) − F_h(q)) = Λ_{−t}(F)(e, h)` for every class of `h`, through
/// `t^{t_order}` and `q^{q_bound}`, with `Λ` from the Tate exterior power of
/// the identity component.
pub fn two_variable_check(f: &McKayThompson, t_order: usize, q_bound: usize) -> Result<TwoVariable, MoonshineError> {
    let grp = f.base.group().clone();
    let lambda = exterior_tate(&f.identity_part()?, t_order)?.negate_variable();
    for &h in &grp.conjugacy().representatives {
        let f_h = f.thompson(h)?;
        if t_order >= 2 {
            require_covers(&f_h, t_order as i64 - 1)?;
        }
        let constant = |k: i64| QSeries::constant(f_h.coefficient(&Rational::from(k)).unwrap_or_else(Cyclotomic::zero));
        for n in 0..=t_order {
            let lhs = match n {
                0 => QSeries::one(&()),
                1 => constant(0).sub(&f_h),
                n => constant(n as i64 - 1),
            };
            let rhs = lambda.coefficient(n).character_eval(grp.identity(), h)?.with_denominator(1);
            if let Some(mismatch) = first_mismatch(h, Some(n), &lhs, &rhs, q_bound)? {
                return Ok(TwoVariable { verdict: Verdict::Fail, t_order, first_mismatch: Some(mismatch) });
            }
        }
    }
    Ok(TwoVariable { verdict: Verdict::Pass, t_order, first_mismatch: None })
}

#[cfg(test)]
mod tests;
