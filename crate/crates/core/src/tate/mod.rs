//! Tate K-theory of `pt//G`: one `q^{1/|g|}`-series of virtual characters of
//! the centralizer `C_g` per conjugacy class `[g]`, subject to the rotation
//! condition, and the operators acting on such elements.

mod operators;

pub use operators::{
    adams_tate, atiyah_symmetric_tate, beta, beta_by_characters, exterior_tate, hecke, hecke_by_characters,
    induction_by_centralizers, induction_tate, s_map_theta, symmetric_tate, symmetric_tate_hecke, RootComponents,
    SymmetricVia,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charring::{induce_from, central_eigenprojection, CharError, ClassValue, VirtualCharacter};
use crate::exactnum::{Bound, Cyclotomic, Rational};
use crate::groups::{FinGroup, GroupError, GroupSpec, Subgroup};
use crate::qgraded::{Coefficient, QError, QSeries, SeriesFile, TSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TateError {
    #[error("elements live over different groups")]
    FrameMismatch,
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("coefficients of component {0} must be characters of its centralizer")]
    WrongCoefficientGroup(usize),
    #[error("component {class} has exponent {exponent} off the grid 1/{order}")]
    OffGrid { class: usize, exponent: Rational, order: usize },
    #[error("component {class} has negative exponent {exponent} but the element is not Laurent")]
    NegativeExponent { class: usize, exponent: Rational },
    #[error("elements {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("invalid subgroup witness: {0}")]
    InvalidWitness(String),
    #[error("the two pipelines disagree: {0}")]
    Mismatch(String),
    #[error("invalid element file: {0}")]
    Format(String),
    #[error(transparent)]
    Series(#[from] QError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Per-class data of `G`: the chosen representative `g`, its order and its
/// centralizer.
#[derive(Debug)]
pub struct ClassFrame {
    pub representative: usize,
    pub order: usize,
    pub centralizer: Subgroup,
    /// `g` as an element of the centralizer's own table.
    pub rep_in_centralizer: usize,
}

/// Shared bookkeeping for all elements over one group.
#[derive(Debug)]
pub struct TateFrame {
    pub group: Arc<FinGroup>,
    pub classes: Vec<ClassFrame>,
}

impl TateFrame {
    pub fn new(group: Arc<FinGroup>) -> Arc<TateFrame> {
        let classes = group
            .conjugacy()
            .representatives
            .iter()
            .map(|&g| {
                let centralizer = group.centralizer(g);
                let rep_in_centralizer = centralizer.index_of(g).expect("g centralizes itself");
                ClassFrame { representative: g, order: group.element_order(g), centralizer, rep_in_centralizer }
            })
            .collect();
        Arc::new(TateFrame { group, classes })
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Moves a commuting pair into the stored frame: the class of `g` and
    /// `s h s⁻¹` as a centralizer element, for the least `s` with `s g s⁻¹`
    /// the representative.
    pub fn locate(&self, g: usize, h: usize) -> Result<(usize, usize), TateError> {
        let grp = &self.group;
        if !grp.commute(g, h) {
            return Err(TateError::NotCommuting(g, h));
        }
        let class = grp.class_of(g);
        let s = grp.conjugator_to_rep(g);
        let h2 = grp.conjugate(s, h);
        Ok((class, self.classes[class].centralizer.index_of(h2).expect("conjugated pair commutes")))
    }

    /// The centralizer's class representatives, as elements of `G`.
    pub fn centralizer_class_reps(&self, class: usize) -> Vec<usize> {
        let c = &self.classes[class].centralizer;
        c.group.conjugacy().representatives.iter().map(|&r| c.embedding[r]).collect()
    }
}

/// `⊕_{[g]} R(C_g)((q^{1/|g|}))`, known below a shared bound.
#[derive(Clone, Debug)]
pub struct TateElement {
    frame: Arc<TateFrame>,
    components: Vec<QSeries<VirtualCharacter>>,
    laurent: bool,
}

impl PartialEq for TateElement {
    fn eq(&self, other: &TateElement) -> bool {
        Arc::ptr_eq(&self.frame, &other.frame) && self.components == other.components
    }
}

fn shared_bound(components: &[QSeries<VirtualCharacter>]) -> Bound {
    components.iter().fold(Bound::Infinite, |b, s| Bound::min(&b, s.known_below()))
}

impl TateElement {
    /// Validates shapes and brings every component to the common bound and
    /// the grid `1/|g|`. The rotation condition is checked separately.
    pub fn new(
        frame: Arc<TateFrame>,
        components: Vec<QSeries<VirtualCharacter>>,
        laurent: bool,
    ) -> Result<TateElement, TateError> {
        if components.len() != frame.class_count() {
            return Err(TateError::ComponentCount { expected: frame.class_count(), got: components.len() });
        }
        let bound = shared_bound(&components);
        let mut out = Vec::with_capacity(components.len());
        for (c, s) in components.into_iter().enumerate() {
            let cf = &frame.classes[c];
            if !Arc::ptr_eq(s.ctx(), &cf.centralizer.group) {
                return Err(TateError::WrongCoefficientGroup(c));
            }
            let s = s.truncate(&bound);
            for (e, _) in s.terms() {
                if !(e * &Rational::from(cf.order)).is_integer() {
                    return Err(TateError::OffGrid { class: c, exponent: e.clone(), order: cf.order });
                }
                if !laurent && e.is_negative() {
                    return Err(TateError::NegativeExponent { class: c, exponent: e.clone() });
                }
            }
            let low = s.low().clone();
            let terms: Vec<_> = s.terms().map(|(e, x)| (e.clone(), x.clone())).collect();
            let s = QSeries::from_terms(s.ctx(), cf.order as u64, terms, bound.clone());
            let s = if laurent { s.with_low(low) } else { s };
            out.push(s);
        }
        Ok(TateElement { frame, components: out, laurent })
    }

    /// Builds components from `(class, exponent, coefficient)` triples.
    pub fn from_terms(
        frame: Arc<TateFrame>,
        terms: impl IntoIterator<Item = (usize, Rational, VirtualCharacter)>,
        known_below: Bound,
        laurent: bool,
    ) -> Result<TateElement, TateError> {
        let mut per: Vec<Vec<(Rational, VirtualCharacter)>> = vec![Vec::new(); frame.class_count()];
        for (c, e, x) in terms {
            if c >= per.len() {
                return Err(TateError::ComponentCount { expected: frame.class_count(), got: c + 1 });
            }
            per[c].push((e, x));
        }
        let components = per
            .into_iter()
            .enumerate()
            .map(|(c, ts)| {
                let cf = &frame.classes[c];
                QSeries::from_terms(&cf.centralizer.group, cf.order as u64, ts, known_below.clone())
            })
            .collect();
        TateElement::new(frame, components, laurent)
    }

    pub fn zero(frame: &Arc<TateFrame>) -> TateElement {
        let components = frame.classes.iter().map(|cf| QSeries::zero(&cf.centralizer.group).with_denominator(cf.order as u64)).collect();
        TateElement { frame: frame.clone(), components, laurent: false }
    }

    /// The unit: the trivial character at `q⁰` in every component.
    pub fn one(frame: &Arc<TateFrame>) -> TateElement {
        TateElement::constant(frame, &Rational::one())
    }

    pub fn constant(frame: &Arc<TateFrame>, c: &Rational) -> TateElement {
        let components = frame
            .classes
            .iter()
            .map(|cf| {
                let chi = VirtualCharacter::trivial(cf.centralizer.group.clone()).scaled(c);
                QSeries::constant(chi).with_denominator(cf.order as u64)
            })
            .collect();
        TateElement { frame: frame.clone(), components, laurent: false }
    }

    pub fn frame(&self) -> &Arc<TateFrame> {
        &self.frame
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.frame.group
    }

    pub fn components(&self) -> &[QSeries<VirtualCharacter>] {
        &self.components
    }

    pub fn component(&self, class: usize) -> &QSeries<VirtualCharacter> {
        &self.components[class]
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    pub fn known_below(&self) -> Bound {
        shared_bound(&self.components)
    }

    pub fn is_exact(&self) -> bool {
        self.known_below().is_infinite()
    }

    pub fn require_known_below(&self, needed: &Rational) -> Result<(), TateError> {
        let needed = Bound::Finite(needed.clone());
        let available = self.known_below();
        if available >= needed {
            Ok(())
        } else {
            Err(QError::InsufficientPrecision { needed: Box::new(needed), available: Box::new(available) }.into())
        }
    }

    pub fn truncate(&self, bound: &Bound) -> TateElement {
        let components = self.components.iter().map(|s| s.truncate(bound)).collect();
        TateElement { frame: self.frame.clone(), components, laurent: self.laurent }
    }

    fn same_frame(&self, other: &TateElement) -> Result<(), TateError> {
        if Arc::ptr_eq(&self.frame, &other.frame) {
            Ok(())
        } else {
            Err(TateError::FrameMismatch)
        }
    }

    fn zip(&self, other: &TateElement, f: impl Fn(&QSeries<VirtualCharacter>, &QSeries<VirtualCharacter>) -> QSeries<VirtualCharacter>) -> TateElement {
        let components: Vec<_> = self.components.iter().zip(&other.components).map(|(a, b)| f(a, b)).collect();
        let bound = shared_bound(&components);
        let components = components.into_iter().map(|s| s.truncate(&bound)).collect();
        TateElement { frame: self.frame.clone(), components, laurent: self.laurent || other.laurent }
    }

    pub(crate) fn map_components(&self, f: impl Fn(usize, &QSeries<VirtualCharacter>) -> QSeries<VirtualCharacter>) -> TateElement {
        let components: Vec<_> = self.components.iter().enumerate().map(|(c, s)| f(c, s)).collect();
        let bound = shared_bound(&components);
        let components = components.into_iter().map(|s| s.truncate(&bound)).collect();
        TateElement { frame: self.frame.clone(), components, laurent: self.laurent }
    }

    pub fn add(&self, other: &TateElement) -> Result<TateElement, TateError> {
        self.same_frame(other)?;
        Ok(self.zip(other, QSeries::add))
    }

    pub fn sub(&self, other: &TateElement) -> Result<TateElement, TateError> {
        self.same_frame(other)?;
        Ok(self.zip(other, QSeries::sub))
    }

    pub fn mul(&self, other: &TateElement) -> Result<TateElement, TateError> {
        self.same_frame(other)?;
        Ok(self.zip(other, QSeries::mul))
    }

    pub fn neg(&self) -> TateElement {
        self.map_components(|_, s| s.neg())
    }

    pub fn scale(&self, r: &Rational) -> TateElement {
        self.map_components(|_, s| s.scale(r))
    }

    /// Checks `χ(g·h) = e^{2πie} χ(h)` for the coefficient `χ` at each exponent
    /// `e` of each component, over the classes of the centralizer.
    pub fn validate_rotation(&self) -> RotationReport {
        for (c, s) in self.components.iter().enumerate() {
            let cf = &self.frame.classes[c];
            let cg = &cf.centralizer.group;
            let n = cf.order as i64;
            for (e, chi) in s.terms() {
                let k = (e * &Rational::from(n)).to_i64().expect("grid exponent");
                let phase = Cyclotomic::root_of_unity(n as u64, k);
                for &h in &cg.conjugacy().representatives {
                    let lhs = chi.value(cg.mul(cf.rep_in_centralizer, h));
                    let rhs = chi.value(h).mul(&phase);
                    if *lhs != rhs {
                        let violation = RotationViolation {
                            class: c,
                            representative: cf.representative,
                            exponent: e.clone(),
                            element: cf.centralizer.embedding[h],
                        };
                        return RotationReport { valid: false, violation: Some(violation) };
                    }
                }
            }
        }
        RotationReport { valid: true, violation: None }
    }

    /// `F(g, h; q)` with coefficients evaluated at `h`, for commuting `g, h`.
    pub fn character_eval(&self, g: usize, h: usize) -> Result<QSeries<Cyclotomic>, TateError> {
        let (class, h2) = self.frame.locate(g, h)?;
        Ok(self.components[class].map_coefficients(&(), |chi| chi.value(h2).clone()))
    }

    /// Reassembles a component from one series per centralizer class, in the
    /// centralizer's class order.
    pub(crate) fn assemble_component(
        frame: &TateFrame,
        class: usize,
        per_class: &[QSeries<Cyclotomic>],
    ) -> QSeries<VirtualCharacter> {
        let cf = &frame.classes[class];
        let cg = cf.centralizer.group.clone();
        let bound = per_class.iter().fold(Bound::Infinite, |b, s| Bound::min(&b, s.known_below()));
        let low = per_class.iter().map(|s| s.low().clone()).min().unwrap_or_else(Rational::zero);
        let mut exps: BTreeMap<Rational, ()> = BTreeMap::new();
        for s in per_class {
            for (e, _) in s.terms() {
                if bound.covers(e) {
                    exps.insert(e.clone(), ());
                }
            }
        }
        let terms = exps.into_keys().map(|e| {
            let values = per_class.iter().map(|s| s.coefficient(&e).expect("below bound")).collect();
            (e, VirtualCharacter::new(cg.clone(), values))
        });
        QSeries::from_terms(&cg, cf.order as u64, terms.collect::<Vec<_>>(), bound).with_low(low)
    }

    pub fn to_file(&self) -> Result<TateFile, TateError> {
        let group = GroupSpec::of(&self.frame.group)
            .ok_or_else(|| TateError::Format("group has no permutation description".into()))?;
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(c, s)| {
                let reps = self.frame.centralizer_class_reps(c);
                let series = s.to_file_with(|chi| {
                    reps.iter()
                        .zip(&chi.values)
                        .map(|(&representative, v)| ClassValue { representative, value: v.clone() })
                        .collect()
                });
                ComponentFile { representative: self.frame.classes[c].representative, series }
            })
            .collect();
        Ok(TateFile { group, laurent: self.laurent, known_below: self.known_below(), components })
    }

    /// Reads an element over `frame`, whose group must be the one the file
    /// describes. Components may use any class representative; classes
    /// without a component are zero.
    pub fn from_file(file: &TateFile, frame: &Arc<TateFrame>) -> Result<TateElement, TateError> {
        let grp = &frame.group;
        let mut components: Vec<Option<QSeries<VirtualCharacter>>> = vec![None; frame.class_count()];
        for comp in &file.components {
            let g = comp.representative;
            if g >= grp.order() {
                return Err(TateError::Format(format!("element {g} out of range")));
            }
            let class = grp.class_of(g);
            let s = grp.conjugator_to_rep(g);
            let cf = &frame.classes[class];
            let cg = cf.centralizer.group.clone();
            let series = QSeries::from_file_with(&comp.series, &cg, |values: &Vec<ClassValue>| {
                let mut out: Vec<Option<Cyclotomic>> = vec![None; cg.class_count()];
                for cv in values {
                    if cv.representative >= grp.order() || !grp.commute(g, cv.representative) {
                        return Err(QError::Format(format!("{} does not centralize {g}", cv.representative)));
                    }
                    let h = cf.centralizer.index_of(grp.conjugate(s, cv.representative)).expect("centralizes");
                    let k = cg.class_of(h);
                    if out[k].replace(cv.value.clone()).is_some_and(|old| old != cv.value) {
                        return Err(QError::Format(format!("conflicting values at {}", cv.representative)));
                    }
                }
                let values = out
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| QError::Format(format!("character in component of {g} misses a class")))?;
                Ok(VirtualCharacter::new(cg.clone(), values))
            })?;
            if components[class].replace(series).is_some() {
                return Err(TateError::Format(format!("class of {g} given twice")));
            }
        }
        let components = components
            .into_iter()
            .enumerate()
            .map(|(c, s)| {
                let s = s.unwrap_or_else(|| QSeries::zero(&frame.classes[c].centralizer.group));
                s.truncate(&file.known_below)
            })
            .collect();
        TateElement::new(frame.clone(), components, file.laurent)
    }

    /// Reads a file, building its group.
    pub fn load(file: &TateFile) -> Result<TateElement, TateError> {
        let frame = TateFrame::new(Arc::new(file.group.build()?));
        TateElement::from_file(file, &frame)
    }
}

/// Element file: the group, one series of characters per class (coefficient
/// values keyed by centralizer class representatives, as elements of `G`),
/// the Laurent flag and the shared bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TateFile {
    pub group: GroupSpec,
    #[serde(default)]
    pub laurent: bool,
    pub known_below: Bound,
    pub components: Vec<ComponentFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentFile {
    pub representative: usize,
    pub series: SeriesFile<Vec<ClassValue>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationViolation {
    pub class: usize,
    pub representative: usize,
    pub exponent: Rational,
    pub element: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationReport {
    pub valid: bool,
    pub violation: Option<RotationViolation>,
}

impl Coefficient for TateElement {
    type Ctx = Arc<TateFrame>;

    fn ctx(&self) -> Arc<TateFrame> {
        self.frame.clone()
    }
    fn zero_in(frame: &Arc<TateFrame>) -> TateElement {
        TateElement::zero(frame)
    }
    fn one_in(frame: &Arc<TateFrame>) -> TateElement {
        TateElement::one(frame)
    }
    fn is_zero_elem(&self) -> bool {
        self.components.iter().all(|s| s.is_zero_elem())
    }
    fn plus(&self, other: &TateElement) -> TateElement {
        self.add(other).expect("elements over one group")
    }
    fn negated(&self) -> TateElement {
        self.neg()
    }
    fn times(&self, other: &TateElement) -> TateElement {
        self.mul(other).expect("elements over one group")
    }
    fn scaled(&self, r: &Rational) -> TateElement {
        self.scale(r)
    }
    fn is_one_elem(&self) -> bool {
        self.components.iter().all(|s| s.is_one_elem())
    }
}

/// A random rotation-valid element with integer-valued characters, drawn
/// from `pick(lo, hi)` (an integer in `lo..=hi`). Coefficients are
/// eigenprojections of sums of characters induced from cyclic subgroups,
/// so they are virtual characters. Exponents lie in `[0, q_bound)`; the
/// result is exact.
pub fn sample_element(frame: &Arc<TateFrame>, q_bound: u32, pick: &mut impl FnMut(i64, i64) -> i64) -> TateElement {
    let mut terms = Vec::new();
    for (c, cf) in frame.classes.iter().enumerate() {
        let cg = cf.centralizer.group.clone();
        let n = cf.order;
        for k in 0..(q_bound as usize * n) {
            if pick(0, 2) == 0 {
                continue;
            }
            let mut chi = VirtualCharacter::zero(cg.clone());
            for _ in 0..2 {
                let x = pick(0, cg.order() as i64 - 1) as usize;
                let m = cg.element_order(x);
                let j = pick(0, m as i64 - 1);
                let powers: Vec<usize> = (0..m).map(|i| cg.pow(x, i as i64)).collect();
                let lambda = induce_from(cg.clone(), &powers, |y| {
                    let i = powers.iter().position(|&p| p == y).expect("member");
                    Cyclotomic::root_of_unity(m as u64, j * i as i64)
                });
                let w = pick(-2, 2);
                chi = chi.add(&lambda.scaled(&Rational::from(w))).expect("same group");
            }
            let e = Rational::new(k as i64, n as i64);
            let chi = central_eigenprojection(&chi, cf.rep_in_centralizer, &e).expect("representative is central");
            terms.push((c, e, chi));
        }
    }
    TateElement::from_terms(frame.clone(), terms, Bound::Infinite, false).expect("well-formed sample")
}

/// The first place where two `t`-series of elements differ below their
/// common bound: `(t-degree, class, exponent)`.
pub fn first_tseries_difference(a: &TSeries<TateElement>, b: &TSeries<TateElement>) -> Option<(usize, usize, Rational)> {
    let order = a.order().min(b.order());
    for n in 0..=order {
        let (x, y) = (a.coefficient(n), b.coefficient(n));
        for c in 0..x.components.len() {
            let (sx, sy) = (&x.components[c], &y.components[c]);
            let bound = match Bound::min(sx.known_below(), sy.known_below()) {
                Bound::Finite(r) => r,
                Bound::Infinite => {
                    let top = sx.terms().chain(sy.terms()).map(|(e, _)| e.clone()).max().unwrap_or_else(Rational::zero);
                    top + Rational::one()
                }
            };
            if let Some(e) = sx.first_difference(sy, &bound) {
                return Some((n, c, e));
            }
        }
    }
    None
}
