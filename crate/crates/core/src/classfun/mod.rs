//! n-class functions: functions on isomorphism classes of the n-fold inertia
//! groupoid `ΛⁿX`, i.e. on commuting n-tuples of automorphisms up to
//! simultaneous conjugation, with restriction, weighted transfer and the
//! natural pairing.

use std::sync::Arc;

use serde::Serialize;

use crate::exactnum::{Cyclotomic, Rational};
use crate::groupoids::{iterated_inertia, ArrowId, FibredSquare, FinGroupoid, GroupoidError, GroupoidFunctor, Inertia, Presented};

/// `ΛⁿX` together with the translation between its objects and tuples
/// `(x, g_1, …, g_n)` of pairwise commuting automorphisms of `x`.
pub struct InertiaTower {
    pub base: Arc<FinGroupoid>,
    levels: Vec<Presented<Inertia>>,
}

impl InertiaTower {
    pub fn new(base: Arc<FinGroupoid>, n: usize) -> Result<InertiaTower, GroupoidError> {
        let levels = iterated_inertia(base.clone(), n)?;
        Ok(InertiaTower { base, levels })
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    /// `ΛⁿX` itself.
    pub fn top(&self) -> &Arc<FinGroupoid> {
        self.levels.last().map_or(&self.base, |p| &p.groupoid)
    }

    fn groupoid_at(&self, m: usize) -> &Arc<FinGroupoid> {
        if m == 0 {
            &self.base
        } else {
            &self.levels[m - 1].groupoid
        }
    }

    /// An automorphism at level `m` as an automorphism of the base.
    fn lower(&self, m: usize, a: ArrowId) -> ArrowId {
        if m == 0 {
            a
        } else {
            self.lower(m - 1, self.levels[m - 1].decode(a).1)
        }
    }

    /// A base automorphism `g` of the object underlying `o` as an
    /// automorphism of `o` at level `m`.
    fn raise(&self, m: usize, o: usize, g: ArrowId) -> ArrowId {
        if m == 0 {
            return g;
        }
        let lvl = &self.levels[m - 1];
        let (below, _) = lvl.pres.object(o);
        lvl.encode(&(o, self.raise(m - 1, below, g)))
    }

    /// `(x, [g_1, …, g_n])` of a top-level object.
    pub fn tuple(&self, o: usize) -> (usize, Vec<ArrowId>) {
        let mut gs = Vec::with_capacity(self.n());
        let mut cur = o;
        for m in (1..=self.n()).rev() {
            let (below, c) = self.levels[m - 1].pres.object(cur);
            gs.push(self.lower(m - 1, c));
            cur = below;
        }
        gs.reverse();
        (cur, gs)
    }

    /// The top-level object of a commuting tuple.
    pub fn object_of(&self, x: usize, gs: &[ArrowId]) -> usize {
        assert_eq!(gs.len(), self.n(), "tuple length must match the tower height");
        let mut cur = x;
        for (m, &g) in gs.iter().enumerate() {
            let a = self.raise(m, cur, g);
            debug_assert_eq!(self.groupoid_at(m).component_of(a.src), self.groupoid_at(m).component_of(cur));
            cur = self.levels[m].pres.object_of(a);
        }
        cur
    }

    pub fn class_count(&self) -> usize {
        self.top().iso_class_count()
    }

    pub fn class_of(&self, o: usize) -> usize {
        self.top().component_of(o)
    }

    pub fn class_of_tuple(&self, x: usize, gs: &[ArrowId]) -> usize {
        self.class_of(self.object_of(x, gs))
    }

    /// Representative tuple of a class.
    pub fn representative(&self, class: usize) -> (usize, Vec<ArrowId>) {
        self.tuple(self.top().components()[class].objects[0])
    }

    pub fn aut_order(&self, class: usize) -> usize {
        self.top().components()[class].group.order()
    }

    /// Class of `Λⁿf` applied to a class.
    pub fn image_class(&self, f: &GroupoidFunctor, target: &InertiaTower, class: usize) -> usize {
        let (x, gs) = self.representative(class);
        let img: Vec<ArrowId> = gs.iter().map(|&g| f.arrow(g)).collect();
        target.class_of_tuple(f.object(x), &img)
    }
}

/// A function on the isomorphism classes of `ΛⁿX`.
#[derive(Clone)]
pub struct NClassFunction {
    pub tower: Arc<InertiaTower>,
    pub values: Vec<Cyclotomic>,
}

impl NClassFunction {
    pub fn constant(tower: Arc<InertiaTower>, c: Cyclotomic) -> NClassFunction {
        let values = vec![c; tower.class_count()];
        NClassFunction { tower, values }
    }

    /// Evaluates `f` on one representative per class.
    pub fn from_fn(tower: Arc<InertiaTower>, f: impl Fn(usize, &[ArrowId]) -> Cyclotomic) -> NClassFunction {
        let values = (0..tower.class_count())
            .map(|c| {
                let (x, gs) = tower.representative(c);
                f(x, &gs)
            })
            .collect();
        NClassFunction { tower, values }
    }

    /// The indicator of one class.
    pub fn indicator(tower: Arc<InertiaTower>, class: usize) -> NClassFunction {
        let mut values = vec![Cyclotomic::zero(); tower.class_count()];
        values[class] = Cyclotomic::one();
        NClassFunction { tower, values }
    }

    pub fn n(&self) -> usize {
        self.tower.n()
    }

    pub fn at(&self, x: usize, gs: &[ArrowId]) -> &Cyclotomic {
        &self.values[self.tower.class_of_tuple(x, gs)]
    }

    pub fn add(&self, other: &NClassFunction) -> NClassFunction {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect();
        NClassFunction { tower: self.tower.clone(), values }
    }

    pub fn scale(&self, c: &Cyclotomic) -> NClassFunction {
        NClassFunction { tower: self.tower.clone(), values: self.values.iter().map(|v| v.mul(c)).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_integral)
    }

    pub fn table(&self) -> ClassFunctionTable {
        let classes = (0..self.tower.class_count())
            .map(|c| {
                let (object, gs) = self.tower.representative(c);
                ClassEntry {
                    object,
                    elements: gs.iter().map(|g| g.elem).collect(),
                    automorphism_order: self.tower.aut_order(c),
                    value: self.values[c].clone(),
                }
            })
            .collect();
        ClassFunctionTable { n: self.n(), classes }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassEntry {
    pub object: usize,
    /// Vertex-group indices of the representative tuple.
    pub elements: Vec<usize>,
    pub automorphism_order: usize,
    pub value: Cyclotomic,
}

/// Serializable table of an n-class function.
#[derive(Debug, Clone, Serialize)]
pub struct ClassFunctionTable {
    pub n: usize,
    pub classes: Vec<ClassEntry>,
}

/// `f*χ`, the pullback along `Λⁿf`.
pub fn restrict(chi: &NClassFunction, f: &GroupoidFunctor, source: Arc<InertiaTower>) -> NClassFunction {
    assert_eq!(source.n(), chi.n(), "heights must match");
    let values =
        (0..source.class_count()).map(|c| chi.values[source.image_class(f, &chi.tower, c)].clone()).collect();
    NClassFunction { tower: source, values }
}

#[derive(Clone)]
pub struct Transfer {
    pub function: NClassFunction,
    pub faithful: bool,
    /// Whether every value is an algebraic integer.
    pub integral: bool,
}

/// `f_!χ(ḡ) = Σ_{[h̄] ↦ [ḡ]} |aut(ḡ)|/|aut(h̄)| · χ(h̄)`.
pub fn transfer(chi: &NClassFunction, f: &GroupoidFunctor, target: Arc<InertiaTower>) -> Transfer {
    assert_eq!(target.n(), chi.n(), "heights must match");
    let src = &chi.tower;
    let mut values = vec![Cyclotomic::zero(); target.class_count()];
    for c in 0..src.class_count() {
        if chi.values[c].is_zero() {
            continue;
        }
        let t = src.image_class(f, &target, c);
        let w = Rational::new(target.aut_order(t) as i64, src.aut_order(c) as i64);
        values[t] = values[t].add(&chi.values[c].scale(&w));
    }
    let function = NClassFunction { tower: target, values };
    let integral = function.is_integral();
    Transfer { function, faithful: f.is_faithful(), integral }
}

/// `Σ_{[x]} χ(x)ψ(x)/|aut(x)|`.
pub fn pairing(chi: &NClassFunction, psi: &NClassFunction) -> Cyclotomic {
    assert!(Arc::ptr_eq(&chi.tower, &psi.tower), "functions must live on the same tower");
    let terms: Vec<Cyclotomic> = (0..chi.values.len())
        .map(|c| chi.values[c].mul(&psi.values[c]).scale(&Rational::new(1, chi.tower.aut_order(c) as i64)))
        .collect();
    Cyclotomic::sum(&terms)
}

#[derive(Debug, Clone, Serialize)]
pub struct PushPullReport {
    pub holds: bool,
    /// `(class of ΛⁿY indicated, class of ΛⁿX, u*a_! value, b_!v* value)`.
    pub counterexample: Option<(usize, usize, Cyclotomic, Cyclotomic)>,
}

/// Checks `u* a_! = b_! v*` on the indicator functions of `ΛⁿY`.
pub fn push_pull_check(square: &FibredSquare, n: usize) -> Result<PushPullReport, GroupoidError> {
    let (u, a) = (&square.product.pres.u, &square.product.pres.a);
    let tx = Arc::new(InertiaTower::new(u.source.clone(), n)?);
    let ty = Arc::new(InertiaTower::new(a.source.clone(), n)?);
    let tz = Arc::new(InertiaTower::new(u.target.clone(), n)?);
    let tp = Arc::new(InertiaTower::new(square.product.groupoid.clone(), n)?);
    for c in 0..ty.class_count() {
        let chi = NClassFunction::indicator(ty.clone(), c);
        let lhs = restrict(&transfer(&chi, a, tz.clone()).function, u, tx.clone());
        let rhs = transfer(&restrict(&chi, &square.to_y, tp.clone()), &square.to_x, tx.clone()).function;
        if let Some(k) = (0..tx.class_count()).find(|&k| lhs.values[k] != rhs.values[k]) {
            return Ok(PushPullReport {
                holds: false,
                counterexample: Some((c, k, lhs.values[k].clone(), rhs.values[k].clone())),
            });
        }
    }
    Ok(PushPullReport { holds: true, counterexample: None })
}
