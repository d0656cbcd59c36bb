//! Finite groupoids and the constructions on them: translation groupoids,
//! inertia, center elements, power maps, root groupoids, symmetric powers,
//! the long-cycle groupoids `Φ_k`, fibred products and an equivalence
//! checker.
//!
//! Every finite groupoid is isomorphic to a disjoint union of connected
//! pieces `objects × objects × G`. [`FinGroupoid`] stores exactly that normal
//! form: one vertex group per connected component, with the arrow
//! `(x, y, g)` standing for `c_y ∘ g ∘ c_x⁻¹` where `c_x` is a fixed chart
//! arrow from the component's base object (its least object) to `x`.
//! Constructions are written against a [`Presentation`], whose arrows are
//! whatever is natural for the construction, and [`Presented`] converts
//! between the two.

mod check;
mod constructions;
mod dump;
mod fibred;
mod phi;
mod presentation;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::Rational;
use crate::groups::{FinGroup, GroupError};

pub use check::{equivalence_check, EquivalenceReport, HomCheck};
pub use constructions::{
    inertia, inertia_functor, iterated_inertia, point_groupoid, power_map, root_groupoid, symmetric_power,
    translation_groupoid, Inertia, Root, SymPower, Translation, WreathArrow,
};
pub use dump::{dump, GroupoidDump};
pub use fibred::{fibred_product, lambda_comparison, FibredProduct, FibredSquare, LambdaComparison};
pub use phi::{equivalence_e_k, equivalence_q, phi_groupoid, EkEquivalence, Phi, QEquivalence};
pub use presentation::{Presentation, Presented};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("groupoid exceeds the element cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid center element: {0}")]
    InvalidCenter(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An arrow in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArrowId {
    pub src: usize,
    pub tgt: usize,
    pub elem: usize,
}

#[derive(Debug, Clone)]
pub struct Component {
    /// Objects in increasing order; the first is the base.
    pub objects: Vec<usize>,
    pub group: Arc<FinGroup>,
}

/// A finite groupoid in normal form.
#[derive(Clone)]
pub struct FinGroupoid {
    components: Vec<Component>,
    comp_of: Vec<usize>,
    pos_in_comp: Vec<usize>,
}

impl FinGroupoid {
    pub fn from_components(components: Vec<Component>) -> FinGroupoid {
        let n: usize = components.iter().map(|c| c.objects.len()).sum();
        let mut comp_of = vec![usize::MAX; n];
        let mut pos_in_comp = vec![usize::MAX; n];
        for (ci, c) in components.iter().enumerate() {
            for (p, &x) in c.objects.iter().enumerate() {
                comp_of[x] = ci;
                pos_in_comp[x] = p;
            }
        }
        assert!(comp_of.iter().all(|&c| c != usize::MAX), "components must cover 0..n");
        FinGroupoid { components, comp_of, pos_in_comp }
    }

    /// `pt//G`.
    pub fn point(group: Arc<FinGroup>) -> FinGroupoid {
        FinGroupoid::from_components(vec![Component { objects: vec![0], group }])
    }

    pub fn object_count(&self) -> usize {
        self.comp_of.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, x: usize) -> usize {
        self.comp_of[x]
    }

    /// Least object isomorphic to `x`.
    pub fn representative(&self, x: usize) -> usize {
        self.components[self.comp_of[x]].objects[0]
    }

    pub fn isomorphic(&self, x: usize, y: usize) -> bool {
        self.comp_of[x] == self.comp_of[y]
    }

    /// The vertex group, isomorphic to `Aut(x)` via `g ↦ (x, x, g)`.
    pub fn aut_group(&self, x: usize) -> &Arc<FinGroup> {
        &self.components[self.comp_of[x]].group
    }

    pub fn aut_order(&self, x: usize) -> usize {
        self.aut_group(x).order()
    }

    pub fn identity(&self, x: usize) -> ArrowId {
        ArrowId { src: x, tgt: x, elem: 0 }
    }

    /// `later ∘ earlier`.
    pub fn compose(&self, later: ArrowId, earlier: ArrowId) -> ArrowId {
        assert_eq!(earlier.tgt, later.src, "arrows are not composable");
        let g = self.aut_group(earlier.src);
        ArrowId { src: earlier.src, tgt: later.tgt, elem: g.mul(later.elem, earlier.elem) }
    }

    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        ArrowId { src: a.tgt, tgt: a.src, elem: self.aut_group(a.src).inv(a.elem) }
    }

    pub fn pow(&self, a: ArrowId, k: i64) -> ArrowId {
        assert_eq!(a.src, a.tgt, "only automorphisms have powers");
        ArrowId { src: a.src, tgt: a.src, elem: self.aut_group(a.src).pow(a.elem, k) }
    }

    pub fn is_valid(&self, a: ArrowId) -> bool {
        a.src < self.object_count()
            && a.tgt < self.object_count()
            && self.isomorphic(a.src, a.tgt)
            && a.elem < self.aut_order(a.src)
    }

    /// The chart arrow from the base of `x`'s component to `x`.
    pub fn chart(&self, x: usize) -> ArrowId {
        ArrowId { src: self.representative(x), tgt: x, elem: 0 }
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<ArrowId> {
        if !self.isomorphic(x, y) {
            return Vec::new();
        }
        (0..self.aut_order(x)).map(|elem| ArrowId { src: x, tgt: y, elem }).collect()
    }

    pub fn automorphisms(&self, x: usize) -> Vec<ArrowId> {
        self.hom(x, x)
    }

    pub fn arrows_from(&self, x: usize) -> Vec<ArrowId> {
        let c = &self.components[self.comp_of[x]];
        c.objects
            .iter()
            .flat_map(|&y| (0..c.group.order()).map(move |elem| ArrowId { src: x, tgt: y, elem }))
            .collect()
    }

    pub fn arrow_count(&self) -> usize {
        self.components.iter().map(|c| c.objects.len() * c.objects.len() * c.group.order()).sum()
    }

    /// Position of an arrow in the global enumeration used by [`dump`].
    pub fn arrow_index(&self, a: ArrowId) -> usize {
        let ci = self.comp_of[a.src];
        let offset: usize = self.components[..ci]
            .iter()
            .map(|c| c.objects.len() * c.objects.len() * c.group.order())
            .sum();
        let c = &self.components[ci];
        let n = c.objects.len();
        offset + (self.pos_in_comp[a.src] * n + self.pos_in_comp[a.tgt]) * c.group.order() + a.elem
    }

    pub fn all_arrows(&self) -> Vec<ArrowId> {
        let mut out = Vec::with_capacity(self.arrow_count());
        for c in &self.components {
            for &x in &c.objects {
                for &y in &c.objects {
                    for elem in 0..c.group.order() {
                        out.push(ArrowId { src: x, tgt: y, elem });
                    }
                }
            }
        }
        out
    }

    /// Groupoid cardinality `Σ_{[x]} 1/|Aut(x)|`.
    pub fn cardinality(&self) -> Rational {
        self.components
            .iter()
            .fold(Rational::zero(), |acc, c| &acc + &Rational::new(1, c.group.order() as i64))
    }

    pub fn iso_class_count(&self) -> usize {
        self.components.len()
    }

    /// Sorted automorphism orders, one per isomorphism class.
    pub fn aut_orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.components.iter().map(|c| c.group.order()).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Debug for FinGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinGroupoid")
            .field("objects", &self.object_count())
            .field("aut_orders", &self.aut_orders())
            .finish()
    }
}

/// A natural automorphism of the identity functor: one automorphism per
/// object, commuting with every arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterElement {
    pub values: Vec<ArrowId>,
}

impl CenterElement {
    pub fn new(groupoid: &FinGroupoid, values: Vec<ArrowId>) -> Result<CenterElement, GroupoidError> {
        let xi = CenterElement { values };
        xi.validate(groupoid)?;
        Ok(xi)
    }

    /// The identity transformation.
    pub fn identity(groupoid: &FinGroupoid) -> CenterElement {
        CenterElement { values: (0..groupoid.object_count()).map(|x| groupoid.identity(x)).collect() }
    }

    /// Naturality `ξ_y ∘ h = h ∘ ξ_x` for every arrow; in normal form this says
    /// that `ξ` is one central element per component.
    pub fn validate(&self, groupoid: &FinGroupoid) -> Result<(), GroupoidError> {
        if self.values.len() != groupoid.object_count() {
            return Err(GroupoidError::InvalidCenter("one value per object required".into()));
        }
        for (x, &v) in self.values.iter().enumerate() {
            if v.src != x || v.tgt != x || !groupoid.is_valid(v) {
                return Err(GroupoidError::InvalidCenter(format!("value at {x} is not an automorphism of {x}")));
            }
        }
        for c in groupoid.components() {
            let base = c.objects[0];
            for &x in &c.objects {
                for elem in 0..c.group.order() {
                    let h = ArrowId { src: base, tgt: x, elem };
                    let lhs = groupoid.compose(self.values[x], h);
                    let rhs = groupoid.compose(h, self.values[base]);
                    if lhs != rhs {
                        return Err(GroupoidError::InvalidCenter(format!("not natural along {h:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn pow(&self, groupoid: &FinGroupoid, k: i64) -> CenterElement {
        CenterElement { values: self.values.iter().map(|&v| groupoid.pow(v, k)).collect() }
    }

    /// Largest order of the values.
    pub fn order(&self, groupoid: &FinGroupoid) -> usize {
        self.values
            .iter()
            .map(|v| groupoid.aut_group(v.src).element_order(v.elem))
            .fold(1u64, |acc, o| crate::exactnum::lcm(acc, o as u64)) as usize
    }
}

/// A functor between normal-form groupoids, stored as its object map, the
/// images of the chart arrows, and a homomorphism on each vertex group.
#[derive(Clone)]
pub struct GroupoidFunctor {
    pub source: Arc<FinGroupoid>,
    pub target: Arc<FinGroupoid>,
    objects: Vec<usize>,
    charts: Vec<ArrowId>,
    vertex: Vec<Vec<ArrowId>>,
}

impl GroupoidFunctor {
    pub fn new(
        source: Arc<FinGroupoid>,
        target: Arc<FinGroupoid>,
        objects: Vec<usize>,
        charts: Vec<ArrowId>,
        vertex: Vec<Vec<ArrowId>>,
    ) -> Result<GroupoidFunctor, GroupoidError> {
        let f = GroupoidFunctor { source, target, objects, charts, vertex };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), GroupoidError> {
        let bad = |m: String| Err(GroupoidError::InvalidFunctor(m));
        let (s, t) = (&self.source, &self.target);
        if self.objects.len() != s.object_count() || self.charts.len() != s.object_count() {
            return bad("object data has the wrong length".into());
        }
        if self.objects.iter().any(|&y| y >= t.object_count()) {
            return bad("object image out of range".into());
        }
        for x in 0..s.object_count() {
            let c = self.charts[x];
            let base = s.representative(x);
            if !t.is_valid(c) || c.src != self.objects[base] || c.tgt != self.objects[x] {
                return bad(format!("chart image at object {x} has wrong endpoints"));
            }
            if x == base && c != t.identity(self.objects[x]) {
                return bad("base chart must map to an identity".into());
            }
        }
        for (ci, comp) in s.components().iter().enumerate() {
            let fb = self.objects[comp.objects[0]];
            let imgs = &self.vertex[ci];
            if imgs.len() != comp.group.order() {
                return bad("vertex map has the wrong length".into());
            }
            if imgs.iter().any(|a| a.src != fb || a.tgt != fb || !t.is_valid(*a)) {
                return bad("vertex image is not an automorphism of the base image".into());
            }
            let g = &comp.group;
            for a in g.elements() {
                for b in g.elements() {
                    if t.compose(imgs[a], imgs[b]) != imgs[g.mul(a, b)] {
                        return bad(format!("vertex map of component {ci} is not a homomorphism"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: Arc<FinGroupoid>) -> GroupoidFunctor {
        let objects = (0..x.object_count()).collect();
        let charts = (0..x.object_count()).map(|o| x.chart(o)).collect();
        let vertex = x
            .components()
            .iter()
            .map(|c| (0..c.group.order()).map(|elem| ArrowId { src: c.objects[0], tgt: c.objects[0], elem }).collect())
            .collect();
        GroupoidFunctor { source: x.clone(), target: x, objects, charts, vertex }
    }

    /// The unique functor to a one-object groupoid with trivial automorphisms.
    pub fn to_point(x: Arc<FinGroupoid>) -> GroupoidFunctor {
        let pt = Arc::new(FinGroupoid::point(Arc::new(FinGroup::trivial())));
        GroupoidFunctor::constant(x, pt, 0)
    }

    /// Everything to the identity of `object`.
    pub fn constant(x: Arc<FinGroupoid>, target: Arc<FinGroupoid>, object: usize) -> GroupoidFunctor {
        let n = x.object_count();
        let id = target.identity(object);
        let vertex = x.components().iter().map(|c| vec![id; c.group.order()]).collect();
        GroupoidFunctor { source: x, target, objects: vec![object; n], charts: vec![id; n], vertex }
    }

    /// The functor `pt//H → pt//G` induced by a group homomorphism.
    pub fn from_group_hom(
        source: Arc<FinGroupoid>,
        target: Arc<FinGroupoid>,
        hom: &[usize],
    ) -> Result<GroupoidFunctor, GroupoidError> {
        if source.object_count() != 1 || target.object_count() != 1 {
            return Err(GroupoidError::InvalidFunctor("group homomorphisms need one-object groupoids".into()));
        }
        let vertex = vec![hom.iter().map(|&elem| ArrowId { src: 0, tgt: 0, elem }).collect()];
        GroupoidFunctor::new(source, target, vec![0], vec![ArrowId { src: 0, tgt: 0, elem: 0 }], vertex)
    }

    pub fn object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.objects
    }

    pub fn arrow(&self, a: ArrowId) -> ArrowId {
        let t = &self.target;
        let ci = self.source.component_of(a.src);
        let mid = self.vertex[ci][a.elem];
        let out = t.compose(self.charts[a.tgt], t.compose(mid, t.inverse(self.charts[a.src])));
        debug_assert_eq!((out.src, out.tgt), (self.objects[a.src], self.objects[a.tgt]));
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupoidFunctor) -> GroupoidFunctor {
        assert!(Arc::ptr_eq(&self.target, &other.source), "functors are not composable");
        let objects = self.objects.iter().map(|&y| other.objects[y]).collect();
        let charts = self.charts.iter().map(|&c| other.arrow(c)).collect();
        let vertex = self.vertex.iter().map(|v| v.iter().map(|&a| other.arrow(a)).collect()).collect();
        GroupoidFunctor { source: self.source.clone(), target: other.target.clone(), objects, charts, vertex }
    }

    /// Equality on every object and arrow.
    pub fn same_as(&self, other: &GroupoidFunctor) -> bool {
        self.objects == other.objects && self.charts == other.charts && self.vertex == other.vertex
    }

    /// Whether `self ∘ ξ = υ ∘ self` objectwise.
    pub fn intertwines(&self, xi: &CenterElement, upsilon: &CenterElement) -> bool {
        (0..self.source.object_count()).all(|x| self.arrow(xi.values[x]) == upsilon.values[self.objects[x]])
    }

    /// Whether the functor is injective on every automorphism group.
    pub fn is_faithful(&self) -> bool {
        self.vertex.iter().all(|imgs| {
            let mut seen = std::collections::HashSet::new();
            imgs.iter().all(|a| seen.insert(*a))
        })
    }
}

impl fmt::Debug for GroupoidFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupoidFunctor").field("objects", &self.objects).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_composition() {
        let g = FinGroupoid::from_components(vec![Component {
            objects: vec![0, 1],
            group: Arc::new(FinGroup::cyclic(3)),
        }]);
        assert_eq!(g.arrow_count(), 12);
        let a = ArrowId { src: 0, tgt: 1, elem: 1 };
        let b = ArrowId { src: 1, tgt: 0, elem: 1 };
        assert_eq!(g.compose(b, a), ArrowId { src: 0, tgt: 0, elem: 2 });
        assert_eq!(g.compose(g.inverse(a), a), g.identity(0));
        assert_eq!(g.cardinality(), Rational::new(1, 3));
        let idx: Vec<usize> = g.all_arrows().into_iter().map(|a| g.arrow_index(a)).collect();
        assert_eq!(idx, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn center_elements_of_point_groupoids() {
        let s3 = Arc::new(FinGroup::symmetric(3));
        let x = FinGroupoid::point(s3.clone());
        let t = s3.element_of_perm(&[1, 0, 2]).unwrap();
        assert!(CenterElement::new(&x, vec![ArrowId { src: 0, tgt: 0, elem: t }]).is_err());
        assert!(CenterElement::new(&x, vec![x.identity(0)]).is_ok());
        let c4 = Arc::new(FinGroup::cyclic(4));
        let y = FinGroupoid::point(c4);
        let xi = CenterElement::new(&y, vec![ArrowId { src: 0, tgt: 0, elem: 1 }]).unwrap();
        assert_eq!(xi.order(&y), 4);
    }

    #[test]
    fn functor_validation() {
        let c2 = Arc::new(FinGroupoid::point(Arc::new(FinGroup::cyclic(2))));
        let pt = Arc::new(FinGroupoid::point(Arc::new(FinGroup::trivial())));
        let inc = GroupoidFunctor::from_group_hom(pt.clone(), c2.clone(), &[0]).unwrap();
        assert!(inc.is_faithful());
        // sending the generator of C2 to the trivial group's identity is fine; the reverse is not a functor
        assert!(GroupoidFunctor::from_group_hom(c2.clone(), pt.clone(), &[0, 0]).is_ok());
        let c3 = Arc::new(FinGroupoid::point(Arc::new(FinGroup::cyclic(3))));
        assert!(GroupoidFunctor::from_group_hom(c2, c3, &[0, 1]).is_err());
    }
}
