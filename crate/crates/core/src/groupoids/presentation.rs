use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use super::{ArrowId, Component, FinGroupoid, GroupoidError, GroupoidFunctor};
use crate::groups::FinGroup;
use crate::limits::element_cap;

/// A groupoid described by natural arrows, with enough structure to list the
/// arrows leaving each object.
pub trait Presentation {
    type Arrow: Clone + Eq + Hash + Debug;

    fn object_count(&self) -> usize;
    fn source(&self, a: &Self::Arrow) -> usize;
    fn target(&self, a: &Self::Arrow) -> usize;
    fn identity(&self, x: usize) -> Self::Arrow;
    /// `later ∘ earlier`.
    fn compose(&self, later: &Self::Arrow, earlier: &Self::Arrow) -> Self::Arrow;
    fn inverse(&self, a: &Self::Arrow) -> Self::Arrow;
    fn arrows_from(&self, x: usize) -> Vec<Self::Arrow>;
}

impl Presentation for FinGroupoid {
    type Arrow = ArrowId;

    fn object_count(&self) -> usize {
        FinGroupoid::object_count(self)
    }
    fn source(&self, a: &ArrowId) -> usize {
        a.src
    }
    fn target(&self, a: &ArrowId) -> usize {
        a.tgt
    }
    fn identity(&self, x: usize) -> ArrowId {
        FinGroupoid::identity(self, x)
    }
    fn compose(&self, later: &ArrowId, earlier: &ArrowId) -> ArrowId {
        FinGroupoid::compose(self, *later, *earlier)
    }
    fn inverse(&self, a: &ArrowId) -> ArrowId {
        FinGroupoid::inverse(self, *a)
    }
    fn arrows_from(&self, x: usize) -> Vec<ArrowId> {
        FinGroupoid::arrows_from(self, x)
    }
}

/// A presentation together with its normal form and the translation both ways.
pub struct Presented<P: Presentation> {
    pub pres: P,
    pub groupoid: Arc<FinGroupoid>,
    charts: Vec<P::Arrow>,
    vertex: Vec<Vec<P::Arrow>>,
    vertex_index: Vec<HashMap<P::Arrow, usize>>,
}

impl<P: Presentation> Presented<P> {
    /// Normalizes by breadth-first search from the least unvisited object.
    pub fn build(pres: P) -> Result<Presented<P>, GroupoidError> {
        let cap = element_cap();
        let n = pres.object_count();
        if n > cap {
            return Err(GroupoidError::CapExceeded { cap });
        }
        let mut charts: Vec<Option<P::Arrow>> = vec![None; n];
        let mut components = Vec::new();
        let mut vertex = Vec::new();
        let mut vertex_index = Vec::new();
        for start in 0..n {
            if charts[start].is_some() {
                continue;
            }
            charts[start] = Some(pres.identity(start));
            let mut objects = vec![start];
            let mut queue = VecDeque::from([start]);
            let mut autos = Vec::new();
            while let Some(y) = queue.pop_front() {
                let cy = charts[y].clone().unwrap();
                for a in pres.arrows_from(y) {
                    let t = pres.target(&a);
                    if y == start && t == start {
                        autos.push(a.clone());
                    }
                    if charts[t].is_none() {
                        charts[t] = Some(pres.compose(&a, &cy));
                        objects.push(t);
                        queue.push_back(t);
                    }
                }
            }
            objects.sort_unstable();
            let id = pres.identity(start);
            let pos = autos.iter().position(|a| *a == id).expect("identity must be listed among arrows");
            autos.swap(0, pos);
            if autos.len() > cap {
                return Err(GroupoidError::CapExceeded { cap });
            }
            let group = FinGroup::from_elements(&autos, |a, b| pres.compose(a, b))?;
            vertex_index.push(autos.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect());
            vertex.push(autos);
            components.push(Component { objects, group: Arc::new(group) });
        }
        let groupoid = Arc::new(FinGroupoid::from_components(components));
        let charts = charts.into_iter().map(Option::unwrap).collect();
        Ok(Presented { pres, groupoid, charts, vertex, vertex_index })
    }

    pub fn chart(&self, x: usize) -> &P::Arrow {
        &self.charts[x]
    }

    pub fn encode(&self, a: &P::Arrow) -> ArrowId {
        let (x, y) = (self.pres.source(a), self.pres.target(a));
        let ci = self.groupoid.component_of(x);
        let g = self.pres.compose(&self.pres.inverse(&self.charts[y]), &self.pres.compose(a, &self.charts[x]));
        let elem = *self.vertex_index[ci].get(&g).expect("arrow outside the presented groupoid");
        ArrowId { src: x, tgt: y, elem }
    }

    pub fn decode(&self, a: ArrowId) -> P::Arrow {
        let ci = self.groupoid.component_of(a.src);
        let p = &self.pres;
        p.compose(&self.charts[a.tgt], &p.compose(&self.vertex[ci][a.elem], &p.inverse(&self.charts[a.src])))
    }

    /// The functor defined on natural arrows by `arrow`, landing in `target`.
    pub fn functor_to<Q: Presentation>(
        &self,
        target: &Presented<Q>,
        object: impl Fn(usize) -> usize,
        arrow: impl Fn(&P::Arrow) -> Q::Arrow,
    ) -> Result<GroupoidFunctor, GroupoidError> {
        self.functor_into(target.groupoid.clone(), object, |a| target.encode(&arrow(a)))
    }

    /// The functor sending each natural arrow to a normal-form arrow of `target`.
    pub fn functor_into(
        &self,
        target: Arc<FinGroupoid>,
        object: impl Fn(usize) -> usize,
        arrow: impl Fn(&P::Arrow) -> ArrowId,
    ) -> Result<GroupoidFunctor, GroupoidError> {
        let n = self.groupoid.object_count();
        let objects: Vec<usize> = (0..n).map(&object).collect();
        let charts = (0..n).map(|x| arrow(&self.charts[x])).collect();
        let vertex = self.vertex.iter().map(|v| v.iter().map(&arrow).collect()).collect();
        GroupoidFunctor::new(self.groupoid.clone(), target, objects, charts, vertex)
    }

    /// Compares a functor with a natural-arrow formula on every arrow.
    pub fn agrees_with<Q: Presentation>(
        &self,
        f: &GroupoidFunctor,
        target: &Presented<Q>,
        arrow: impl Fn(&P::Arrow) -> Q::Arrow,
    ) -> bool {
        self.groupoid.all_arrows().into_iter().all(|a| f.arrow(a) == target.encode(&arrow(&self.decode(a))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_round_trip() {
        let g = FinGroupoid::from_components(vec![
            Component { objects: vec![0, 2], group: Arc::new(FinGroup::cyclic(2)) },
            Component { objects: vec![1], group: Arc::new(FinGroup::symmetric(3)) },
        ]);
        let p = Presented::build(g.clone()).unwrap();
        assert_eq!(p.groupoid.aut_orders(), vec![2, 6]);
        for a in g.all_arrows() {
            assert_eq!(p.decode(p.encode(&a)), a);
        }
    }
}
