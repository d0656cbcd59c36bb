use std::collections::HashMap;
use std::sync::Arc;

use super::{ArrowId, CenterElement, FinGroupoid, GroupoidError, GroupoidFunctor, Presentation, Presented};
use crate::groups::{perm, FinGroup};
use crate::limits::element_cap;

/// The translation groupoid `M//G`: arrows `(m, g): m → g·m`.
pub struct Translation {
    pub group: Arc<FinGroup>,
    /// `action[g][m] = g·m`.
    pub action: Vec<Vec<usize>>,
}

impl Presentation for Translation {
    type Arrow = (usize, usize);

    fn object_count(&self) -> usize {
        self.action.first().map_or(0, Vec::len)
    }
    fn source(&self, a: &(usize, usize)) -> usize {
        a.0
    }
    fn target(&self, a: &(usize, usize)) -> usize {
        self.action[a.1][a.0]
    }
    fn identity(&self, x: usize) -> (usize, usize) {
        (x, 0)
    }
    fn compose(&self, later: &(usize, usize), earlier: &(usize, usize)) -> (usize, usize) {
        debug_assert_eq!(self.target(earlier), later.0);
        (earlier.0, self.group.mul(later.1, earlier.1))
    }
    fn inverse(&self, a: &(usize, usize)) -> (usize, usize) {
        (self.target(a), self.group.inv(a.1))
    }
    fn arrows_from(&self, x: usize) -> Vec<(usize, usize)> {
        self.group.elements().map(|g| (x, g)).collect()
    }
}

pub fn translation_groupoid(group: Arc<FinGroup>, action: Vec<Vec<usize>>) -> Result<Presented<Translation>, GroupoidError> {
    let bad = |m: &str| Err(GroupoidError::InvalidAction(m.into()));
    if action.len() != group.order() {
        return bad("one permutation per group element required");
    }
    let m = action[0].len();
    if action.iter().any(|p| !perm::is_bijection(p, m)) {
        return bad("every group element must act by a bijection");
    }
    if action[0] != perm::identity(m) {
        return bad("the identity must act trivially");
    }
    for a in group.elements() {
        for b in group.elements() {
            if action[group.mul(a, b)] != perm::compose(&action[a], &action[b]) {
                return bad("action is not compatible with multiplication");
            }
        }
    }
    Presented::build(Translation { group, action })
}

/// `pt//G`.
pub fn point_groupoid(group: Arc<FinGroup>) -> Result<Presented<Translation>, GroupoidError> {
    let action = vec![vec![0]; group.order()];
    translation_groupoid(group, action)
}

/// The inertia groupoid `ΛX`: objects `(x, g)` with `g ∈ Aut(x)`; arrows
/// `(o, h)` send `(x, g)` to `(y, hgh⁻¹)` for `h: x → y`.
pub struct Inertia {
    pub base: Arc<FinGroupoid>,
    objects: Vec<(usize, ArrowId)>,
    index: HashMap<ArrowId, usize>,
}

impl Inertia {
    pub fn new(base: Arc<FinGroupoid>) -> Result<Inertia, GroupoidError> {
        let cap = element_cap();
        let total: usize = base.components().iter().map(|c| c.objects.len() * c.group.order()).sum();
        if total > cap {
            return Err(GroupoidError::CapExceeded { cap });
        }
        let mut objects = Vec::with_capacity(total);
        for x in 0..base.object_count() {
            for g in base.automorphisms(x) {
                objects.push((x, g));
            }
        }
        let index = objects.iter().enumerate().map(|(i, &(_, g))| (g, i)).collect();
        Ok(Inertia { base, objects, index })
    }

    /// `(x, g)` of an object.
    pub fn object(&self, o: usize) -> (usize, ArrowId) {
        self.objects[o]
    }

    pub fn object_of(&self, g: ArrowId) -> usize {
        self.index[&g]
    }
}

impl Presentation for Inertia {
    type Arrow = (usize, ArrowId);

    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn source(&self, a: &(usize, ArrowId)) -> usize {
        a.0
    }
    fn target(&self, a: &(usize, ArrowId)) -> usize {
        let b = &self.base;
        let g = self.objects[a.0].1;
        self.index[&b.compose(b.compose(a.1, g), b.inverse(a.1))]
    }
    fn identity(&self, o: usize) -> (usize, ArrowId) {
        (o, self.base.identity(self.objects[o].0))
    }
    fn compose(&self, later: &(usize, ArrowId), earlier: &(usize, ArrowId)) -> (usize, ArrowId) {
        (earlier.0, self.base.compose(later.1, earlier.1))
    }
    fn inverse(&self, a: &(usize, ArrowId)) -> (usize, ArrowId) {
        (self.target(a), self.base.inverse(a.1))
    }
    fn arrows_from(&self, o: usize) -> Vec<(usize, ArrowId)> {
        self.base.arrows_from(self.objects[o].0).into_iter().map(|h| (o, h)).collect()
    }
}

pub fn inertia(x: Arc<FinGroupoid>) -> Result<Presented<Inertia>, GroupoidError> {
    Presented::build(Inertia::new(x)?)
}

impl Presented<Inertia> {
    /// `ξ^k`, the center element `(x, g) ↦ g^k`.
    pub fn xi(&self, k: i64) -> CenterElement {
        let b = &self.pres.base;
        let values = (0..self.pres.object_count())
            .map(|o| {
                let g = self.pres.object(o).1;
                self.encode(&(o, b.pow(g, k)))
            })
            .collect();
        CenterElement { values }
    }
}

/// `Λ, Λ², …, Λⁿ` of `x`; entry `i` is `Λ^{i+1} x` presented over `Λ^i x`.
pub fn iterated_inertia(x: Arc<FinGroupoid>, n: usize) -> Result<Vec<Presented<Inertia>>, GroupoidError> {
    let mut out: Vec<Presented<Inertia>> = Vec::with_capacity(n);
    let mut cur = x;
    for _ in 0..n {
        let next = inertia(cur)?;
        cur = next.groupoid.clone();
        out.push(next);
    }
    Ok(out)
}

/// `Λf: ΛX → ΛY`.
pub fn inertia_functor(
    f: &GroupoidFunctor,
    lx: &Presented<Inertia>,
    ly: &Presented<Inertia>,
) -> Result<GroupoidFunctor, GroupoidError> {
    let obj = |o: usize| ly.pres.object_of(f.arrow(lx.pres.object(o).1));
    lx.functor_to(ly, obj, |a: &(usize, ArrowId)| (obj(a.0), f.arrow(a.1)))
}

/// The power map `Π^k: (ΛX, ξ^k) → (ΛX, ξ¹)`, `(x, g) ↦ (x, g^k)` and `h ↦ h`.
pub fn power_map(lx: &Presented<Inertia>, k: i64) -> Result<GroupoidFunctor, GroupoidError> {
    let b = &lx.pres.base;
    let obj = |o: usize| lx.pres.object_of(b.pow(lx.pres.object(o).1, k));
    lx.functor_to(lx, obj, |a: &(usize, ArrowId)| (obj(a.0), a.1))
}

/// `X[ξ^{1/k}]`: arrows `(h, j)` with `0 <= j < k`, where `(h, j)` stands for
/// `h` followed by `j` copies of the adjoined root `φ`, and `φ^k = ξ`.
pub struct Root {
    pub base: Arc<FinGroupoid>,
    pub xi: CenterElement,
    pub k: usize,
}

impl Presentation for Root {
    type Arrow = (ArrowId, usize);

    fn object_count(&self) -> usize {
        self.base.object_count()
    }
    fn source(&self, a: &(ArrowId, usize)) -> usize {
        a.0.src
    }
    fn target(&self, a: &(ArrowId, usize)) -> usize {
        a.0.tgt
    }
    fn identity(&self, x: usize) -> (ArrowId, usize) {
        (self.base.identity(x), 0)
    }
    fn compose(&self, later: &(ArrowId, usize), earlier: &(ArrowId, usize)) -> (ArrowId, usize) {
        let b = &self.base;
        let s = later.1 + earlier.1;
        let mut h = b.compose(later.0, earlier.0);
        if s >= self.k {
            h = b.compose(h, self.xi.values[earlier.0.src]);
        }
        (h, s % self.k)
    }
    fn inverse(&self, a: &(ArrowId, usize)) -> (ArrowId, usize) {
        let b = &self.base;
        if a.1 == 0 {
            (b.inverse(a.0), 0)
        } else {
            (b.compose(b.inverse(a.0), b.inverse(self.xi.values[a.0.tgt])), self.k - a.1)
        }
    }
    fn arrows_from(&self, x: usize) -> Vec<(ArrowId, usize)> {
        self.base.arrows_from(x).into_iter().flat_map(|h| (0..self.k).map(move |j| (h, j))).collect()
    }
}

pub fn root_groupoid(
    x: Arc<FinGroupoid>,
    xi: &CenterElement,
    k: usize,
) -> Result<(Presented<Root>, CenterElement), GroupoidError> {
    assert!(k >= 1, "root degree must be positive");
    xi.validate(&x)?;
    let p = Presented::build(Root { base: x, xi: xi.clone(), k })?;
    let values = (0..p.pres.object_count())
        .map(|o| {
            let phi = if k == 1 { (p.pres.xi.values[o], 0) } else { (p.pres.base.identity(o), 1) };
            p.encode(&phi)
        })
        .collect();
    Ok((p, CenterElement { values }))
}

/// An arrow `(σ; h̄)` between tuples: slot `i` goes to slot `σ(i)` along `h_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathArrow {
    pub perm: Vec<usize>,
    pub arrows: Vec<ArrowId>,
}

impl WreathArrow {
    pub fn identity(x: &FinGroupoid, objects: &[usize]) -> WreathArrow {
        WreathArrow { perm: perm::identity(objects.len()), arrows: objects.iter().map(|&o| x.identity(o)).collect() }
    }

    pub fn source(&self) -> Vec<usize> {
        self.arrows.iter().map(|a| a.src).collect()
    }

    pub fn target(&self) -> Vec<usize> {
        let mut t = vec![0; self.arrows.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            t[self.perm[i]] = a.tgt;
        }
        t
    }

    pub fn compose(x: &FinGroupoid, later: &WreathArrow, earlier: &WreathArrow) -> WreathArrow {
        let perm = perm::compose(&later.perm, &earlier.perm);
        let arrows =
            earlier.arrows.iter().enumerate().map(|(i, &a)| x.compose(later.arrows[earlier.perm[i]], a)).collect();
        WreathArrow { perm, arrows }
    }

    pub fn inverse(x: &FinGroupoid, a: &WreathArrow) -> WreathArrow {
        let perm = perm::inverse(&a.perm);
        let arrows = perm.iter().map(|&i| x.inverse(a.arrows[i])).collect();
        WreathArrow { perm, arrows }
    }
}

/// Objects are tuples of objects of the base; arrows are [`WreathArrow`]s.
/// Either all tuples of one length, or every tuple whose total degree is
/// bounded, for a degree function constant on isomorphism classes.
pub struct SymPower {
    pub base: Arc<FinGroupoid>,
    objects: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SymPower {
    /// `Sₙ ∫ X`.
    pub fn new(base: Arc<FinGroupoid>, n: usize) -> Result<SymPower, GroupoidError> {
        Self::graded(base.clone(), &vec![1; base.object_count()], n, n)
    }

    /// All tuples of total degree at most `max_degree`, of length at least
    /// `min_len`.
    pub fn graded(
        base: Arc<FinGroupoid>,
        degrees: &[usize],
        max_degree: usize,
        min_len: usize,
    ) -> Result<SymPower, GroupoidError> {
        assert!(degrees.iter().all(|&d| d >= 1), "degrees must be positive");
        let cap = element_cap();
        let mut objects: Vec<Vec<usize>> = Vec::new();
        let mut layer: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        let mut len = 0;
        while !layer.is_empty() {
            if len >= min_len {
                objects.extend(layer.iter().map(|(t, _)| t.clone()));
                if objects.len() > cap {
                    return Err(GroupoidError::CapExceeded { cap });
                }
            }
            let mut next = Vec::new();
            for (t, d) in &layer {
                for (x, &dx) in degrees.iter().enumerate() {
                    if d + dx <= max_degree {
                        let mut u = t.clone();
                        u.push(x);
                        next.push((u, d + dx));
                    }
                }
                if next.len() > cap {
                    return Err(GroupoidError::CapExceeded { cap });
                }
            }
            layer = next;
            len += 1;
        }
        let index = objects.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(SymPower { base, objects, index })
    }

    pub fn object(&self, o: usize) -> &[usize] {
        &self.objects[o]
    }

    pub fn object_of(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }
}

impl Presentation for SymPower {
    type Arrow = (usize, WreathArrow);

    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn source(&self, a: &(usize, WreathArrow)) -> usize {
        a.0
    }
    fn target(&self, a: &(usize, WreathArrow)) -> usize {
        self.index[&a.1.target()]
    }
    fn identity(&self, o: usize) -> (usize, WreathArrow) {
        (o, WreathArrow::identity(&self.base, &self.objects[o]))
    }
    fn compose(&self, later: &(usize, WreathArrow), earlier: &(usize, WreathArrow)) -> (usize, WreathArrow) {
        (earlier.0, WreathArrow::compose(&self.base, &later.1, &earlier.1))
    }
    fn inverse(&self, a: &(usize, WreathArrow)) -> (usize, WreathArrow) {
        (self.target(a), WreathArrow::inverse(&self.base, &a.1))
    }
    fn arrows_from(&self, o: usize) -> Vec<(usize, WreathArrow)> {
        let tuple = &self.objects[o];
        let choices: Vec<Vec<ArrowId>> = tuple.iter().map(|&x| self.base.arrows_from(x)).collect();
        let mut out = Vec::new();
        for p in perm::all_permutations(tuple.len()) {
            let mut digits = vec![0usize; tuple.len()];
            loop {
                let arrows = digits.iter().enumerate().map(|(i, &d)| choices[i][d]).collect();
                out.push((o, WreathArrow { perm: p.clone(), arrows }));
                let mut i = 0;
                while i < digits.len() {
                    digits[i] += 1;
                    if digits[i] < choices[i].len() {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == digits.len() {
                    break;
                }
            }
        }
        out
    }
}

/// `Sₙ ∫ X`; `n = 0` gives the one-object trivial groupoid.
pub fn symmetric_power(x: Arc<FinGroupoid>, n: usize) -> Result<Presented<SymPower>, GroupoidError> {
    let cap = element_cap();
    let size = (0..n).try_fold(perm::factorial(n), |acc: usize, _| acc.checked_mul(x.object_count()));
    if size.is_none_or(|s| s > cap) {
        return Err(GroupoidError::CapExceeded { cap });
    }
    Presented::build(SymPower::new(x, n)?)
}
