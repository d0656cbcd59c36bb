use std::collections::HashMap;
use std::sync::Arc;

use super::constructions::{inertia, root_groupoid, Inertia, Root, SymPower, WreathArrow};
use super::{ArrowId, CenterElement, FinGroupoid, GroupoidError, GroupoidFunctor, Presentation, Presented};
use crate::groups::perm;
use crate::limits::element_cap;

/// `Φ_k X` for each `k` in a list: objects are cycles `x_0 → x_1 → … → x_0`
/// of arrows `ḡ`, read as the automorphism `(ς_k; ḡ)` of `x̄` in `Sₖ ∫ X`;
/// arrows are the arrows `(ς_k^m; h̄)` of `Λ(Sₖ ∫ X)` between them.
pub struct Phi {
    pub base: Arc<FinGroupoid>,
    objects: Vec<Vec<ArrowId>>,
    index: HashMap<Vec<ArrowId>, usize>,
}

impl Phi {
    pub fn new(base: Arc<FinGroupoid>, ks: &[usize]) -> Result<Phi, GroupoidError> {
        let cap = element_cap();
        let mut objects = Vec::new();
        for &k in ks {
            assert!(k >= 1, "cycle length must be positive");
            for x0 in 0..base.object_count() {
                let mut stack: Vec<Vec<ArrowId>> = vec![Vec::new()];
                while let Some(chain) = stack.pop() {
                    let here = chain.last().map_or(x0, |a| a.tgt);
                    if chain.len() == k - 1 {
                        for elem in 0..base.aut_order(here) {
                            if base.isomorphic(here, x0) {
                                let mut c = chain.clone();
                                c.push(ArrowId { src: here, tgt: x0, elem });
                                objects.push(c);
                            }
                        }
                        if objects.len() > cap {
                            return Err(GroupoidError::CapExceeded { cap });
                        }
                        continue;
                    }
                    for a in base.arrows_from(here).into_iter().rev() {
                        let mut c = chain.clone();
                        c.push(a);
                        stack.push(c);
                    }
                }
            }
        }
        let index = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        Ok(Phi { base, objects, index })
    }

    /// The cycle `ḡ` of an object.
    pub fn object(&self, o: usize) -> &[ArrowId] {
        &self.objects[o]
    }

    pub fn object_of(&self, cycle: &[ArrowId]) -> Option<usize> {
        self.index.get(cycle).copied()
    }

    pub fn degree(&self, o: usize) -> usize {
        self.objects[o].len()
    }

    /// The objects `x̄` underlying an object.
    pub fn tuple(&self, o: usize) -> Vec<usize> {
        self.objects[o].iter().map(|a| a.src).collect()
    }

    /// `(ς_k; ḡ)`.
    pub fn automorphism(&self, o: usize) -> WreathArrow {
        let g = &self.objects[o];
        WreathArrow { perm: perm::long_cycle(g.len()), arrows: g.clone() }
    }

    /// `ĝ_0 = g_{k-1} ∘ … ∘ g_0`, an automorphism of `x_0`.
    pub fn composite(&self, o: usize) -> ArrowId {
        let g = &self.objects[o];
        g[1..].iter().fold(g[0], |acc, &a| self.base.compose(a, acc))
    }
}

impl Presentation for Phi {
    type Arrow = (usize, WreathArrow);

    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn source(&self, a: &(usize, WreathArrow)) -> usize {
        a.0
    }
    fn target(&self, a: &(usize, WreathArrow)) -> usize {
        let b = &self.base;
        let conj = WreathArrow::compose(
            b,
            &WreathArrow::compose(b, &a.1, &self.automorphism(a.0)),
            &WreathArrow::inverse(b, &a.1),
        );
        debug_assert_eq!(conj.perm, perm::long_cycle(conj.perm.len()));
        self.index[&conj.arrows]
    }
    fn identity(&self, o: usize) -> (usize, WreathArrow) {
        (o, WreathArrow::identity(&self.base, &self.tuple(o)))
    }
    fn compose(&self, later: &(usize, WreathArrow), earlier: &(usize, WreathArrow)) -> (usize, WreathArrow) {
        (earlier.0, WreathArrow::compose(&self.base, &later.1, &earlier.1))
    }
    fn inverse(&self, a: &(usize, WreathArrow)) -> (usize, WreathArrow) {
        (self.target(a), WreathArrow::inverse(&self.base, &a.1))
    }
    fn arrows_from(&self, o: usize) -> Vec<(usize, WreathArrow)> {
        let tuple = self.tuple(o);
        let k = tuple.len();
        let choices: Vec<Vec<ArrowId>> = tuple.iter().map(|&x| self.base.arrows_from(x)).collect();
        let mut out = Vec::new();
        let mut rot = perm::identity(k);
        for _ in 0..k {
            let mut digits = vec![0usize; k];
            loop {
                let arrows = digits.iter().enumerate().map(|(i, &d)| choices[i][d]).collect();
                out.push((o, WreathArrow { perm: rot.clone(), arrows }));
                let mut i = 0;
                while i < k {
                    digits[i] += 1;
                    if digits[i] < choices[i].len() {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
            rot = perm::compose(&perm::long_cycle(k), &rot);
        }
        out
    }
}

impl Presented<Phi> {
    /// `φ`, the restriction of `ξ¹`: each object's own automorphism.
    pub fn phi_center(&self) -> CenterElement {
        let values = (0..self.pres.object_count()).map(|o| self.encode(&(o, self.pres.automorphism(o)))).collect();
        CenterElement { values }
    }
}

/// `Φ_k X` with its center element `φ`.
pub fn phi_groupoid(x: Arc<FinGroupoid>, k: usize) -> Result<(Presented<Phi>, CenterElement), GroupoidError> {
    let p = Presented::build(Phi::new(x, &[k])?)?;
    let phi = p.phi_center();
    Ok((p, phi))
}

/// `E_k: Φ_k X → ΛX[ξ^{1/k}]` and its quasi-inverse `F_k`.
pub struct EkEquivalence {
    pub k: usize,
    pub phi: Presented<Phi>,
    pub phi_center: CenterElement,
    pub lambda: Presented<Inertia>,
    pub root: Presented<Root>,
    pub root_center: CenterElement,
    pub e: GroupoidFunctor,
    pub f: GroupoidFunctor,
}

pub fn equivalence_e_k(x: Arc<FinGroupoid>, k: usize) -> Result<EkEquivalence, GroupoidError> {
    let (phi, phi_center) = phi_groupoid(x.clone(), k)?;
    let lambda = inertia(x.clone())?;
    let (root, root_center) = root_groupoid(lambda.groupoid.clone(), &lambda.xi(1), k)?;
    let b = &x;

    let e_obj = |o: usize| lambda.pres.object_of(phi.pres.composite(o));
    let e = phi.functor_to(&root, e_obj, |a: &(usize, WreathArrow)| {
        let m = if k == 1 { 0 } else { a.1.perm[0] };
        let mut back = phi.pres.automorphism(a.0);
        back = WreathArrow::inverse(b, &back);
        let mut c = a.1.clone();
        for _ in 0..m {
            c = WreathArrow::compose(b, &c, &back);
        }
        (lambda.encode(&(e_obj(a.0), c.arrows[0])), m)
    })?;

    let f_obj = |o: usize| {
        let (xo, g) = lambda.pres.object(o);
        let mut cycle = vec![b.identity(xo); k];
        cycle[0] = g;
        phi.pres.object_of(&cycle).expect("cycle of the expected shape")
    };
    let f = root.functor_to(&phi, f_obj, |a: &(ArrowId, usize)| {
        let (o, h) = lambda.decode(a.0);
        let src = f_obj(o);
        let mut c = WreathArrow { perm: perm::identity(k), arrows: vec![h; k] };
        let rot = phi.pres.automorphism(src);
        for _ in 0..a.1 {
            c = WreathArrow::compose(b, &c, &rot);
        }
        (src, c)
    })?;
    Ok(EkEquivalence { k, phi, phi_center, lambda, root, root_center, e, f })
}

/// `Q: S(ΦX) → Λ(S X)`, truncated at total degree `n_max`, assembling a
/// tuple of cycles into one automorphism of the concatenated tuple.
pub struct QEquivalence {
    pub n_max: usize,
    pub phi: Presented<Phi>,
    pub source: Presented<SymPower>,
    /// `S(φ)`.
    pub source_center: CenterElement,
    pub sym: Presented<SymPower>,
    pub lambda: Presented<Inertia>,
    pub q: GroupoidFunctor,
}

impl QEquivalence {
    /// Total degree of a source object.
    pub fn degree(&self, o: usize) -> usize {
        self.source.pres.object(o).iter().map(|&p| self.phi.pres.degree(p)).sum()
    }
}

pub fn equivalence_q(x: Arc<FinGroupoid>, n_max: usize) -> Result<QEquivalence, GroupoidError> {
    let ks: Vec<usize> = (1..=n_max).collect();
    let phi = Presented::build(Phi::new(x.clone(), &ks)?)?;
    let phi_center = phi.phi_center();
    let degrees: Vec<usize> = (0..phi.pres.object_count()).map(|o| phi.pres.degree(o)).collect();
    let source = Presented::build(SymPower::graded(phi.groupoid.clone(), &degrees, n_max, 0)?)?;
    let sym = Presented::build(SymPower::graded(x.clone(), &vec![1; x.object_count()], n_max, 0)?)?;
    let lambda = inertia(sym.groupoid.clone())?;

    let source_center = CenterElement {
        values: (0..source.pres.object_count())
            .map(|o| {
                let t = source.pres.object(o);
                let arrows = t.iter().map(|&p| phi_center.values[p]).collect();
                source.encode(&(o, WreathArrow { perm: perm::identity(t.len()), arrows }))
            })
            .collect(),
    };

    let offsets = |t: &[usize]| {
        let mut off = Vec::with_capacity(t.len());
        let mut acc = 0;
        for &p in t {
            off.push(acc);
            acc += phi.pres.degree(p);
        }
        (off, acc)
    };
    let q_obj = |o: usize| {
        let t = source.pres.object(o);
        let (off, n) = offsets(t);
        let mut perm_big = vec![0; n];
        let mut arrows = Vec::with_capacity(n);
        let mut tuple = Vec::with_capacity(n);
        for (i, &p) in t.iter().enumerate() {
            let a = phi.pres.automorphism(p);
            for j in 0..a.perm.len() {
                perm_big[off[i] + j] = off[i] + a.perm[j];
            }
            arrows.extend(a.arrows.iter().copied());
            tuple.extend(phi.pres.tuple(p));
        }
        let so = sym.pres.object_of(&tuple).expect("concatenation within the truncation");
        lambda.pres.object_of(sym.encode(&(so, WreathArrow { perm: perm_big, arrows })))
    };
    let q = source.functor_to(&lambda, q_obj, |a: &(usize, WreathArrow)| {
        let t = source.pres.object(a.0);
        let (off, n) = offsets(t);
        let mut t_out = vec![0; t.len()];
        for (i, c) in a.1.arrows.iter().enumerate() {
            t_out[a.1.perm[i]] = c.tgt;
        }
        let (off_out, _) = offsets(&t_out);
        let mut perm_big = vec![0; n];
        let mut arrows = vec![x.identity(0); n];
        let mut tuple = Vec::with_capacity(n);
        for (i, &c) in a.1.arrows.iter().enumerate() {
            let (_, w) = phi.decode(c);
            for j in 0..w.perm.len() {
                perm_big[off[i] + j] = off_out[a.1.perm[i]] + w.perm[j];
                arrows[off[i] + j] = w.arrows[j];
            }
            tuple.extend(phi.pres.tuple(t[i]));
        }
        let so = sym.pres.object_of(&tuple).expect("concatenation within the truncation");
        (q_obj(a.0), sym.encode(&(so, WreathArrow { perm: perm_big, arrows })))
    })?;
    Ok(QEquivalence { n_max, phi, source, source_center, sym, lambda, q })
}
