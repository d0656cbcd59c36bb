use std::collections::HashMap;
use std::sync::Arc;

use super::constructions::{inertia, inertia_functor, Inertia};
use super::{ArrowId, GroupoidError, GroupoidFunctor, Presentation, Presented};
use crate::limits::element_cap;

/// `X ×_Z Y` for `u: X → Z` and `a: Y → Z`: objects `(x, y, g: u(x) → a(y))`,
/// arrows `(h, k)` sending `(x, y, g)` to `(x', y', a(k) ∘ g ∘ u(h)⁻¹)`.
pub struct FibredProduct {
    pub u: GroupoidFunctor,
    pub a: GroupoidFunctor,
    objects: Vec<(usize, usize, ArrowId)>,
    index: HashMap<(usize, usize, ArrowId), usize>,
}

impl FibredProduct {
    pub fn new(u: GroupoidFunctor, a: GroupoidFunctor) -> Result<FibredProduct, GroupoidError> {
        if !Arc::ptr_eq(&u.target, &a.target) {
            return Err(GroupoidError::InvalidFunctor("functors must share their target".into()));
        }
        let cap = element_cap();
        let z = u.target.clone();
        let mut objects = Vec::new();
        for x in 0..u.source.object_count() {
            for y in 0..a.source.object_count() {
                for g in z.hom(u.object(x), a.object(y)) {
                    objects.push((x, y, g));
                }
                if objects.len() > cap {
                    return Err(GroupoidError::CapExceeded { cap });
                }
            }
        }
        let index = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        Ok(FibredProduct { u, a, objects, index })
    }

    pub fn object(&self, o: usize) -> (usize, usize, ArrowId) {
        self.objects[o]
    }

    pub fn object_of(&self, x: usize, y: usize, g: ArrowId) -> usize {
        self.index[&(x, y, g)]
    }
}

impl Presentation for FibredProduct {
    type Arrow = (usize, ArrowId, ArrowId);

    fn object_count(&self) -> usize {
        self.objects.len()
    }
    fn source(&self, a: &Self::Arrow) -> usize {
        a.0
    }
    fn target(&self, a: &Self::Arrow) -> usize {
        let z = &self.u.target;
        let g = self.objects[a.0].2;
        let g2 = z.compose(self.a.arrow(a.2), z.compose(g, z.inverse(self.u.arrow(a.1))));
        self.index[&(a.1.tgt, a.2.tgt, g2)]
    }
    fn identity(&self, o: usize) -> Self::Arrow {
        let (x, y, _) = self.objects[o];
        (o, self.u.source.identity(x), self.a.source.identity(y))
    }
    fn compose(&self, later: &Self::Arrow, earlier: &Self::Arrow) -> Self::Arrow {
        (earlier.0, self.u.source.compose(later.1, earlier.1), self.a.source.compose(later.2, earlier.2))
    }
    fn inverse(&self, a: &Self::Arrow) -> Self::Arrow {
        (self.target(a), self.u.source.inverse(a.1), self.a.source.inverse(a.2))
    }
    fn arrows_from(&self, o: usize) -> Vec<Self::Arrow> {
        let (x, y, _) = self.objects[o];
        let ks = self.a.source.arrows_from(y);
        self.u.source.arrows_from(x).into_iter().flat_map(|h| ks.iter().map(move |&k| (o, h, k))).collect()
    }
}

/// The fibred product with its projections `b` to `X` and `v` to `Y`.
pub struct FibredSquare {
    pub product: Presented<FibredProduct>,
    pub to_x: GroupoidFunctor,
    pub to_y: GroupoidFunctor,
}

impl FibredSquare {
    /// The canonical `u ∘ b ⇒ a ∘ v` at an object.
    pub fn eta(&self, o: usize) -> ArrowId {
        self.product.pres.object(o).2
    }

    /// Naturality of [`Self::eta`] along every arrow of the product.
    pub fn square_commutes(&self) -> bool {
        let p = &self.product;
        let (u, a) = (&p.pres.u, &p.pres.a);
        let z = &u.target;
        p.groupoid.all_arrows().into_iter().all(|c| {
            let lhs = z.compose(a.arrow(self.to_y.arrow(c)), self.eta(c.src));
            let rhs = z.compose(self.eta(c.tgt), u.arrow(self.to_x.arrow(c)));
            lhs == rhs
        })
    }
}

pub fn fibred_product(u: &GroupoidFunctor, a: &GroupoidFunctor) -> Result<FibredSquare, GroupoidError> {
    let product = Presented::build(FibredProduct::new(u.clone(), a.clone())?)?;
    let p = &product;
    let to_x = p.functor_into(u.source.clone(), |o| p.pres.object(o).0, |c: &(usize, ArrowId, ArrowId)| c.1)?;
    let to_y = p.functor_into(a.source.clone(), |o| p.pres.object(o).1, |c: &(usize, ArrowId, ArrowId)| c.2)?;
    Ok(FibredSquare { product, to_x, to_y })
}

/// The comparison `Λ(X ×_Z Y) → ΛX ×_{ΛZ} ΛY`.
pub struct LambdaComparison {
    pub square: FibredSquare,
    pub lambda_product: Presented<Inertia>,
    pub lambda_x: Presented<Inertia>,
    pub lambda_y: Presented<Inertia>,
    pub lambda_z: Presented<Inertia>,
    pub product_of_lambdas: FibredSquare,
    pub functor: GroupoidFunctor,
}

pub fn lambda_comparison(u: &GroupoidFunctor, a: &GroupoidFunctor) -> Result<LambdaComparison, GroupoidError> {
    let square = fibred_product(u, a)?;
    let lambda_product = inertia(square.product.groupoid.clone())?;
    let lambda_x = inertia(u.source.clone())?;
    let lambda_y = inertia(a.source.clone())?;
    let lambda_z = inertia(u.target.clone())?;
    let lu = inertia_functor(u, &lambda_x, &lambda_z)?;
    let la = inertia_functor(a, &lambda_y, &lambda_z)?;
    let product_of_lambdas = fibred_product(&lu, &la)?;

    let p = &square.product;
    let pl = &product_of_lambdas.product;
    let obj = |o: usize| {
        let (po, c) = lambda_product.pres.object(o);
        let (_, h, k) = p.decode(c);
        let (x, y, g) = p.pres.object(po);
        debug_assert_eq!((h.src, k.src), (x, y));
        let ox = lambda_x.pres.object_of(h);
        let oy = lambda_y.pres.object_of(k);
        let gamma = lambda_z.encode(&(lu.object(ox), g));
        debug_assert_eq!(gamma.tgt, la.object(oy));
        pl.pres.object_of(ox, oy, gamma)
    };
    let functor = lambda_product.functor_to(pl, obj, |c: &(usize, ArrowId)| {
        let (po, _) = lambda_product.pres.object(c.0);
        let (_, h, k) = p.decode(c.1);
        debug_assert_eq!(p.pres.object(po).0, h.src);
        let o = obj(c.0);
        let (ox, oy, _) = pl.pres.object(o);
        (o, lambda_x.encode(&(ox, h)), lambda_y.encode(&(oy, k)))
    })?;
    Ok(LambdaComparison { square, lambda_product, lambda_x, lambda_y, lambda_z, product_of_lambdas, functor })
}
