use serde::Serialize;

use super::GroupoidFunctor;
use crate::exactnum::Rational;

/// Comparison of `Hom(x, y)` with `Hom(Fx, Fy)` for a pair of source classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomCheck {
    pub source_classes: (usize, usize),
    pub source_size: usize,
    pub target_size: usize,
    pub bijective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub is_equivalence: bool,
    pub essentially_surjective: bool,
    pub fully_faithful: bool,
    /// `(source representative, target representative)` per source class.
    pub class_matching: Vec<(usize, usize)>,
    pub unmatched_target_classes: Vec<usize>,
    pub hom_checks: Vec<HomCheck>,
    pub source_cardinality: Rational,
    pub target_cardinality: Rational,
    pub failure: Option<String>,
}

/// Decides whether `f` is essentially surjective and fully faithful.
pub fn equivalence_check(f: &GroupoidFunctor) -> EquivalenceReport {
    let (s, t) = (&f.source, &f.target);
    let reps: Vec<usize> = s.components().iter().map(|c| c.objects[0]).collect();
    let class_matching: Vec<(usize, usize)> = reps.iter().map(|&b| (b, t.representative(f.object(b)))).collect();
    let mut hit = vec![false; t.iso_class_count()];
    for &(b, _) in &class_matching {
        hit[t.component_of(f.object(b))] = true;
    }
    let unmatched_target_classes: Vec<usize> =
        (0..hit.len()).filter(|&c| !hit[c]).map(|c| t.components()[c].objects[0]).collect();
    let essentially_surjective = unmatched_target_classes.is_empty();

    let mut hom_checks = Vec::with_capacity(reps.len() * reps.len());
    let mut failure = None;
    for (i, &bi) in reps.iter().enumerate() {
        for (j, &bj) in reps.iter().enumerate() {
            let (fi, fj) = (f.object(bi), f.object(bj));
            let target_size = if t.isomorphic(fi, fj) { t.aut_order(fi) } else { 0 };
            let (source_size, bijective) = if i == j {
                let n = s.aut_order(bi);
                let mut seen = std::collections::HashSet::with_capacity(n);
                let injective = s.automorphisms(bi).into_iter().all(|a| seen.insert(f.arrow(a)));
                (n, injective && n == target_size)
            } else {
                (0, target_size == 0)
            };
            if !bijective && failure.is_none() {
                failure = Some(format!(
                    "hom-sets between classes of objects {bi} and {bj} have sizes {source_size} and {target_size}"
                ));
            }
            hom_checks.push(HomCheck { source_classes: (bi, bj), source_size, target_size, bijective });
        }
    }
    let fully_faithful = hom_checks.iter().all(|h| h.bijective);
    if !essentially_surjective && failure.is_none() {
        failure = Some(format!("target classes {unmatched_target_classes:?} are not hit"));
    }
    EquivalenceReport {
        is_equivalence: essentially_surjective && fully_faithful,
        essentially_surjective,
        fully_faithful,
        class_matching,
        unmatched_target_classes,
        hom_checks,
        source_cardinality: s.cardinality(),
        target_cardinality: t.cardinality(),
        failure,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groupoids::{point_groupoid, translation_groupoid, FinGroupoid};
    use crate::groups::FinGroup;

    #[test]
    fn examples() {
        let s3 = point_groupoid(Arc::new(FinGroup::symmetric(3))).unwrap().groupoid;
        let id = GroupoidFunctor::identity(s3.clone());
        let r = equivalence_check(&id);
        assert!(r.is_equivalence);
        assert_eq!(r.source_cardinality, Rational::new(1, 6));

        let c2 = Arc::new(FinGroupoid::point(Arc::new(FinGroup::cyclic(2))));
        let pt = Arc::new(FinGroupoid::point(Arc::new(FinGroup::trivial())));
        let inc = GroupoidFunctor::from_group_hom(pt, c2, &[0]).unwrap();
        let r = equivalence_check(&inc);
        assert!(r.essentially_surjective);
        assert!(!r.fully_faithful);
        assert!(!r.is_equivalence);
        assert_eq!((r.hom_checks[0].source_size, r.hom_checks[0].target_size), (1, 2));
    }

    #[test]
    fn torsor_is_contractible() {
        let g = Arc::new(FinGroup::symmetric(3));
        let action = g.elements().map(|a| g.elements().map(|b| g.mul(a, b)).collect()).collect();
        let t = translation_groupoid(g, action).unwrap();
        let r = equivalence_check(&GroupoidFunctor::to_point(t.groupoid.clone()));
        assert!(r.is_equivalence);
        assert_eq!(r.source_cardinality, Rational::one());
    }
}
