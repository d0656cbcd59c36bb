use serde::Serialize;

use super::FinGroupoid;
use crate::exactnum::Rational;

#[derive(Debug, Clone, Serialize)]
pub struct DumpArrow {
    pub id: usize,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub representative: usize,
    pub objects: usize,
    pub automorphism_order: usize,
}

/// Serializable description of a groupoid.
#[derive(Debug, Clone, Serialize)]
pub struct GroupoidDump {
    pub objects: usize,
    pub arrows: Vec<DumpArrow>,
    /// `[a, b, c]` meaning `a ∘ b = c`, by arrow id.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition: Option<Vec<[usize; 3]>>,
    pub classes: Vec<ClassSummary>,
    pub cardinality: Rational,
}

pub fn dump(g: &FinGroupoid, with_composition: bool) -> GroupoidDump {
    let all = g.all_arrows();
    let arrows = all.iter().map(|&a| DumpArrow { id: g.arrow_index(a), src: a.src, tgt: a.tgt }).collect();
    let composition = with_composition.then(|| {
        let mut triples = Vec::new();
        for &b in &all {
            for a in g.arrows_from(b.tgt) {
                triples.push([g.arrow_index(a), g.arrow_index(b), g.arrow_index(g.compose(a, b))]);
            }
        }
        triples
    });
    let classes = g
        .components()
        .iter()
        .map(|c| ClassSummary {
            representative: c.objects[0],
            objects: c.objects.len(),
            automorphism_order: c.group.order(),
        })
        .collect();
    GroupoidDump { objects: g.object_count(), arrows, composition, classes, cardinality: g.cardinality() }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::FinGroup;

    #[test]
    fn point_dump() {
        let g = FinGroupoid::point(Arc::new(FinGroup::symmetric(3)));
        let d = dump(&g, true);
        assert_eq!(d.arrows.len(), 6);
        assert_eq!(d.composition.as_ref().unwrap().len(), 36);
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["cardinality"], "1/6");
        assert_eq!(json["classes"][0]["automorphism_order"], 6);
    }
}
