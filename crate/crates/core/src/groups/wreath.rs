use std::collections::HashMap;
use std::sync::Arc;

use super::{perm, FinGroup, GroupError};
use crate::limits::element_cap;

/// An element `(σ; g_1, …, g_n)` of `G ≀ S_n`. As an arrow of the symmetric
/// power of `pt//G` it sends slot `i` to slot `σ(i)` acting by `g_i`, so
/// `(τ; h̄)·(σ; ḡ) = (τσ; k̄)` with `k_i = h_{σ(i)} g_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub perm: Vec<usize>,
    pub entries: Vec<usize>,
}

impl WreathElement {
    pub fn compose(base: &FinGroup, later: &WreathElement, earlier: &WreathElement) -> WreathElement {
        let perm = perm::compose(&later.perm, &earlier.perm);
        let entries = earlier
            .entries
            .iter()
            .enumerate()
            .map(|(i, &g)| base.mul(later.entries[earlier.perm[i]], g))
            .collect();
        WreathElement { perm, entries }
    }
}

/// `G ≀ S_n` with an explicit decoding of its element indices.
pub struct WreathProduct {
    pub base: Arc<FinGroup>,
    pub n: usize,
    pub group: Arc<FinGroup>,
    pub elements: Vec<WreathElement>,
    index: HashMap<WreathElement, usize>,
}

impl WreathProduct {
    pub fn index_of(&self, e: &WreathElement) -> usize {
        self.index[e]
    }

    pub fn element(&self, i: usize) -> &WreathElement {
        &self.elements[i]
    }

    /// Elements whose permutation fixes the block `{0..a}` setwise, i.e. the
    /// image of `G≀S_a × G≀S_{n-a}`.
    pub fn block_subgroup_elements(&self, a: usize) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&i| self.elements[i].perm[..a].iter().all(|&p| p < a))
            .collect()
    }
}

pub fn wreath_product(base: Arc<FinGroup>, n: usize) -> Result<WreathProduct, GroupError> {
    let cap = element_cap();
    let g = base.order();
    let size = (0..n)
        .try_fold(perm::factorial(n), |acc: usize, _| acc.checked_mul(g))
        .filter(|&s| s <= cap)
        .ok_or(GroupError::CapExceeded { cap })?;
    let perms = perm::all_permutations(n);
    let tuples = g.pow(n as u32);
    let mut elements = Vec::with_capacity(size);
    for p in &perms {
        for t in 0..tuples {
            let mut entries = vec![0; n];
            let mut rest = t;
            for slot in (0..n).rev() {
                entries[slot] = rest % g;
                rest /= g;
            }
            elements.push(WreathElement { perm: p.clone(), entries });
        }
    }
    let b = base.clone();
    let group = FinGroup::from_elements(&elements, |x, y| WreathElement::compose(&b, x, y))?;
    let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let name = base.name().map(|nm| format!("{nm} wr S{n}"));
    let mut group = group;
    if let Some(nm) = name {
        group = group.named(nm);
    }
    Ok(WreathProduct { base, n, group: Arc::new(group), elements, index })
}
