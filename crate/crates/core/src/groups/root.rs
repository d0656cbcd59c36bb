use std::sync::Arc;

use super::{FinGroup, GroupError};

/// `(G × ℤ)/⟨(z⁻¹, k)⟩`, realized on pairs `(g, j)` with `0 <= j < k` at index
/// `j·|G| + g`. The element `φ = (1, 1)` satisfies `φ^k = z`.
#[derive(Debug)]
pub struct CentralRoot {
    pub group: Arc<FinGroup>,
    pub phi: usize,
    pub base_order: usize,
    pub k: usize,
}

impl CentralRoot {
    /// Index of `(g, j)`.
    pub fn element(&self, g: usize, j: usize) -> usize {
        debug_assert!(j < self.k);
        j * self.base_order + g
    }

    /// `(g, j)` of an index.
    pub fn decode(&self, e: usize) -> (usize, usize) {
        (e % self.base_order, e / self.base_order)
    }

    /// Image of `G` under `g ↦ (g, 0)`.
    pub fn embed(&self, g: usize) -> usize {
        g
    }
}

pub fn adjoin_central_root(g: &FinGroup, z: usize, k: usize) -> Result<CentralRoot, GroupError> {
    assert!(k >= 1, "root degree must be positive");
    if !g.is_central(z) {
        return Err(GroupError::NotCentral(z));
    }
    let n = g.order();
    let elements: Vec<(usize, usize)> = (0..k).flat_map(|j| (0..n).map(move |x| (x, j))).collect();
    let mul = |a: &(usize, usize), b: &(usize, usize)| {
        let s = a.1 + b.1;
        let carry = (s / k) as i64;
        (g.mul(g.mul(a.0, b.0), g.pow(z, carry)), s % k)
    };
    let group = FinGroup::from_elements(&elements, mul)?;
    let phi = if k == 1 { z } else { n };
    Ok(CentralRoot { group: Arc::new(group), phi, base_order: n, k })
}
