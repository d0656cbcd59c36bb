//! Explicit finite groups given by multiplication tables, with conjugacy
//! classes, centralizers, subgroups, wreath products and central-root
//! extensions.
//!
//! Elements are indexed `0..order` with `0` the identity. Indices are stable
//! and appear in every serialized artifact.

pub mod perm;
mod root;
pub mod wreath;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limits::element_cap;

pub use root::{adjoin_central_root, CentralRoot};
pub use wreath::{wreath_product, WreathElement, WreathProduct};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {index} is not a bijection on {degree} points")]
    NotBijective { index: usize, degree: usize },
    #[error("group exceeds the element cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("element {0} is not central")]
    NotCentral(usize),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
}

/// Permutation provenance of a group built from generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermRep {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    /// Image vector of every element, indexed like the group.
    pub images: Vec<Vec<usize>>,
}

/// A finite group as an explicit multiplication table.
#[derive(Clone)]
pub struct FinGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    name: Option<String>,
    perms: Option<PermRep>,
    conjugacy: OnceLock<ConjugacyData>,
}

/// Conjugacy classes (ordered by least member), class representatives
/// (least member) and the centralizer of each representative.
#[derive(Clone)]
pub struct ConjugacyData {
    pub classes: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub class_of: Vec<usize>,
    pub centralizers: Vec<Subgroup>,
}

impl FinGroup {
    /// Validates a raw table: identity at index 0, Latin square property and
    /// associativity (Light's test against a generating set).
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<FinGroup, GroupError> {
        if order == 0 || table.len() != order * order {
            return Err(GroupError::NotAGroup("table has the wrong size".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(GroupError::NotAGroup("element 0 is not the identity".into()));
            }
        }
        let g = FinGroup::from_table_unchecked(order, table)?;
        g.check_associative()?;
        Ok(g)
    }

    fn from_table_unchecked(order: usize, table: Vec<u32>) -> Result<FinGroup, GroupError> {
        let mut inverses = vec![u32::MAX; order];
        for a in 0..order {
            let mut seen_row = vec![false; order];
            for b in 0..order {
                let p = table[a * order + b] as usize;
                if seen_row[p] {
                    return Err(GroupError::NotAGroup(format!("row {a} repeats an entry")));
                }
                seen_row[p] = true;
                if p == 0 {
                    inverses[a] = b as u32;
                }
            }
        }
        Ok(FinGroup { order, table, inverses, name: None, perms: None, conjugacy: OnceLock::new() })
    }

    /// Builds the table of a finite set of elements closed under a given
    /// associative product. The first element must be the identity.
    pub fn from_elements<T, F>(elements: &[T], mul: F) -> Result<FinGroup, GroupError>
    where
        T: Eq + Hash + Clone,
        F: Fn(&T, &T) -> T,
    {
        let order = elements.len();
        if order > element_cap() {
            return Err(GroupError::CapExceeded { cap: element_cap() });
        }
        let index: HashMap<&T, u32> = elements.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        if index.len() != order {
            return Err(GroupError::NotAGroup("duplicate elements".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in elements {
            for b in elements {
                let p = mul(a, b);
                let i = *index
                    .get(&p)
                    .ok_or_else(|| GroupError::NotAGroup("element set is not closed".into()))?;
                table.push(i);
            }
        }
        if (0..order).any(|a| table[a] as usize != a) {
            return Err(GroupError::NotAGroup("first element is not the identity".into()));
        }
        FinGroup::from_table_unchecked(order, table)
    }

    /// Closure of permutation generators on `degree` points, capped at `cap`
    /// elements. Elements are numbered in breadth-first order from the identity.
    pub fn from_generators_with_cap(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<FinGroup, GroupError> {
        for (index, g) in generators.iter().enumerate() {
            if !perm::is_bijection(g, degree) {
                return Err(GroupError::NotBijective { index, degree });
            }
        }
        let id = perm::identity(degree);
        let mut images = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = perm::compose(g, &images[i]);
                if !index.contains_key(&p) {
                    if images.len() >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    index.insert(p.clone(), images.len());
                    queue.push_back(images.len());
                    images.push(p);
                }
            }
        }
        let order = images.len();
        let mut table = Vec::with_capacity(order * order);
        for a in &images {
            for b in &images {
                table.push(index[&perm::compose(a, b)] as u32);
            }
        }
        let mut g = FinGroup::from_table_unchecked(order, table)?;
        g.perms = Some(PermRep { degree, generators: generators.to_vec(), images });
        Ok(g)
    }

    pub fn from_generators(degree: usize, generators: &[Vec<usize>]) -> Result<FinGroup, GroupError> {
        FinGroup::from_generators_with_cap(degree, generators, element_cap())
    }

    pub fn trivial() -> FinGroup {
        FinGroup::from_generators(1, &[]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> FinGroup {
        assert!(n >= 1);
        FinGroup::from_generators(n, &[perm::long_cycle(n)]).expect("cyclic group").named(format!("C{n}"))
    }

    pub fn symmetric(n: usize) -> FinGroup {
        assert!(n >= 1);
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t = perm::identity(n);
            t.swap(0, 1);
            gens.push(t);
            gens.push(perm::long_cycle(n));
        }
        FinGroup::from_generators(n, &gens).expect("symmetric group").named(format!("S{n}"))
    }

    pub fn named(mut self, name: impl Into<String>) -> FinGroup {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn perm_rep(&self) -> Option<&PermRep> {
        self.perms.as_ref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = 0;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// `s g s⁻¹`.
    pub fn conjugate(&self, s: usize, g: usize) -> usize {
        self.mul(self.mul(s, g), self.inv(s))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_central(&self, z: usize) -> bool {
        self.elements().all(|g| self.commute(z, g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        self.elements().fold(1u64, |acc, g| crate::exactnum::lcm(acc, self.element_order(g) as u64)) as usize
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.commute(a, b)))
    }

    /// A generating set chosen greedily by index.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        let mut members = vec![0usize];
        for g in self.elements() {
            if span[g] {
                continue;
            }
            gens.push(g);
            // regenerate the closure
            let mut queue: VecDeque<usize> = members.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !span[y] {
                        span[y] = true;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    /// Light's associativity test: `(x·s)·y = x·(s·y)` for all `x, y` and every
    /// generator `s` implies associativity.
    pub fn check_associative(&self) -> Result<(), GroupError> {
        for s in self.generating_set() {
            for x in self.elements() {
                let xs = self.mul(x, s);
                for y in self.elements() {
                    if self.mul(xs, y) != self.mul(x, self.mul(s, y)) {
                        return Err(GroupError::NotAGroup(format!("({x}*{s})*{y} != {x}*({s}*{y})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn conjugacy(&self) -> &ConjugacyData {
        self.conjugacy.get_or_init(|| conjugacy_data(self))
    }

    pub fn class_count(&self) -> usize {
        self.conjugacy().classes.len()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.conjugacy().class_of[g]
    }

    /// Some `s` with `s g s⁻¹` equal to the representative of `g`'s class;
    /// the least such index.
    pub fn conjugator_to_rep(&self, g: usize) -> usize {
        let rep = self.conjugacy().representatives[self.class_of(g)];
        self.elements().find(|&s| self.conjugate(s, g) == rep).expect("class representative")
    }

    /// Centralizer of an arbitrary element as a subgroup.
    pub fn centralizer(&self, g: usize) -> Subgroup {
        let members: Vec<usize> = self.elements().filter(|&h| self.commute(g, h)).collect();
        Subgroup::from_elements(self, &members).expect("centralizer is a subgroup")
    }

    /// Number of commuting ordered pairs.
    pub fn commuting_pairs(&self) -> usize {
        self.elements().map(|a| self.elements().filter(|&b| self.commute(a, b)).count()).sum()
    }

    /// Whether `elements` (ambient indices) are closed under the product.
    pub fn is_closed(&self, elements: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &e in elements {
            member[e] = true;
        }
        elements.iter().all(|&a| elements.iter().all(|&b| member[self.mul(a, b)]))
    }

    /// Element index of a permutation, for groups built from generators.
    pub fn element_of_perm(&self, p: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.images.iter().position(|q| q == p)
    }
}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinGroup").field("name", &self.name).field("order", &self.order).finish()
    }
}

impl PartialEq for FinGroup {
    fn eq(&self, other: &FinGroup) -> bool {
        self.order == other.order && self.table == other.table
    }
}

fn conjugacy_data(g: &FinGroup) -> ConjugacyData {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        let mut members = Vec::new();
        for s in 0..n {
            let y = g.conjugate(s, x);
            if class_of[y] == usize::MAX {
                class_of[y] = idx;
                members.push(y);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    let representatives: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let centralizers = representatives.iter().map(|&r| g.centralizer(r)).collect();
    ConjugacyData { classes, representatives, class_of, centralizers }
}

/// A subgroup realized as its own table plus the embedding of its elements
/// into the ambient group. Subgroup element `i` is the `i`-th smallest
/// ambient index, so the identity stays at `0`.
#[derive(Clone)]
pub struct Subgroup {
    pub group: Arc<FinGroup>,
    pub embedding: Vec<usize>,
    lookup: HashMap<usize, usize>,
}

impl Subgroup {
    pub fn from_elements(ambient: &FinGroup, elements: &[usize]) -> Result<Subgroup, GroupError> {
        let mut members = elements.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::InvalidSubgroup("identity missing".into()));
        }
        if members.iter().any(|&m| m >= ambient.order()) {
            return Err(GroupError::InvalidSubgroup("element index out of range".into()));
        }
        if !ambient.is_closed(&members) {
            return Err(GroupError::InvalidSubgroup("element set is not closed".into()));
        }
        let lookup: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let k = members.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &members {
            for &b in &members {
                table.push(lookup[&ambient.mul(a, b)] as u32);
            }
        }
        let group = FinGroup::from_table_unchecked(k, table)?;
        Ok(Subgroup { group: Arc::new(group), embedding: members, lookup })
    }

    /// Subgroup of `ambient` formed by the image of `sub`, matching elements
    /// through their permutation representations.
    pub fn from_perm_groups(ambient: &FinGroup, sub: &FinGroup) -> Result<Subgroup, GroupError> {
        let (Some(a), Some(s)) = (ambient.perm_rep(), sub.perm_rep()) else {
            return Err(GroupError::InvalidSubgroup("both groups need permutation provenance".into()));
        };
        if a.degree != s.degree {
            return Err(GroupError::InvalidSubgroup("permutation degrees differ".into()));
        }
        let mut embedding = Vec::with_capacity(sub.order());
        for p in &s.images {
            let e = ambient
                .element_of_perm(p)
                .ok_or_else(|| GroupError::InvalidSubgroup("element not in the ambient group".into()))?;
            embedding.push(e);
        }
        // keep the subgroup's own indexing so that characters on it stay valid
        let lookup: HashMap<usize, usize> = embedding.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let group = FinGroup::from_table_unchecked(sub.order(), sub.table.clone())?;
        let mut group = group;
        group.perms = sub.perms.clone();
        group.name = sub.name.clone();
        Ok(Subgroup { group: Arc::new(group), embedding, lookup })
    }

    /// Subgroup index of an ambient element, if it belongs to the subgroup.
    pub fn index_of(&self, ambient_element: usize) -> Option<usize> {
        self.lookup.get(&ambient_element).copied()
    }

    pub fn contains(&self, ambient_element: usize) -> bool {
        self.lookup.contains_key(&ambient_element)
    }

    pub fn order(&self) -> usize {
        self.embedding.len()
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup").field("embedding", &self.embedding).finish()
    }
}

/// Closure of permutation generators under composition.
pub fn group_from_generators(degree: usize, generators: &[Vec<usize>]) -> Result<FinGroup, GroupError> {
    FinGroup::from_generators(degree, generators)
}

/// The group file format: `{"degree": n, "generators": [[...], ...], "name": optional}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupSpec {
    pub degree: usize,
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<FinGroup, GroupError> {
        let g = FinGroup::from_generators(self.degree, &self.generators)?;
        Ok(match &self.name {
            Some(n) => g.named(n.clone()),
            None => g,
        })
    }

    /// Provenance block of a permutation group.
    pub fn of(group: &FinGroup) -> Option<GroupSpec> {
        let p = group.perm_rep()?;
        Some(GroupSpec { degree: p.degree, generators: p.generators.clone(), name: group.name.clone() })
    }
}
