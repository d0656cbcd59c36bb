//! Virtual characters of finite groups and the λ-ring operations on them:
//! Adams operations, symmetric and exterior powers by Newton's identities,
//! induction, central eigenspace projection and the Atiyah power operations
//! into wreath products.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{Cyclotomic, Rational};
use crate::groups::{perm, FinGroup, GroupError, GroupSpec, Subgroup, WreathElement, WreathProduct};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("characters live on different groups")]
    GroupMismatch,
    #[error("element {0} is not central")]
    NotCentral(usize),
    #[error("{0} is not an algebraic integer combination; the input is not genuine")]
    NotIntegral(String),
    #[error("invalid character file: {0}")]
    Format(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// A class function with cyclotomic values, one per conjugacy class in the
/// group's class order.
#[derive(Clone)]
pub struct VirtualCharacter {
    pub group: Arc<FinGroup>,
    pub values: Vec<Cyclotomic>,
}

/// Equal when defined on the same group object with equal values.
impl PartialEq for VirtualCharacter {
    fn eq(&self, other: &VirtualCharacter) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.values == other.values
    }
}

impl Eq for VirtualCharacter {}

impl std::fmt::Debug for VirtualCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.values).finish()
    }
}

impl VirtualCharacter {
    pub fn new(group: Arc<FinGroup>, values: Vec<Cyclotomic>) -> VirtualCharacter {
        assert_eq!(values.len(), group.class_count(), "one value per conjugacy class");
        VirtualCharacter { group, values }
    }

    pub fn constant(group: Arc<FinGroup>, c: Cyclotomic) -> VirtualCharacter {
        let values = vec![c; group.class_count()];
        VirtualCharacter { group, values }
    }

    pub fn trivial(group: Arc<FinGroup>) -> VirtualCharacter {
        Self::constant(group, Cyclotomic::one())
    }

    pub fn zero(group: Arc<FinGroup>) -> VirtualCharacter {
        Self::constant(group, Cyclotomic::zero())
    }

    /// Evaluates `f` at each class representative.
    pub fn from_fn(group: Arc<FinGroup>, f: impl Fn(usize) -> Cyclotomic) -> VirtualCharacter {
        let values = group.conjugacy().representatives.iter().map(|&r| f(r)).collect();
        VirtualCharacter { group, values }
    }

    pub fn regular(group: Arc<FinGroup>) -> VirtualCharacter {
        let n = group.order() as i64;
        Self::from_fn(group, |g| Cyclotomic::from_int(if g == 0 { n } else { 0 }))
    }

    /// Fixed-point count of the defining permutation action.
    pub fn permutation(group: Arc<FinGroup>) -> Option<VirtualCharacter> {
        let images = group.perm_rep()?.images.clone();
        Some(Self::from_fn(group, |g| {
            Cyclotomic::from_int(images[g].iter().enumerate().filter(|(i, &x)| *i == x).count() as i64)
        }))
    }

    /// Sign of the defining permutation action.
    pub fn sign(group: Arc<FinGroup>) -> Option<VirtualCharacter> {
        let images = group.perm_rep()?.images.clone();
        Some(Self::from_fn(group, |g| {
            let odd = perm::cycles(&images[g]).iter().filter(|c| c.len() % 2 == 0).count() % 2 == 1;
            Cyclotomic::from_int(if odd { -1 } else { 1 })
        }))
    }

    pub fn value(&self, g: usize) -> &Cyclotomic {
        &self.values[self.group.class_of(g)]
    }

    pub fn dimension(&self) -> &Cyclotomic {
        &self.values[0]
    }

    fn same_group(&self, other: &VirtualCharacter) -> Result<(), CharError> {
        if Arc::ptr_eq(&self.group, &other.group) {
            Ok(())
        } else {
            Err(CharError::GroupMismatch)
        }
    }

    fn zip(&self, other: &VirtualCharacter, f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> VirtualCharacter {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        VirtualCharacter { group: self.group.clone(), values }
    }

    pub fn add(&self, other: &VirtualCharacter) -> Result<VirtualCharacter, CharError> {
        self.same_group(other)?;
        Ok(self.zip(other, Cyclotomic::add))
    }

    pub fn sub(&self, other: &VirtualCharacter) -> Result<VirtualCharacter, CharError> {
        self.same_group(other)?;
        Ok(self.zip(other, Cyclotomic::sub))
    }

    pub fn mul(&self, other: &VirtualCharacter) -> Result<VirtualCharacter, CharError> {
        self.same_group(other)?;
        Ok(self.zip(other, Cyclotomic::mul))
    }

    pub fn neg(&self) -> VirtualCharacter {
        VirtualCharacter { group: self.group.clone(), values: self.values.iter().map(Cyclotomic::neg).collect() }
    }

    pub fn scale(&self, c: &Cyclotomic) -> VirtualCharacter {
        VirtualCharacter { group: self.group.clone(), values: self.values.iter().map(|v| v.mul(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_integral)
    }

    /// `⟨χ, ψ⟩ = (1/|G|) Σ_g χ(g) ψ(g)̄`.
    pub fn inner_product(&self, other: &VirtualCharacter) -> Result<Cyclotomic, CharError> {
        self.same_group(other)?;
        let classes = &self.group.conjugacy().classes;
        let terms: Vec<Cyclotomic> = (0..self.values.len())
            .map(|c| self.values[c].mul(&other.values[c].conj()).scale(&Rational::from(classes[c].len())))
            .collect();
        Ok(Cyclotomic::sum(&terms).scale(&Rational::new(1, self.group.order() as i64)))
    }

    /// Multiplicities against a supplied list of irreducibles, and whether they
    /// are all non-negative integers.
    pub fn decompose(&self, irreducibles: &[VirtualCharacter]) -> Result<(Vec<Cyclotomic>, bool), CharError> {
        let m: Vec<Cyclotomic> = irreducibles.iter().map(|irr| self.inner_product(irr)).collect::<Result<_, _>>()?;
        let genuine = m.iter().all(|c| c.to_rational().is_some_and(|r| r.is_integer() && !r.is_negative()));
        Ok((m, genuine))
    }

    /// Pullback along a homomorphism `h ↦ hom(h)` from `source`.
    pub fn restrict_along(&self, source: Arc<FinGroup>, hom: impl Fn(usize) -> usize) -> VirtualCharacter {
        VirtualCharacter::from_fn(source, |h| self.value(hom(h)).clone())
    }

    pub fn restrict(&self, sub: &Subgroup) -> VirtualCharacter {
        self.restrict_along(sub.group.clone(), |h| sub.embedding[h])
    }
}

pub fn char_ring_ops(x: &VirtualCharacter, y: &VirtualCharacter, op: RingOp) -> Result<VirtualCharacter, CharError> {
    match op {
        RingOp::Add => x.add(y),
        RingOp::Sub => x.sub(y),
        RingOp::Mul => x.mul(y),
    }
}

/// `ψ_m(χ)(g) = χ(g^m)`.
pub fn adams(chi: &VirtualCharacter, m: usize) -> VirtualCharacter {
    assert!(m >= 1, "Adams operations are indexed by positive integers");
    let g = chi.group.clone();
    VirtualCharacter::from_fn(g.clone(), |x| chi.value(g.pow(x, m as i64)).clone())
}

fn newton(chi: &VirtualCharacter, n_max: usize, alternating: bool) -> Result<Vec<VirtualCharacter>, CharError> {
    let psi: Vec<VirtualCharacter> = (1..=n_max).map(|m| adams(chi, m)).collect();
    let mut out = vec![VirtualCharacter::trivial(chi.group.clone())];
    for n in 1..=n_max {
        let mut acc = VirtualCharacter::zero(chi.group.clone());
        for m in 1..=n {
            let mut term = psi[m - 1].mul(&out[n - m])?;
            if alternating && m % 2 == 0 {
                term = term.neg();
            }
            acc = acc.add(&term)?;
        }
        let s = acc.scale(&Cyclotomic::from_rational(Rational::new(1, n as i64)));
        if !s.is_integral() {
            return Err(CharError::NotIntegral(format!("power {n}")));
        }
        out.push(s);
    }
    Ok(out)
}

/// `S⁰, …, S^{n_max}` with `Sₙ = (1/n) Σ_{m=1..n} ψ_m(χ) S_{n−m}`.
pub fn symmetric_powers(chi: &VirtualCharacter, n_max: usize) -> Result<Vec<VirtualCharacter>, CharError> {
    newton(chi, n_max, false)
}

/// `λ⁰, …, λ^{n_max}` with `λₙ = (1/n) Σ_{m=1..n} (−1)^{m−1} ψ_m(χ) λ_{n−m}`.
pub fn exterior_powers(chi: &VirtualCharacter, n_max: usize) -> Result<Vec<VirtualCharacter>, CharError> {
    newton(chi, n_max, true)
}

/// Induction of a class function given on the members of a subgroup:
/// `ind(φ)(g) = (1/|K|) Σ_{s ∈ G, s⁻¹gs ∈ K} φ(s⁻¹gs)`.
pub fn induce_from(
    group: Arc<FinGroup>,
    members: &[usize],
    phi: impl Fn(usize) -> Cyclotomic,
) -> VirtualCharacter {
    let mut inside = vec![false; group.order()];
    for &m in members {
        inside[m] = true;
    }
    let weight = Rational::new(1, members.len() as i64);
    let g = group.clone();
    VirtualCharacter::from_fn(group, |x| {
        let terms: Vec<Cyclotomic> = g
            .elements()
            .map(|s| g.conjugate(g.inv(s), x))
            .filter(|&c| inside[c])
            .map(&phi)
            .collect();
        Cyclotomic::sum(&terms).scale(&weight)
    })
}

/// `ind_H^G χ` for `H` given as a subgroup of `G`.
pub fn induce(chi: &VirtualCharacter, ambient: Arc<FinGroup>, sub: &Subgroup) -> Result<VirtualCharacter, CharError> {
    if !Arc::ptr_eq(&chi.group, &sub.group) {
        return Err(CharError::GroupMismatch);
    }
    if sub.embedding.iter().any(|&e| e >= ambient.order()) || !ambient.is_closed(&sub.embedding) {
        return Err(GroupError::InvalidSubgroup("embedding is not a subgroup of the ambient group".into()).into());
    }
    Ok(induce_from(ambient, &sub.embedding, |c| chi.value(sub.index_of(c).expect("member")).clone()))
}

/// `χ_a(h) = (1/r) Σ_{j<r} e^{−2πiaj} χ(zʲh)` for `z` central of order `r`.
pub fn central_eigenprojection(chi: &VirtualCharacter, z: usize, a: &Rational) -> Result<VirtualCharacter, CharError> {
    let g = chi.group.clone();
    if !g.is_central(z) {
        return Err(CharError::NotCentral(z));
    }
    let r = g.element_order(z);
    let ar = a * &Rational::from(r);
    if !ar.is_integer() {
        return Ok(VirtualCharacter::zero(g));
    }
    let k = ar.to_i64().expect("small eigenvalue index").rem_euclid(r as i64);
    let weight = Rational::new(1, r as i64);
    Ok(VirtualCharacter::from_fn(g.clone(), |h| {
        let terms: Vec<Cyclotomic> = (0..r)
            .map(|j| {
                let zj = g.mul(g.pow(z, j as i64), h);
                chi.value(zj).mul(&Cyclotomic::root_of_unity(r as u64, -(k * j as i64)))
            })
            .collect();
        Cyclotomic::sum(&terms).scale(&weight)
    }))
}

/// The product `g_{σ^{l−1}(i)} ⋯ g_{σ(i)} g_i` around each cycle of `σ`.
pub fn cycle_products(base: &FinGroup, e: &WreathElement) -> Vec<usize> {
    perm::cycles(&e.perm)
        .into_iter()
        .map(|c| c.iter().fold(base.identity(), |acc, &i| base.mul(e.entries[i], acc)))
        .collect()
}

/// `P_n(χ)` on `G ≀ Sₙ`: the product over cycles of `σ` of `χ` at the cycle
/// products. For genuine `χ` this is the character of `Sₙ ⋉ V^{⊗n}`.
pub fn atiyah_power_wreath(chi: &VirtualCharacter, wreath: &WreathProduct) -> Result<VirtualCharacter, CharError> {
    if !Arc::ptr_eq(&chi.group, &wreath.base) {
        return Err(CharError::GroupMismatch);
    }
    Ok(VirtualCharacter::from_fn(wreath.group.clone(), |w| {
        cycle_products(&wreath.base, wreath.element(w))
            .into_iter()
            .fold(Cyclotomic::one(), |acc, g| acc.mul(chi.value(g)))
    }))
}

/// `p • q`: induction from `G≀S_a × G≀S_b` to `G≀S_{a+b}`.
pub fn bullet_product(
    p: &VirtualCharacter,
    wa: &WreathProduct,
    q: &VirtualCharacter,
    wb: &WreathProduct,
    wab: &WreathProduct,
) -> Result<VirtualCharacter, CharError> {
    let (a, b) = (wa.n, wb.n);
    if !Arc::ptr_eq(&p.group, &wa.group) || !Arc::ptr_eq(&q.group, &wb.group) || wab.n != a + b {
        return Err(CharError::GroupMismatch);
    }
    if !Arc::ptr_eq(&wa.base, &wab.base) || !Arc::ptr_eq(&wb.base, &wab.base) {
        return Err(CharError::GroupMismatch);
    }
    let members = wab.block_subgroup_elements(a);
    Ok(induce_from(wab.group.clone(), &members, |x| {
        let e = wab.element(x);
        let left = WreathElement { perm: e.perm[..a].to_vec(), entries: e.entries[..a].to_vec() };
        let right = WreathElement {
            perm: e.perm[a..].iter().map(|&i| i - a).collect(),
            entries: e.entries[a..].to_vec(),
        };
        p.value(wa.index_of(&left)).mul(q.value(wb.index_of(&right)))
    }))
}

/// Character file: the group and one value per class, keyed by representative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterFile {
    pub group: GroupSpec,
    pub classes: Vec<ClassValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassValue {
    pub representative: usize,
    pub value: Cyclotomic,
}

impl CharacterFile {
    pub fn of(chi: &VirtualCharacter) -> Result<CharacterFile, CharError> {
        let group = GroupSpec::of(&chi.group)
            .ok_or_else(|| CharError::Format("group has no permutation description".into()))?;
        let classes = chi
            .group
            .conjugacy()
            .representatives
            .iter()
            .zip(&chi.values)
            .map(|(&representative, v)| ClassValue { representative, value: v.clone() })
            .collect();
        Ok(CharacterFile { group, classes })
    }

    /// Builds the character on `group`, which must be the group the file describes.
    pub fn on_group(&self, group: Arc<FinGroup>) -> Result<VirtualCharacter, CharError> {
        let mut values: Vec<Option<Cyclotomic>> = vec![None; group.class_count()];
        for cv in &self.classes {
            if cv.representative >= group.order() {
                return Err(CharError::Format(format!("element {} out of range", cv.representative)));
            }
            let c = group.class_of(cv.representative);
            if values[c].replace(cv.value.clone()).is_some_and(|old| old != cv.value) {
                return Err(CharError::Format(format!("conflicting values on class of {}", cv.representative)));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(c, v)| v.ok_or_else(|| CharError::Format(format!("no value for class {c}"))))
            .collect::<Result<_, _>>()?;
        Ok(VirtualCharacter { group, values })
    }

    pub fn load(&self) -> Result<VirtualCharacter, CharError> {
        let group = Arc::new(self.group.build()?);
        self.on_group(group)
    }
}
