use std::collections::HashMap;
use std::sync::Arc;

use super::{RotationReport, RotationViolation, TateElement, TateError, TateFrame};
use crate::charring::{adams, central_eigenprojection, induce_from, VirtualCharacter};
use crate::exactnum::{Bound, Cyclotomic, Rational};
use crate::groups::{adjoin_central_root, CentralRoot, Subgroup};
use crate::qgraded::{QSeries, TSeries};

fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// `β_k`: the `[g]`-component is the `[gᵏ]`-component restricted to `C_g`,
/// with exponents divided by `k` and each coefficient projected to the
/// eigenspace of `g` its new exponent asks for. Known below `E/k`.
pub fn beta(f: &TateElement, k: usize) -> Result<TateElement, TateError> {
    assert!(k >= 1, "β is indexed by positive integers");
    let frame = f.frame().clone();
    let grp = &frame.group;
    let scale = Rational::new(1, k as i64);
    let mut components = Vec::with_capacity(frame.class_count());
    for cf in &frame.classes {
        let g = cf.representative;
        let gk = grp.pow(g, k as i64);
        let src_class = grp.class_of(gk);
        let s = grp.conjugator_to_rep(gk);
        let src_cf = &frame.classes[src_class];
        let cg = cf.centralizer.group.clone();
        let into_src: Vec<usize> = cf
            .centralizer
            .embedding
            .iter()
            .map(|&x| src_cf.centralizer.index_of(grp.conjugate(s, x)).expect("C_g lies in C_{gᵏ}"))
            .collect();
        let src = f.component(src_class);
        let mut terms = Vec::new();
        for (e, chi) in src.terms() {
            let restricted = VirtualCharacter::from_fn(cg.clone(), |x| chi.value(into_src[x]).clone());
            let e2 = e * &scale;
            let projected = central_eigenprojection(&restricted, cf.rep_in_centralizer, &e2)?;
            terms.push((e2, projected));
        }
        let bound = src.known_below().scale(&scale);
        components.push(QSeries::from_terms(&cg, cf.order as u64, terms, bound).with_low(src.low() * &scale));
    }
    TateElement::new(frame, components, f.is_laurent())
}

/// `(1/k) Σ_{0≤b<k} F(gᵏ, g^{−b}h; (τ+b)/k)`, the character form of `β_k`.
pub fn beta_by_characters(f: &TateElement, k: usize, g: usize, h: usize) -> Result<QSeries<Cyclotomic>, TateError> {
    hecke_like(f, &[(1, k)], k, g, h)
}

/// `(1/norm) Σ_{(a,d)} Σ_{0≤b<d} F(g^d, g^{−b}hᵃ; (aτ+b)/d)`.
fn hecke_like(
    f: &TateElement,
    pairs: &[(usize, usize)],
    norm: usize,
    g: usize,
    h: usize,
) -> Result<QSeries<Cyclotomic>, TateError> {
    let grp = f.group().clone();
    if !grp.commute(g, h) {
        return Err(TateError::NotCommuting(g, h));
    }
    let mut acc = QSeries::<Cyclotomic>::zero(&());
    for &(a, d) in pairs {
        let gd = grp.pow(g, d as i64);
        let n = grp.element_order(gd) as u64;
        let ha = grp.pow(h, a as i64);
        let scale = Rational::new(a as i64, d as i64);
        for b in 0..d {
            let x = grp.mul(grp.pow(g, -(b as i64)), ha);
            let series = f.character_eval(gd, x)?.with_denominator(n);
            let twisted = series.twist_substitute(&scale, &Cyclotomic::root_of_unity(n * d as u64, b as i64))?;
            acc = acc.add(&twisted);
        }
    }
    Ok(acc.scale(&Rational::new(1, norm as i64)))
}

/// `ψ_a`: coefficient Adams together with `q ↦ qᵃ`. Known below `a·E`.
pub fn adams_tate(f: &TateElement, a: usize) -> TateElement {
    assert!(a >= 1, "Adams operations are indexed by positive integers");
    let frame = f.frame().clone();
    let ra = Rational::from(a);
    f.map_components(|c, s| {
        let cg = frame.classes[c].centralizer.group.clone();
        s.rescale(&ra).map_coefficients(&cg, |chi| adams(chi, a)).with_denominator(frame.classes[c].order as u64)
    })
}

/// `T_m = Σ_{ad=m} (1/a) ψ_a β_d`. Known below `E/m` for non-negative input.
pub fn hecke(f: &TateElement, m: usize) -> Result<TateElement, TateError> {
    assert!(m >= 1, "Hecke operators are indexed by positive integers");
    let mut acc = TateElement::zero(f.frame());
    for d in divisors(m) {
        let a = m / d;
        let term = adams_tate(&beta(f, d)?, a).scale(&Rational::new(1, a as i64));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `(1/m) Σ_{ad=m} Σ_{0≤b<d} F(g^d, g^{−b}hᵃ; (aτ+b)/d)`.
pub fn hecke_by_characters(f: &TateElement, m: usize, g: usize, h: usize) -> Result<QSeries<Cyclotomic>, TateError> {
    let pairs: Vec<(usize, usize)> = divisors(m).into_iter().map(|d| (m / d, d)).collect();
    hecke_like(f, &pairs, m, g, h)
}

/// `S_t(F) = exp(Σ_{m ≤ T} ψ_m(F) tᵐ/m)`.
pub fn atiyah_symmetric_tate(f: &TateElement, t_order: usize) -> Result<TSeries<TateElement>, TateError> {
    let frame = f.frame().clone();
    let coeffs = (0..=t_order)
        .map(|m| if m == 0 { TateElement::zero(&frame) } else { adams_tate(f, m).scale(&Rational::new(1, m as i64)) })
        .collect();
    Ok(TSeries::new(&frame, coeffs, t_order).exp()?)
}

/// `Π_{k ≤ T} S_{tᵏ}(β_k F)`.
pub fn symmetric_tate(f: &TateElement, t_order: usize) -> Result<TSeries<TateElement>, TateError> {
    let frame = f.frame().clone();
    let mut acc = TSeries::one(&frame, t_order);
    for k in 1..=t_order {
        let s = atiyah_symmetric_tate(&beta(f, k)?, t_order / k)?;
        let mut coeffs = vec![TateElement::zero(&frame); t_order + 1];
        for n in 0..=t_order / k {
            coeffs[n * k] = s.coefficient(n).clone();
        }
        acc = acc.mul(&TSeries::new(&frame, coeffs, t_order));
    }
    Ok(acc)
}

/// `exp(Σ_{m ≤ T} T_m(F) tᵐ)`.
pub fn symmetric_tate_hecke(f: &TateElement, t_order: usize) -> Result<TSeries<TateElement>, TateError> {
    let frame = f.frame().clone();
    let coeffs = (0..=t_order)
        .map(|m| if m == 0 { Ok(TateElement::zero(&frame)) } else { hecke(f, m) })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TSeries::new(&frame, coeffs, t_order).exp()?)
}

/// Which pipeline computes the total symmetric power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricVia {
    Product,
    Hecke,
    Both,
}

/// `Λ_t(F)` as `S_{−t}(F)⁻¹`, checked against `exp(Σ (−1)^{m+1} T_m(F) tᵐ)`.
pub fn exterior_tate(f: &TateElement, t_order: usize) -> Result<TSeries<TateElement>, TateError> {
    let frame = f.frame().clone();
    let by_inverse = symmetric_tate(f, t_order)?.negate_variable().invert()?;
    let coeffs = (0..=t_order)
        .map(|m| match m {
            0 => Ok(TateElement::zero(&frame)),
            m if m % 2 == 1 => hecke(f, m),
            m => hecke(f, m).map(|x| x.neg()),
        })
        .collect::<Result<Vec<_>, TateError>>()?;
    let by_hecke = TSeries::new(&frame, coeffs, t_order).exp()?;
    if let Some((n, c, e)) = super::first_tseries_difference(&by_inverse, &by_hecke) {
        return Err(TateError::Mismatch(format!("t-degree {n}, class {c}, exponent {e}")));
    }
    Ok(by_inverse)
}

fn check_witness(f: &TateElement, g_frame: &TateFrame, witness: &Subgroup) -> Result<(), TateError> {
    if !Arc::ptr_eq(&witness.group, f.group()) {
        return Err(TateError::InvalidWitness("witness does not describe the element's group".into()));
    }
    let big = &g_frame.group;
    if witness.embedding.iter().any(|&x| x >= big.order()) || !big.is_closed(&witness.embedding) {
        return Err(TateError::InvalidWitness("embedding is not a subgroup".into()));
    }
    let h = &witness.group;
    for a in h.elements() {
        for b in h.elements() {
            if witness.embedding[h.mul(a, b)] != big.mul(witness.embedding[a], witness.embedding[b]) {
                return Err(TateError::InvalidWitness("embedding is not a homomorphism".into()));
            }
        }
    }
    Ok(())
}

/// `(I F)(g, h) = (1/|H|) Σ_{s ∈ G: s⁻¹gs, s⁻¹hs ∈ H} F(s⁻¹gs, s⁻¹hs)`,
/// reassembled into components over `G`.
pub fn induction_tate(f: &TateElement, g_frame: &Arc<TateFrame>, witness: &Subgroup) -> Result<TateElement, TateError> {
    check_witness(f, g_frame, witness)?;
    let big = &g_frame.group;
    let weight = Rational::new(1, witness.order() as i64);
    let mut components = Vec::with_capacity(g_frame.class_count());
    for (c, cf) in g_frame.classes.iter().enumerate() {
        let g = cf.representative;
        let mut per_class = Vec::new();
        for h in g_frame.centralizer_class_reps(c) {
            let mut acc = QSeries::<Cyclotomic>::zero(&()).with_denominator(cf.order as u64);
            for s in big.elements() {
                let si = big.inv(s);
                let (g2, h2) = (big.conjugate(si, g), big.conjugate(si, h));
                if let (Some(x), Some(y)) = (witness.index_of(g2), witness.index_of(h2)) {
                    acc = acc.add(&f.character_eval(x, y)?);
                }
            }
            per_class.push(acc.scale(&weight));
        }
        components.push(TateElement::assemble_component(g_frame, c, &per_class));
    }
    TateElement::new(g_frame.clone(), components, f.is_laurent())
}

/// The centralizer form: the `[g]`-component of `I F` is the sum, over the
/// `H`-classes `[g']` fusing into `[g]`, of `ind_{C_H(g')}^{C_G(g')} a_{[g']}`
/// moved to `C_G(g)`; zero when `[g] ∩ H = ∅`.
pub fn induction_by_centralizers(
    f: &TateElement,
    g_frame: &Arc<TateFrame>,
    witness: &Subgroup,
) -> Result<TateElement, TateError> {
    check_witness(f, g_frame, witness)?;
    let big = &g_frame.group;
    let h_frame = f.frame();
    let mut components = Vec::with_capacity(g_frame.class_count());
    for (c, cf) in g_frame.classes.iter().enumerate() {
        let cg = cf.centralizer.group.clone();
        let mut acc = QSeries::<VirtualCharacter>::zero(&cg).with_denominator(cf.order as u64);
        for (d, hcf) in h_frame.classes.iter().enumerate() {
            let a = witness.embedding[hcf.representative];
            if big.class_of(a) != c {
                continue;
            }
            let s = big.conjugator_to_rep(a);
            let to_local: HashMap<usize, usize> = hcf
                .centralizer
                .embedding
                .iter()
                .enumerate()
                .map(|(i, &y)| {
                    let moved = big.conjugate(s, witness.embedding[y]);
                    (cf.centralizer.index_of(moved).expect("C_H(g') maps into C_G(g)"), i)
                })
                .collect();
            let members: Vec<usize> = to_local.keys().copied().collect();
            let comp = f.component(d);
            let terms: Vec<(Rational, VirtualCharacter)> = comp
                .terms()
                .map(|(e, chi)| (e.clone(), induce_from(cg.clone(), &members, |x| chi.value(to_local[&x]).clone())))
                .collect();
            let induced = QSeries::from_terms(&cg, cf.order as u64, terms, comp.known_below().clone())
                .with_low(comp.low().clone());
            acc = acc.add(&induced);
        }
        components.push(acc.truncate(&f.known_below()));
    }
    TateElement::new(g_frame.clone(), components, f.is_laurent())
}

/// `s_k F` per class: coefficients over `C_g[g^{1/k}]` with `φ` acting by
/// `e^{2πia/k}` on the old exponent-`a` coefficient, exponents divided by `k`.
pub struct RootComponents {
    pub k: usize,
    pub roots: Vec<CentralRoot>,
    pub components: Vec<QSeries<VirtualCharacter>>,
}

impl RootComponents {
    /// The rotation condition with respect to `φ`.
    pub fn validate_rotation(&self) -> RotationReport {
        for (c, (root, s)) in self.roots.iter().zip(&self.components).enumerate() {
            let grp = &root.group;
            let n = grp.element_order(root.phi);
            for (e, chi) in s.terms() {
                let k = (e * &Rational::from(n)).to_i64().expect("grid exponent");
                let phase = Cyclotomic::root_of_unity(n as u64, k);
                for &h in &grp.conjugacy().representatives {
                    if *chi.value(grp.mul(root.phi, h)) != chi.value(h).mul(&phase) {
                        let violation = RotationViolation { class: c, representative: root.phi, exponent: e.clone(), element: h };
                        return RotationReport { valid: false, violation: Some(violation) };
                    }
                }
            }
        }
        RotationReport { valid: true, violation: None }
    }
}

pub fn s_map_theta(f: &TateElement, k: usize) -> Result<RootComponents, TateError> {
    assert!(k >= 1, "root degree must be positive");
    let frame = f.frame();
    let mut roots = Vec::with_capacity(frame.class_count());
    let mut components = Vec::with_capacity(frame.class_count());
    let scale = Rational::new(1, k as i64);
    for (c, cf) in frame.classes.iter().enumerate() {
        let root = adjoin_central_root(&cf.centralizer.group, cf.rep_in_centralizer, k)?;
        let n = cf.order as i64;
        let comp = f.component(c);
        let rg = root.group.clone();
        let terms: Vec<(Rational, VirtualCharacter)> = comp
            .terms()
            .map(|(e, chi)| {
                let num = (e * &Rational::from(n)).to_i64().expect("grid exponent");
                let ext = VirtualCharacter::from_fn(rg.clone(), |x| {
                    let (y, j) = root.decode(x);
                    chi.value(y).mul(&Cyclotomic::root_of_unity((n * k as i64) as u64, num * j as i64))
                });
                (e * &scale, ext)
            })
            .collect();
        let bound: Bound = comp.known_below().scale(&scale);
        components.push(QSeries::from_terms(&rg, (n * k as i64) as u64, terms, bound).with_low(comp.low() * &scale));
        roots.push(root);
    }
    Ok(RootComponents { k, roots, components })
}
