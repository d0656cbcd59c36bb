use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tatek::charring::{adams, atiyah_power_wreath, exterior_powers, symmetric_powers, VirtualCharacter};
use tatek::classfun::{transfer, InertiaTower, NClassFunction};
use tatek::exactnum::{Bound, Cyclotomic, Rational};
use tatek::groupoids::{equivalence_check, equivalence_e_k, equivalence_q, point_groupoid, FinGroupoid, GroupoidFunctor};
use tatek::groups::{wreath_product, FinGroup, Subgroup, WreathElement};
use tatek::moonshine::{j_oracle, replicability_check, two_variable_check, McKayThompson, Verdict};
use tatek::tate::{
    adams_tate, beta, first_tseries_difference, hecke, induction_by_centralizers, induction_tate, sample_element,
    symmetric_tate, symmetric_tate_hecke, TateElement, TateFrame,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn frame_of(g: FinGroup) -> Arc<TateFrame> {
    TateFrame::new(Arc::new(g))
}

fn sample(frame: &Arc<TateFrame>, q_bound: u32, rng: &mut ChaCha8Rng) -> TateElement {
    sample_element(frame, q_bound, &mut |lo, hi| rng.gen_range(lo..=hi))
}

fn small_groups() -> Vec<(&'static str, FinGroup)> {
    vec![
        ("trivial", FinGroup::trivial()),
        ("C2", FinGroup::cyclic(2)),
        ("C3", FinGroup::cyclic(3)),
        ("S3", FinGroup::symmetric(3)),
    ]
}

fn int(n: i64) -> Cyclotomic {
    Cyclotomic::from_int(n)
}

/// Coefficients of `Π_{k ≤ n} (1 − t^k)^{−d}` through `t^n`.
fn euler_product_oracle(d: usize, n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    for k in 1..=n {
        for _ in 0..d {
            for i in k..=n {
                c[i] += c[i - k];
            }
        }
    }
    c
}

fn generating_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, g) in small_groups() {
        let frame = frame_of(g);
        for i in 0..5 {
            let f = sample(&frame, 3, &mut rng);
            let product = symmetric_tate(&f, 4).map_err(|e| e.to_string())?;
            let by_hecke = symmetric_tate_hecke(&f, 4).map_err(|e| e.to_string())?;
            if let Some((n, class, e)) = first_tseries_difference(&product, &by_hecke) {
                return Err(format!("{name} sample {i}: t^{n}, class {class}, q^{e}"));
            }
        }
    }
    Ok(())
}

fn witten_shape() -> Outcome {
    let frame = frame_of(FinGroup::trivial());
    let zero = Rational::zero();
    for d in 1..=3usize {
        let f = TateElement::constant(&frame, &Rational::from(d));
        let s = symmetric_tate(&f, 8).map_err(|e| e.to_string())?;
        let oracle = euler_product_oracle(d, 8);
        for (n, &expected) in oracle.iter().enumerate() {
            let comp = s.coefficient(n).component(0);
            ensure!(comp.terms().all(|(e, _)| e.is_zero()), "d = {d}, t^{n}: nonconstant q-terms");
            let got = comp.coefficient(&zero).map(|chi| chi.value(0).clone());
            ensure!(got == Some(int(expected)), "d = {d}, t^{n}: got {got:?}, expected {expected}");
        }
        if d == 1 {
            ensure!(oracle == [1, 1, 2, 3, 5, 7, 11, 15, 22], "partition numbers: {oracle:?}");
        }
    }
    Ok(())
}

fn scalar_element(frame: &Arc<TateFrame>, terms: impl IntoIterator<Item = (i64, i64)>) -> TateElement {
    let group = frame.classes[0].centralizer.group.clone();
    let terms = terms
        .into_iter()
        .map(|(e, c)| (0, Rational::from(e), VirtualCharacter::constant(group.clone(), int(c))));
    TateElement::from_terms(frame.clone(), terms, Bound::Infinite, false).expect("trivial-group element")
}

fn beta_example() -> Outcome {
    let frame = frame_of(FinGroup::trivial());
    let f = scalar_element(&frame, (1..=12).map(|n| (n, n)));
    for k in 2..=4i64 {
        let got = beta(&f, k as usize).map_err(|e| e.to_string())?;
        let expected = scalar_element(&frame, (1..=12 / k).map(|m| (m, k * m)));
        ensure!(got == expected, "k = {k}: β_k differs from Σ km q^m");
    }
    Ok(())
}

/// `j − 744` through `q^n` via σ₃ and the Euler product, in `i128`.
fn j_integer_oracle(n: usize) -> Vec<i128> {
    let len = n + 2;
    let sigma3 = |m: usize| (1..=m).filter(|d| m.is_multiple_of(*d)).map(|d| (d as i128).pow(3)).sum::<i128>();
    let mut e4 = vec![0i128; len];
    e4[0] = 1;
    for (m, c) in e4.iter_mut().enumerate().skip(1) {
        *c = 240 * sigma3(m);
    }
    let mul = |a: &[i128], b: &[i128]| {
        let mut out = vec![0i128; len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let e4_cubed = mul(&mul(&e4, &e4), &e4);
    let mut eta24 = vec![0i128; len];
    eta24[0] = 1;
    for k in 1..len {
        for _ in 0..24 {
            for i in (k..len).rev() {
                eta24[i] -= eta24[i - k];
            }
        }
    }
    let mut quotient = vec![0i128; len];
    for i in 0..len {
        let acc: i128 = (1..=i).map(|j| eta24[j] * quotient[i - j]).sum();
        quotient[i] = e4_cubed[i] - acc;
    }
    quotient[1] -= 744;
    quotient
}

fn replicability_of_j() -> Outcome {
    let j = j_oracle(40).map_err(|e| e.to_string())?;
    let a1 = j.coefficient(&Rational::one());
    ensure!(a1 == Some(Rational::from(196884)), "a₁ = {a1:?}");
    for (i, &c) in j_integer_oracle(10).iter().enumerate() {
        let e = Rational::from(i as i64 - 1);
        ensure!(j.coefficient(&e) == Some(Rational::from(c as i64)), "coefficient of q^{e} differs from the oracle");
    }
    let f = McKayThompson::from_scalar(&j).map_err(|e| e.to_string())?;
    let report = replicability_check(&f, 3, 8).map_err(|e| e.to_string())?;
    for m in report.per_m.iter().filter(|p| p.m >= 2) {
        ensure!(m.faber_vs_hecke == Verdict::Pass, "m = {}: {:?}", m.m, m.first_mismatch);
    }
    let two = two_variable_check(&f, 4, 8).map_err(|e| e.to_string())?;
    ensure!(two.verdict == Verdict::Pass, "two-variable identity: {:?}", two.first_mismatch);
    Ok(())
}

/// `G ≀ Sₙ` as permutations of `n` copies of the regular `G`-set.
fn wreath_as_permutations(g: &FinGroup, n: usize) -> Vec<Vec<usize>> {
    let order = g.order();
    let mut elements = Vec::new();
    for sigma in tatek::groups::perm::all_permutations(n) {
        let mut entries = vec![0usize; n];
        loop {
            let mut p = vec![0usize; n * order];
            for i in 0..n {
                for x in 0..order {
                    p[i * order + x] = sigma[i] * order + g.mul(entries[i], x);
                }
            }
            elements.push(p);
            let mut i = 0;
            while i < n && entries[i] + 1 == order {
                entries[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            entries[i] += 1;
        }
    }
    elements
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

/// Conjugacy classes of `G ≀ Sₙ`, optionally only those whose block
/// permutation is an `n`-cycle.
fn brute_force_wreath_classes(g: &FinGroup, n: usize, long_cycles_only: bool) -> usize {
    let elements = wreath_as_permutations(g, n);
    let order = g.order().max(1);
    let is_long_cycle = |p: &[usize]| {
        let (mut block, mut steps) = (0usize, 0usize);
        loop {
            block = p[block * order] / order;
            steps += 1;
            if block == 0 {
                return steps == n;
            }
        }
    };
    let inverses: Vec<Vec<usize>> = elements.iter().map(|w| invert(w)).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut classes = 0;
    for x in &elements {
        if seen.contains(x) || (long_cycles_only && n > 0 && !is_long_cycle(x)) {
            continue;
        }
        classes += 1;
        for (w, wi) in elements.iter().zip(&inverses) {
            seen.insert(compose(w, &compose(x, wi)));
        }
    }
    classes
}

fn groupoid_equivalences() -> Outcome {
    let groups = [
        ("C2", FinGroup::cyclic(2)),
        ("C3", FinGroup::cyclic(3)),
        ("C4", FinGroup::cyclic(4)),
        ("S3", FinGroup::symmetric(3)),
    ];
    for (name, g) in groups {
        let g = Arc::new(g);
        for k in 1..=3 {
            let pt = point_groupoid(g.clone()).map_err(|e| e.to_string())?.groupoid;
            let eq = equivalence_e_k(pt, k).map_err(|e| e.to_string())?;
            let report = equivalence_check(&eq.e);
            ensure!(report.is_equivalence, "{name}, E_{k}: {:?}", report.failure);
            let expected = brute_force_wreath_classes(&g, k, true);
            let (phi, root) = (eq.phi.groupoid.iso_class_count(), eq.root.groupoid.iso_class_count());
            ensure!(phi == expected && root == expected, "{name}, k = {k}: Φ_k {phi}, root {root}, brute force {expected}");
        }
    }
    let c2 = Arc::new(FinGroup::cyclic(2));
    let eq = equivalence_q(point_groupoid(c2.clone()).map_err(|e| e.to_string())?.groupoid, 3).map_err(|e| e.to_string())?;
    let report = equivalence_check(&eq.q);
    ensure!(report.is_equivalence, "Q on pt//C2: {:?}", report.failure);
    let expected: usize = (0..=3).map(|n| brute_force_wreath_classes(&c2, n, false)).sum();
    let (source, target) = (eq.source.groupoid.iso_class_count(), eq.lambda.groupoid.iso_class_count());
    ensure!(source == expected && target == expected, "Q: source {source}, target {target}, brute force {expected}");
    Ok(())
}

fn brute_force_class_count(g: &FinGroup) -> usize {
    let mut seen = vec![false; g.order()];
    let mut classes = 0;
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        classes += 1;
        for s in g.elements() {
            seen[g.mul(g.mul(s, x), g.inv(s))] = true;
        }
    }
    classes
}

fn induction_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let s3 = frame_of(FinGroup::symmetric(3));
    let grp = &s3.group;
    for order in [2, 3] {
        let x = grp.elements().find(|&x| grp.element_order(x) == order).expect("element of that order");
        let members: Vec<usize> = (0..order).map(|i| grp.pow(x, i as i64)).collect();
        let sub = Subgroup::from_elements(grp, &members).map_err(|e| e.to_string())?;
        let h = TateFrame::new(sub.group.clone());
        for i in 0..4 {
            let f = sample(&h, 2, &mut rng);
            let by_characters = induction_tate(&f, &s3, &sub).map_err(|e| e.to_string())?;
            let by_centralizers = induction_by_centralizers(&f, &s3, &sub).map_err(|e| e.to_string())?;
            ensure!(by_characters == by_centralizers, "C{order} ⊂ S3, sample {i}: induction forms differ");
        }
    }
    for (name, g, expected) in [("S3", FinGroup::symmetric(3), 3), ("C4", FinGroup::cyclic(4), 4)] {
        let classes = brute_force_class_count(&g);
        ensure!(classes == expected, "{name}: {classes} conjugacy classes");
        let x = Arc::new(FinGroupoid::point(Arc::new(g)));
        let eps = GroupoidFunctor::to_point(x.clone());
        let source = Arc::new(InertiaTower::new(x, 2).map_err(|e| e.to_string())?);
        let target = Arc::new(InertiaTower::new(eps.target.clone(), 2).map_err(|e| e.to_string())?);
        let tr = transfer(&NClassFunction::constant(source, int(1)), &eps, target);
        ensure!(tr.function.values == vec![int(classes as i64)], "{name}: transfer gives {:?}", tr.function.values);
    }
    Ok(())
}

fn rotation_closure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let frames: Vec<(&str, Arc<TateFrame>)> = small_groups().into_iter().map(|(n, g)| (n, frame_of(g))).collect();
    let s3 = frames[3].1.clone();
    let grp = s3.group.clone();
    let involution = grp.elements().find(|&x| grp.element_order(x) == 2).expect("transposition");
    let sub = Subgroup::from_elements(&grp, &[0, involution]).map_err(|e| e.to_string())?;
    let c2_in_s3 = TateFrame::new(sub.group.clone());
    for trial in 0..200 {
        let op = rng.gen_range(0..5);
        let (name, frame) = if op == 4 {
            ("C2 ⊂ S3", &c2_in_s3)
        } else {
            let (name, frame) = &frames[rng.gen_range(0..4)];
            (*name, frame)
        };
        let f = sample(frame, 2, &mut rng);
        let k = rng.gen_range(1..=3usize);
        let outputs: Vec<TateElement> = match op {
            0 => vec![beta(&f, k).map_err(|e| e.to_string())?],
            1 => vec![adams_tate(&f, k)],
            2 => vec![hecke(&f, k).map_err(|e| e.to_string())?],
            3 => symmetric_tate(&f, k).map_err(|e| e.to_string())?.coefficients().to_vec(),
            _ => vec![induction_tate(&f, &s3, &sub).map_err(|e| e.to_string())?],
        };
        for out in outputs {
            let report = out.validate_rotation();
            ensure!(report.valid, "trial {trial}, {name}, operator {op}, k = {k}: {:?}", report.violation);
        }
    }
    Ok(())
}

fn lambda_ring_sanity() -> Outcome {
    let s3 = Arc::new(FinGroup::symmetric(3));
    let trivial = VirtualCharacter::trivial(s3.clone());
    let sign = VirtualCharacter::sign(s3.clone()).ok_or("S3 has a permutation representation")?;
    let std = VirtualCharacter::permutation(s3.clone()).ok_or("S3 has a permutation representation")?.sub(&trivial).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..10 {
        let mut chi = VirtualCharacter::zero(s3.clone());
        for irr in [&trivial, &sign, &std] {
            chi = chi.add(&irr.scale(&int(rng.gen_range(-2..=2)))).map_err(|e| e.to_string())?;
        }
        let s = symmetric_powers(&chi, 6).map_err(|e| e.to_string())?;
        let l = exterior_powers(&chi, 6).map_err(|e| e.to_string())?;
        for n in 0..=6 {
            let mut acc = VirtualCharacter::zero(s3.clone());
            for j in 0..=n {
                let term = s[n - j].mul(&l[j]).map_err(|e| e.to_string())?;
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) }.map_err(|e| e.to_string())?;
            }
            let expected = if n == 0 { trivial.clone() } else { VirtualCharacter::zero(s3.clone()) };
            ensure!(acc == expected, "trial {trial}: S_t·Λ_{{−t}} has a nonzero t^{n} coefficient");
        }
        for g in s3.elements() {
            let square = chi.value(g).mul(chi.value(g)).add(chi.value(s3.pow(g, 2)));
            ensure!(s[2].value(g) == &square.scale(&Rational::new(1, 2)), "trial {trial}: S² at element {g}");
        }
        for p in 1..=4 {
            for q in 1..=4 {
                ensure!(adams(&adams(&chi, p), q) == adams(&chi, p * q), "trial {trial}: ψ_{p}ψ_{q} ≠ ψ_{}", p * q);
            }
        }
    }
    let wreath = wreath_product(s3.clone(), 2).map_err(|e| e.to_string())?;
    let power = atiyah_power_wreath(&std, &wreath).map_err(|e| e.to_string())?;
    for a in s3.elements() {
        for b in s3.elements() {
            let w = wreath.index_of(&WreathElement { perm: vec![0, 1], entries: vec![a, b] });
            ensure!(power.value(w) == &std.value(a).mul(std.value(b)), "P₂(std) at ({a}, {b})");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("generating identity: product and Hecke pipelines agree", generating_identity),
        ("Witten-class shape on the trivial group", witten_shape),
        ("β_k on Σ n qⁿ", beta_example),
        ("replicability of j − 744", replicability_of_j),
        ("groupoid equivalences E_k and Q", groupoid_equivalences),
        ("induction and transfer coherence", induction_coherence),
        ("rotation condition is preserved", rotation_closure),
        ("λ-ring sanity", lambda_ring_sanity),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS criterion {}: {name} ({elapsed:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name} ({elapsed:.2}s): {why}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
