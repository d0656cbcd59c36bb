use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};
use thiserror::Error;

use tatek::exactnum::{Bound, Rational};
use tatek::groupoids::{
    equivalence_check, equivalence_e_k, equivalence_q, iterated_inertia, point_groupoid, GroupoidError,
    GroupoidFunctor,
};
use tatek::groups::{FinGroup, GroupError, GroupSpec, Subgroup};
use tatek::moonshine::{faber, j_oracle, replicability_check, McKayThompson, MoonshineError};
use tatek::qgraded::TSeries;
use tatek::tate::{
    beta, first_tseries_difference, hecke, induction_tate, symmetric_tate, symmetric_tate_hecke, SymmetricVia,
    TateElement, TateError, TateFile, TateFrame,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("{0}")]
    Input(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Tate(#[from] TateError),
    #[error(transparent)]
    Moonshine(#[from] MoonshineError),
}

/// A JSON body and whether every check it reports passed.
pub struct Outcome {
    pub body: Value,
    pub verified: bool,
}

impl Outcome {
    fn ok(body: Value) -> Outcome {
        Outcome { body, verified: true }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: shown, source })
}

fn load_group(path: &Path) -> Result<Arc<FinGroup>, CliError> {
    let spec: GroupSpec = read_json(path)?;
    Ok(Arc::new(spec.build()?))
}

fn load_element(path: &Path) -> Result<TateElement, CliError> {
    let file: TateFile = read_json(path)?;
    Ok(TateElement::load(&file)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn element_value(f: &TateElement) -> Result<Value, CliError> {
    Ok(to_value(&f.to_file()?))
}

fn require_bound(what: &str, available: &Bound, needed: &Rational) -> Result<(), CliError> {
    if *available >= Bound::Finite(needed.clone()) {
        Ok(())
    } else {
        Err(CliError::Precision(format!("{what} is known below q^{available}, need q^{needed}")))
    }
}

pub fn group_info(path: &Path) -> Result<Outcome, CliError> {
    let g = load_group(path)?;
    let conj = g.conjugacy();
    let classes: Vec<Value> = conj
        .representatives
        .iter()
        .enumerate()
        .map(|(c, &r)| {
            json!({
                "representative": r,
                "size": conj.classes[c].len(),
                "element_order": g.element_order(r),
                "centralizer_order": conj.centralizers[c].order(),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "name": g.name(),
        "order": g.order(),
        "exponent": g.exponent(),
        "abelian": g.is_abelian(),
        "class_count": g.class_count(),
        "commuting_pairs": g.commuting_pairs(),
        "classes": classes,
    })))
}

pub fn inertia(path: &Path, n: usize) -> Result<Outcome, CliError> {
    let g = load_group(path)?;
    let pt = point_groupoid(g)?.groupoid;
    let levels: Vec<Value> = iterated_inertia(pt, n)?
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let x = &level.groupoid;
            json!({
                "level": i + 1,
                "objects": x.object_count(),
                "iso_classes": x.iso_class_count(),
                "automorphism_orders": x.aut_orders(),
                "cardinality": x.cardinality(),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({ "n": n, "levels": levels })))
}

pub fn verify_ek(path: &Path, k: usize) -> Result<Outcome, CliError> {
    if k == 0 {
        return Err(CliError::Input("k must be positive".into()));
    }
    let g = load_group(path)?;
    let eq = equivalence_e_k(point_groupoid(g)?.groupoid, k)?;
    let e = equivalence_check(&eq.e);
    let f = equivalence_check(&eq.f);
    let intertwines = eq.e.intertwines(&eq.phi_center, &eq.root_center);
    let round_trip = eq.f.then(&eq.e).same_as(&GroupoidFunctor::identity(eq.root.groupoid.clone()));
    let verified = e.is_equivalence && f.is_equivalence && intertwines && round_trip;
    Ok(Outcome {
        body: json!({
            "k": k,
            "phi_classes": eq.phi.groupoid.iso_class_count(),
            "root_classes": eq.root.groupoid.iso_class_count(),
            "e": to_value(&e),
            "f": to_value(&f),
            "intertwines_centers": intertwines,
            "f_then_e_is_identity": round_trip,
            "verified": verified,
        }),
        verified,
    })
}

pub fn verify_q(path: &Path, n_max: usize) -> Result<Outcome, CliError> {
    let g = load_group(path)?;
    let eq = equivalence_q(point_groupoid(g)?.groupoid, n_max)?;
    let report = equivalence_check(&eq.q);
    let intertwines = eq.q.intertwines(&eq.source_center, &eq.lambda.xi(1));
    let verified = report.is_equivalence && intertwines;
    Ok(Outcome {
        body: json!({
            "n_max": n_max,
            "source_classes": eq.source.groupoid.iso_class_count(),
            "target_classes": eq.lambda.groupoid.iso_class_count(),
            "q": to_value(&report),
            "intertwines_centers": intertwines,
            "verified": verified,
        }),
        verified,
    })
}

pub fn tate_validate(path: &Path) -> Result<Outcome, CliError> {
    let f = load_element(path)?;
    let report = f.validate_rotation();
    Ok(Outcome { verified: report.valid, body: to_value(&report) })
}

pub fn tate_beta(path: &Path, k: usize, order: Option<usize>) -> Result<Outcome, CliError> {
    if k == 0 {
        return Err(CliError::Input("k must be positive".into()));
    }
    let f = load_element(path)?;
    let mut out = beta(&f, k)?;
    if let Some(q) = order {
        let needed = Rational::from(q);
        require_bound("β_k of the input", &out.known_below(), &needed)?;
        out = out.truncate(&Bound::Finite(needed));
    }
    Ok(Outcome::ok(json!({ "k": k, "result": element_value(&out)? })))
}

pub fn tate_hecke(path: &Path, m: usize, order: usize) -> Result<Outcome, CliError> {
    if m == 0 {
        return Err(CliError::Input("m must be positive".into()));
    }
    let f = load_element(path)?;
    let needed = Rational::from(order);
    require_bound("the input", &f.known_below(), &(&needed * &Rational::from(m)))?;
    let out = hecke(&f, m)?;
    require_bound("T_m of the input", &out.known_below(), &needed)?;
    let out = out.truncate(&Bound::Finite(needed));
    Ok(Outcome::ok(json!({ "m": m, "order": order, "result": element_value(&out)? })))
}

fn tseries_value(s: &TSeries<TateElement>, bound: &Bound) -> Result<Value, CliError> {
    let coefficients = s
        .coefficients()
        .iter()
        .map(|c| element_value(&c.truncate(bound)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Value::Array(coefficients))
}

fn check_tseries(what: &str, s: &TSeries<TateElement>, needed: &Rational) -> Result<(), CliError> {
    for (n, c) in s.coefficients().iter().enumerate() {
        require_bound(&format!("{what}, t^{n}"), &c.known_below(), needed)?;
    }
    Ok(())
}

pub fn tate_sympow(path: &Path, t_order: usize, q_order: usize, via: SymmetricVia) -> Result<Outcome, CliError> {
    let f = load_element(path)?;
    let needed = Rational::from(q_order);
    require_bound("the input", &f.known_below(), &(&needed * &Rational::from(t_order.max(1))))?;
    let bound = Bound::Finite(needed.clone());
    let mut body = Map::new();
    body.insert("t_order".into(), json!(t_order));
    body.insert("q_order".into(), json!(q_order));
    let mut verified = true;
    let series = match via {
        SymmetricVia::Product => {
            body.insert("via".into(), json!("product"));
            symmetric_tate(&f, t_order)?
        }
        SymmetricVia::Hecke => {
            body.insert("via".into(), json!("hecke"));
            symmetric_tate_hecke(&f, t_order)?
        }
        SymmetricVia::Both => {
            body.insert("via".into(), json!("both"));
            let product = symmetric_tate(&f, t_order)?;
            let by_hecke = symmetric_tate_hecke(&f, t_order)?;
            check_tseries("the Hecke pipeline", &by_hecke, &needed)?;
            let difference = first_tseries_difference(&product, &by_hecke);
            verified = difference.is_none();
            body.insert("match".into(), json!(verified));
            if let Some((n, class, exponent)) = difference {
                body.insert("first_difference".into(), json!({ "t_degree": n, "class": class, "exponent": exponent }));
            }
            product
        }
    };
    check_tseries("the symmetric power", &series, &needed)?;
    body.insert("coefficients".into(), tseries_value(&series, &bound)?);
    Ok(Outcome { body: Value::Object(body), verified })
}

pub fn tate_induce(element: &Path, sub: &Path, amb: &Path) -> Result<Outcome, CliError> {
    let file: TateFile = read_json(element)?;
    let h = load_group(sub)?;
    let g = load_group(amb)?;
    let element_group = file.group.build()?;
    let same_points = match (element_group.perm_rep(), h.perm_rep()) {
        (Some(a), Some(b)) => a.degree == b.degree && a.images == b.images,
        _ => false,
    };
    if element_group != *h || !same_points {
        return Err(CliError::Input("the element's group differs from the subgroup file".into()));
    }
    let witness = Subgroup::from_perm_groups(&g, &h)?;
    let f = TateElement::from_file(&file, &TateFrame::new(witness.group.clone()))?;
    let out = induction_tate(&f, &TateFrame::new(g), &witness)?;
    Ok(Outcome::ok(json!({ "result": element_value(&out)? })))
}

pub fn moonshine_j(order: usize) -> Result<Outcome, CliError> {
    let j = j_oracle(order)?;
    let mut terms = Map::new();
    for (e, c) in j.terms() {
        terms.insert(e.to_string(), to_value(c));
    }
    Ok(Outcome::ok(json!({ "order": order, "known_below": j.known_below(), "terms": terms })))
}

fn load_thompson(path: &Path) -> Result<McKayThompson, CliError> {
    Ok(McKayThompson::new(load_element(path)?)?)
}

pub fn moonshine_faber(path: &Path, m_max: usize) -> Result<Outcome, CliError> {
    let f = load_thompson(path)?;
    let series = f.thompson(f.base().group().identity())?;
    let polys = faber(&series, m_max)?;
    let polynomials: Vec<Value> = polys
        .iter()
        .enumerate()
        .map(|(i, p)| json!({ "m": i + 1, "coefficients": to_value(&p.coefficients()) }))
        .collect();
    Ok(Outcome::ok(json!({ "m_max": m_max, "polynomials": polynomials })))
}

pub fn moonshine_replicable(path: &Path, m_max: usize, q_order: usize) -> Result<Outcome, CliError> {
    let f = load_thompson(path)?;
    let report = replicability_check(&f, m_max, q_order)?;
    Ok(Outcome { verified: report.replicable, body: to_value(&report) })
}
