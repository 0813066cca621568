//! JSON rendering of solver results.

use polydiff::{
    Exactness, OriginCategory, OriginLocation, ProjectionResult, SeparationReport, ToleranceConfig,
    VIOutcome, Verdict, Witness,
};
use serde_json::{json, Map, Value};

/// Finite values as numbers; infinities and NaN as the strings `"inf"`,
/// `"-inf"` and `"nan"`.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn vector(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| num(*x)).collect())
}

fn opt_vector(v: Option<&[f64]>) -> Value {
    v.map_or(Value::Null, vector)
}

pub fn tolerances(tol: &ToleranceConfig) -> Value {
    json!({
        "feas_tol": num(tol.feas_tol),
        "opt_tol": num(tol.opt_tol),
        "max_iter": tol.max_iter,
    })
}

pub fn category(c: OriginCategory) -> &'static str {
    match c {
        OriginCategory::Exterior => "exterior",
        OriginCategory::Boundary => "boundary",
        OriginCategory::Interior => "interior",
    }
}

pub fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::StronglySeparable => "strongly_separable",
        Verdict::NonStronglySeparable => "non_strongly_separable",
        Verdict::Inseparable => "inseparable",
    }
}

fn exactness(e: Exactness) -> &'static str {
    match e {
        Exactness::Exact => "exact",
        Exactness::LowerBound => "lower_bound",
    }
}

pub fn projection(p: &ProjectionResult) -> Value {
    let witness = match &p.witness {
        None => Value::Null,
        Some(Witness::ConvexWeights(w)) => json!({
            "convex_weights": w.iter().map(|(i, a)| json!([i, num(*a)])).collect::<Vec<_>>(),
        }),
        Some(Witness::Multipliers(m)) => json!({ "multipliers": vector(m) }),
        Some(Witness::Lifted { aux, multipliers }) => json!({
            "aux": vector(aux),
            "multipliers": vector(multipliers),
        }),
    };
    json!({
        "point": vector(&p.point),
        "distance": num(p.distance),
        "witness": witness,
        "iterations": p.iterations,
        "certified": p.certified,
    })
}

pub fn location(loc: &OriginLocation) -> Value {
    json!({
        "category": category(loc.category),
        "margin": num(loc.margin),
        "direction": opt_vector(loc.direction.as_deref()),
        "exactness": exactness(loc.exactness),
        "projection": projection(&loc.projection),
    })
}

pub fn separation(r: &SeparationReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("verdict".into(), json!(verdict(r.verdict)));
    m.insert("direction".into(), opt_vector(r.direction.as_deref()));
    m.insert("offset".into(), r.offset.map_or(Value::Null, num));
    m.insert("thickness".into(), num(r.thickness));
    m.insert("origin".into(), location(&r.origin_result));
    m
}

pub fn vi(r: &VIOutcome) -> Value {
    json!({
        "solvable": r.solvable,
        "witness": opt_vector(r.witness.as_deref()),
        "certificate": r.certificate.to_string(),
        "residual": num(r.residual),
        "certified": r.certified,
    })
}
