//! One function per subcommand. Each returns a JSON document; the caller
//! decides where it goes and which exit code it maps to.

use polydiff::{
    ball_minus_point, box_minus_point, classify_origin, distance, hrep_minus_hrep_lifted,
    hrep_minus_vrep, hrep_minus_vrep_raw, nearest_points, orthant_minus_point, project_difference,
    project_origin, reduce_vrep, separate as separate_sets, solve_vi_omega, solve_vi_strong,
    solve_vi_weak, vrep_minus_vrep, ConvexSet, ToleranceConfig,
};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};
use crate::format::Operand;
use crate::plot;
use crate::report;

#[derive(Debug, Clone, Copy, Default)]
pub struct DiffOptions {
    /// Drop redundant generators of a hull difference.
    pub reduce: bool,
    /// Keep one shifted row block per subtrahend generator.
    pub raw: bool,
    /// Also build the planar outline of the result.
    pub plot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ViForm {
    Strong,
    Omega,
    Weak,
    All,
}

pub struct DiffOutput {
    pub set: Operand,
    pub plot: Option<Value>,
}

fn operands(ops: &[&Operand], tol: &ToleranceConfig) -> CliResult<Vec<ConvexSet>> {
    if let Some(d) = ops.first().map(|o| o.dim()) {
        if let Some(bad) = ops.iter().find(|o| o.dim() != d) {
            return Err(CliError::Parse(format!(
                "dimension mismatch: {d} and {}",
                bad.dim()
            )));
        }
    }
    for op in ops {
        op.ensure_nonempty(tol)?;
    }
    ops.iter().map(|o| o.to_convex()).collect()
}

/// Pairs that have to be plain vertex or half-space sets.
fn plain_pair(
    a: &Operand,
    b: &Operand,
    tol: &ToleranceConfig,
) -> CliResult<(ConvexSet, ConvexSet)> {
    for op in [a, b] {
        if matches!(op, Operand::Lifted(_)) {
            return Err(CliError::Unsupported(
                "a lifted difference cannot be an operand".into(),
            ));
        }
    }
    let mut sets = operands(&[a, b], tol)?;
    let b = sets.pop().expect("two operands");
    let a = sets.pop().expect("two operands");
    Ok((a, b))
}

fn envelope(
    command: &str,
    body: Map<String, Value>,
    certified: bool,
    tol: &ToleranceConfig,
) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.extend(body);
    m.insert("certified".into(), json!(certified));
    m.insert("tolerances".into(), report::tolerances(tol));
    m.insert("seed".into(), json!(tol.seed));
    Value::Object(m)
}

pub fn diff(
    a: &Operand,
    b: &Operand,
    opts: DiffOptions,
    tol: &ToleranceConfig,
) -> CliResult<DiffOutput> {
    operands_checked(a, b, tol)?;
    let single = match b {
        Operand::V(m) if m.len() == 1 && !opts.raw => Some(m.vertices()[0].clone()),
        _ => None,
    };
    let set = match (a, b) {
        (Operand::V(l), Operand::V(m)) => {
            let d = vrep_minus_vrep(l, m)?;
            Operand::V(if opts.reduce { reduce_vrep(&d, tol) } else { d })
        }
        (Operand::Box(bx), Operand::V(_)) if single.is_some() => {
            Operand::Box(box_minus_point(bx, single.as_ref().unwrap())?)
        }
        (Operand::Ball(ball), Operand::V(_)) if single.is_some() => {
            Operand::Ball(ball_minus_point(ball, single.as_ref().unwrap())?)
        }
        (Operand::Orthant(n), Operand::V(_)) if single.is_some() => {
            Operand::H(orthant_minus_point(*n, single.as_ref().unwrap())?)
        }
        (Operand::H(_) | Operand::Box(_) | Operand::Orthant(_), Operand::V(m)) => {
            let p = a.as_hrep().expect("polyhedral operand");
            Operand::H(if opts.raw {
                hrep_minus_vrep_raw(&p, m, tol)?
            } else {
                hrep_minus_vrep(&p, m, tol)?
            })
        }
        (
            Operand::H(_) | Operand::Box(_) | Operand::Orthant(_),
            Operand::H(_) | Operand::Box(_) | Operand::Orthant(_),
        ) => {
            let p = a.as_hrep().expect("polyhedral operand");
            let q = b.as_hrep().expect("polyhedral operand");
            Operand::Lifted(hrep_minus_hrep_lifted(&p, &q, tol)?)
        }
        _ => {
            return Err(CliError::Unsupported(format!(
                "no difference constructor for {} minus {}",
                a.kind(),
                b.kind()
            )))
        }
    };
    let plot = if opts.plot {
        let (points, approximate) = match &set {
            Operand::Lifted(_) => (plot::difference_outline(a, b, tol)?, false),
            other => (
                plot::outline(other, tol)?,
                matches!(other, Operand::Ball(_)),
            ),
        };
        Some(plot::document(&points, approximate, tol))
    } else {
        None
    };
    Ok(DiffOutput { set, plot })
}

fn operands_checked(a: &Operand, b: &Operand, tol: &ToleranceConfig) -> CliResult<()> {
    if a.dim() != b.dim() {
        return Err(CliError::Parse(format!(
            "dimension mismatch: {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    if matches!(a, Operand::Lifted(_)) || matches!(b, Operand::Lifted(_)) {
        return Err(CliError::Unsupported(
            "a lifted difference cannot be an operand".into(),
        ));
    }
    a.ensure_nonempty(tol)?;
    b.ensure_nonempty(tol)
}

pub fn distance_report(a: &Operand, b: &Operand, tol: &ToleranceConfig) -> CliResult<Value> {
    let (sa, sb) = plain_pair(a, b, tol)?;
    let p = project_difference(&sa, &sb, tol)?;
    let d = distance(&sa, &sb, tol)?;
    let (x, y) = nearest_points(&sa, &sb, tol)?;
    let mut body = Map::new();
    body.insert("distance".into(), report::num(d));
    body.insert(
        "nearest_points".into(),
        json!({ "a": report::vector(&x), "b": report::vector(&y) }),
    );
    body.insert("difference_projection".into(), report::projection(&p));
    Ok(envelope("distance", body, p.certified, tol))
}

pub fn separate(a: &Operand, b: &Operand, tol: &ToleranceConfig) -> CliResult<Value> {
    let (sa, sb) = plain_pair(a, b, tol)?;
    let r = separate_sets(&sa, &sb, tol)?;
    let certified = r.origin_result.projection.certified;
    Ok(envelope("separate", report::separation(&r), certified, tol))
}

pub fn classify(s: &Operand, tol: &ToleranceConfig) -> CliResult<Value> {
    let set = operands(&[s], tol)?.pop().expect("one operand");
    let loc = classify_origin(&set, tol)?;
    let certified = loc.projection.certified;
    let body = match report::location(&loc) {
        Value::Object(m) => m,
        _ => unreachable!("location renders as an object"),
    };
    Ok(envelope("classify", body, certified, tol))
}

pub fn project(a: &Operand, b: Option<&Operand>, tol: &ToleranceConfig) -> CliResult<Value> {
    let p = match b {
        None => project_origin(&operands(&[a], tol)?.pop().expect("one operand"), tol)?,
        Some(b) => {
            let (sa, sb) = plain_pair(a, b, tol)?;
            project_difference(&sa, &sb, tol)?
        }
    };
    let mut body = Map::new();
    body.insert("projection".into(), report::projection(&p));
    Ok(envelope("project", body, p.certified, tol))
}

pub fn vi(
    a: &Operand,
    b: &Operand,
    form: ViForm,
    delta: f64,
    tol: &ToleranceConfig,
) -> CliResult<Value> {
    let (sa, sb) = plain_pair(a, b, tol)?;
    let mut body = Map::new();
    let mut certified = true;
    if matches!(form, ViForm::Strong | ViForm::All) {
        let r = solve_vi_strong(&sa, &sb, delta, tol)?;
        certified &= r.certified;
        body.insert("delta".into(), report::num(delta));
        body.insert("strong".into(), report::vi(&r));
    }
    if matches!(form, ViForm::Omega | ViForm::All) {
        let r = solve_vi_omega(&sa, &sb, tol)?;
        certified &= r.certified;
        body.insert("omega".into(), report::vi(&r));
    }
    if matches!(form, ViForm::Weak | ViForm::All) {
        let r = solve_vi_weak(&sa, &sb, tol)?;
        certified &= r.certified;
        body.insert("weak".into(), report::vi(&r));
    }
    Ok(envelope("vi", body, certified, tol))
}

/// Report written when a solver gives up.
pub fn failure(command: &str, reason: &str, best: Option<Value>, tol: &ToleranceConfig) -> Value {
    let mut body = Map::new();
    body.insert("error".into(), json!(reason));
    body.insert("best".into(), best.unwrap_or(Value::Null));
    envelope(command, body, false, tol)
}
