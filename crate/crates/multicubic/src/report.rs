//! Deterministic report serialization: the JSON envelope shared by every
//! command and the CSV export of stabilization tables.
//!
//! Exact-mode numerics are emitted as rational strings; key order is fixed
//! by insertion order so identical requests produce identical bytes.

use serde_json::{json, Map, Value};

use crate::combinatorics::IdentityCheck;
use crate::equation::{Remark21Demo, ResidualReport, Sample, Verdict};
use crate::error::Result;
use crate::point::Point;
use crate::scalar::Scalar;
use crate::stability::{
    DecayCheck, DecayVerdict, HyperVerdict, PointRow, StabilizationReport, UniquenessResult,
};

pub fn envelope(command: &str, request: Value, payload: Value) -> Value {
    let mut m = Map::new();
    m.insert("tool".into(), json!("multicubic"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("request".into(), request);
    m.insert("payload".into(), payload);
    Value::Object(m)
}

pub fn scalars_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn sample_json<S: Scalar>(s: &Sample<S>) -> Value {
    json!({ "x1": s.x1.to_json(), "x2": s.x2.to_json() })
}

pub fn identity_row_json(n: usize, label: &str, check: &IdentityCheck) -> Value {
    json!({
        "n": n,
        "identity": label,
        "computed": check.computed.to_string(),
        "expected": check.expected.to_string(),
        "equal": check.equal,
    })
}

pub fn residual_report_json<S: Scalar>(r: &ResidualReport<S>) -> Value {
    json!({
        "samples": r.samples,
        "maxResidual": r.max_residual_norm.to_json(),
        "worstSample": r.worst_sample.as_ref().map(sample_json),
    })
}

pub fn verdict_json<S: Scalar>(v: &Verdict<S>) -> Value {
    let mut m = Map::new();
    m.insert("verdict".into(), json!(v.name()));
    match v {
        Verdict::MultiCubicOnGrid => {}
        Verdict::EquationFails {
            sample,
            residual_norm,
        } => {
            m.insert("sample".into(), sample_json(sample));
            m.insert("residualNorm".into(), residual_norm.to_json());
        }
        Verdict::PowerConditionFails {
            variable,
            point,
            deviation,
        } => {
            m.insert("variable".into(), json!(variable));
            m.insert("point".into(), point.to_json());
            m.insert("deviation".into(), deviation.to_json());
        }
        Verdict::JunKimFails {
            variable,
            point,
            residual_norm,
        } => {
            m.insert("variable".into(), json!(variable));
            m.insert("point".into(), point.to_json());
            m.insert("residualNorm".into(), residual_norm.to_json());
        }
    }
    Value::Object(m)
}

fn point_row_json<S: Scalar>(row: &PointRow<S>) -> Value {
    json!({
        "x": row.x.to_json(),
        "f": scalars_json(&row.f_x),
        "C": scalars_json(&row.c_x),
        "phiSeries": row.phi_series.to_json(),
        "phiPaper": row.phi_paper.as_ref().map(Scalar::to_json),
        "error": row.error.to_json(),
        "boundOK": row.bound_ok,
        "converged": row.converged,
    })
}

pub fn stabilization_json<S: Scalar>(r: &StabilizationReport<S>) -> Value {
    json!({
        "beta": r.beta,
        "iterations": r.iterations,
        "hypothesisCertified": r.hypothesis_certified,
        "hypothesisCounterexample": r.hypothesis_counterexample.as_ref().map(sample_json),
        "hyperstabilityPath": r.hyperstability_path,
        "rows": r.rows.iter().map(point_row_json).collect::<Vec<_>>(),
        "allBoundsOK": r.all_bounds_ok,
        "allConverged": r.all_converged,
        "recoveredCoefficient": r.recovered_coefficient.as_ref().map(|c| scalars_json(c)),
    })
}

pub fn decay_json<S: Scalar>(c: &DecayCheck<S>) -> Value {
    let mut m = Map::new();
    match &c.verdict {
        DecayVerdict::Holds => {
            m.insert("verdict".into(), json!("Holds"));
        }
        DecayVerdict::HypothesisFails { level, sample } => {
            m.insert("verdict".into(), json!("HypothesisFails"));
            m.insert("level".into(), json!(level));
            m.insert("sample".into(), sample_json(sample));
        }
        DecayVerdict::Violated { level, sample } => {
            m.insert("verdict".into(), json!("Violated"));
            m.insert("level".into(), json!(level));
            m.insert("sample".into(), sample_json(sample));
        }
    }
    m.insert("levels".into(), json!(c.levels));
    m.insert("worstRatio".into(), json!(c.worst_ratio));
    Value::Object(m)
}

pub fn hyper_json<S: Scalar>(v: &HyperVerdict<S>) -> Value {
    let mut m = Map::new();
    m.insert("verdict".into(), json!(v.name()));
    match v {
        HyperVerdict::MultiCubicOnGrid => {}
        HyperVerdict::HypothesisViolated {
            sample,
            residual_norm,
            control,
        } => {
            m.insert("sample".into(), sample_json(sample));
            m.insert("residualNorm".into(), residual_norm.to_json());
            m.insert("control".into(), control.to_json());
        }
        HyperVerdict::CounterexampleFlagged { verdict_name } => {
            m.insert("classifyVerdict".into(), json!(verdict_name));
        }
    }
    Value::Object(m)
}

pub fn uniqueness_json<S: Scalar>(r: &UniquenessResult<S>) -> Value {
    json!({
        "maxDisagreement": r.max_disagreement.to_json(),
        "worstPoint": r.worst_point.as_ref().map(Point::to_json),
    })
}

pub fn remark21_json(d: &Remark21Demo) -> Value {
    json!({
        "powerConditionHolds": d.power_condition_holds,
        "powerWorstDeviation": d.power_worst_deviation,
        "residualAtUnit": d.residual_at_unit,
        "residualExpected": d.residual_expected,
        "residualAtZero": d.residual_at_zero,
        "doubleAt34": d.double_at_34,
        "eightHAt34": d.eight_h_at_34,
    })
}

/// Scalar as a CSV cell: the rational string in exact mode, the shortest
/// round-trip float otherwise.
fn scalar_cell<S: Scalar>(v: &S) -> String {
    match v.to_json() {
        Value::String(s) => s,
        Value::Number(n) => n.to_string(),
        _ => "NaN".to_string(),
    }
}

fn vector_cell<S: Scalar>(v: &[S]) -> String {
    v.iter().map(scalar_cell).collect::<Vec<_>>().join(";")
}

fn point_cell<S: Scalar>(p: &Point<S>) -> String {
    p.blocks
        .iter()
        .map(|b| b.iter().map(scalar_cell).collect::<Vec<_>>().join(";"))
        .collect::<Vec<_>>()
        .join("|")
}

pub const STABILIZATION_CSV_HEADER: &str = "x,f,C,phi_series,phi_paper,error,boundOK";

/// Per-point stabilization table. Vector cells use ';' between components
/// so commas stay reserved for columns.
pub fn stabilization_csv<S: Scalar>(r: &StabilizationReport<S>) -> String {
    let mut out = String::from(STABILIZATION_CSV_HEADER);
    out.push('\n');
    for row in &r.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            point_cell(&row.x),
            vector_cell(&row.f_x),
            vector_cell(&row.c_x),
            scalar_cell(&row.phi_series),
            row.phi_paper.as_ref().map(scalar_cell).unwrap_or_default(),
            scalar_cell(&row.error),
            row.bound_ok,
        ));
    }
    out
}

pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

pub fn write_output(text: &str, path: Option<&std::path::Path>) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_frac, rat_int};
    use crate::stability::StabilizationReport;

    fn tiny_report() -> StabilizationReport<crate::rat::Rat> {
        StabilizationReport {
            beta: 1,
            iterations: 2,
            hypothesis_certified: true,
            hypothesis_counterexample: None,
            hyperstability_path: false,
            rows: vec![PointRow {
                x: Point::from_ints(&[2]),
                f_x: vec![rat_int(40)],
                c_x: vec![rat_int(40)],
                phi_series: rat_frac(1, 3),
                phi_paper: Some(rat_frac(1, 3)),
                error: rat_int(0),
                bound_ok: true,
                converged: true,
                trace: vec![],
            }],
            all_bounds_ok: true,
            all_converged: true,
            recovered_coefficient: Some(vec![rat_int(5)]),
        }
    }

    #[test]
    fn csv_schema() {
        let csv = stabilization_csv(&tiny_report());
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "x,f,C,phi_series,phi_paper,error,boundOK");
        assert_eq!(lines.next().unwrap(), "2,40,40,1/3,1/3,0,true");
    }

    #[test]
    fn exact_rationals_stay_strings() {
        let v = stabilization_json(&tiny_report());
        let phi = &v["rows"][0]["phiSeries"];
        assert_eq!(phi, &Value::String("1/3".into()));
        let text = render_json(&v);
        assert!(text.contains("\"1/3\""));
        assert!(!text.contains("0.333"));
    }

    #[test]
    fn envelope_is_deterministic() {
        let req = json!({ "nMax": 3 });
        let a = render_json(&envelope("identities", req.clone(), json!([])));
        let b = render_json(&envelope("identities", req, json!([])));
        assert_eq!(a, b);
        assert!(a.contains("\"tool\": \"multicubic\""));
    }
}
