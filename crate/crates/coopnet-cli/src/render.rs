//! Output rendering. All floats are printed with 12 significant digits,
//! in JSON as much as in CSV; tolerance comparisons belong to verifiers,
//! never to printing.

use coopnet::{BStarReport, SimulationResult, SweepSummary};
use serde_json::Value;

/// Rounds to 12 significant digits. Printing the result with `{}` shows at
/// most those digits and parses back to the same value.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        x
    } else {
        format!("{x:.11e}").parse().expect("float round-trips")
    }
}

pub fn fmt_f(x: f64) -> String {
    sig12(x).to_string()
}

/// Rounds every float in a JSON tree to 12 significant digits, leaving
/// integers untouched.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("checked f64");
                if let Some(rounded) = serde_json::Number::from_f64(sig12(x)) {
                    *n = rounded;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn to_rounded_pretty(mut value: Value) -> String {
    round_json(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

/// The serde name of a unit enum variant, used so CSV cells and JSON fields
/// spell verdicts identically.
pub fn enum_text<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_value(x)
        .expect("enum serializes")
        .as_str()
        .expect("unit variant")
        .to_string()
}

pub const BSTAR_CSV_HEADER: &str =
    "n,mean_degree,numerator,denominator,b_star,inv_b_star,classification,updating,method";

pub fn bstar_json(report: &BStarReport, digest: &str) -> Value {
    let mut value = serde_json::to_value(report).expect("report serializes");
    value["digest"] = Value::String(digest.to_string());
    value
}

pub fn bstar_csv(r: &BStarReport) -> String {
    let b_star = r.b_star.map(fmt_f).unwrap_or_default();
    format!(
        "{BSTAR_CSV_HEADER}\n{},{},{},{},{},{},{},{},{}\n",
        r.n,
        fmt_f(r.mean_degree),
        fmt_f(r.numerator),
        fmt_f(r.denominator),
        b_star,
        fmt_f(r.inv_b_star),
        enum_text(&r.classification),
        enum_text(&r.updating),
        r.method,
    )
}

pub const SWEEP_CSV_HEADER: &str = "gate1,gate2,b_star,inv_b_star,classification";

pub fn sweep_csv(summary: &SweepSummary) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for pair in &summary.pairs {
        let b_star = pair.report.b_star.map(fmt_f).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            pair.gate1,
            pair.gate2,
            b_star,
            fmt_f(pair.report.inv_b_star),
            enum_text(&pair.report.classification),
        ));
    }
    out
}

pub const SIMULATE_CSV_HEADER: &str = "b,c,delta,trials,fixations,rho_hat,std_err,n_rho";

/// One output row of `simulate`: the payoff point plus its estimate.
pub struct SimRow {
    pub b: f64,
    pub c: f64,
    pub delta: f64,
    pub result: SimulationResult,
}

pub fn simulate_csv(rows: &[SimRow]) -> String {
    let mut out = String::from(SIMULATE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.result;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f(row.b),
            fmt_f(row.c),
            fmt_f(row.delta),
            r.trials,
            r.fixation_count,
            fmt_f(r.rho_hat),
            fmt_f(r.std_err),
            fmt_f(r.n_rho),
        ));
    }
    out
}

pub fn simulate_json(rows: &[SimRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let r = &row.result;
            serde_json::json!({
                "b": row.b,
                "c": row.c,
                "delta": row.delta,
                "trials": r.trials,
                "fixations": r.fixation_count,
                "capped_trials": r.capped_trials,
                "rho_hat": r.rho_hat,
                "std_err": r.std_err,
                "n_rho": r.n_rho,
            })
        })
        .collect();
    serde_json::json!({ "rows": rows })
}
