//! Browser bindings for the interactive demo page (`www/index.html`).
//!
//! Three operations are exported, each returning a JSON string the page
//! renders with plain JavaScript:
//!
//! * [`sweep_curves`] - measure-vs-correlation curves on equal-frequency
//!   normal grids (the parameter-exploration view);
//! * [`normal_grid`] - one discretized bivariate-normal table plus its
//!   measure profile (the heatmap view);
//! * [`analyze_table`] - measures and, for counts input, delta-method
//!   intervals for a user-pasted CSV table.

use wasm_bindgen::prelude::*;

use mclambda::inference::confidence_interval;
use mclambda::measures::{measure_profile, symmetric_lambda, Direction};
use mclambda::normal::{sweep, NormalGridSpec};
use mclambda::parse::{parse_table, ParseOptions, ParsedTable};
use mclambda::report::ResultRow;
use mclambda::Error;

fn js_err(e: Error) -> JsError {
    JsError::new(&format!("{}: {e}", e.code()))
}

/// Measure-vs-correlation curves for an r x r equal-frequency normal
/// grid, both families, every order, correlations `0..=1` at `step`.
#[wasm_bindgen]
pub fn sweep_curves(r: u32, step: f64) -> Result<String, JsError> {
    sweep_curves_impl(r as usize, step).map_err(js_err)
}

fn sweep_curves_impl(r: usize, step: f64) -> Result<String, Error> {
    if !(step > 1e-4 && step <= 1.0) {
        return Err(Error::DomainError {
            what: "sweep step",
            value: step,
        });
    }
    let mut rhos = Vec::new();
    let mut k = 0u64;
    loop {
        let rho = (k as f64 * step).min(1.0);
        rhos.push(rho);
        if rho >= 1.0 {
            break;
        }
        k += 1;
    }
    let rows = sweep(r, &rhos)?;
    let n_series = 2 * (r - 1);
    let mut series: Vec<serde_json::Value> = Vec::with_capacity(n_series);
    for v in &rows[0].values {
        series.push(serde_json::json!({
            "family": v.family.to_string(),
            "t": v.t,
            "values": Vec::<f64>::new(),
        }));
    }
    for row in &rows {
        for (k, v) in row.values.iter().enumerate() {
            series[k]["values"]
                .as_array_mut()
                .expect("series values array")
                .push(v.value.into());
        }
    }
    Ok(serde_json::json!({ "r": r, "rhos": rhos, "series": series }).to_string())
}

/// One discretized bivariate-normal grid and its measure profile.
#[wasm_bindgen]
pub fn normal_grid(r: u32, rho: f64) -> Result<String, JsError> {
    normal_grid_impl(r as usize, rho).map_err(js_err)
}

fn normal_grid_impl(r: usize, rho: f64) -> Result<String, Error> {
    let table = NormalGridSpec::new(r, rho)?.build()?;
    let cells: Vec<Vec<f64>> = (0..r)
        .map(|i| (0..r).map(|j| table.cell(i, j)).collect())
        .collect();
    let mut measures = Vec::new();
    for entry in measure_profile(&table, Direction::YGivenX)? {
        if let Ok(m) = entry.result {
            measures.push(serde_json::json!({
                "family": m.family.to_string(),
                "t": m.t,
                "value": m.value,
            }));
        }
    }
    Ok(serde_json::json!({ "r": r, "rho": rho, "cells": cells, "measures": measures }).to_string())
}

/// Measures (and, for counts input, confidence intervals) for a pasted
/// CSV table.
#[wasm_bindgen]
pub fn analyze_table(
    csv: &str,
    probabilities: bool,
    header: bool,
    labels: bool,
    alpha: f64,
) -> Result<String, JsError> {
    analyze_table_impl(csv, probabilities, header, labels, alpha).map_err(js_err)
}

fn analyze_table_impl(
    csv: &str,
    probabilities: bool,
    header: bool,
    labels: bool,
    alpha: f64,
) -> Result<String, Error> {
    let opts = ParseOptions {
        probabilities,
        header,
        labels,
    };
    let parsed = parse_table(csv, &opts)?;
    let p = parsed.probabilities();

    let mut measure_rows = Vec::new();
    for entry in measure_profile(&p, Direction::YGivenX)? {
        measure_rows.push(match entry.result {
            Ok(m) => ResultRow::from_measure(&m),
            Err(Error::DegenerateMarginal { .. }) => {
                ResultRow::degenerate_entry(entry.family, Direction::YGivenX, entry.t)
            }
            Err(other) => return Err(other),
        });
    }
    if let Ok((m, _)) = symmetric_lambda(&p) {
        measure_rows.push(ResultRow::from_measure(&m));
    }

    let mut doc = serde_json::json!({
        "rows": parsed.rows(),
        "cols": parsed.cols(),
        "mode": if probabilities { "probabilities" } else { "counts" },
        "measures": measure_rows,
    });

    if let ParsedTable::Counts(counts) = &parsed {
        doc["n"] = counts.total().into();
        let mut ci_rows = Vec::new();
        for t in 1..counts.cols() {
            for family in [mclambda::Family::Plain, mclambda::Family::K] {
                match confidence_interval(counts, family, t, Direction::YGivenX, alpha) {
                    Ok(r) => ci_rows.push(ResultRow::from_inference(&r)),
                    Err(Error::DegenerateMarginal { .. }) => {
                        ci_rows.push(ResultRow::degenerate_entry(family, Direction::YGivenX, t))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        doc["inference"] = serde_json::to_value(ci_rows).expect("rows serialize");
    }
    Ok(doc.to_string())
}

/// The survey table bundled as the demo's starting input.
#[wasm_bindgen]
pub fn example_counts_csv() -> String {
    let t = mclambda::fixtures::cannabis_counts();
    mclambda::parse::contingency_table_to_csv(&t)
}
