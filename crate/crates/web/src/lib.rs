//! Browser bindings. Every entry point takes a braiding spec as JSON text
//! and returns JSON text; errors come back as thrown JS errors.

use qshuffle::filtration::{
    concentration_report, weight_filtration_A, weighted_wordlength_filtration, wordlength_filtration, FiltrationKind,
};
use qshuffle::hurwitz::nichols_profile;
use qshuffle::input::{validate_text, BraidingSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest degree the page will compute; keeps the tab responsive.
pub const MAX_DEGREE: usize = 7;

fn parse(spec: &str) -> Result<BraidingSpec, String> {
    spec.parse().map_err(|e: qshuffle::Error| e.to_string())
}

fn cap(nmax: usize) -> Result<usize, String> {
    if nmax > MAX_DEGREE {
        Err(format!("degree {nmax} is above the demo limit {MAX_DEGREE}"))
    } else {
        Ok(nmax)
    }
}

/// `{"tsv": ..., "table": ..., "check": ...}` for the chosen filtration.
pub fn table_json(spec: &str, filtration: &str, nmax: usize) -> Result<String, String> {
    let nmax = cap(nmax)?;
    let report = validate_text(spec);
    if !report.pass {
        return Ok(json!({ "check": report }).to_string());
    }
    let bvs = parse(spec)?.build().map_err(|e| e.to_string())?;
    let kind: FiltrationKind = filtration.parse().map_err(|e: qshuffle::Error| e.to_string())?;
    let t = match &kind {
        FiltrationKind::WordLength => wordlength_filtration(&bvs, nmax),
        FiltrationKind::WeightedWordLength(f) => weighted_wordlength_filtration(&bvs, f, nmax),
        FiltrationKind::Weight => weight_filtration_A(&bvs, nmax),
    }
    .map_err(|e| e.to_string())?;
    Ok(json!({ "check": report, "tsv": t.to_tsv(), "table": t.to_json() }).to_string())
}

pub fn nichols_json(spec: &str, bound: usize) -> Result<String, String> {
    let bvs = parse(spec)?.build().map_err(|e| e.to_string())?;
    let p = nichols_profile(&bvs, cap(bound)?).map_err(|e| e.to_string())?;
    serde_json::to_string(&p).map_err(|e| e.to_string())
}

pub fn stats_json(spec: &str, nmax: usize) -> Result<String, String> {
    let bvs = parse(spec)?.build().map_err(|e| e.to_string())?;
    let s = concentration_report(&bvs, cap(nmax)?).map_err(|e| e.to_string())?;
    let rows: Vec<_> = (1..s.a.len())
        .map(|n| {
            json!({
                "n": n,
                "a": s.a[n].to_string(),
                "a_over_n": s.a_over_n[n].to_string(),
                "decimal": s.a_over_n[n].to_f64(),
            })
        })
        .collect();
    Ok(json!({
        "rows": rows,
        "monotone_ok": s.monotone_ok,
        "superadditive_ok": s.superadditive_ok,
        "c_estimate": s.c_estimate.to_string(),
    })
    .to_string())
}

#[wasm_bindgen(js_name = filtrationTable)]
pub fn filtration_table(spec: &str, filtration: &str, nmax: usize) -> Result<String, JsError> {
    table_json(spec, filtration, nmax).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = nicholsDims)]
pub fn nichols_dims(spec: &str, bound: usize) -> Result<String, JsError> {
    nichols_json(spec, bound).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = weightStats)]
pub fn weight_stats(spec: &str, nmax: usize) -> Result<String, JsError> {
    stats_json(spec, nmax).map_err(|e| JsError::new(&e))
}
