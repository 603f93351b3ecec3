//! wasm-bindgen bindings for the browser demo page in `www/`.
//!
//! Each export runs one report builder from the core crate and returns
//! the same JSON the CLI emits, so the page renders exactly what the
//! command-line tool would print. Build with
//! `wasm-pack build crates/wasm --target web`.

use eisenstein_core::report::{build_breuil_table, build_hecke, build_scan, to_json, ReportError};
use wasm_bindgen::prelude::*;

fn scan_json(pmax: u64, with_hecke: bool) -> Result<String, ReportError> {
    Ok(to_json(&build_scan(pmax, with_hecke, false)?))
}

fn breuil_table_json(p: u64, e: usize) -> Result<String, ReportError> {
    Ok(to_json(&build_breuil_table(p, e)?))
}

fn hecke_json(p: u64, k: u64, sturm: bool) -> Result<String, ReportError> {
    Ok(to_json(&build_hecke(p, k, sturm)?))
}

fn js_err(err: ReportError) -> JsValue {
    JsValue::from_str(&err.to_string())
}

/// Irregular-pair scan up to `pmax` (optionally with Eisenstein structure
/// reports attached), as a JSON report string.
#[wasm_bindgen]
pub fn scan_report(pmax: u64, with_hecke: bool) -> Result<String, JsValue> {
    scan_json(pmax, with_hecke).map_err(js_err)
}

/// The full `(r, s, a, b)` classification table over `F_p` at ramification
/// degree `e`, as a JSON report string.
#[wasm_bindgen]
pub fn breuil_table(p: u64, e: usize) -> Result<String, JsValue> {
    breuil_table_json(p, e).map_err(js_err)
}

/// Eisenstein-local Hecke structure at `(p, k)`, as a JSON report string.
#[wasm_bindgen]
pub fn hecke_report(p: u64, k: u64, sturm: bool) -> Result<String, JsValue> {
    hecke_json(p, k, sturm).map_err(js_err)
}
