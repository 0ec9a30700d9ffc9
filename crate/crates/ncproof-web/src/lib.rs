//! Browser bindings for the workbench: formula expansion, the HARD_d
//! rank profile, and proof checking. The `*_impl` functions hold the
//! logic and run on any target; the `#[wasm_bindgen]` exports wrap them
//! for the static page in `www/`.

use wasm_bindgen::prelude::*;

use ncproof::check::{check, CheckOptions};
use ncproof::cpoly::embed;
use ncproof::field::FieldSpec;
use ncproof::formula::parse_formula;
use ncproof::order::Order;
use ncproof::proof::parse_proof;
use ncproof::rank::{hard_poly, nisan_bound, permutation_submatrix};

/// Expands a formula over ℚ into its canonical polynomial listing, one
/// `coefficient : word` line per monomial.
pub fn expand_formula_impl(src: &str, cap: usize) -> Result<String, String> {
    let field = FieldSpec::Rationals;
    let f = parse_formula(src.trim(), field, None).map_err(|e| e.to_string())?;
    let poly = f
        .expand_capped(field, cap.max(1))
        .map_err(|e| e.to_string())?;
    if poly.is_zero() {
        return Ok("0".to_string());
    }
    let mut out = String::new();
    for (w, c) in poly.terms() {
        out.push_str(&format!("{c} : {w}\n"));
    }
    Ok(out)
}

/// Rank profile of ⟦HARD_d⟧: full support-matrix ranks per k, the
/// permutation-submatrix ranks C(d,k), and both totals, as JSON.
pub fn hard_rank_profile_impl(d: u32) -> Result<String, String> {
    if d == 0 || d > 10 {
        return Err("d must be between 1 and 10".to_string());
    }
    let ord = Order::default_order();
    let hard = hard_poly(d, 2 * d, &ord).map_err(|e| e.to_string())?;
    let nc = embed(&hard, &ord).map_err(|e| e.to_string())?;
    let report = nisan_bound(&nc).map_err(|e| e.to_string())?;
    let submatrix: Vec<u64> = (0..=d as usize)
        .map(|k| permutation_submatrix(d, k, &ord).map(|m| m.rank()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let value = serde_json::json!({
        "d": d,
        "monomials": nc.num_terms(),
        "per_k": report.per_k,
        "total": report.total,
        "submatrix": submatrix,
        "submatrix_total": submatrix.iter().sum::<u64>(),
    });
    Ok(value.to_string())
}

/// Checks a proof file; the verdict, metrics and failure list as JSON.
pub fn check_proof_impl(src: &str, refutation: bool) -> Result<String, String> {
    let proof = parse_proof(src).map_err(|e| e.to_string())?;
    let report = check(&proof, &CheckOptions::default())?;
    let verdict = report.accepted && (!refutation || report.is_refutation);
    let failures: Vec<serde_json::Value> = report
        .failures
        .iter()
        .map(|f| serde_json::json!({ "at": f.loc.to_string(), "reason": f.reason }))
        .collect();
    let value = serde_json::json!({
        "system": proof.system.to_string(),
        "accepted": verdict,
        "is_refutation": report.is_refutation,
        "size": report.size,
        "degree": report.degree,
        "failures": failures,
    });
    Ok(value.to_string())
}

#[wasm_bindgen]
pub fn expand_formula(src: &str, cap: usize) -> Result<String, JsValue> {
    expand_formula_impl(src, cap).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hard_rank_profile(d: u32) -> Result<String, JsValue> {
    hard_rank_profile_impl(d).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn check_proof(src: &str, refutation: bool) -> Result<String, JsValue> {
    check_proof_impl(src, refutation).map_err(|e| JsValue::from_str(&e))
}
