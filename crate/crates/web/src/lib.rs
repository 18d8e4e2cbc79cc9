//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns the same JSON document as the matching CLI command.

use elliptic_schubert::harness::{billey_terms, localize, pipe_dreams, Document, RunConfig};
use elliptic_schubert::roots::DatumKind;
use elliptic_schubert::theta::Mode;
use wasm_bindgen::prelude::*;

fn config(rank: usize, mode: &str, seed: u64) -> Result<RunConfig, String> {
    let mode: Mode = mode.parse().map_err(|e| format!("{e}"))?;
    let datum = (rank > 0).then_some(DatumKind::GL(rank));
    Ok(RunConfig { datum, mode, seed, trunc: Some(3), ..RunConfig::default() })
}

fn subset(s: &str) -> Result<Option<Vec<usize>>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| format!("bad position {t}"))).collect::<Result<_, _>>().map(Some)
}

/// Pipe dreams of the permutation `w` (one-line notation).
pub fn pipe_dreams_json(w: &str) -> Result<String, String> {
    let c = config(0, "eval", 0)?;
    pipe_dreams(&c, w).map(|d| d.to_json()).map_err(|e| e.to_string())
}

/// Billey terms for the word `word` at `w`, optionally restricted to one subset.
pub fn billey_json(rank: usize, word: &str, w: &str, only: &str) -> Result<String, String> {
    let c = config(rank, "symbolic", 0)?;
    let only = subset(only)?;
    billey_terms(&c, word, w, only.as_deref()).map(|d| d.to_json()).map_err(|e| e.to_string())
}

/// Localization table of the class of `w` on `GL_rank`.
pub fn localize_json(rank: usize, w: &str, mode: &str, seed: u64) -> Result<String, String> {
    let c = config(rank, mode, seed)?;
    localize(&c, w).map(|d| d.to_json()).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = pipeDreams)]
pub fn pipe_dreams_js(w: &str) -> Result<String, JsValue> {
    pipe_dreams_json(w).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = billeyTerms)]
pub fn billey_js(rank: usize, word: &str, w: &str, subset: &str) -> Result<String, JsValue> {
    billey_json(rank, word, w, subset).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = localize)]
pub fn localize_js(rank: usize, w: &str, mode: &str, seed: u32) -> Result<String, JsValue> {
    localize_json(rank, w, mode, seed as u64).map_err(|e| JsValue::from_str(&e))
}
