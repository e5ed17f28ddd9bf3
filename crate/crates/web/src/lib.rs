//! wasm-bindgen entry points for the static demo in `www/`.
//!
//! Each export returns a JSON string. The `*_json` functions carry the logic
//! and are callable natively; the exported wrappers only convert errors.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use hypercover::constructions;
use hypercover::formats;
use hypercover::interpolation::build_scheme;
use hypercover::kernel;
use hypercover::rational;
use hypercover::{verify_cover, CoverFamily};

/// Largest n for which the per-point coverage view is returned.
pub const MAX_VIEW_N: usize = 12;

fn family(kind: &str, param: usize) -> Result<CoverFamily, String> {
    let fam = match kind {
        "pow2" => {
            let m = u32::try_from(param).map_err(|e| e.to_string())?;
            constructions::power_of_two_cover(m)
        }
        "levels" => constructions::level_set_cover(param),
        "balanced" => constructions::balanced_even_cover(param),
        "example-n5" => Ok(constructions::example_n5()),
        "example-n6" => Ok(constructions::example_n6()),
        _ => return Err(format!("unknown construction {kind:?}")),
    };
    fam.map_err(|e| e.to_string())
}

/// Builds a construction, verifies it, and for small n lists, per point, how
/// many planes pass through it. Points are grouped by number of -1 coordinates.
pub fn cover_view_json(kind: &str, param: usize) -> Result<String, String> {
    let fam = family(kind, param)?;
    let n = fam.n();
    let report = verify_cover(&fam).map_err(|e| e.to_string())?;
    let planes: Vec<Value> = fam.planes().iter().map(formats::plane_to_json).collect();
    let mut out = json!({
        "n": n,
        "planes": planes,
        "report": formats::report_to_json(&report),
    });
    if n <= MAX_VIEW_N {
        let sets = fam
            .planes()
            .iter()
            .map(|p| p.coverage())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let mut layers: Vec<Vec<Value>> = vec![Vec::new(); n + 1];
        for bits in 0..1u32 << n {
            let hits: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].contains(bits)).collect();
            layers[bits.count_ones() as usize].push(json!({ "bits": bits, "planes": hits }));
        }
        out["layers"] = json!(layers);
    }
    Ok(out.to_string())
}

fn parse_indices(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad index {t:?}")))
        .collect()
}

/// The signed measure on W(m) that recovers the coefficient of x^S.
/// `subset` is a comma-separated list of 1-based indices.
pub fn scheme_json(n: usize, m: usize, subset: &str) -> Result<String, String> {
    let mut idx = parse_indices(subset)?;
    idx.sort_unstable();
    let mask = formats::subset_from_indices(&idx, n, 1).map_err(|e| e.to_string())?;
    let scheme = build_scheme(n, m, idx.len(), mask).map_err(|e| e.to_string())?;
    Ok(formats::scheme_to_json(&scheme).to_string())
}

/// Kernel certificate for whitespace- or comma-separated coefficients.
pub fn kernel_json(d: usize, coeffs: &str) -> Result<String, String> {
    let a = coeffs
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| rational::parse(t).ok_or_else(|| format!("bad coefficient {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let cert = kernel::certify(&a, d).map_err(|e| e.to_string())?;
    Ok(formats::kernel_to_json(&cert).to_string())
}

#[wasm_bindgen]
pub fn cover_view(kind: &str, param: usize) -> Result<String, JsValue> {
    cover_view_json(kind, param).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn scheme(n: usize, m: usize, subset: &str) -> Result<String, JsValue> {
    scheme_json(n, m, subset).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn kernel_nullity(d: usize, coeffs: &str) -> Result<String, JsValue> {
    kernel_json(d, coeffs).map_err(|e| JsValue::from_str(&e))
}
