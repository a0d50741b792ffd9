//! WebAssembly bindings for the browser demo. Each export takes plain
//! parameters and returns a JSON or SVG string; errors become JS strings.
//! The `*_text` functions hold the logic and are usable natively.

use prymform::cli::classify_row;
use prymform::geodesics::cylinder_decomposition;
use prymform::prym::{prototype_polygons, Kappa, Prototype};
use prymform::render::{render_svg, slit_edges, RenderOptions};
use prymform::surface::parse_rational;
use prymform::{QuadNum, Vec2};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest discriminant range the page will classify in one call.
pub const MAX_RANGE: i64 = 400;

fn prototype(kappa: &str, w: i64, h: i64, e: i64) -> Result<Prototype, String> {
    let kappa: Kappa = kappa.parse().map_err(|e: prymform::Error| e.to_string())?;
    Prototype::new(kappa, w, h, e).map_err(|e| e.to_string())
}

fn slit(s: &str) -> Result<Option<QuadNum>, String> {
    if s.trim().is_empty() {
        Ok(None)
    } else {
        parse_rational(s.trim()).map(Some)
    }
}

/// Classification rows for `from..=to` as a JSON array.
pub fn classify_text(from: i64, to: i64, kappa: &str) -> Result<String, String> {
    if from < 8 || to < from || to - from > MAX_RANGE {
        return Err(format!("need 8 <= from <= to <= from + {MAX_RANGE}"));
    }
    let kappa: Kappa = kappa.parse().map_err(|e: prymform::Error| e.to_string())?;
    let rows: Vec<Value> = (from..=to)
        .map(|d| {
            let mut r = classify_row(d, kappa);
            if let Some(o) = r.as_object_mut() {
                o.remove("detail");
            }
            r
        })
        .collect();
    Ok(Value::Array(rows).to_string())
}

/// SVG drawing of the slit-torus presentation of a prototype.
pub fn prototype_svg_text(kappa: &str, w: i64, h: i64, e: i64, slit_len: &str) -> Result<String, String> {
    let p = prototype(kappa, w, h, e)?;
    let (s, _) = prototype_polygons(&p, slit(slit_len)?.as_ref()).map_err(|e| e.to_string())?;
    let opts = RenderOptions { highlight: slit_edges(&s), ..RenderOptions::default() };
    Ok(render_svg(&s, &opts))
}

/// Cylinder decomposition of a prototype in direction `(dx, dy)` as JSON.
pub fn cylinders_text(kappa: &str, w: i64, h: i64, e: i64, slit_len: &str, dx: &str, dy: &str) -> Result<String, String> {
    let p = prototype(kappa, w, h, e)?;
    let (s, _) = prototype_polygons(&p, slit(slit_len)?.as_ref()).map_err(|e| e.to_string())?;
    let dir = Vec2::new(parse_rational(dx)?, parse_rational(dy)?);
    let cyls = cylinder_decomposition(&s, &dir).map_err(|e| e.to_string())?;
    Ok(json!({
        "D": p.discriminant(),
        "cylinders": cyls.iter().map(|c| json!({
            "width": c.width.to_plain(),
            "height": c.height.to_plain(),
        })).collect::<Vec<_>>(),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn classify(from: i64, to: i64, kappa: &str) -> Result<String, JsValue> {
    classify_text(from, to, kappa).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn prototype_svg(kappa: &str, w: i64, h: i64, e: i64, slit_len: &str) -> Result<String, JsValue> {
    prototype_svg_text(kappa, w, h, e, slit_len).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn cylinders(kappa: &str, w: i64, h: i64, e: i64, slit_len: &str, dx: &str, dy: &str) -> Result<String, JsValue> {
    cylinders_text(kappa, w, h, e, slit_len, dx, dy).map_err(|e| JsValue::from_str(&e))
}
