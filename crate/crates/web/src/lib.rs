//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Results cross the boundary as flat `f64` arrays or JSON strings so the page
//! needs no generated TypeScript types.

use obtuse_core::constructions::fixed_point::{maximize_acute, scan};
use obtuse_core::dist::DistributionSpec;
use obtuse_core::mc::{estimate, McConfig};
use obtuse_core::sphere::{asymptotic_sphere, obtuse_prob_sphere, DEFAULT_QUAD_TOL};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// `[p0, x0, p1, x1, ...]`: acute probability of the nested construction on a grid.
#[wasm_bindgen]
pub fn fixed_point_curve(steps: usize) -> Result<Vec<f64>, JsError> {
    let steps = steps.clamp(2, 100_000);
    let pts = scan(1.0 / steps as f64, 1.0, steps - 1).map_err(js_err)?;
    Ok(pts.into_iter().flat_map(|(p, x)| [p, x]).collect())
}

/// `[p, acute, obtuse]` at the maximiser.
#[wasm_bindgen]
pub fn fixed_point_optimum() -> Result<Vec<f64>, JsError> {
    let o = maximize_acute().map_err(js_err)?;
    Ok(vec![o.p, o.acute, o.obtuse])
}

/// `[d, quadrature, asymptotic, ...]` for d in `2..=d_max`.
#[wasm_bindgen]
pub fn sphere_curve(d_max: u32) -> Result<Vec<f64>, JsError> {
    let mut out = Vec::new();
    for d in 2..=d_max.clamp(2, 400) {
        let q = obtuse_prob_sphere(d, DEFAULT_QUAD_TOL).map_err(js_err)?;
        let a = asymptotic_sphere(d).map_err(js_err)?;
        out.extend([d as f64, q, a]);
    }
    Ok(out)
}

/// Monte Carlo estimate for a distribution given as JSON, returned as JSON.
#[wasm_bindgen]
pub fn estimate_json(spec: &str, samples: u32, seed: u32) -> Result<String, JsError> {
    let spec = DistributionSpec::from_json(spec).map_err(js_err)?;
    let est = estimate(&spec, &McConfig::new(samples.into(), seed.into())).map_err(js_err)?;
    serde_json::to_string(&est).map_err(js_err)
}
