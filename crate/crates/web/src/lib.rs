//! Browser demo over the exact and numeric layers of `stochex`.
//!
//! Every export takes plain strings and numbers and returns a JSON string.
//! The `*_json` functions carry the logic and are tested natively; the
//! `wasm_bindgen` wrappers only convert errors.

use serde_json::{json, Value};

use stochex::contlab::{EllipticalSpec, Generator, DENSITY_TOLERANCE};
use stochex::extremes::Extreme;
use stochex::gallery::{gallery, list, GalleryDist};
use stochex::rational::{format_rational, to_f64};
use stochex::stochorder::{classify, Chain};
use stochex::symmetry::{check, in_sub_super_region, Condition, Side};
use stochex::ExactJointDist;

/// Largest grid side accepted by [`density_gap_map_json`].
pub const MAX_GRID: usize = 401;

/// A law from JSON text, or a catalog id with or without `gallery://`.
fn load(source: &str) -> Result<ExactJointDist, String> {
    let source = source.trim();
    if source.starts_with('{') {
        return serde_json::from_str(source).map_err(|e| e.to_string());
    }
    let id = source.strip_prefix("gallery://").unwrap_or(source);
    match gallery(id).map_err(|e| e.to_string())?.dist {
        GalleryDist::Exact(d) => Ok(d),
        GalleryDist::Continuous(_) => Err(format!("{id} is a continuous model; try the density map")),
    }
}

fn kind_of(s: &str) -> Result<Extreme, String> {
    match s {
        "max" => Ok(Extreme::Max),
        "min" => Ok(Extreme::Min),
        _ => Err(format!("unknown statistic {s:?} (expected max or min)")),
    }
}

fn label(chain: &Chain) -> Value {
    chain.label.map_or(Value::Null, |l| json!(l.to_string()))
}

fn steps(chain: &Chain) -> Vec<Value> {
    chain
        .steps
        .iter()
        .map(|s| {
            let w: Vec<String> = s.verdict.witnesses.iter().map(format_rational).collect();
            json!({ "l": s.l, "relation": s.verdict.relation, "witnesses": w })
        })
        .collect()
}

/// Step cdfs of `|max|` or `|min|` for every prefix length, with the chain
/// label. Points are `[x, F(x)]` at each jump, in floating point for
/// plotting and as exact strings for display.
pub fn abs_extreme_curves_json(source: &str, kind: &str) -> Result<String, String> {
    let kind = kind_of(kind)?;
    let d = load(source)?;
    let c = classify(&d).map_err(|e| e.to_string())?;
    let chain = match kind {
        Extreme::Max => &c.max_chain,
        Extreme::Min => &c.min_chain,
    };
    let curves: Vec<Value> = chain
        .prefix_laws
        .iter()
        .enumerate()
        .map(|(i, law)| {
            let table = law.cdf_table(&[]);
            let points: Vec<[f64; 2]> = table.iter().map(|(x, f)| [to_f64(x), to_f64(f)]).collect();
            let exact: Vec<[String; 2]> = table.iter().map(|(x, f)| [format_rational(x), format_rational(f)]).collect();
            json!({ "prefix": i + 1, "points": points, "exact": exact })
        })
        .collect();
    Ok(json!({
        "dim": d.dim(),
        "kind": kind,
        "label": label(chain),
        "curves": curves,
        "steps": steps(chain),
    })
    .to_string())
}

/// Both prefix chains plus the symmetry conditions that make sense for the
/// dimension.
pub fn classify_chain_json(source: &str) -> Result<String, String> {
    let d = load(source)?;
    let c = classify(&d).map_err(|e| e.to_string())?;
    let mut conditions = vec![Condition::Exchangeable, Condition::Sci, Condition::Esci, Condition::ReN];
    if d.dim() == 2 {
        conditions.extend([Condition::Re, Condition::Ure, Condition::Lre, Condition::Ere]);
    }
    let symmetries = conditions
        .into_iter()
        .map(|cond| {
            let v = check(&d, cond).map_err(|e| e.to_string())?;
            Ok(json!({ "condition": cond, "holds": v.holds, "pair": v.pair }))
        })
        .collect::<Result<Vec<Value>, String>>()?;
    Ok(json!({
        "dim": d.dim(),
        "atoms": d.len(),
        "label_max": label(&c.max_chain),
        "label_min": label(&c.min_chain),
        "max_steps": steps(&c.max_chain),
        "min_steps": steps(&c.min_chain),
        "symmetries": symmetries,
    })
    .to_string())
}

/// `f(x, y) - f(-y, -x)` for a bivariate elliptical density on the square
/// `[-extent, extent]^2`, row-major with `y` increasing by row. The
/// `*_sub` flags report a nonnegative gap on the cone `|x| < y` (`ur`) or
/// `|y| < x` (`lr`), the `*_sup` flags a nonpositive one, each up to the
/// density tolerance.
#[allow(clippy::too_many_arguments)]
pub fn density_gap_map_json(
    generator: &str,
    mu: f64,
    nu: f64,
    sigma: f64,
    tau: f64,
    rho: f64,
    extent: f64,
    side: usize,
) -> Result<String, String> {
    if !(2..=MAX_GRID).contains(&side) {
        return Err(format!("grid side must lie in 2..={MAX_GRID}, got {side}"));
    }
    if !(extent.is_finite() && extent > 0.0) {
        return Err(format!("extent must be positive, got {extent}"));
    }
    let generator = match generator {
        "gauss" => Generator::Gaussian,
        t => match t.strip_prefix('t').and_then(|v| v.parse::<f64>().ok()) {
            Some(nu) if nu > 0.0 => Generator::StudentT { nu },
            _ => return Err(format!("unknown generator {t:?} (expected gauss or t<nu>)")),
        },
    };
    let spec = EllipticalSpec::bivariate(mu, nu, sigma, tau, rho, generator).map_err(|e| e.to_string())?;
    let coord = |i: usize| -extent + 2.0 * extent * i as f64 / (side - 1) as f64;
    let mut values = Vec::with_capacity(side * side);
    let mut upper = (f64::INFINITY, f64::NEG_INFINITY);
    let mut lower = upper;
    let mut max_abs = 0.0f64;
    for j in 0..side {
        let y = coord(j);
        for i in 0..side {
            let x = coord(i);
            let gap = spec.density(&[x, y]) - spec.density(&[-y, -x]);
            values.push(gap);
            max_abs = max_abs.max(gap.abs());
            let half = if in_sub_super_region(&[x, y], 1, 2, Side::Upper) {
                &mut upper
            } else if in_sub_super_region(&[x, y], 1, 2, Side::Lower) {
                &mut lower
            } else {
                continue;
            };
            *half = (half.0.min(gap), half.1.max(gap));
        }
    }
    Ok(json!({
        "side": side,
        "extent": extent,
        "values": values,
        "max_abs": max_abs,
        "ur_sub": upper.0 >= -DENSITY_TOLERANCE,
        "ur_sup": upper.1 <= DENSITY_TOLERANCE,
        "lr_sub": lower.0 >= -DENSITY_TOLERANCE,
        "lr_sup": lower.1 <= DENSITY_TOLERANCE,
    })
    .to_string())
}

pub fn gallery_ids_json() -> String {
    let rows: Vec<Value> = list().iter().map(|(id, d)| json!({ "id": id, "description": d })).collect();
    Value::Array(rows).to_string()
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    fn js(r: Result<String, String>) -> Result<String, JsValue> {
        r.map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn abs_extreme_curves(source: &str, kind: &str) -> Result<String, JsValue> {
        js(super::abs_extreme_curves_json(source, kind))
    }

    #[wasm_bindgen]
    pub fn classify_chain(source: &str) -> Result<String, JsValue> {
        js(super::classify_chain_json(source))
    }

    #[wasm_bindgen]
    #[allow(clippy::too_many_arguments)]
    pub fn density_gap_map(
        generator: &str,
        mu: f64,
        nu: f64,
        sigma: f64,
        tau: f64,
        rho: f64,
        extent: f64,
        side: usize,
    ) -> Result<String, JsValue> {
        js(super::density_gap_map_json(generator, mu, nu, sigma, tau, rho, extent, side))
    }

    #[wasm_bindgen]
    pub fn gallery_ids() -> String {
        super::gallery_ids_json()
    }
}
