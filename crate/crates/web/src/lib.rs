//! Browser bindings: classify an element, compose an adjoint matrix, and
//! solve one invariant reduction onto a small grid for plotting.

use beamsym::reduction::{ansatz, lift, reduced_residual, solve_reduced, ZetaGrid};
use beamsym::{
    adjoint_composed, classify, sample, verify_conjugacy, AlgebraElement, CaseKind, CaseParams,
    ChiSpec, EpsilonVector, FreeParams, RowRef, Window,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

type Res = Result<String, String>;

fn params(case: &str, split: f64) -> Result<CaseParams, String> {
    let kind = match case {
        "equal" => CaseKind::Equal,
        "greater" => CaseKind::Greater { lambda: split },
        "less" => CaseKind::Less { mu: split },
        other => return Err(format!("unknown case `{other}`")),
    };
    CaseParams::from_case(1.0, 1.0, 1.0, 1.0, kind).map_err(|e| e.to_string())
}

fn text<T: std::fmt::Display>(e: T) -> String {
    e.to_string()
}

pub fn classify_json(case: &str, split: f64, coeffs: &[f64]) -> Res {
    let p = params(case, split)?;
    let a = AlgebraElement::from_slice(coeffs).map_err(text)?;
    let r = classify(&a, &p, beamsym::optimal::DEFAULT_TOL).map_err(text)?;
    let check = verify_conjugacy(&a, &r, &p);
    Ok(json!({
        "class": r.class_id.label(),
        "formula": beamsym::optimal::class_formula(r.class_id),
        "free_params": r.free_params,
        "eps": r.eps,
        "scale": r.scale,
        "leaf_path": r.leaf_path,
        "conjugacy": check,
    })
    .to_string())
}

pub fn adjoint_json(case: &str, split: f64, eps: &[f64]) -> Res {
    let p = params(case, split)?;
    let e = EpsilonVector::from_slice(eps).map_err(text)?;
    Ok(json!({ "matrix": adjoint_composed(&e, &p).rows() }).to_string())
}

/// Solve `row` on the unit window and return φ, ψ on an `n × n` grid.
pub fn reduce_json(
    row: &str,
    split: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    c3: f64,
    n: usize,
) -> Res {
    let row = RowRef::parse(row, None).map_err(text)?;
    let p = params(row.family.name(), split)?;
    let d = row.descriptor().map_err(text)?;
    let pick = |name: &str, v: f64| d.uses.iter().any(|u| u == name).then_some(v);
    let fp = FreeParams::new(
        pick("alpha", alpha),
        pick("beta", beta),
        pick("gamma", gamma),
    );
    let spec = ansatz(row, &fp, &p).map_err(text)?;
    let chi = ChiSpec::cubic(p.b, c3);
    let w = Window::unit();
    let (lo, hi) = spec.zeta_range(&w);
    let step = 1e-3;
    let red = solve_reduced(
        &spec,
        &chi,
        [0.1, -0.2, 0.3, 0.1],
        &ZetaGrid::covering(lo, hi.max(lo + step), step),
    )
    .map_err(text)?;
    let reduced = reduced_residual(&red, &spec, &chi).map_err(text)?.max();
    let g = sample(
        &lift(&spec, &red, &w).map_err(text)?,
        &w,
        n.clamp(8, 200),
        n.clamp(8, 200),
    )
    .map_err(text)?;
    Ok(json!({
        "row": row.to_string(),
        "reduced_residual": reduced,
        "n": g.nt,
        "phi": g.phi,
        "psi": g.psi,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn classify_element(case: &str, split: f64, coeffs: &[f64]) -> Result<String, JsValue> {
    classify_json(case, split, coeffs).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn adjoint_matrix(case: &str, split: f64, eps: &[f64]) -> Result<String, JsValue> {
    adjoint_json(case, split, eps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn reduce_row(
    row: &str,
    split: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    c3: f64,
    n: usize,
) -> Result<String, JsValue> {
    reduce_json(row, split, alpha, beta, gamma, c3, n).map_err(|e| JsValue::from_str(&e))
}
