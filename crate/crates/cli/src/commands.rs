use std::fmt::Write as _;

use beamsym::optimal::class_formula;
use beamsym::reduction::{ansatz_with, check_example, example_solution, verify_row};
use beamsym::residual::GridMeta;
use beamsym::{
    adjoint::adjoint_product, adjoint_composed, classify, convergence_study, pde_residual, sample,
    transform_solution, verify_conjugacy, GridSolution, RowRef, SolutionField,
};
use serde_json::{json, Value};

use crate::config::{Base, Format, Opts};
use crate::error::CliError;

/// What a command produced: a JSON report, or raw text for `--format csv`.
pub enum Output {
    Json(Value),
    Text(String),
}

fn base_field(b: Base) -> SolutionField {
    match b {
        Base::Line => SolutionField::closed_form("line", |_, x| x, |_, _| -1.0),
        Base::Drift => SolutionField::closed_form("drift", |t, _| 0.7 * t, |_, _| 0.0),
    }
}

pub fn classify_cmd(o: &Opts) -> Result<Output, CliError> {
    let p = o.params()?;
    let a = o.element()?;
    let r = classify(&a, &p, o.tol()?)?;
    let check = verify_conjugacy(&a, &r, &p);
    if !check.pass {
        return Err(CliError::Conjugacy {
            error: check.max_rel_error,
            index: check.worst_index,
        });
    }
    Ok(Output::Json(json!({
        "class": r.class_id.label(),
        "family": p.family(),
        "formula": class_formula(r.class_id),
        "free_params": r.free_params,
        "eps": r.eps,
        "scale": r.scale,
        "image": r.image,
        "leaf_path": r.leaf_path,
        "audit": r.audit,
        "conjugacy": check,
        "params": p,
    })))
}

pub fn adjoint_cmd(o: &Opts) -> Result<Output, CliError> {
    let p = o.params()?;
    let e = o.eps()?.unwrap_or_default();
    let m = adjoint_composed(&e, &p);
    let rows = m.rows();
    if o.format == Some(Format::Csv) {
        let mut s = String::new();
        for r in &rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(s, "{}", cells.join(",")).expect("write to String");
        }
        return Ok(Output::Text(s));
    }
    Ok(Output::Json(json!({
        "family": p.family(),
        "eps": e,
        "matrix": rows,
        "product_max_diff": m.max_abs_diff(&adjoint_product(&e, &p)),
        "params": p,
    })))
}

pub fn transform_cmd(o: &Opts) -> Result<Output, CliError> {
    let p = o.params()?;
    let w = o.window()?;
    let (nt, nx) = o.grid()?;
    let chi = o.chi(&p)?;
    let e = o.eps()?.unwrap_or_default();
    let base = match (&o.input, o.base) {
        (Some(_), Some(_)) => {
            return Err(CliError::config("input", "give either --input or --base"))
        }
        (Some(path), None) => GridSolution::read_csv(path)?.to_field(),
        (None, b) => base_field(b.unwrap_or(Base::Line)),
    };
    let g = sample(&transform_solution(&base, &e, &p)?, &w, nt, nx)?;
    let residual = pde_residual(&g, &chi, &p)?;
    if let Some(path) = &o.out {
        g.write_csv(path)?;
    }
    Ok(Output::Json(json!({
        "eps": e,
        "grid": g.meta(),
        "residual": residual,
        "out": o.out,
        "params": p,
    })))
}

pub fn verify_cmd(o: &Opts) -> Result<Output, CliError> {
    let sources = [o.example.is_some(), o.input.is_some(), o.base.is_some()];
    match sources.iter().filter(|s| **s).count() {
        0 => {
            return Err(CliError::config(
                "example",
                "need one of --example, --input or --base",
            ))
        }
        1 => {}
        _ => {
            return Err(CliError::config(
                "example",
                "give only one of --example, --input or --base",
            ))
        }
    }
    if let Some(which) = o.example {
        return verify_example(o, which);
    }
    let p = o.params()?;
    if let Some(path) = &o.input {
        if o.eps.is_some() {
            return Err(CliError::config(
                "eps",
                "not applied to grid input; transform first",
            ));
        }
        let g = GridSolution::read_csv(path)?;
        let chi = o.chi(&p)?;
        let meta: GridMeta = g.meta();
        return Ok(Output::Json(json!({
            "source": path,
            "grid": meta,
            "residual": pde_residual(&g, &chi, &p)?,
            "params": p,
        })));
    }
    let b = o.base.expect("checked above");
    let mut field = base_field(b);
    if let Some(e) = o.eps()? {
        field = transform_solution(&field, &e, &p)?;
    }
    let chi = o.chi(&p)?;
    let (n0, levels) = o.study()?;
    let st = convergence_study(&field, &chi, &p, &o.window()?, n0, levels)?;
    Ok(Output::Json(json!({
        "source": format!("{b:?}").to_lowercase(),
        "eps": o.eps()?,
        "final_order": st.final_order(),
        "study": st,
        "params": p,
    })))
}

fn verify_example(o: &Opts, which: u8) -> Result<Output, CliError> {
    let family = match which {
        2 => "greater",
        3 => "less",
        _ => "equal",
    };
    let mut o = o.clone();
    o.case.get_or_insert_with(|| family.to_string());
    let p = o.params()?;
    let c = o.four("constants", &o.constants, [0.2, -0.1, 0.3, 0.4])?;
    let fp = beamsym::FreeParams::new(
        Some(o.alpha.unwrap_or(0.6)),
        Some(o.beta.unwrap_or(0.5)),
        Some(o.gamma.unwrap_or(-0.3)),
    );
    let ex = example_solution(which, c, &fp, &p)?;
    let chi = o.chi(&p)?;
    let (n0, levels) = o.study()?;
    let w = o.window()?;
    let verdict = check_example(&ex, &chi, &p, &w, n0, levels)?;
    let table = convergence_study(&ex.corrected, &chi, &p, &w, n0, levels)?;
    Ok(Output::Json(json!({
        "source": format!("example-{which}"),
        "free_params": fp,
        "constants": c,
        "verdict": verdict,
        "study": table,
        "params": p,
    })))
}

pub fn reduce_cmd(o: &Opts) -> Result<Output, CliError> {
    let row_s = o
        .row
        .as_deref()
        .ok_or_else(|| CliError::config("row", "required, e.g. greater/C"))?;
    let row = RowRef::parse(row_s, o.family_hint())?;
    let mut o = o.clone();
    o.case.get_or_insert_with(|| row.family.name().to_string());
    let p = o.params()?;
    let spec = ansatz_with(row, &o.free_params(), &p, o.transcription())?;
    let chi = o.chi(&p)?;
    let ics = o.four("ics", &o.ics, [0.1, -0.2, 0.3, 0.1])?;
    let (n0, levels) = o.study()?;
    let rep = verify_row(&spec, &chi, ics, &o.window()?, o.step()?, n0, levels)?;
    Ok(Output::Json(json!({
        "ics": ics,
        "free_params": o.free_params(),
        "final_order": rep.study.final_order(),
        "report": rep,
        "params": p,
    })))
}

pub fn catalog_cmd() -> Result<Output, CliError> {
    let v: Value = serde_json::from_str(beamsym::reduction::catalog_json())
        .map_err(|e| CliError::Output(e.to_string()))?;
    Ok(Output::Json(v))
}
