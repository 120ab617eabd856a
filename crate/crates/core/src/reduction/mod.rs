//! Invariant reductions of the beam system to ODEs in a similarity variable.
//!
//! Each row of the reduction catalog (`data/catalog.json`) describes one
//! generator class of the optimal system by its ansatz
//! `φ = Z(ζ) + φ₀(t, x)`, `ψ = W(ζ) + ψ₀(t, x)` and the source terms of the
//! two reduced equations. Rows whose printed form fails the consistency checks
//! carry a `correction` block.

pub mod eta2;
pub mod examples;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::AlgebraElement;
use crate::chi::ChiSpec;
use crate::error::{Error, Result};
use crate::field::{Provenance, SolutionField, Window};
use crate::interp::Hermite5;
use crate::ode::rk4;
use crate::optimal::{representative, ClassId, FreeParams};
use crate::params::{CaseParams, Family};
use crate::residual::{convergence_study, ConvergenceStudy};

pub use eta2::{characteristic_roots, solve_eta2, Eta2Solution, Roots};
pub use examples::{check_example, example_solution, ExampleSolution, ExampleVerdict};

/// Leading coefficients below this magnitude abort integration.
pub const SINGULAR_TOL: f64 = 1e-8;

const CATALOG_JSON: &str = include_str!("../../data/catalog.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TFun {
    #[default]
    One,
    /// `e^{-â t}`
    Exp,
    F7,
    F8,
}

/// `coef · Π sym^pow · t^t · x^x · fn(t)`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub syms: BTreeMap<String, i32>,
    #[serde(default)]
    pub t: u32,
    #[serde(default)]
    pub x: u32,
    #[serde(default, rename = "fn")]
    pub func: TFun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzTerms {
    pub phi: Vec<Term>,
    pub psi: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedTerms {
    pub eq1: Vec<Term>,
    pub eq2: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq1: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq2: Option<Vec<Term>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZetaKind {
    /// `ζ = x - α t`
    Traveling,
    /// `ζ = t`
    Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowDescriptor {
    pub family: Family,
    pub row: String,
    /// Index of the generator class in the optimal system.
    pub class: usize,
    pub zeta: ZetaKind,
    pub uses: Vec<String>,
    pub ansatz: AnsatzTerms,
    pub reduced: ReducedTerms,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<Correction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub operators: serde_json::Value,
    pub term: String,
    pub rows: Vec<RowDescriptor>,
}

/// The parsed catalog, loaded once.
pub fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| serde_json::from_str(CATALOG_JSON).expect("shipped catalog parses"))
}

/// Raw catalog document as shipped.
pub fn catalog_json() -> &'static str {
    CATALOG_JSON
}

/// Family plus row letter, e.g. `greater/C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowRef {
    pub family: Family,
    pub row: char,
}

impl RowRef {
    pub fn new(family: Family, row: char) -> Self {
        RowRef {
            family,
            row: row.to_ascii_uppercase(),
        }
    }

    /// Accepts `C`, `greater/C` or `greater:C`; a bare letter needs `family`.
    pub fn parse(s: &str, family: Option<Family>) -> Result<Self> {
        let (fam, letter) = match s.split_once(['/', ':']) {
            Some((f, r)) => (
                Family::parse(f)
                    .ok_or_else(|| Error::invalid("row", format!("unknown case `{f}`")))?,
                r,
            ),
            None => (
                family.ok_or_else(|| Error::invalid("row", "case not given"))?,
                s,
            ),
        };
        let mut chars = letter.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => Ok(RowRef::new(fam, c)),
            _ => Err(Error::invalid(
                "row",
                format!("expected a row letter, got `{letter}`"),
            )),
        }
    }

    pub fn all() -> Vec<RowRef> {
        catalog()
            .rows
            .iter()
            .map(|r| RowRef::new(r.family, r.row.chars().next().unwrap()))
            .collect()
    }

    pub fn descriptor(&self) -> Result<&'static RowDescriptor> {
        catalog()
            .rows
            .iter()
            .find(|r| r.family == self.family && r.row.starts_with(self.row))
            .ok_or_else(|| Error::invalid("row", format!("no row {self}")))
    }
}

impl fmt::Display for RowRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.family, self.row)
    }
}

/// Which version of a catalog row to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transcription {
    Printed,
    Corrected,
}

/// A term with its symbolic coefficient evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Resolved {
    c: f64,
    t: i32,
    x: i32,
    func: TFun,
}

fn symbol(name: &str, fp: &FreeParams, p: &CaseParams, row: RowRef) -> Result<f64> {
    let need = |v: Option<f64>| {
        v.ok_or_else(|| Error::ConstraintViolation {
            class: row.to_string(),
            detail: format!("missing {name}"),
        })
    };
    Ok(match name {
        "alpha" => need(fp.alpha)?,
        "beta" => need(fp.beta)?,
        "gamma" => need(fp.gamma)?,
        "d" => p.d,
        "k" => p.k,
        "rho1" => p.rho1,
        "rho2" => p.rho2,
        "lambda" => p.lambda(),
        "mu" => p.mu(),
        other => return Err(Error::Parse(format!("unknown catalog symbol `{other}`"))),
    })
}

fn resolve(terms: &[Term], fp: &FreeParams, p: &CaseParams, row: RowRef) -> Result<Vec<Resolved>> {
    terms
        .iter()
        .map(|tm| {
            let mut c = tm.coef;
            for (s, &pow) in &tm.syms {
                c *= symbol(s, fp, p, row)?.powi(pow);
            }
            Ok(Resolved {
                c,
                t: tm.t as i32,
                x: tm.x as i32,
                func: tm.func,
            })
        })
        .collect()
}

fn eval_terms(terms: &[Resolved], p: &CaseParams, t: f64, x: f64) -> f64 {
    terms
        .iter()
        .map(|r| {
            let f = match r.func {
                TFun::One => 1.0,
                TFun::Exp => (-p.a_hat * t).exp(),
                TFun::F7 => p.f7(t),
                TFun::F8 => p.f8(t),
            };
            r.c * t.powi(r.t) * x.powi(r.x) * f
        })
        .sum()
}

/// Resolved ansatz for one row and one choice of free parameters.
#[derive(Debug, Clone)]
pub struct AnsatzSpec {
    pub row: RowRef,
    pub zeta_kind: ZetaKind,
    pub free_params: FreeParams,
    pub params: CaseParams,
    pub transcription: Transcription,
    phi: Vec<Resolved>,
    psi: Vec<Resolved>,
    eq1: Vec<Resolved>,
    eq2: Vec<Resolved>,
}

/// Ansatz with any catalog corrections applied.
pub fn ansatz(row: RowRef, fp: &FreeParams, p: &CaseParams) -> Result<AnsatzSpec> {
    ansatz_with(row, fp, p, Transcription::Corrected)
}

pub fn ansatz_with(
    row: RowRef,
    fp: &FreeParams,
    p: &CaseParams,
    tr: Transcription,
) -> Result<AnsatzSpec> {
    if row.family != p.family() {
        return Err(Error::CaseMismatch {
            expected: row.family.to_string(),
            actual: p.family().to_string(),
        });
    }
    let d = row.descriptor()?;
    let class = ClassId::new(row.family, d.class)?;
    representative(class, fp, 0.0).map_err(|e| match e {
        Error::ConstraintViolation { detail, .. } => Error::ConstraintViolation {
            class: row.to_string(),
            detail,
        },
        e => e,
    })?;
    let pick = |printed: &Vec<Term>, fix: Option<&Vec<Term>>| -> Vec<Term> {
        match (tr, fix) {
            (Transcription::Corrected, Some(f)) => f.clone(),
            _ => printed.clone(),
        }
    };
    let c = d.correction.as_ref();
    Ok(AnsatzSpec {
        row,
        zeta_kind: d.zeta,
        free_params: *fp,
        params: *p,
        transcription: tr,
        phi: resolve(
            &pick(&d.ansatz.phi, c.and_then(|c| c.phi.as_ref())),
            fp,
            p,
            row,
        )?,
        psi: resolve(
            &pick(&d.ansatz.psi, c.and_then(|c| c.psi.as_ref())),
            fp,
            p,
            row,
        )?,
        eq1: resolve(
            &pick(&d.reduced.eq1, c.and_then(|c| c.eq1.as_ref())),
            fp,
            p,
            row,
        )?,
        eq2: resolve(
            &pick(&d.reduced.eq2, c.and_then(|c| c.eq2.as_ref())),
            fp,
            p,
            row,
        )?,
    })
}

impl AnsatzSpec {
    pub fn descriptor(&self) -> &'static RowDescriptor {
        self.row.descriptor().expect("validated at construction")
    }

    /// Generator of the row's class.
    pub fn generator(&self) -> AlgebraElement {
        let class = ClassId::new(self.row.family, self.descriptor().class).expect("valid class");
        representative(class, &self.free_params, 0.0).expect("validated at construction")
    }

    fn alpha(&self) -> f64 {
        self.free_params.alpha.unwrap_or(0.0)
    }

    pub fn zeta(&self, t: f64, x: f64) -> f64 {
        match self.zeta_kind {
            ZetaKind::Traveling => x - self.alpha() * t,
            ZetaKind::Time => t,
        }
    }

    /// Range of ζ over a window; ζ is affine so the corners bound it.
    pub fn zeta_range(&self, w: &Window) -> (f64, f64) {
        let zs = [
            self.zeta(w.t0, w.x0),
            self.zeta(w.t0, w.x1),
            self.zeta(w.t1, w.x0),
            self.zeta(w.t1, w.x1),
        ];
        (
            zs.iter().copied().fold(f64::INFINITY, f64::min),
            zs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }

    pub fn phi_offset(&self, t: f64, x: f64) -> f64 {
        eval_terms(&self.phi, &self.params, t, x)
    }

    pub fn psi_offset(&self, t: f64, x: f64) -> f64 {
        eval_terms(&self.psi, &self.params, t, x)
    }

    pub fn eq1_source(&self, z: f64) -> f64 {
        eval_terms(&self.eq1, &self.params, z, 0.0)
    }

    pub fn eq2_source(&self, z: f64) -> f64 {
        eval_terms(&self.eq2, &self.params, z, 0.0)
    }

    /// Residuals of both reduced equations at one point.
    pub fn reduced_equations(
        &self,
        chi: &ChiSpec,
        z: f64,
        y: &[f64; 4],
        zpp: f64,
        wpp: f64,
    ) -> (f64, f64) {
        let p = &self.params;
        let [_, zp, w, wp] = *y;
        match self.zeta_kind {
            ZetaKind::Traveling => {
                let a = self.alpha();
                (
                    (p.k - a * a * p.rho1) * zpp + p.k * wp + self.eq1_source(z),
                    (chi.d1(wp) - a * a * p.rho2) * wpp - p.k * zp + a * p.d * wp - p.k * w
                        + self.eq2_source(z),
                )
            }
            ZetaKind::Time => (
                p.rho1 * zpp + self.eq1_source(z),
                p.rho2 * wpp + p.d * wp + p.k * w + self.eq2_source(z),
            ),
        }
    }

    /// Leading coefficients multiplying `Z''` and `W''`.
    fn leads(&self, chi: &ChiSpec, wp: f64) -> (f64, f64) {
        let p = &self.params;
        match self.zeta_kind {
            ZetaKind::Traveling => {
                let a = self.alpha();
                (p.k - a * a * p.rho1, chi.d1(wp) - a * a * p.rho2)
            }
            ZetaKind::Time => (p.rho1, p.rho2),
        }
    }

    /// `(Z'', W'')` solved from the reduced equations.
    fn second_derivs(&self, chi: &ChiSpec, z: f64, y: &[f64; 4]) -> Result<(f64, f64)> {
        let (l1, l2) = self.leads(chi, y[3]);
        if l1.abs() < SINGULAR_TOL {
            return Err(Error::SingularCoefficient {
                coefficient: "k - alpha^2 rho1",
                value: l1,
                zeta: z,
            });
        }
        if l2.abs() < SINGULAR_TOL {
            return Err(Error::SingularCoefficient {
                coefficient: "chi'(W') - alpha^2 rho2",
                value: l2,
                zeta: z,
            });
        }
        let (r1, r2) = self.reduced_equations(chi, z, y, 0.0, 0.0);
        Ok((-r1 / l1, -r2 / l2))
    }
}

/// Uniform ζ grid; initial conditions are imposed at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaGrid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl ZetaGrid {
    pub fn covering(lo: f64, hi: f64, step: f64) -> Self {
        ZetaGrid {
            start: lo,
            end: hi,
            step,
        }
    }
}

/// Samples of `Z`, `W` and their first two derivatives on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedSolution {
    pub zeta0: f64,
    pub h: f64,
    pub z: Vec<f64>,
    pub dz: Vec<f64>,
    pub ddz: Vec<f64>,
    pub w: Vec<f64>,
    pub dw: Vec<f64>,
    pub ddw: Vec<f64>,
    /// Smallest `|χ'(W') - α² ρ2|` met at the nodes (`ρ2` for ζ = t rows).
    pub min_lead: f64,
}

impl ReducedSolution {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn zeta(&self, i: usize) -> f64 {
        self.zeta0 + i as f64 * self.h
    }

    pub fn range(&self) -> (f64, f64) {
        (self.zeta0, self.zeta(self.len().saturating_sub(1)))
    }
}

/// Integrate the reduced system of a row with RK4.
pub fn solve_reduced(
    spec: &AnsatzSpec,
    chi: &ChiSpec,
    ics: [f64; 4],
    grid: &ZetaGrid,
) -> Result<ReducedSolution> {
    chi.validate()?;
    if !(grid.step > 0.0 && grid.end > grid.start)
        || ![grid.start, grid.end, grid.step]
            .iter()
            .all(|v| v.is_finite())
    {
        return Err(Error::invalid(
            "grid",
            "need start < end and a positive step",
        ));
    }
    if ics.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("ics", "non-finite initial condition"));
    }
    let n = ((grid.end - grid.start) / grid.step).ceil().max(4.0) as usize;
    let h = (grid.end - grid.start) / n as f64;
    let states = rk4(
        |z, y: &[f64; 4]| {
            let (zpp, wpp) = spec.second_derivs(chi, z, y)?;
            Ok([y[1], zpp, y[3], wpp])
        },
        grid.start,
        ics,
        h,
        n,
    )?;
    let mut red = ReducedSolution {
        zeta0: grid.start,
        h,
        z: Vec::with_capacity(n + 1),
        dz: Vec::with_capacity(n + 1),
        ddz: Vec::with_capacity(n + 1),
        w: Vec::with_capacity(n + 1),
        dw: Vec::with_capacity(n + 1),
        ddw: Vec::with_capacity(n + 1),
        min_lead: f64::INFINITY,
    };
    for (i, y) in states.iter().enumerate() {
        let z = grid.start + i as f64 * h;
        let (zpp, wpp) = spec.second_derivs(chi, z, y)?;
        red.min_lead = red.min_lead.min(spec.leads(chi, y[3]).1.abs());
        red.z.push(y[0]);
        red.dz.push(y[1]);
        red.ddz.push(zpp);
        red.w.push(y[2]);
        red.dw.push(y[3]);
        red.ddw.push(wpp);
    }
    Ok(red)
}

/// Reduced-equation residuals at interior nodes using central differences of the samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedResidual {
    pub eq1: Vec<f64>,
    pub eq2: Vec<f64>,
}

impl ReducedResidual {
    pub fn max(&self) -> f64 {
        self.eq1
            .iter()
            .chain(&self.eq2)
            .fold(0.0, |a, v| a.max(v.abs()))
    }
}

pub fn reduced_residual(
    red: &ReducedSolution,
    spec: &AnsatzSpec,
    chi: &ChiSpec,
) -> Result<ReducedResidual> {
    let n = red.len();
    if n < 5 {
        return Err(Error::GridTooCoarse(format!(
            "{n} reduced samples, need at least 5"
        )));
    }
    let h = red.h;
    let d1 = |v: &[f64], i: usize| (v[i + 1] - v[i - 1]) / (2.0 * h);
    let d2 = |v: &[f64], i: usize| (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    let (mut eq1, mut eq2) = (Vec::with_capacity(n - 2), Vec::with_capacity(n - 2));
    for i in 1..n - 1 {
        let y = [red.z[i], d1(&red.z, i), red.w[i], d1(&red.w, i)];
        let (r1, r2) = spec.reduced_equations(chi, red.zeta(i), &y, d2(&red.z, i), d2(&red.w, i));
        eq1.push(r1);
        eq2.push(r2);
    }
    Ok(ReducedResidual { eq1, eq2 })
}

/// PDE field built from the ansatz and interpolated `Z`, `W`.
pub fn lift(spec: &AnsatzSpec, red: &ReducedSolution, window: &Window) -> Result<SolutionField> {
    let (lo, hi) = red.range();
    let (zlo, zhi) = spec.zeta_range(window);
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    for z in [zlo, zhi] {
        if z < lo - slack || z > hi + slack {
            return Err(Error::RangeExceeded { zeta: z, lo, hi });
        }
    }
    let zi = Hermite5::new(
        red.zeta0,
        red.h,
        red.z.clone(),
        red.dz.clone(),
        red.ddz.clone(),
    );
    let wi = Hermite5::new(
        red.zeta0,
        red.h,
        red.w.clone(),
        red.dw.clone(),
        red.ddw.clone(),
    );
    let (s1, s2) = (Arc::new(spec.clone()), Arc::new(spec.clone()));
    Ok(SolutionField {
        phi: Arc::new(move |t, x| zi.eval(s1.zeta(t, x)) + s1.phi_offset(t, x)),
        psi: Arc::new(move |t, x| wi.eval(s2.zeta(t, x)) + s2.psi_offset(t, x)),
        domain: Some(*window),
        provenance: Provenance::Lifted {
            row: spec.row.to_string(),
        },
        interpolated: true,
    })
}

/// Outcome of solving, lifting and checking one row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub row: String,
    pub transcription: Transcription,
    pub reduced_max: f64,
    pub min_lead: f64,
    pub study: ConvergenceStudy,
}

/// Solve the reduced system over the window's ζ-range, lift, and run a
/// convergence study of the PDE residual.
#[allow(clippy::too_many_arguments)]
pub fn verify_row(
    spec: &AnsatzSpec,
    chi: &ChiSpec,
    ics: [f64; 4],
    window: &Window,
    step: f64,
    n0: usize,
    levels: usize,
) -> Result<RowReport> {
    let (lo, hi) = spec.zeta_range(window);
    let red = solve_reduced(
        spec,
        chi,
        ics,
        &ZetaGrid::covering(lo, hi.max(lo + step), step),
    )?;
    let reduced_max = reduced_residual(&red, spec, chi)?.max();
    let field = lift(spec, &red, window)?;
    let study = convergence_study(&field, chi, &spec.params, window, n0, levels)?;
    Ok(RowReport {
        row: spec.row.to_string(),
        transcription: spec.transcription,
        reduced_max,
        min_lead: red.min_lead,
        study,
    })
}
