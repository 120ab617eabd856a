//! Finite-difference residuals of the beam system on uniform grids.
//!
//! ```text
//! r1 = ρ1 φ_tt - k (φ_xx + ψ_x)
//! r2 = ρ2 ψ_tt - χ'(ψ_x) ψ_xx + k (φ_x + ψ) + d ψ_t
//! ```

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::chi::ChiSpec;
use crate::error::{Error, Result};
use crate::field::{Provenance, SolutionField, Window};
use crate::interp::Bicubic;
use crate::params::CaseParams;

pub const MIN_POINTS: usize = 5;

/// Residual levels below this are treated as roundoff.
pub const EXACT_FLOOR: f64 = 1e-9;

/// Samples of `(φ, ψ)`, row-major in `t` then `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub window: Window,
    pub nt: usize,
    pub nx: usize,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    /// Boundary cells excluded from residual norms.
    pub margin: usize,
}

/// Window and sizes stored next to a CSV grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub t0: f64,
    pub t1: f64,
    pub x0: f64,
    pub x1: f64,
    pub nt: usize,
    pub nx: usize,
}

impl GridSolution {
    pub fn new(window: Window, nt: usize, nx: usize, phi: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        if nt < MIN_POINTS || nx < MIN_POINTS {
            return Err(Error::GridTooCoarse(format!(
                "{nt} x {nx}, need at least {MIN_POINTS} per axis"
            )));
        }
        if phi.len() != nt * nx || psi.len() != nt * nx {
            return Err(Error::invalid(
                "grid",
                format!("expected {} values per field", nt * nx),
            ));
        }
        if let Some(k) = phi.iter().chain(&psi).position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "grid",
                format!("non-finite entry at flat index {}", k % (nt * nx)),
            ));
        }
        Ok(GridSolution {
            window,
            nt,
            nx,
            phi,
            psi,
            margin: 1,
        })
    }

    pub fn ht(&self) -> f64 {
        (self.window.t1 - self.window.t0) / (self.nt - 1) as f64
    }

    pub fn hx(&self) -> f64 {
        (self.window.x1 - self.window.x0) / (self.nx - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        self.window.t0 + i as f64 * self.ht()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.window.x0 + j as f64 * self.hx()
    }

    pub fn meta(&self) -> GridMeta {
        let w = self.window;
        GridMeta {
            t0: w.t0,
            t1: w.t1,
            x0: w.x0,
            x1: w.x1,
            nt: self.nt,
            nx: self.nx,
        }
    }

    /// Bicubic spline interpolant over the grid window.
    pub fn to_field(&self) -> SolutionField {
        let w = self.window;
        let p = Bicubic::new(w.t0, w.t1, w.x0, w.x1, self.nt, self.nx, &self.phi);
        let q = Bicubic::new(w.t0, w.t1, w.x0, w.x1, self.nt, self.nx, &self.psi);
        SolutionField {
            phi: Arc::new(move |t, x| p.eval(t, x)),
            psi: Arc::new(move |t, x| q.eval(t, x)),
            domain: Some(w),
            provenance: Provenance::GridInterpolant,
            interpolated: true,
        }
    }

    /// CSV with header `t,x,phi,psi`; metadata goes to [`sidecar_path`].
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
        w.write_record(["t", "x", "phi", "psi"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for i in 0..self.nt {
            for j in 0..self.nx {
                let k = i * self.nx + j;
                let rec =
                    [self.t(i), self.x(j), self.phi[k], self.psi[k]].map(|v| format!("{v:.17e}"));
                w.write_record(&rec).map_err(|e| Error::Io(e.to_string()))?;
            }
        }
        w.flush()?;
        let meta =
            serde_json::to_string_pretty(&self.meta()).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::File::create(sidecar_path(path))?.write_all(meta.as_bytes())?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let meta_text = std::fs::read_to_string(sidecar_path(path))?;
        let m: GridMeta = serde_json::from_str(&meta_text)
            .map_err(|e| Error::Parse(format!("grid metadata: {e}")))?;
        let window = Window::new(m.t0, m.t1, m.x0, m.x1)?;
        let mut r = csv::Reader::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
        let header = r
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .clone();
        if header.iter().map(str::trim).collect::<Vec<_>>() != ["t", "x", "phi", "psi"] {
            return Err(Error::Parse(format!(
                "expected header t,x,phi,psi, got {:?}",
                header
            )));
        }
        let (mut phi, mut psi) = (Vec::new(), Vec::new());
        let ht = (m.t1 - m.t0) / (m.nt.max(2) - 1) as f64;
        let hx = (m.x1 - m.x0) / (m.nx.max(2) - 1) as f64;
        for (n, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", n + 2)))?;
            if vals.len() != 4 {
                return Err(Error::Parse(format!("row {}: expected 4 columns", n + 2)));
            }
            let (i, j) = (n / m.nx.max(1), n % m.nx.max(1));
            let (te, xe) = (m.t0 + i as f64 * ht, m.x0 + j as f64 * hx);
            if (vals[0] - te).abs() > 1e-9 * (1.0 + te.abs())
                || (vals[1] - xe).abs() > 1e-9 * (1.0 + xe.abs())
            {
                return Err(Error::Parse(format!(
                    "row {}: coordinates ({}, {}) do not match the grid ({te}, {xe})",
                    n + 2,
                    vals[0],
                    vals[1]
                )));
            }
            phi.push(vals[2]);
            psi.push(vals[3]);
        }
        GridSolution::new(window, m.nt, m.nx, phi, psi)
    }
}

/// `grid.csv` → `grid.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Norms of both residual equations over interior points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub eq1_max: f64,
    pub eq1_l2: f64,
    pub eq2_max: f64,
    pub eq2_l2: f64,
    pub h_t: f64,
    pub h_x: f64,
    pub margin: usize,
    pub nt: usize,
    pub nx: usize,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.eq1_max.max(self.eq2_max)
    }
}

fn par_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Evaluate a field on a uniform grid over `window`.
pub fn sample(
    field: &SolutionField,
    window: &Window,
    nt: usize,
    nx: usize,
) -> Result<GridSolution> {
    if nt < MIN_POINTS || nx < MIN_POINTS {
        return Err(Error::GridTooCoarse(format!(
            "{nt} x {nx}, need at least {MIN_POINTS} per axis"
        )));
    }
    field.check_window(window)?;
    let ht = (window.t1 - window.t0) / (nt - 1) as f64;
    let hx = (window.x1 - window.x0) / (nx - 1) as f64;
    let rows = par_map(nt, |i| {
        let t = window.t0 + i as f64 * ht;
        (0..nx)
            .map(|j| field.eval(t, window.x0 + j as f64 * hx))
            .collect::<Vec<_>>()
    });
    let (phi, psi): (Vec<f64>, Vec<f64>) = rows.into_iter().flatten().unzip();
    if phi.iter().chain(&psi).any(|v| !v.is_finite()) {
        return Err(Error::NumericalDegeneracy {
            case: "sample".into(),
            detail: "field produced a non-finite value on the window".into(),
        });
    }
    let mut g = GridSolution::new(*window, nt, nx, phi, psi)?;
    g.margin = if field.interpolated { 2 } else { 1 };
    Ok(g)
}

/// Sum with pairwise splitting, independent of thread count.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Pointwise residuals at interior nodes, row-major.
pub fn residual_fields(
    g: &GridSolution,
    chi: &ChiSpec,
    p: &CaseParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    chi.validate()?;
    let m = g.margin.max(1);
    if g.nt < 2 * m + 1 || g.nx < 2 * m + 1 {
        return Err(Error::GridTooCoarse(format!(
            "{} x {} leaves no interior points with margin {m}",
            g.nt, g.nx
        )));
    }
    let (ht, hx) = (g.ht(), g.hx());
    let nx = g.nx;
    let at = |f: &[f64], i: usize, j: usize| f[i * nx + j];
    let rows = par_map(g.nt - 2 * m, |r| {
        let i = r + m;
        let mut out = Vec::with_capacity(nx - 2 * m);
        for j in m..nx - m {
            let (f, s) = (&g.phi, &g.psi);
            let f_tt = (at(f, i + 1, j) - 2.0 * at(f, i, j) + at(f, i - 1, j)) / (ht * ht);
            let f_xx = (at(f, i, j + 1) - 2.0 * at(f, i, j) + at(f, i, j - 1)) / (hx * hx);
            let f_x = (at(f, i, j + 1) - at(f, i, j - 1)) / (2.0 * hx);
            let s_tt = (at(s, i + 1, j) - 2.0 * at(s, i, j) + at(s, i - 1, j)) / (ht * ht);
            let s_t = (at(s, i + 1, j) - at(s, i - 1, j)) / (2.0 * ht);
            let s_xx = (at(s, i, j + 1) - 2.0 * at(s, i, j) + at(s, i, j - 1)) / (hx * hx);
            let s_x = (at(s, i, j + 1) - at(s, i, j - 1)) / (2.0 * hx);
            let r1 = p.rho1 * f_tt - p.k * (f_xx + s_x);
            let r2 = p.rho2 * s_tt - chi.d1(s_x) * s_xx + p.k * (f_x + at(s, i, j)) + p.d * s_t;
            out.push((r1, r2));
        }
        out
    });
    Ok(rows.into_iter().flatten().unzip())
}

pub fn pde_residual(g: &GridSolution, chi: &ChiSpec, p: &CaseParams) -> Result<ResidualReport> {
    let (r1, r2) = residual_fields(g, chi, p)?;
    let norms = |r: &[f64]| {
        let max = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let sq: Vec<f64> = r.iter().map(|v| v * v).collect();
        (max, (pairwise_sum(&sq) / r.len() as f64).sqrt())
    };
    let (eq1_max, eq1_l2) = norms(&r1);
    let (eq2_max, eq2_l2) = norms(&r2);
    Ok(ResidualReport {
        eq1_max,
        eq1_l2,
        eq2_max,
        eq2_l2,
        h_t: g.ht(),
        h_x: g.hx(),
        margin: g.margin.max(1),
        nt: g.nt,
        nx: g.nx,
    })
}

/// Observed order between two refinement levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Order {
    /// Both levels at roundoff.
    Exact,
    Observed(f64),
}

impl Order {
    fn between(coarse: f64, fine: f64) -> Order {
        if coarse <= EXACT_FLOOR && fine <= EXACT_FLOOR {
            Order::Exact
        } else {
            Order::Observed((coarse / fine).log2())
        }
    }

    pub fn at_least(&self, q: f64) -> bool {
        match self {
            Order::Exact => true,
            Order::Observed(v) => *v >= q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelOrders {
    pub eq1_max: Order,
    pub eq1_l2: Order,
    pub eq2_max: Order,
    pub eq2_l2: Order,
}

impl LevelOrders {
    /// Order of the combined max norm.
    pub fn worst(&self) -> Order {
        let vals: Vec<f64> = [self.eq1_max, self.eq2_max]
            .iter()
            .filter_map(|o| match o {
                Order::Observed(v) => Some(*v),
                Order::Exact => None,
            })
            .collect();
        if vals.is_empty() {
            Order::Exact
        } else {
            Order::Observed(vals.into_iter().fold(f64::INFINITY, f64::min))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub reports: Vec<ResidualReport>,
    pub orders: Vec<LevelOrders>,
}

impl ConvergenceStudy {
    /// Worst observed order over the last refinement step.
    pub fn final_order(&self) -> Order {
        self.orders
            .last()
            .map(|o| o.worst())
            .unwrap_or(Order::Exact)
    }

    pub fn finest(&self) -> &ResidualReport {
        self.reports.last().expect("at least one level")
    }
}

/// Residuals on `n0`, `2 n0 - 1`, `4 n0 - 3`, … points per axis.
pub fn convergence_study(
    field: &SolutionField,
    chi: &ChiSpec,
    p: &CaseParams,
    window: &Window,
    n0: usize,
    levels: usize,
) -> Result<ConvergenceStudy> {
    if levels < 3 {
        return Err(Error::invalid(
            "levels",
            format!("need at least 3, got {levels}"),
        ));
    }
    let mut reports = Vec::with_capacity(levels);
    let mut n = n0;
    for _ in 0..levels {
        let g = sample(field, window, n, n)?;
        reports.push(pde_residual(&g, chi, p)?);
        n = 2 * (n - 1) + 1;
    }
    let orders = reports
        .windows(2)
        .map(|w| LevelOrders {
            eq1_max: Order::between(w[0].eq1_max, w[1].eq1_max),
            eq1_l2: Order::between(w[0].eq1_l2, w[1].eq1_l2),
            eq2_max: Order::between(w[0].eq2_max, w[1].eq2_max),
            eq2_l2: Order::between(w[0].eq2_l2, w[1].eq2_l2),
        })
        .collect();
    Ok(ConvergenceStudy { reports, orders })
}
