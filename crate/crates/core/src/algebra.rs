//! The eight-dimensional symmetry algebras: structure constants, bracket,
//! Killing form and derived series.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::params::{CaseKind, CaseParams};

pub const DIM: usize = 8;

/// Coefficient vector `(a1..a8)` over the basis `X1..X8`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraElement(pub [f64; DIM]);

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement([0.0; DIM])
    }

    /// Basis vector `X_i`, 1-based.
    pub fn basis(i: usize) -> Result<Self> {
        if !(1..=DIM).contains(&i) {
            return Err(Error::IndexOutOfRange(i));
        }
        let mut a = [0.0; DIM];
        a[i - 1] = 1.0;
        Ok(AlgebraElement(a))
    }

    /// Panicking variant of [`AlgebraElement::basis`] for literal indices.
    pub fn e(i: usize) -> Self {
        Self::basis(i).expect("basis index in 1..=8")
    }

    pub fn new(a: [f64; DIM]) -> Self {
        AlgebraElement(a)
    }

    pub fn from_slice(s: &[f64]) -> Result<Self> {
        if s.len() != DIM {
            return Err(Error::invalid(
                "element",
                format!("expected 8 coefficients, got {}", s.len()),
            ));
        }
        if let Some(v) = s.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "element",
                format!("non-finite coefficient {v}"),
            ));
        }
        let mut a = [0.0; DIM];
        a.copy_from_slice(s);
        Ok(AlgebraElement(a))
    }

    pub fn coeffs(&self) -> &[f64; DIM] {
        &self.0
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        *self * s
    }
}

impl Index<usize> for AlgebraElement {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for AlgebraElement {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for i in 0..DIM {
            self.0[i] += o.0[i];
        }
        self
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for i in 0..DIM {
            self.0[i] -= o.0[i];
        }
        self
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for AlgebraElement {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for v in &mut self.0 {
            *v *= s;
        }
        self
    }
}

/// `c[i][j][m]` is the coefficient of `X_m` in `[X_i, X_j]` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub c: [[[f64; DIM]; DIM]; DIM],
    pub case_kind: CaseKind,
}

impl StructureConstants {
    fn set(&mut self, i: usize, j: usize, terms: &[(usize, f64)]) {
        for &(m, v) in terms {
            self.c[i - 1][j - 1][m - 1] = v;
            self.c[j - 1][i - 1][m - 1] = -v;
        }
    }

    /// `[X_i, X_j]` for 1-based indices.
    pub fn bracket_basis(&self, i: usize, j: usize) -> AlgebraElement {
        AlgebraElement(self.c[i - 1][j - 1])
    }

    /// Nonzero `(i, j)` pairs with `i < j`, 1-based.
    pub fn nonzero_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..DIM {
            for j in i + 1..DIM {
                if self.c[i][j].iter().any(|v| *v != 0.0) {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }
}

pub fn structure_constants(p: &CaseParams) -> StructureConstants {
    let mut sc = StructureConstants {
        c: [[[0.0; DIM]; DIM]; DIM],
        case_kind: p.case_kind,
    };
    sc.set(1, 4, &[(3, 1.0)]);
    sc.set(1, 6, &[(5, 1.0)]);
    sc.set(2, 5, &[(3, 1.0)]);
    sc.set(2, 6, &[(4, 1.0)]);
    let (a, b) = (p.a_hat, p.b_hat);
    match p.case_kind {
        CaseKind::Equal => {
            sc.set(1, 7, &[(7, -a)]);
            sc.set(1, 8, &[(7, 1.0), (8, -a)]);
        }
        CaseKind::Greater { .. } => {
            sc.set(1, 7, &[(7, -a), (8, b)]);
            sc.set(1, 8, &[(7, b), (8, -a)]);
        }
        CaseKind::Less { .. } => {
            sc.set(1, 7, &[(7, -a), (8, -b)]);
            sc.set(1, 8, &[(7, b), (8, -a)]);
        }
    }
    sc
}

pub fn bracket(x: &AlgebraElement, y: &AlgebraElement, sc: &StructureConstants) -> AlgebraElement {
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        if x.0[i] == 0.0 {
            continue;
        }
        for j in 0..DIM {
            let w = x.0[i] * y.0[j];
            if w == 0.0 {
                continue;
            }
            for (m, o) in out.iter_mut().enumerate() {
                *o += w * sc.c[i][j][m];
            }
        }
    }
    AlgebraElement(out)
}

/// `trace(ad_x ∘ ad_y)` computed directly from the table.
pub fn killing_form(x: &AlgebraElement, y: &AlgebraElement, sc: &StructureConstants) -> f64 {
    // (ad_x ad_y)(e_m) has e_m-component sum_{i,j,n} x_i y_j c[j][m][n] c[i][n][m]
    let mut s = 0.0;
    for m in 0..DIM {
        for n in 0..DIM {
            let mut yn = 0.0;
            for j in 0..DIM {
                yn += y.0[j] * sc.c[j][m][n];
            }
            if yn == 0.0 {
                continue;
            }
            let mut xm = 0.0;
            for i in 0..DIM {
                xm += x.0[i] * sc.c[i][n][m];
            }
            s += yn * xm;
        }
    }
    s
}

/// Closed-form `K(x, x)`; it depends on `a1` only.
pub fn killing_closed_form(x: &AlgebraElement, p: &CaseParams) -> f64 {
    let a1 = x.0[0];
    let (a, b) = (p.a_hat, p.b_hat);
    match p.case_kind {
        CaseKind::Equal => 2.0 * a * a * a1 * a1,
        CaseKind::Greater { .. } => 2.0 * (a * a + b * b) * a1 * a1,
        CaseKind::Less { .. } => 2.0 * (a * a - b * b) * a1 * a1,
    }
}

/// Linear span represented by a row-echelon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Span {
    pub basis: Vec<AlgebraElement>,
}

impl Span {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Gram-Schmidt on the given vectors, dropping those within `tol` of the span.
    pub fn of(vectors: &[AlgebraElement], tol: f64) -> Self {
        let mut basis: Vec<AlgebraElement> = Vec::new();
        for v in vectors {
            let mut w = *v;
            for b in &basis {
                let dot: f64 = (0..DIM).map(|i| w.0[i] * b.0[i]).sum();
                w = w - *b * dot;
            }
            let n = (0..DIM).map(|i| w.0[i] * w.0[i]).sum::<f64>().sqrt();
            if n > tol {
                basis.push(w * (1.0 / n));
            }
        }
        Span { basis }
    }

    pub fn contains(&self, v: &AlgebraElement, tol: f64) -> bool {
        let mut w = *v;
        for b in &self.basis {
            let dot: f64 = (0..DIM).map(|i| w.0[i] * b.0[i]).sum();
            w = w - *b * dot;
        }
        w.norm_inf() <= tol
    }
}

/// Derived series `g, [g,g], ...` until it stabilizes or reaches zero.
pub fn derived_series(sc: &StructureConstants, max_steps: usize) -> Vec<Span> {
    let full: Vec<_> = (1..=DIM).map(AlgebraElement::e).collect();
    let mut series = vec![Span::of(&full, 1e-12)];
    for _ in 0..max_steps {
        let cur = series.last().unwrap();
        if cur.dim() == 0 {
            break;
        }
        let mut brackets = Vec::new();
        for (i, x) in cur.basis.iter().enumerate() {
            for y in &cur.basis[i + 1..] {
                brackets.push(bracket(x, y, sc));
            }
        }
        let next = Span::of(&brackets, 1e-12);
        let stalled = next.dim() == cur.dim();
        series.push(next);
        if stalled {
            break;
        }
    }
    series
}

pub fn is_solvable(sc: &StructureConstants) -> bool {
    derived_series(sc, DIM)
        .last()
        .map(|s| s.dim() == 0)
        .unwrap_or(false)
}
