//! Adjoint action of the symmetry group on its algebra.
//!
//! Matrices act on row vectors from the right: the image of `a` under `A`
//! is `a·A`, and row `j` of `A` holds the coefficients of the image of `X_j`.

use nalgebra::SMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{bracket, AlgebraElement, StructureConstants, DIM};
use crate::error::{Error, Result};
use crate::params::{CaseKind, CaseParams};

pub type Mat8 = SMatrix<f64, DIM, DIM>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointMatrix {
    pub m: Mat8,
}

/// Group parameters `(ε1..ε8)` of the composed adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EpsilonVector(pub [f64; DIM]);

impl EpsilonVector {
    pub fn zero() -> Self {
        EpsilonVector([0.0; DIM])
    }

    /// 1-based accessor.
    pub fn get(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    pub fn set(&mut self, i: usize, v: f64) {
        self.0[i - 1] = v;
    }

    pub fn from_slice(s: &[f64]) -> Result<Self> {
        if s.len() != DIM {
            return Err(Error::invalid(
                "eps",
                format!("expected 8 values, got {}", s.len()),
            ));
        }
        if let Some(v) = s.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("eps", format!("non-finite value {v}")));
        }
        let mut e = [0.0; DIM];
        e.copy_from_slice(s);
        Ok(EpsilonVector(e))
    }
}

impl AdjointMatrix {
    pub fn identity() -> Self {
        AdjointMatrix {
            m: Mat8::identity(),
        }
    }

    /// Entry with 1-based indices.
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.m[(row - 1, col - 1)]
    }

    /// Row-vector action `a·A`.
    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = [0.0; DIM];
        for (m, o) in out.iter_mut().enumerate() {
            *o = (0..DIM).map(|j| a.0[j] * self.m[(j, m)]).sum();
        }
        AlgebraElement(out)
    }

    /// `self` then `other`, i.e. `a·self·other`.
    pub fn then(&self, other: &AdjointMatrix) -> AdjointMatrix {
        AdjointMatrix {
            m: self.m * other.m,
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..DIM)
            .map(|r| (0..DIM).map(|c| self.m[(r, c)]).collect())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &AdjointMatrix) -> f64 {
        (self.m - other.m).abs().max()
    }
}

/// Matrix of `ad_x`: row `j` is `[x, X_j]`.
pub fn ad_matrix(x: &AlgebraElement, sc: &StructureConstants) -> AdjointMatrix {
    let mut m = Mat8::zeros();
    for j in 0..DIM {
        for mm in 0..DIM {
            m[(j, mm)] = (0..DIM).map(|i| x.0[i] * sc.c[i][j][mm]).sum();
        }
    }
    AdjointMatrix { m }
}

/// Closed form of `Ad(exp(ε X_i))`.
pub fn adjoint_single(i: usize, eps: f64, p: &CaseParams) -> Result<AdjointMatrix> {
    if !(1..=DIM).contains(&i) {
        return Err(Error::IndexOutOfRange(i));
    }
    let mut m = Mat8::identity();
    if i != 1 {
        // ad_{X_i} squares to zero for i >= 2
        let sc = crate::algebra::structure_constants(p);
        let ad = ad_matrix(&AlgebraElement::e(i), &sc);
        m -= ad.m * eps;
        return Ok(AdjointMatrix { m });
    }
    m[(3, 2)] = -eps;
    m[(5, 4)] = -eps;
    let (a, b) = (p.a_hat, p.b_hat);
    let g = (eps * a).exp();
    let block = match p.case_kind {
        CaseKind::Equal => [[g, 0.0], [-eps * g, g]],
        CaseKind::Greater { .. } => {
            let (ep, em) = ((eps * (a + b)).exp(), (eps * (a - b)).exp());
            let (c, s) = (0.5 * (ep + em), 0.5 * (ep - em));
            [[c, -s], [-s, c]]
        }
        CaseKind::Less { .. } => {
            let (c, s) = ((eps * b).cos(), (eps * b).sin());
            [[g * c, g * s], [-g * s, g * c]]
        }
    };
    for r in 0..2 {
        for c in 0..2 {
            m[(6 + r, 6 + c)] = block[r][c];
        }
    }
    Ok(AdjointMatrix { m })
}

/// Closed form of the composed adjoint matrix for the active case.
pub fn adjoint_composed(eps: &EpsilonVector, p: &CaseParams) -> AdjointMatrix {
    let e = |i: usize| eps.get(i);
    let (a, b) = (p.a_hat, p.b_hat);
    let mut m = Mat8::identity();
    m[(0, 2)] = -e(4);
    m[(0, 4)] = -e(6);
    m[(1, 2)] = -e(5);
    m[(1, 3)] = -e(6);
    m[(3, 2)] = e(1);
    m[(4, 2)] = e(2);
    m[(5, 2)] = e(1) * e(2);
    m[(5, 3)] = e(2);
    m[(5, 4)] = e(1);
    let g = (-a * e(1)).exp();
    match p.case_kind {
        CaseKind::Equal => {
            m[(0, 6)] = a * e(7) - e(8);
            m[(0, 7)] = a * e(8);
            m[(6, 6)] = g;
            m[(7, 6)] = e(1) * g;
            m[(7, 7)] = g;
        }
        CaseKind::Greater { .. } => {
            m[(0, 6)] = a * e(7) - b * e(8);
            m[(0, 7)] = a * e(8) - b * e(7);
            let em = (-e(1) * (a - b)).exp();
            let ep = (-e(1) * (a + b)).exp();
            let y1 = 0.5 * (em + ep);
            let y2 = 0.5 * (em - ep);
            m[(6, 6)] = y1;
            m[(6, 7)] = y2;
            m[(7, 6)] = y2;
            m[(7, 7)] = y1;
        }
        CaseKind::Less { .. } => {
            m[(0, 6)] = a * e(7) - b * e(8);
            m[(0, 7)] = a * e(8) + b * e(7);
            let y1 = g * (e(1) * b).cos();
            let y2 = g * (e(1) * b).sin();
            m[(6, 6)] = y1;
            m[(6, 7)] = -y2;
            m[(7, 6)] = y2;
            m[(7, 7)] = y1;
        }
    }
    AdjointMatrix { m }
}

/// Ordered product of single-generator factors: `Ad(-ε1 X1)` acts first,
/// `Ad(-ε8 X8)` last.
pub fn adjoint_product(eps: &EpsilonVector, p: &CaseParams) -> AdjointMatrix {
    let mut acc = AdjointMatrix::identity();
    for i in 1..=DIM {
        let f = adjoint_single(i, -eps.get(i), p).expect("index in range");
        acc = acc.then(&f);
    }
    acc
}

/// Truncated series `Σ_{n<terms} (-ε)^n/n! ad_x^n(y)`.
///
/// Also returns the max-norm of the first omitted term as an error estimate.
pub fn adjoint_series(
    x: &AlgebraElement,
    y: &AlgebraElement,
    eps: f64,
    terms: usize,
    sc: &StructureConstants,
) -> (AlgebraElement, f64) {
    let mut sum = AlgebraElement::zero();
    let mut term = *y;
    for n in 0..terms {
        sum = sum + term;
        term = bracket(x, &term, sc) * (-eps / (n as f64 + 1.0));
    }
    (sum, term.norm_inf())
}

/// Series oracle assembled into a matrix (row j = series image of `X_j`).
pub fn adjoint_series_matrix(
    i: usize,
    eps: f64,
    terms: usize,
    sc: &StructureConstants,
) -> Result<AdjointMatrix> {
    let x = AlgebraElement::basis(i)?;
    let mut m = Mat8::zeros();
    for j in 0..DIM {
        let (img, _) = adjoint_series(&x, &AlgebraElement::e(j + 1), eps, terms, sc);
        for c in 0..DIM {
            m[(j, c)] = img.0[c];
        }
    }
    Ok(AdjointMatrix { m })
}
