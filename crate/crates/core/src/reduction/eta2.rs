//! The auxiliary ODE `ρ2 F'' + d F' + k F = -c6 k t - c5 k` behind the
//! `∂/∂ψ` symmetries, solved in closed form.

use serde::{Deserialize, Serialize};

use crate::params::{CaseKind, CaseParams};

/// Roots of `ρ2 r² + d r + k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Roots {
    Double { r: f64 },
    Real { r1: f64, r2: f64 },
    Complex { re: f64, im: f64 },
}

pub fn characteristic_roots(p: &CaseParams) -> Roots {
    let re = -p.d / (2.0 * p.rho2);
    match p.case_kind {
        CaseKind::Equal => Roots::Double { r: re },
        CaseKind::Greater { lambda } => Roots::Real {
            r1: re + lambda / (2.0 * p.rho2),
            r2: re - lambda / (2.0 * p.rho2),
        },
        CaseKind::Less { mu } => Roots::Complex {
            re,
            im: mu / (2.0 * p.rho2),
        },
    }
}

impl Roots {
    /// Basis `(u1, u2)` and derivatives up to order 2 at `t`.
    fn basis(&self, t: f64) -> [[f64; 3]; 2] {
        match *self {
            Roots::Double { r } => {
                let e = (r * t).exp();
                [
                    [e, r * e, r * r * e],
                    [t * e, (1.0 + r * t) * e, (2.0 * r + r * r * t) * e],
                ]
            }
            Roots::Real { r1, r2 } => {
                let (e1, e2) = ((r1 * t).exp(), (r2 * t).exp());
                [[e1, r1 * e1, r1 * r1 * e1], [e2, r2 * e2, r2 * r2 * e2]]
            }
            Roots::Complex { re: a, im: b } => {
                let e = (a * t).exp();
                let (c, s) = ((b * t).cos(), (b * t).sin());
                let q = a * a - b * b;
                [
                    [e * c, e * (a * c - b * s), e * (q * c - 2.0 * a * b * s)],
                    [e * s, e * (a * s + b * c), e * (q * s + 2.0 * a * b * c)],
                ]
            }
        }
    }
}

/// `F = a1 u1 + a2 u2 + F_p` with `F_p = -c6 t - c5 + d c6 / k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eta2Solution {
    pub roots: Roots,
    pub a1: f64,
    pub a2: f64,
    pub c5: f64,
    pub c6: f64,
    pub d: f64,
    pub k: f64,
}

impl Eta2Solution {
    fn eval(&self, t: f64, order: usize) -> f64 {
        let b = self.roots.basis(t);
        let hom = self.a1 * b[0][order] + self.a2 * b[1][order];
        let part = match order {
            0 => -self.c6 * t - self.c5 + self.d * self.c6 / self.k,
            1 => -self.c6,
            _ => 0.0,
        };
        hom + part
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t, 0)
    }

    pub fn d1(&self, t: f64) -> f64 {
        self.eval(t, 1)
    }

    pub fn d2(&self, t: f64) -> f64 {
        self.eval(t, 2)
    }
}

/// Solution with `F(0) = ics[0]`, `F'(0) = ics[1]`.
pub fn solve_eta2(p: &CaseParams, c5: f64, c6: f64, ics: [f64; 2]) -> Eta2Solution {
    let roots = characteristic_roots(p);
    let h0 = ics[0] + c5 - p.d * c6 / p.k;
    let h1 = ics[1] + c6;
    let [u1, u2] = roots.basis(0.0);
    let det = u1[0] * u2[1] - u2[0] * u1[1];
    Eta2Solution {
        roots,
        a1: (h0 * u2[1] - u2[0] * h1) / det,
        a2: (u1[0] * h1 - h0 * u1[1]) / det,
        c5,
        c6,
        d: p.d,
        k: p.k,
    }
}
