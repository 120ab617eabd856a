//! One-parameter groups `G_i(ε) = exp(ε X_i)` acting on points and on solutions.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::adjoint::EpsilonVector;
use crate::algebra::DIM;
use crate::chi::ChiSpec;
use crate::error::{Error, Result};
use crate::field::{Provenance, SolutionField};
use crate::params::{CaseKind, CaseParams};

/// A point `(t, x, φ, ψ)` of the jet base space.
pub type Point = [f64; 4];

/// Infinitesimal generator `X_i` of the active case.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorSpec {
    pub index: usize,
    pub params: CaseParams,
}

impl GeneratorSpec {
    pub fn new(index: usize, params: CaseParams) -> Result<Self> {
        if !(1..=DIM).contains(&index) {
            return Err(Error::IndexOutOfRange(index));
        }
        Ok(GeneratorSpec { index, params })
    }

    pub fn xi1(&self, _p: &Point) -> f64 {
        if self.index == 1 {
            1.0
        } else {
            0.0
        }
    }

    pub fn xi2(&self, _p: &Point) -> f64 {
        if self.index == 2 {
            1.0
        } else {
            0.0
        }
    }

    pub fn eta1(&self, p: &Point) -> f64 {
        let [t, x, _, _] = *p;
        match self.index {
            3 => 1.0,
            4 => t,
            5 => x,
            6 => t * x,
            _ => 0.0,
        }
    }

    pub fn eta2(&self, p: &Point) -> f64 {
        let t = p[0];
        let q = &self.params;
        match self.index {
            5 => -1.0,
            6 => q.d / q.k - t,
            7 => q.f7(t),
            8 => q.f8(t),
            _ => 0.0,
        }
    }

    /// `(ξ¹, ξ², η¹, η²)` at `p`.
    pub fn eval(&self, p: &Point) -> Point {
        [self.xi1(p), self.xi2(p), self.eta1(p), self.eta2(p)]
    }
}

/// Apply `G_i(ε)` to a point.
pub fn transform_point(i: usize, eps: f64, p: &Point, params: &CaseParams) -> Result<Point> {
    let [t, x, phi, psi] = *p;
    let q = params;
    Ok(match i {
        1 => [t + eps, x, phi, psi],
        2 => [t, x + eps, phi, psi],
        3 => [t, x, phi + eps, psi],
        4 => [t, x, phi + eps * t, psi],
        5 => [t, x, phi + eps * x, psi - eps],
        6 => [t, x, phi + eps * t * x, psi + eps * (q.d / q.k - t)],
        7 => [t, x, phi, psi + eps * q.f7(t)],
        8 => [t, x, phi, psi + eps * q.f8(t)],
        _ => return Err(Error::IndexOutOfRange(i)),
    })
}

/// `G8(ε8) ∘ … ∘ G1(ε1)` applied by explicit composition.
pub fn compose_point(eps: &EpsilonVector, p: &Point, params: &CaseParams) -> Point {
    let mut out = *p;
    for i in 1..=DIM {
        out = transform_point(i, eps.get(i), &out, params).expect("index in range");
    }
    out
}

/// Which transcription of the closed-form solution map to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    /// Agrees with the explicit composition of the one-parameter groups.
    Composition,
    /// Greater case exponent read literally as `-(d t + ε1) / (2 ρ2)`.
    /// Identical to `Composition` for the other two cases.
    Literal,
}

/// Additive corrections `(Δφ, Δψ)` at shifted arguments `s = t + ε1`, `y = x + ε2`.
fn corrections(
    eps: &EpsilonVector,
    t: f64,
    s: f64,
    y: f64,
    q: &CaseParams,
    reading: Reading,
) -> (f64, f64) {
    let e = |i| eps.get(i);
    let dphi = e(3) + e(4) * s + e(5) * y + e(6) * s * y;
    let hom = match (reading, q.case_kind) {
        (Reading::Literal, CaseKind::Greater { lambda }) => {
            let w = lambda * s / (2.0 * q.rho2);
            (-(q.d * t + e(1)) / (2.0 * q.rho2)).exp() * (e(7) * w.cosh() + e(8) * w.sinh())
        }
        _ => e(7) * q.f7(s) + e(8) * q.f8(s),
    };
    let dpsi = -e(6) * s - e(5) + q.d / q.k * e(6) + hom;
    (dphi, dpsi)
}

/// Closed form of the composed group on a point.
pub fn closed_form_point(eps: &EpsilonVector, p: &Point, params: &CaseParams) -> Point {
    let [t, x, phi, psi] = *p;
    let (s, y) = (t + eps.get(1), x + eps.get(2));
    let (dphi, dpsi) = corrections(eps, t, s, y, params, Reading::Composition);
    [s, y, phi + dphi, psi + dpsi]
}

/// New solution `φ(t,x) = f(t+ε1, x+ε2) + …`, `ψ(t,x) = g(t+ε1, x+ε2) + …`.
pub fn transform_solution(
    sol: &SolutionField,
    eps: &EpsilonVector,
    params: &CaseParams,
) -> Result<SolutionField> {
    transform_solution_with(sol, eps, params, Reading::Composition)
}

pub fn transform_solution_with(
    sol: &SolutionField,
    eps: &EpsilonVector,
    params: &CaseParams,
    reading: Reading,
) -> Result<SolutionField> {
    if let Some((i, v)) = eps.0.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::invalid("eps", format!("component {} is {v}", i + 1)));
    }
    let (e1, e2) = (eps.get(1), eps.get(2));
    let (f, g) = (sol.phi.clone(), sol.psi.clone());
    let (ea, eb, qa, qb) = (*eps, *eps, *params, *params);
    Ok(SolutionField {
        phi: Arc::new(move |t, x| {
            let (s, y) = (t + e1, x + e2);
            f(s, y) + corrections(&ea, t, s, y, &qa, reading).0
        }),
        psi: Arc::new(move |t, x| {
            let (s, y) = (t + e1, x + e2);
            g(s, y) + corrections(&eb, t, s, y, &qb, reading).1
        }),
        domain: sol.domain.map(|w| w.shifted(-e1, -e2)),
        provenance: Provenance::Transformed {
            base: Box::new(sol.provenance.clone()),
        },
        interpolated: sol.interpolated,
    })
}

/// Scaling `(φ, ψ) ↦ (e^ε φ, e^ε ψ)`, a symmetry only for homogeneous linear χ.
pub fn scale_solution(sol: &SolutionField, eps: f64, chi: &ChiSpec) -> Result<SolutionField> {
    if !chi.is_homogeneous_linear() {
        return Err(Error::RequiresLinearChi);
    }
    let c = eps.exp();
    let (f, g) = (sol.phi.clone(), sol.psi.clone());
    Ok(SolutionField {
        phi: Arc::new(move |t, x| c * f(t, x)),
        psi: Arc::new(move |t, x| c * g(t, x)),
        domain: sol.domain,
        provenance: Provenance::Scaled {
            base: Box::new(sol.provenance.clone()),
        },
        interpolated: sol.interpolated,
    })
}
