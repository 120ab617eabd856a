//! One-dimensional optimal systems: walk the case tree, normalize with the
//! composed adjoint and return the canonical representative.
//!
//! Every leaf carries two ε-recipes. The `printed` recipe is the reference
//! formula as typeset (undeclared `γ` and `b` read as `â` and `b̂`); the
//! `derived` recipe is solved by hand from the conjugacy
//! system. The printed recipe is used when it reproduces the derived
//! canonical form, otherwise the derived one is, and the outcome is kept in
//! [`FormulaAudit`].

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::adjoint::{adjoint_composed, EpsilonVector};
use crate::algebra::{AlgebraElement, DIM};
use crate::error::{Error, Result};
use crate::params::{CaseParams, Family};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const CONJUGACY_TOL: f64 = 1e-8;

/// Class label `X^n` within one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassId {
    pub family: Family,
    pub index: usize,
}

impl ClassId {
    pub fn new(family: Family, index: usize) -> Result<Self> {
        if index == 0 || index > class_count(family) {
            return Err(Error::invalid(
                "class",
                format!(
                    "{family} has classes X1..X{}, got X{index}",
                    class_count(family)
                ),
            ));
        }
        Ok(ClassId { family, index })
    }

    pub fn label(&self) -> String {
        format!("X{}", self.index)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.index)
    }
}

pub fn class_count(family: Family) -> usize {
    match family {
        Family::Equal => 14,
        Family::Greater => 20,
        Family::Less => 10,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FreeParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<f64>,
}

impl FreeParams {
    pub fn new(alpha: Option<f64>, beta: Option<f64>, gamma: Option<f64>) -> Self {
        FreeParams { alpha, beta, gamma }
    }

    fn get(&self, s: Slot) -> Option<f64> {
        match s {
            Slot::Alpha => self.alpha,
            Slot::Beta => self.beta,
            Slot::Gamma => self.gamma,
            Slot::One => Some(1.0),
            Slot::MinusOne => Some(-1.0),
        }
    }

    fn set(&mut self, s: Slot, v: f64) {
        match s {
            Slot::Alpha => self.alpha = Some(v),
            Slot::Beta => self.beta = Some(v),
            Slot::Gamma => self.gamma = Some(v),
            _ => {}
        }
    }

    /// Largest deviation, relative to `max(1, |other|)`; `inf` if shapes differ.
    pub fn max_dev(&self, other: &FreeParams) -> f64 {
        let mut m: f64 = 0.0;
        for (a, b) in [
            (self.alpha, other.alpha),
            (self.beta, other.beta),
            (self.gamma, other.gamma),
        ] {
            match (a, b) {
                (None, None) => {}
                (Some(x), Some(y)) => m = m.max((x - y).abs() / y.abs().max(1.0)),
                _ => return f64::INFINITY,
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    One,
    MinusOne,
    Alpha,
    Beta,
    Gamma,
}

use Slot::{Alpha as A, Beta as B, Gamma as G, MinusOne as M, One as I};

struct Template {
    terms: &'static [(usize, Slot)],
    nonzero: &'static [Slot],
}

const fn t(terms: &'static [(usize, Slot)], nonzero: &'static [Slot]) -> Template {
    Template { terms, nonzero }
}

static EQUAL: [Template; 14] = [
    t(&[(1, I), (2, A), (6, B)], &[B]),
    t(&[(1, I), (2, A), (4, B)], &[]),
    t(&[(2, I), (6, A), (7, B), (8, G)], &[A]),
    t(&[(2, I), (5, A), (8, B)], &[B]),
    t(&[(2, A), (5, B), (7, I)], &[A]),
    t(&[(2, I), (5, A)], &[]),
    t(&[(3, A), (6, I), (7, B), (8, G)], &[]),
    t(&[(4, A), (5, I), (8, B)], &[B]),
    t(&[(4, A), (5, B), (7, I)], &[B]),
    t(&[(4, A), (5, I)], &[]),
    t(&[(4, I), (7, A), (8, B)], &[]),
    t(&[(3, A), (8, I)], &[]),
    t(&[(3, A), (7, I)], &[]),
    t(&[(3, I)], &[]),
];

static GREATER: [Template; 20] = [
    t(&[(1, I), (2, A), (6, B)], &[B]),
    t(&[(1, I), (2, A), (4, B)], &[]),
    t(&[(2, I), (6, A), (7, B), (8, G)], &[A]),
    t(&[(2, I), (5, A), (7, B)], &[B]),
    t(&[(2, I), (5, A), (8, B)], &[B]),
    t(&[(2, A), (5, B), (7, I), (8, I)], &[A]),
    t(&[(2, A), (5, B), (7, I), (8, M)], &[A]),
    t(&[(2, I), (5, A)], &[]),
    t(&[(3, A), (6, I), (7, B), (8, G)], &[]),
    t(&[(4, A), (5, I), (7, B)], &[B]),
    t(&[(4, A), (5, I), (8, B)], &[B]),
    t(&[(4, A), (5, B), (7, I), (8, I)], &[B]),
    t(&[(4, A), (5, B), (7, I), (8, M)], &[B]),
    t(&[(4, A), (5, I)], &[]),
    t(&[(4, I), (7, A), (8, B)], &[]),
    t(&[(3, A), (7, I)], &[]),
    t(&[(3, A), (8, I)], &[]),
    t(&[(3, A), (7, I), (8, I)], &[]),
    t(&[(3, A), (7, I), (8, M)], &[]),
    t(&[(3, I)], &[]),
];

static LESS: [Template; 10] = [
    t(&[(1, I), (2, A), (6, B)], &[B]),
    t(&[(1, I), (2, A), (4, B)], &[]),
    t(&[(2, I), (6, A), (7, B), (8, G)], &[A]),
    t(&[(2, I), (5, A), (7, B), (8, G)], &[]),
    t(&[(3, A), (6, I), (7, B), (8, G)], &[]),
    t(&[(4, I), (5, A), (7, B), (8, G)], &[]),
    t(&[(5, I), (8, A)], &[A]),
    t(&[(5, I), (7, A)], &[]),
    t(&[(3, A), (8, I)], &[]),
    t(&[(3, A), (7, B)], &[]),
];

fn template(id: ClassId) -> &'static Template {
    match id.family {
        Family::Equal => &EQUAL[id.index - 1],
        Family::Greater => &GREATER[id.index - 1],
        Family::Less => &LESS[id.index - 1],
    }
}

/// Human-readable generator of a class, e.g. `X2 + αX6 + βX7 + γX8`.
pub fn class_formula(id: ClassId) -> String {
    let mut out = String::new();
    for (n, &(basis, slot)) in template(id).terms.iter().enumerate() {
        let (sign, coef) = match slot {
            Slot::One => ("+", ""),
            Slot::MinusOne => ("-", ""),
            Slot::Alpha => ("+", "α"),
            Slot::Beta => ("+", "β"),
            Slot::Gamma => ("+", "γ"),
        };
        if n == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&format!("{coef}X{basis}"));
    }
    out
}

/// Parameter names that must be nonzero for a class.
pub fn class_nonzero(id: ClassId) -> Vec<&'static str> {
    template(id)
        .nonzero
        .iter()
        .map(|s| match s {
            Slot::Alpha => "alpha",
            Slot::Beta => "beta",
            _ => "gamma",
        })
        .collect()
}

/// Literal coefficient vector of a class for the given free parameters.
pub fn representative(id: ClassId, fp: &FreeParams, tol: f64) -> Result<AlgebraElement> {
    let tpl = template(id);
    let mut a = [0.0; DIM];
    for &(basis, slot) in tpl.terms {
        let v = fp.get(slot).ok_or_else(|| Error::ConstraintViolation {
            class: id.label(),
            detail: format!("missing {:?}", slot).to_lowercase(),
        })?;
        a[basis - 1] = v;
    }
    for &s in tpl.nonzero {
        let v = fp.get(s).unwrap_or(0.0);
        if v.abs() <= tol {
            return Err(Error::ConstraintViolation {
                class: id.label(),
                detail: format!(
                    "{} must be nonzero, got {v}",
                    format!("{s:?}").to_lowercase()
                ),
            });
        }
    }
    Ok(AlgebraElement(a))
}

/// How the printed ε-recipe of a leaf fared against the derived one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FormulaAudit {
    /// Same canonical parameters.
    Confirmed,
    /// A valid conjugate, but with different (non-canonical) parameters.
    Renormalized { printed: FreeParams },
    /// Wrong zero pattern (`max_dev`) or non-finite output (`None`).
    Discrepancy { max_dev: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub class_id: ClassId,
    pub free_params: FreeParams,
    pub eps: EpsilonVector,
    pub scale: f64,
    pub leaf_path: Vec<String>,
    pub audit: FormulaAudit,
    /// `scale · (a·A(eps))`.
    pub image: AlgebraElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyReport {
    pub max_rel_error: f64,
    /// 1-based coefficient index of the largest error.
    pub worst_index: usize,
    pub pass: bool,
}

struct Walk {
    leaf: usize,
    path: Vec<String>,
}

/// Zero tests, judged blockwise: `X3, X7, X8` span an ideal, and the action
/// on the quotient coordinates never sees it, so each block gets a band
/// relative to its own size.
struct Zero<'a> {
    a: &'a [f64; DIM],
    quotient: f64,
    ideal: f64,
}

const IDEAL: [usize; 3] = [3, 7, 8];

impl<'a> Zero<'a> {
    fn new(a: &'a [f64; DIM], tol: f64) -> Self {
        let (mut q, mut r) = (0.0f64, 0.0f64);
        for (i, v) in a.iter().enumerate() {
            if IDEAL.contains(&(i + 1)) {
                r = r.max(v.abs());
            } else {
                q = q.max(v.abs());
            }
        }
        Zero {
            a,
            quotient: tol * q,
            ideal: tol * r,
        }
    }
    fn z(&self, i: usize) -> bool {
        let band = if IDEAL.contains(&i) {
            self.ideal
        } else {
            self.quotient
        };
        self.a[i - 1].abs() <= band
    }
    /// For combinations of ideal coordinates.
    fn zv(&self, v: f64) -> bool {
        v.abs() <= self.ideal
    }
}

fn p(s: &str) -> String {
    s.to_string()
}

fn walk(family: Family, a: &[f64; DIM], zt: &Zero) -> Walk {
    let mut path = Vec::new();
    let step = |path: &mut Vec<String>, i: usize| -> bool {
        let z = zt.z(i);
        path.push(format!("a{i}{}", if z { "=0" } else { "!=0" }));
        z
    };
    let u = a[6] + a[7];
    let v = a[6] - a[7];
    let ratio = |path: &mut Vec<String>, base: usize| -> usize {
        if !zt.zv(u) {
            path.push(p("a7+a8!=0"));
            if zt.zv(v) {
                path.push(p("(a7-a8)/(a7+a8)=0"));
                base + 2
            } else if u * v > 0.0 {
                path.push(p("(a7-a8)/(a7+a8)>0"));
                base
            } else {
                path.push(p("(a7-a8)/(a7+a8)<0"));
                base + 1
            }
        } else {
            path.push(p("a7+a8=0"));
            if !zt.z(8) {
                path.push(p("a8!=0"));
                base + 3
            } else {
                path.push(p("a8=0"));
                base + 4
            }
        }
    };
    let leaf = match family {
        Family::Equal => {
            if !step(&mut path, 1) {
                if !step(&mut path, 6) {
                    1
                } else {
                    2
                }
            } else if !step(&mut path, 2) {
                if !step(&mut path, 6) {
                    3
                } else if !step(&mut path, 8) {
                    4
                } else if !step(&mut path, 7) {
                    5
                } else {
                    6
                }
            } else if !step(&mut path, 6) {
                7
            } else if !step(&mut path, 5) {
                if !step(&mut path, 8) {
                    8
                } else if !step(&mut path, 7) {
                    9
                } else {
                    10
                }
            } else if !step(&mut path, 4) {
                11
            } else if !step(&mut path, 8) {
                12
            } else if !step(&mut path, 7) {
                13
            } else {
                14
            }
        }
        Family::Greater => {
            if !step(&mut path, 1) {
                if !step(&mut path, 6) {
                    1
                } else {
                    2
                }
            } else if !step(&mut path, 2) {
                if !step(&mut path, 6) {
                    3
                } else {
                    ratio(&mut path, 4)
                }
            } else if !step(&mut path, 6) {
                9
            } else if !step(&mut path, 5) {
                ratio(&mut path, 10)
            } else if !step(&mut path, 4) {
                15
            } else {
                ratio(&mut path, 16)
            }
        }
        Family::Less => {
            if !step(&mut path, 1) {
                if !step(&mut path, 6) {
                    1
                } else {
                    2
                }
            } else if !step(&mut path, 2) {
                if !step(&mut path, 6) {
                    3
                } else {
                    4
                }
            } else if !step(&mut path, 6) {
                5
            } else if !step(&mut path, 4) {
                6
            } else if !step(&mut path, 5) {
                if !step(&mut path, 8) {
                    7
                } else {
                    8
                }
            } else if !step(&mut path, 8) {
                9
            } else {
                10
            }
        }
    };
    Walk { leaf, path }
}

type Eps = [f64; DIM];

fn eps_of(pairs: &[(usize, f64)]) -> Eps {
    let mut e = [0.0; DIM];
    for &(i, v) in pairs {
        e[i - 1] = v;
    }
    e
}

/// ln|x/y|, or 0 when `y` is flagged zero.
fn lnr(x: f64, y: f64, y_zero: bool) -> f64 {
    if y_zero {
        0.0
    } else {
        (x / y).abs().ln()
    }
}

fn printed_eps(family: Family, leaf: usize, a: &[f64; DIM], p: &CaseParams) -> Eps {
    let [a1, a2, a3, a4, a5, a6, a7, a8] = *a;
    let (ah, bh) = (p.a_hat, p.b_hat);
    match family {
        Family::Equal => {
            let g = ah;
            match leaf {
                1 => eps_of(&[
                    (2, (a2 * a5 - a1 * a4) / (a1 * a6)),
                    (4, (a1 * a3 * a6 - a1 * a4 * a5 - a2 * a5) / (a1 * a1 * a6)),
                    (6, a5 / a1),
                    (7, -(g * a7 + a8) / (g * g * a1 * a1)),
                    (8, -a8 / (g * a1)),
                ]),
                2 => eps_of(&[
                    (4, a3 / a1),
                    (6, a5 / a1),
                    (7, -(g * a7 + a8) / (g * g * a1)),
                    (8, -a8 / (g * a1)),
                ]),
                3 => eps_of(&[
                    (1, -a5 / a6),
                    (5, (a3 * a6 - a4 * a5) / (a2 * a6)),
                    (6, a4 / a2),
                ]),
                4 => eps_of(&[
                    (1, -a7 / a8),
                    (5, (a3 * a8 - a4 * a7) / (a2 * a8)),
                    (6, a4 / a2),
                ]),
                5 => {
                    let l = a7.abs().ln();
                    eps_of(&[(1, l / g), (5, (a4 / g * l + a7) / a2), (6, a4 / a2)])
                }
                6 => eps_of(&[(5, a3 / a2), (6, a4 / a2)]),
                7 => eps_of(&[(1, -a5 / a6), (2, -a4 / a6)]),
                8 => eps_of(&[(1, -a7 / a8), (2, (a4 * a7 - a3 * a8) / (a5 * a8))]),
                9 => {
                    let l = a7.abs().ln();
                    eps_of(&[(1, l / g), (2, -a4 / (g * a5) * l - a3 / a7)])
                }
                10 => eps_of(&[(2, -a3 / a5)]),
                11 => eps_of(&[(1, -a3 / a4)]),
                12 => eps_of(&[(1, -a7 / a8)]),
                13 => eps_of(&[(1, a7.abs().ln() / g)]),
                _ => [0.0; DIM],
            }
        }
        Family::Greater => {
            let lp = ((a7 - a8) / (a7 + a8)).ln();
            let lm = (-(a7 - a8) / (a7 + a8)).ln();
            let l8 = a8.abs().ln();
            let e78 = |den: f64| {
                [
                    (7, -(ah * a7 + bh * a8) / (den * a1)),
                    (8, -(bh * a7 + ah * a8) / (den * a1)),
                ]
            };
            match leaf {
                1 => {
                    let [x7, x8] = e78(ah - bh);
                    eps_of(&[
                        (2, (a2 * a5 - a1 * a4) / (a1 * a6)),
                        (
                            4,
                            (a1 * a3 * a6 - a1 * a4 * a5 + a2 * a5 * a5) / (a1 * a1 * a6),
                        ),
                        (6, a5 / a1),
                        x7,
                        x8,
                    ])
                }
                2 => {
                    let [x7, x8] = e78(ah - bh);
                    eps_of(&[(4, a3 / a1), (6, a5 / a1), x7, x8])
                }
                3 => eps_of(&[
                    (1, -a5 / a6),
                    (5, (a3 * a6 - a4 * a5) / (a2 * a6)),
                    (6, a4 / a2),
                ]),
                4 => eps_of(&[
                    (1, lp / (2.0 * bh)),
                    (5, a4 / (2.0 * bh * a2) * lp + a3 / a2),
                    (6, a4 / a2),
                ]),
                5 => eps_of(&[
                    (1, lm / (2.0 * bh)),
                    (5, a4 / (2.0 * bh * a2) * lm + a3 / a2),
                    (6, a4 / a2),
                ]),
                6 => eps_of(&[
                    (1, l8 / (ah - bh)),
                    (5, a4 / ((ah - bh) * a2) * l8 + a3 / a2),
                    (6, a4 / a2),
                ]),
                7 => eps_of(&[
                    (1, l8 / (ah + bh)),
                    (5, a4 / ((ah + bh) * a2) * l8 + a3 / a2),
                    (6, a4 / a2),
                ]),
                8 => eps_of(&[(5, a3 / a2), (6, a4 / a2)]),
                9 => eps_of(&[(1, -a5 / a6), (2, -a4 / a6)]),
                10 => eps_of(&[
                    (1, lp / (2.0 * bh)),
                    (2, a4 / (2.0 * bh * a5) * lp + a3 / a5),
                ]),
                11 => eps_of(&[
                    (1, lm / (2.0 * bh)),
                    (2, -a4 / (2.0 * bh * a5) * lm - a3 / a5),
                ]),
                12 => eps_of(&[
                    (1, l8 / (ah - bh)),
                    (2, -a4 / ((ah - bh) * a5) * l8 - a3 / a5),
                ]),
                13 => eps_of(&[
                    (1, l8 / (ah + bh)),
                    (2, a4 / ((ah + bh) * a5) * l8 + a3 / a5),
                ]),
                14 => eps_of(&[(2, -a3 / a5)]),
                15 => eps_of(&[(1, -a3 / a4)]),
                16 => eps_of(&[(1, lp / (2.0 * bh))]),
                17 => eps_of(&[(1, lm / (2.0 * bh))]),
                18 => eps_of(&[(1, l8 / (ah - bh))]),
                19 => eps_of(&[(1, l8 / (ah + bh))]),
                _ => [0.0; DIM],
            }
        }
        Family::Less => {
            let den = ah * ah + bh * bh;
            match leaf {
                1 => {
                    let e = (a5 * ah / a6).exp();
                    let (s, c) = (a5 * bh / a6).sin_cos();
                    let p7 = ah * a7 + bh * a8;
                    let q8 = ah * a8 - bh * a7;
                    eps_of(&[
                        (1, -a5 / a6),
                        (2, -a4 / a6),
                        (4, (a3 * a6 - a4 * a5) / (a1 * a6)),
                        (7, e * (q8 * s - p7 * c) / (a1 * den)),
                        (8, -e * (p7 * s + q8 * c) / (a1 * den)),
                    ])
                }
                2 => eps_of(&[
                    (4, a3 / a1),
                    (6, a5 / a1),
                    (7, -(ah * a7 + bh * a8) / (a1 * den)),
                    (8, -(ah * a8 - bh * a7) / (a1 * den)),
                ]),
                3 => eps_of(&[
                    (1, -a5 / a6),
                    (5, (a3 * a6 - a4 * a5) / (a2 * a6)),
                    (6, a4 / a2),
                ]),
                4 => eps_of(&[(5, a3 / a2), (6, a4 / a2)]),
                5 => eps_of(&[(1, -a5 / a6), (2, -a4 / a6)]),
                6 => eps_of(&[(1, -a3 / a4)]),
                7 => eps_of(&[(1, -(a7 / a8).atan() / bh), (2, -a3 / a5)]),
                8 => eps_of(&[(2, -a3 / a5)]),
                9 => eps_of(&[(1, -(a7 / a8).atan() / bh)]),
                _ => [0.0; DIM],
            }
        }
    }
}

fn derived_eps(family: Family, leaf: usize, a: &[f64; DIM], p: &CaseParams, zt: &Zero) -> Eps {
    let [a1, a2, a3, a4, a5, a6, a7, a8] = *a;
    let (ah, bh) = (p.a_hat, p.b_hat);
    // a1 != 0, a6 != 0: eliminate a5 with ε6, a4 with ε2, a3 with ε4
    let lead6 = |x7: (usize, f64), x8: (usize, f64)| {
        eps_of(&[
            (2, (a2 * a5 - a1 * a4) / (a1 * a6)),
            (
                4,
                (a1 * a3 * a6 - a1 * a4 * a5 + a2 * a5 * a5) / (a1 * a1 * a6),
            ),
            (6, a5 / a1),
            x7,
            x8,
        ])
    };
    let lead0 = |x7: (usize, f64), x8: (usize, f64)| eps_of(&[(4, a3 / a1), (6, a5 / a1), x7, x8]);
    // a1 = 0, a2 != 0, a6 = 0 with ε1 chosen: kill a3 via ε5, a4 via ε6
    let via2 = |e1: f64| eps_of(&[(1, e1), (5, (a3 + e1 * a4) / a2), (6, a4 / a2)]);
    // a1 = a2 = a6 = 0, a5 != 0 with ε1 chosen: kill a3 via ε2
    let via5 = |e1: f64| eps_of(&[(1, e1), (2, -(a3 + e1 * a4) / a5)]);
    match family {
        Family::Equal => {
            let x7 = (7, -(ah * a7 + a8) / (ah * ah * a1));
            let x8 = (8, -a8 / (ah * a1));
            match leaf {
                1 => lead6(x7, x8),
                2 => lead0(x7, x8),
                3 => via2(-a5 / a6),
                4 => via2(-a7 / a8),
                5 => via2(lnr(a7, a2, false) / ah),
                6 => via2(0.0),
                7 => eps_of(&[(1, -a5 / a6), (2, -a4 / a6)]),
                8 => via5(-a7 / a8),
                9 => via5(lnr(a7, a5, false) / ah),
                10 => via5(0.0),
                11 => eps_of(&[(1, -a3 / a4)]),
                12 => eps_of(&[(1, -a7 / a8)]),
                13 => eps_of(&[(1, lnr(a7, a3, zt.z(3)) / ah)]),
                _ => [0.0; DIM],
            }
        }
        Family::Greater => {
            let den = ah * ah - bh * bh;
            let x7 = (7, -(ah * a7 + bh * a8) / (den * a1));
            let x8 = (8, -(bh * a7 + ah * a8) / (den * a1));
            let (u, v) = (a7 + a8, a7 - a8);
            let rp = (v / u).ln() / (2.0 * bh);
            let rm = (-v / u).ln() / (2.0 * bh);
            let sm = |r: f64, z: bool| lnr(a8, r, z) / (ah - bh);
            let sp = |r: f64, z: bool| lnr(a8, r, z) / (ah + bh);
            match leaf {
                1 => lead6(x7, x8),
                2 => lead0(x7, x8),
                3 => via2(-a5 / a6),
                4 => via2(rp),
                5 => via2(rm),
                6 => via2(sm(a2, false)),
                7 => via2(sp(a2, false)),
                8 => via2(0.0),
                9 => eps_of(&[(1, -a5 / a6), (2, -a4 / a6)]),
                10 => via5(rp),
                11 => via5(rm),
                12 => via5(sm(a5, false)),
                13 => via5(sp(a5, false)),
                14 => via5(0.0),
                15 => eps_of(&[(1, -a3 / a4)]),
                16 => eps_of(&[(1, rp)]),
                17 => eps_of(&[(1, rm)]),
                18 => eps_of(&[(1, sm(a3, zt.z(3)))]),
                19 => eps_of(&[(1, sp(a3, zt.z(3)))]),
                _ => [0.0; DIM],
            }
        }
        Family::Less => {
            let den = ah * ah + bh * bh;
            let x7 = (7, -(ah * a7 + bh * a8) / (a1 * den));
            let x8 = (8, -(ah * a8 - bh * a7) / (a1 * den));
            let rot = -(a7 / a8).atan() / bh;
            match leaf {
                1 => lead6(x7, x8),
                2 => lead0(x7, x8),
                3 => via2(-a5 / a6),
                4 => via2(0.0),
                5 => eps_of(&[(1, -a5 / a6), (2, -a4 / a6)]),
                6 => eps_of(&[(1, -a3 / a4)]),
                7 => via5(rot),
                8 => via5(0.0),
                9 => eps_of(&[(1, rot)]),
                _ => [0.0; DIM],
            }
        }
    }
}

struct Normalized {
    params: FreeParams,
    scale: f64,
    image: AlgebraElement,
    pattern_error: f64,
}

/// Apply `eps`, scale the unit coefficient to +1 and read off the parameters.
fn normalize(
    id: ClassId,
    a: &AlgebraElement,
    eps: &Eps,
    p: &CaseParams,
    band: f64,
) -> Option<Normalized> {
    if eps.iter().any(|e| !e.is_finite()) {
        return None;
    }
    let img = adjoint_composed(&EpsilonVector(*eps), p).apply(a);
    if img.0.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let tpl = template(id);
    let unit = match tpl.terms.iter().find(|(_, s)| *s == Slot::One) {
        Some(&(b, _)) => b,
        // αX3 + βX7: β = 1 when X7 survives, else α = 1
        None => {
            if img[6].abs() > band {
                7
            } else {
                3
            }
        }
    };
    let u = img[unit - 1];
    if u == 0.0 || !u.is_finite() {
        return None;
    }
    let scale = 1.0 / u;
    let image = img * scale;
    let mut params = FreeParams::default();
    for &(b, s) in tpl.terms {
        params.set(s, image[b - 1]);
    }
    if tpl.terms.iter().all(|(_, s)| *s != Slot::One) {
        if unit == 7 {
            params.beta = Some(1.0);
        } else {
            params.alpha = Some(1.0);
            params.beta = Some(0.0);
        }
    }
    let rep = build(tpl, &params);
    let pattern_error = rel_error(&image, &rep).0;
    Some(Normalized {
        params,
        scale,
        image,
        pattern_error,
    })
}

fn build(tpl: &Template, fp: &FreeParams) -> AlgebraElement {
    let mut a = [0.0; DIM];
    for &(b, s) in tpl.terms {
        a[b - 1] = fp.get(s).unwrap_or(0.0);
    }
    AlgebraElement(a)
}

fn rel_error(x: &AlgebraElement, r: &AlgebraElement) -> (f64, usize) {
    let n = r.norm_inf().max(f64::MIN_POSITIVE);
    let mut worst = (0.0, 1);
    for i in 0..DIM {
        let e = (x[i] - r[i]).abs() / n;
        if e.is_nan() || e > worst.0 {
            worst = (e, i + 1);
        }
    }
    worst
}

/// Map `a` to its optimal-system representative.
pub fn classify(a: &AlgebraElement, p: &CaseParams, tol: f64) -> Result<ClassificationResult> {
    if a.0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("element", "non-finite coefficient"));
    }
    let norm = a.norm_inf();
    if norm <= tol {
        return Err(Error::ZeroElement);
    }
    let band = tol * norm;
    let family = p.family();
    let zt = Zero::new(&a.0, tol);
    let w = walk(family, &a.0, &zt);
    let id = ClassId {
        family,
        index: w.leaf,
    };

    let degenerate = |detail: String| Error::NumericalDegeneracy {
        case: format!("{family} case {}", w.leaf),
        detail,
    };
    let deps = derived_eps(family, w.leaf, &a.0, p, &zt);
    let derived = normalize(id, a, &deps, p, band)
        .ok_or_else(|| degenerate(format!("non-finite normalization, eps = {deps:?}")))?;
    if derived.pattern_error > CONJUGACY_TOL {
        return Err(degenerate(format!(
            "normalized image misses the class pattern by {:e}",
            derived.pattern_error
        )));
    }

    let peps = printed_eps(family, w.leaf, &a.0, p);
    let (audit, chosen) = match normalize(id, a, &peps, p, band) {
        None => (FormulaAudit::Discrepancy { max_dev: None }, None),
        Some(n) if n.pattern_error > CONJUGACY_TOL => (
            FormulaAudit::Discrepancy {
                max_dev: Some(n.pattern_error),
            },
            None,
        ),
        Some(n) => {
            if n.params.max_dev(&derived.params) <= CONJUGACY_TOL {
                (FormulaAudit::Confirmed, Some(n))
            } else {
                (FormulaAudit::Renormalized { printed: n.params }, None)
            }
        }
    };
    let (eps, n) = match chosen {
        Some(n) => (peps, n),
        None => (deps, derived),
    };
    Ok(ClassificationResult {
        class_id: id,
        free_params: n.params,
        eps: EpsilonVector(eps),
        scale: n.scale,
        leaf_path: w.path,
        audit,
        image: n.image,
    })
}

/// Check `scale · (a·A(eps))` against the class representative.
pub fn verify_conjugacy(
    a: &AlgebraElement,
    r: &ClassificationResult,
    p: &CaseParams,
) -> ConjugacyReport {
    let img = adjoint_composed(&r.eps, p).apply(a) * r.scale;
    let rep = build(template(r.class_id), &r.free_params);
    let (e, i) = rel_error(&img, &rep);
    ConjugacyReport {
        max_rel_error: e,
        worst_index: i,
        pass: e <= CONJUGACY_TOL,
    }
}
