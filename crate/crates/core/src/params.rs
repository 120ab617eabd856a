//! Physical constants and the damping discriminant that selects one of the
//! three symmetry algebras.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Relative band around `d^2 = 4 k rho2` treated as critical damping.
pub const CASE_BAND: f64 = 1e-9;

/// Sign of the damping discriminant `d^2 - 4 k rho2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CaseKind {
    Equal,
    Greater { lambda: f64 },
    Less { mu: f64 },
}

/// Case variant without its discriminant data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Equal,
    Greater,
    Less,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Equal, Family::Greater, Family::Less];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Equal => "equal",
            Family::Greater => "greater",
            Family::Less => "less",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "equal" => Some(Family::Equal),
            "greater" => Some(Family::Greater),
            "less" => Some(Family::Less),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl CaseKind {
    pub fn family(&self) -> Family {
        match self {
            CaseKind::Equal => Family::Equal,
            CaseKind::Greater { .. } => Family::Greater,
            CaseKind::Less { .. } => Family::Less,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseKind::Equal => "equal",
            CaseKind::Greater { .. } => "greater",
            CaseKind::Less { .. } => "less",
        }
    }

    /// Same variant, ignoring λ/μ.
    pub fn same_variant(&self, other: &CaseKind) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classify the discriminant, returning λ or μ as applicable.
pub fn case_of(rho2: f64, k: f64, d: f64) -> CaseKind {
    let d2 = d * d;
    let q = 4.0 * k * rho2;
    let disc = d2 - q;
    if disc.abs() <= CASE_BAND * d2.max(q) {
        CaseKind::Equal
    } else if disc > 0.0 {
        CaseKind::Greater {
            lambda: disc.sqrt(),
        }
    } else {
        CaseKind::Less { mu: (-disc).sqrt() }
    }
}

/// Beam constants plus the derived exponents `â`, `b̂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseParams {
    pub rho1: f64,
    pub rho2: f64,
    pub k: f64,
    pub d: f64,
    pub b: f64,
    pub case_kind: CaseKind,
    pub a_hat: f64,
    pub b_hat: f64,
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be a positive finite number, got {v}"),
        ))
    }
}

impl CaseParams {
    /// Build from an explicit damping coefficient; the case is inferred.
    pub fn from_damping(rho1: f64, rho2: f64, k: f64, d: f64, b: f64) -> Result<Self> {
        positive("rho1", rho1)?;
        positive("rho2", rho2)?;
        positive("k", k)?;
        positive("d", d)?;
        positive("b", b)?;
        let case_kind = case_of(rho2, k, d);
        Ok(Self::assemble(rho1, rho2, k, d, b, case_kind))
    }

    /// Build from a case kind; `d` is derived from λ or μ.
    pub fn from_case(rho1: f64, rho2: f64, k: f64, b: f64, case_kind: CaseKind) -> Result<Self> {
        positive("rho1", rho1)?;
        positive("rho2", rho2)?;
        positive("k", k)?;
        positive("b", b)?;
        let q = 4.0 * k * rho2;
        let d = match case_kind {
            CaseKind::Equal => q.sqrt(),
            CaseKind::Greater { lambda } => {
                positive("lambda", lambda)?;
                (q + lambda * lambda).sqrt()
            }
            CaseKind::Less { mu } => {
                positive("mu", mu)?;
                if mu * mu >= q {
                    return Err(Error::invalid(
                        "mu",
                        format!("mu^2 = {} must be below 4 k rho2 = {q}", mu * mu),
                    ));
                }
                (q - mu * mu).sqrt()
            }
        };
        Ok(Self::assemble(rho1, rho2, k, d, b, case_kind))
    }

    /// Unit constants for the requested variant (λ = μ = 1 when not given).
    pub fn unit(kind: &str) -> Result<Self> {
        let ck = match kind {
            "equal" => CaseKind::Equal,
            "greater" => CaseKind::Greater { lambda: 1.0 },
            "less" => CaseKind::Less { mu: 1.0 },
            other => return Err(Error::invalid("case", format!("unknown case `{other}`"))),
        };
        Self::from_case(1.0, 1.0, 1.0, 1.0, ck)
    }

    fn assemble(rho1: f64, rho2: f64, k: f64, d: f64, b: f64, case_kind: CaseKind) -> Self {
        let (a_hat, b_hat) = match case_kind {
            CaseKind::Equal => ((k / rho2).sqrt(), 0.0),
            CaseKind::Greater { lambda } => (d / (2.0 * rho2), lambda / (2.0 * rho2)),
            CaseKind::Less { mu } => (d / (2.0 * rho2), mu / (2.0 * rho2)),
        };
        CaseParams {
            rho1,
            rho2,
            k,
            d,
            b,
            case_kind,
            a_hat,
            b_hat,
        }
    }

    pub fn family(&self) -> Family {
        self.case_kind.family()
    }

    pub fn lambda(&self) -> f64 {
        match self.case_kind {
            CaseKind::Greater { lambda } => lambda,
            _ => 0.0,
        }
    }

    pub fn mu(&self) -> f64 {
        match self.case_kind {
            CaseKind::Less { mu } => mu,
            _ => 0.0,
        }
    }

    /// Coefficient functions of X7, X8 (solutions of `rho2 F'' + d F' + k F = 0`).
    pub fn f7(&self, t: f64) -> f64 {
        let e = (-self.a_hat * t).exp();
        match self.case_kind {
            CaseKind::Equal => e,
            CaseKind::Greater { .. } => e * (self.b_hat * t).cosh(),
            CaseKind::Less { .. } => e * (self.b_hat * t).cos(),
        }
    }

    pub fn f8(&self, t: f64) -> f64 {
        let e = (-self.a_hat * t).exp();
        match self.case_kind {
            CaseKind::Equal => t * e,
            CaseKind::Greater { .. } => e * (self.b_hat * t).sinh(),
            CaseKind::Less { .. } => e * (self.b_hat * t).sin(),
        }
    }

    /// First derivatives of `f7`, `f8`.
    pub fn df7(&self, t: f64) -> f64 {
        let (a, b) = (self.a_hat, self.b_hat);
        let e = (-a * t).exp();
        match self.case_kind {
            CaseKind::Equal => -a * e,
            CaseKind::Greater { .. } => e * (b * (b * t).sinh() - a * (b * t).cosh()),
            CaseKind::Less { .. } => -e * (b * (b * t).sin() + a * (b * t).cos()),
        }
    }

    pub fn df8(&self, t: f64) -> f64 {
        let (a, b) = (self.a_hat, self.b_hat);
        let e = (-a * t).exp();
        match self.case_kind {
            CaseKind::Equal => e * (1.0 - a * t),
            CaseKind::Greater { .. } => e * (b * (b * t).cosh() - a * (b * t).sinh()),
            CaseKind::Less { .. } => e * (b * (b * t).cos() - a * (b * t).sin()),
        }
    }

    /// Second derivatives, written out rather than taken from the ODE.
    pub fn d2f7(&self, t: f64) -> f64 {
        let (a, b) = (self.a_hat, self.b_hat);
        let e = (-a * t).exp();
        match self.case_kind {
            CaseKind::Equal => a * a * e,
            CaseKind::Greater { .. } => {
                e * ((a * a + b * b) * (b * t).cosh() - 2.0 * a * b * (b * t).sinh())
            }
            CaseKind::Less { .. } => {
                e * ((a * a - b * b) * (b * t).cos() + 2.0 * a * b * (b * t).sin())
            }
        }
    }

    pub fn d2f8(&self, t: f64) -> f64 {
        let (a, b) = (self.a_hat, self.b_hat);
        let e = (-a * t).exp();
        match self.case_kind {
            CaseKind::Equal => e * (a * a * t - 2.0 * a),
            CaseKind::Greater { .. } => {
                e * ((a * a + b * b) * (b * t).sinh() - 2.0 * a * b * (b * t).cosh())
            }
            CaseKind::Less { .. } => {
                e * ((a * a - b * b) * (b * t).sin() - 2.0 * a * b * (b * t).cos())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_trichotomy() {
        assert_eq!(case_of(1.0, 1.0, 2.0), CaseKind::Equal);
        match case_of(1.0, 1.0, 3.0) {
            CaseKind::Greater { lambda } => assert!((lambda - 5f64.sqrt()).abs() < 1e-15),
            c => panic!("{c:?}"),
        }
        match case_of(1.0, 1.0, 1.0) {
            CaseKind::Less { mu } => assert!((mu - 3f64.sqrt()).abs() < 1e-15),
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn band_absorbs_rounding() {
        let d = 2.0 * (3.7f64 * 0.42).sqrt();
        assert_eq!(case_of(0.42, 3.7, d * (1.0 + 1e-12)), CaseKind::Equal);
    }

    #[test]
    fn constructors_agree() {
        for ck in [
            CaseKind::Equal,
            CaseKind::Greater { lambda: 0.7 },
            CaseKind::Less { mu: 1.3 },
        ] {
            let p = CaseParams::from_case(1.5, 0.8, 2.0, 1.1, ck).unwrap();
            let q = CaseParams::from_damping(1.5, 0.8, 2.0, p.d, 1.1).unwrap();
            assert!(q.case_kind.same_variant(&ck));
            assert!((p.a_hat - q.a_hat).abs() < 1e-12);
            assert!((p.b_hat - q.b_hat).abs() < 1e-9);
        }
    }

    #[test]
    fn hat_identities() {
        let g =
            CaseParams::from_case(1.0, 0.6, 1.7, 1.0, CaseKind::Greater { lambda: 0.9 }).unwrap();
        assert!((g.a_hat.powi(2) - g.b_hat.powi(2) - g.k / g.rho2).abs() < 1e-12);
        let l = CaseParams::from_case(1.0, 0.6, 1.7, 1.0, CaseKind::Less { mu: 0.9 }).unwrap();
        assert!((l.a_hat.powi(2) + l.b_hat.powi(2) - l.k / l.rho2).abs() < 1e-12);
        let e = CaseParams::from_case(1.0, 0.6, 1.7, 1.0, CaseKind::Equal).unwrap();
        assert!((e.a_hat - e.d / (2.0 * e.rho2)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CaseParams::from_damping(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(CaseParams::from_case(1.0, 1.0, 1.0, 1.0, CaseKind::Less { mu: 2.0 }).is_err());
        assert!(CaseParams::from_case(1.0, 1.0, 1.0, -1.0, CaseKind::Equal).is_err());
    }

    #[test]
    fn coefficient_functions_solve_damped_oscillator() {
        for p in ["equal", "greater", "less"].map(|c| CaseParams::unit(c).unwrap()) {
            let h = 1e-4;
            for &t in &[0.0, 0.4, 1.3] {
                for f in [CaseParams::f7, CaseParams::f8] {
                    let dd = (f(&p, t + h) - 2.0 * f(&p, t) + f(&p, t - h)) / (h * h);
                    let d1 = (f(&p, t + h) - f(&p, t - h)) / (2.0 * h);
                    let r = p.rho2 * dd + p.d * d1 + p.k * f(&p, t);
                    assert!(r.abs() < 1e-6, "{} {t} {r}", p.case_kind);
                }
                let d7 = (p.f7(t + h) - p.f7(t - h)) / (2.0 * h);
                let d8 = (p.f8(t + h) - p.f8(t - h)) / (2.0 * h);
                assert!((d7 - p.df7(t)).abs() < 1e-7);
                assert!((d8 - p.df8(t)).abs() < 1e-7);
                let dd7 = (p.df7(t + h) - p.df7(t - h)) / (2.0 * h);
                let dd8 = (p.df8(t + h) - p.df8(t - h)) / (2.0 * h);
                assert!((dd7 - p.d2f7(t)).abs() < 1e-7);
                assert!((dd8 - p.d2f8(t)).abs() < 1e-7);
            }
        }
    }
}
