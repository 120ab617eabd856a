//! Solution fields `(φ, ψ)` over the `(t, x)` plane.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Rectangle `[t0, t1] x [x0, x1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub t0: f64,
    pub t1: f64,
    pub x0: f64,
    pub x1: f64,
}

impl Window {
    pub fn new(t0: f64, t1: f64, x0: f64, x1: f64) -> Result<Self> {
        if ![t0, t1, x0, x1].iter().all(|v| v.is_finite()) || t1 <= t0 || x1 <= x0 {
            return Err(Error::invalid(
                "window",
                format!("need t0 < t1 and x0 < x1, got [{t0}, {t1}] x [{x0}, {x1}]"),
            ));
        }
        Ok(Window { t0, t1, x0, x1 })
    }

    pub fn unit() -> Self {
        Window {
            t0: 0.0,
            t1: 1.0,
            x0: 0.0,
            x1: 1.0,
        }
    }

    pub fn contains(&self, other: &Window) -> bool {
        let slack = 1e-12 * (1.0 + self.t1.abs().max(self.x1.abs()));
        other.t0 >= self.t0 - slack
            && other.t1 <= self.t1 + slack
            && other.x0 >= self.x0 - slack
            && other.x1 <= self.x1 + slack
    }

    pub fn shifted(&self, dt: f64, dx: f64) -> Window {
        Window {
            t0: self.t0 + dt,
            t1: self.t1 + dt,
            x0: self.x0 + dx,
            x1: self.x1 + dx,
        }
    }

    pub fn exceeded(&self) -> Error {
        Error::WindowExceeded {
            t0: self.t0,
            t1: self.t1,
            x0: self.x0,
            x1: self.x1,
        }
    }
}

/// Where a field came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm {
        id: String,
    },
    Lifted {
        row: String,
    },
    GridInterpolant,
    Transformed {
        base: Box<Provenance>,
    },
    Scaled {
        base: Box<Provenance>,
    },
    Sum {
        left: Box<Provenance>,
        right: Box<Provenance>,
    },
}

pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A pair of fields with an optional domain of validity.
#[derive(Clone)]
pub struct SolutionField {
    pub phi: ScalarFn,
    pub psi: ScalarFn,
    /// `None` means evaluable everywhere.
    pub domain: Option<Window>,
    pub provenance: Provenance,
    /// Interpolated fields need a wider residual margin.
    pub interpolated: bool,
}

impl fmt::Debug for SolutionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionField")
            .field("domain", &self.domain)
            .field("provenance", &self.provenance)
            .field("interpolated", &self.interpolated)
            .finish()
    }
}

impl SolutionField {
    pub fn closed_form<F, G>(id: &str, phi: F, psi: G) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        SolutionField {
            phi: Arc::new(phi),
            psi: Arc::new(psi),
            domain: None,
            provenance: Provenance::ClosedForm { id: id.to_string() },
            interpolated: false,
        }
    }

    pub fn eval(&self, t: f64, x: f64) -> (f64, f64) {
        ((self.phi)(t, x), (self.psi)(t, x))
    }

    pub fn check_window(&self, w: &Window) -> Result<()> {
        match &self.domain {
            Some(d) if !d.contains(w) => Err(w.exceeded()),
            _ => Ok(()),
        }
    }

    /// Pointwise sum, used for superposition checks.
    pub fn add(&self, other: &SolutionField) -> SolutionField {
        let (p1, p2, q1, q2) = (
            self.phi.clone(),
            other.phi.clone(),
            self.psi.clone(),
            other.psi.clone(),
        );
        let domain = match (self.domain, other.domain) {
            (None, d) | (d, None) => d,
            (Some(a), Some(b)) => Some(Window {
                t0: a.t0.max(b.t0),
                t1: a.t1.min(b.t1),
                x0: a.x0.max(b.x0),
                x1: a.x1.min(b.x1),
            }),
        };
        SolutionField {
            phi: Arc::new(move |t, x| p1(t, x) + p2(t, x)),
            psi: Arc::new(move |t, x| q1(t, x) + q2(t, x)),
            domain,
            provenance: Provenance::Sum {
                left: Box::new(self.provenance.clone()),
                right: Box::new(other.provenance.clone()),
            },
            interpolated: self.interpolated || other.interpolated,
        }
    }
}
