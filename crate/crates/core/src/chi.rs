//! Constitutive law `χ(ψ_x)` for the rotational moment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChiSpec {
    /// `χ(s) = b s + offset`
    Linear { b: f64, offset: f64 },
    /// `χ(s) = b s + c3 s^3`
    Cubic { b: f64, c3: f64 },
}

impl ChiSpec {
    pub fn linear(b: f64) -> Self {
        ChiSpec::Linear { b, offset: 0.0 }
    }

    pub fn cubic(b: f64, c3: f64) -> Self {
        ChiSpec::Cubic { b, c3 }
    }

    pub fn validate(&self) -> Result<()> {
        let (b, other) = match *self {
            ChiSpec::Linear { b, offset } => (b, offset),
            ChiSpec::Cubic { b, c3 } => (b, c3),
        };
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::invalid(
                "b",
                format!("χ'(0) must be positive, got {b}"),
            ));
        }
        if !other.is_finite() {
            return Err(Error::invalid("chi", "non-finite coefficient"));
        }
        Ok(())
    }

    pub fn value(&self, s: f64) -> f64 {
        match *self {
            ChiSpec::Linear { b, offset } => b * s + offset,
            ChiSpec::Cubic { b, c3 } => b * s + c3 * s * s * s,
        }
    }

    pub fn d1(&self, s: f64) -> f64 {
        match *self {
            ChiSpec::Linear { b, .. } => b,
            ChiSpec::Cubic { b, c3 } => b + 3.0 * c3 * s * s,
        }
    }

    pub fn d2(&self, s: f64) -> f64 {
        match *self {
            ChiSpec::Linear { .. } => 0.0,
            ChiSpec::Cubic { c3, .. } => 6.0 * c3 * s,
        }
    }

    /// Linear with zero offset, the setting of the scaling symmetry.
    pub fn is_homogeneous_linear(&self) -> bool {
        matches!(*self, ChiSpec::Linear { offset, .. } if offset == 0.0)
    }
}
