//! Classical fixed-step Runge–Kutta for small first-order systems.

use crate::error::{Error, Result};

pub const DEFAULT_STEP: f64 = 1e-3;

/// Integrate `y' = f(z, y)` from `z0` in `n` steps of size `h`, returning all
/// `n + 1` states.
pub fn rk4<const N: usize, F>(
    mut f: F,
    z0: f64,
    y0: [f64; N],
    h: f64,
    n: usize,
) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        let mut o = *y;
        for i in 0..N {
            o[i] += s * k[i];
        }
        o
    };
    let mut out = Vec::with_capacity(n + 1);
    out.push(y0);
    let mut y = y0;
    for step in 0..n {
        let z = z0 + step as f64 * h;
        let k1 = f(z, &y)?;
        let k2 = f(z + 0.5 * h, &axpy(&y, &k1, 0.5 * h))?;
        let k3 = f(z + 0.5 * h, &axpy(&y, &k2, 0.5 * h))?;
        let k4 = f(z + h, &axpy(&y, &k3, h))?;
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepUnstable { zeta: z + h });
        }
        out.push(y);
    }
    Ok(out)
}
