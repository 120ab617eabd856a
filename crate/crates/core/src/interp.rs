//! Interpolants used to turn sampled data back into smooth fields.

use nalgebra::{DMatrix, DVector, Dyn, LU};

/// Not-a-knot cubic spline second derivatives on a uniform grid, factored once
/// per grid length.
struct SplineSolver {
    lu: LU<f64, Dyn, Dyn>,
    h: f64,
}

impl SplineSolver {
    fn new(n: usize, h: f64) -> Self {
        assert!(n >= 4, "spline needs at least 4 nodes");
        let mut a = DMatrix::zeros(n, n);
        a[(0, 0)] = 1.0;
        a[(0, 1)] = -2.0;
        a[(0, 2)] = 1.0;
        for i in 1..n - 1 {
            a[(i, i - 1)] = 1.0;
            a[(i, i)] = 4.0;
            a[(i, i + 1)] = 1.0;
        }
        a[(n - 1, n - 3)] = 1.0;
        a[(n - 1, n - 2)] = -2.0;
        a[(n - 1, n - 1)] = 1.0;
        SplineSolver { lu: a.lu(), h }
    }

    fn second_derivs(&self, y: &[f64]) -> Vec<f64> {
        let n = y.len();
        let c = 6.0 / (self.h * self.h);
        let rhs = DVector::from_fn(n, |i, _| {
            if i == 0 || i == n - 1 {
                0.0
            } else {
                c * (y[i - 1] - 2.0 * y[i] + y[i + 1])
            }
        });
        self.lu
            .solve(&rhs)
            .expect("spline matrix is nonsingular")
            .as_slice()
            .to_vec()
    }
}

/// Cell index and the four cubic-spline weights `(A, B, C, D)`.
fn weights(u: f64, n: usize, h: f64) -> (usize, [f64; 4]) {
    let s = u / h;
    let j = (s.floor().max(0.0) as usize).min(n - 2);
    let b = s - j as f64;
    let a = 1.0 - b;
    let h2 = h * h / 6.0;
    (j, [a, b, (a * a * a - a) * h2, (b * b * b - b) * h2])
}

/// Tensor-product cubic spline through row-major samples `f[i * nx + j]`.
#[derive(Debug, Clone)]
pub struct Bicubic {
    t0: f64,
    x0: f64,
    ht: f64,
    hx: f64,
    nt: usize,
    nx: usize,
    f: Vec<f64>,
    fxx: Vec<f64>,
    ftt: Vec<f64>,
    fttxx: Vec<f64>,
}

impl Bicubic {
    pub fn new(t0: f64, t1: f64, x0: f64, x1: f64, nt: usize, nx: usize, f: &[f64]) -> Self {
        assert_eq!(f.len(), nt * nx);
        let ht = (t1 - t0) / (nt - 1) as f64;
        let hx = (x1 - x0) / (nx - 1) as f64;
        let sx = SplineSolver::new(nx, hx);
        let st = SplineSolver::new(nt, ht);
        let along_x = |g: &[f64]| -> Vec<f64> {
            g.chunks(nx).flat_map(|row| sx.second_derivs(row)).collect()
        };
        let fxx = along_x(f);
        let mut ftt = vec![0.0; nt * nx];
        let mut col = vec![0.0; nt];
        for j in 0..nx {
            for i in 0..nt {
                col[i] = f[i * nx + j];
            }
            for (i, v) in st.second_derivs(&col).into_iter().enumerate() {
                ftt[i * nx + j] = v;
            }
        }
        let fttxx = along_x(&ftt);
        Bicubic {
            t0,
            x0,
            ht,
            hx,
            nt,
            nx,
            f: f.to_vec(),
            fxx,
            ftt,
            fttxx,
        }
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        let (i, wt) = weights(t - self.t0, self.nt, self.ht);
        let (j, wx) = weights(x - self.x0, self.nx, self.hx);
        let sx = |v: &[f64], vxx: &[f64], r: usize| {
            let k = r * self.nx + j;
            wx[0] * v[k] + wx[1] * v[k + 1] + wx[2] * vxx[k] + wx[3] * vxx[k + 1]
        };
        wt[0] * sx(&self.f, &self.fxx, i)
            + wt[1] * sx(&self.f, &self.fxx, i + 1)
            + wt[2] * sx(&self.ftt, &self.fttxx, i)
            + wt[3] * sx(&self.ftt, &self.fttxx, i + 1)
    }
}

/// Piecewise quintic Hermite interpolant from values and first two derivatives.
#[derive(Debug, Clone)]
pub struct Hermite5 {
    pub z0: f64,
    pub h: f64,
    y: Vec<f64>,
    dy: Vec<f64>,
    ddy: Vec<f64>,
}

impl Hermite5 {
    pub fn new(z0: f64, h: f64, y: Vec<f64>, dy: Vec<f64>, ddy: Vec<f64>) -> Self {
        assert!(y.len() >= 2 && y.len() == dy.len() && y.len() == ddy.len());
        Hermite5 { z0, h, y, dy, ddy }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.z0, self.z0 + self.h * (self.y.len() - 1) as f64)
    }

    pub fn eval(&self, z: f64) -> f64 {
        let s = (z - self.z0) / self.h;
        let i = (s.floor().max(0.0) as usize).min(self.y.len() - 2);
        let u = s - i as f64;
        let (u2, u3) = (u * u, u * u * u);
        let (u4, u5) = (u3 * u, u3 * u2);
        let h00 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
        let h10 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
        let h20 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
        let h01 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
        let h11 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
        let h21 = 0.5 * (u3 - 2.0 * u4 + u5);
        let h = self.h;
        h00 * self.y[i]
            + h * h10 * self.dy[i]
            + h * h * h20 * self.ddy[i]
            + h01 * self.y[i + 1]
            + h * h11 * self.dy[i + 1]
            + h * h * h21 * self.ddy[i + 1]
    }
}
