use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::special::omega;

/// The ellipsoid `A B^n`, for an invertible `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    a: DMatrix<f64>,
    a_inv: DMatrix<f64>,
    det: f64,
}

impl Ellipsoid {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() || a.nrows() < 2 {
            return invalid("ellipsoid matrix must be square of size >= 2");
        }
        let det = a.determinant();
        let scale = a.iter().map(|v| v.abs()).fold(0.0, f64::max).powi(a.nrows() as i32);
        if !(det.abs() > 1e-12 * scale.max(1e-300)) {
            return invalid("ellipsoid matrix is singular");
        }
        let a_inv = a.clone().try_inverse().ok_or_else(|| {
            crate::error::Error::InvalidArgument("ellipsoid matrix is singular".into())
        })?;
        Ok(Ellipsoid { a, a_inv, det })
    }

    pub fn ball(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim)).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// `|A^T xi|`.
    pub fn support(&self, xi: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for j in 0..n {
            let mut v = 0.0;
            for i in 0..n {
                v += self.a[(i, j)] * xi[i];
            }
            s += v * v;
        }
        s.sqrt()
    }

    fn inv_apply(&self, x: &[f64]) -> [f64; 3] {
        let n = self.dim();
        let mut out = [0.0; 3];
        for i in 0..n {
            let mut v = 0.0;
            for j in 0..n {
                v += self.a_inv[(i, j)] * x[j];
            }
            out[i] = v;
        }
        out
    }

    /// `|A^{-1} x|`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        let y = self.inv_apply(x);
        y.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn radial(&self, u: &[f64]) -> f64 {
        1.0 / self.gauge(u)
    }

    /// `A^{-T} A^{-1} x / |A^{-1} x|`.
    pub fn gauge_gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let y = self.inv_apply(x);
        let g = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if g == 0.0 {
            return vec![0.0; n];
        }
        (0..n)
            .map(|j| (0..n).map(|i| self.a_inv[(i, j)] * y[i]).sum::<f64>() / g)
            .collect()
    }

    pub fn volume(&self) -> f64 {
        self.det.abs() * omega(self.dim() as i64).expect("dimension is positive")
    }

    pub fn map(&self, m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m * &self.a)
    }
}
