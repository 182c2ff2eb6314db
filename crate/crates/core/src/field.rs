//! Uniform space-time grids and sampled fields on them.

use serde::Serialize;

use crate::error::{Error, Result};

/// Samples `u(x_i, t_j)` on `(nx + 1) x (nt + 1)` uniform nodes of `[0, L] x [0, T]`,
/// stored time-row by time-row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field {
    length: f64,
    horizon: f64,
    nx: usize,
    nt: usize,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(length: f64, horizon: f64, nx: usize, nt: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0 && horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Grid(format!(
                "length and horizon must be positive, got L={length}, T={horizon}"
            )));
        }
        if nx < 2 || nt < 1 {
            return Err(Error::Grid(format!("need nx >= 2 and nt >= 1, got nx={nx}, nt={nt}")));
        }
        Ok(Self {
            length,
            horizon,
            nx,
            nt,
            values: vec![0.0; (nx + 1) * (nt + 1)],
        })
    }

    pub fn from_fn(length: f64, horizon: f64, nx: usize, nt: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut field = Self::zeros(length, horizon, nx, nt)?;
        for j in 0..=nt {
            let t = field.t(j);
            for i in 0..=nx {
                let x = field.x(i);
                field.values[j * (nx + 1) + i] = f(x, t);
            }
        }
        Ok(field)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn dx(&self) -> f64 {
        self.length / self.nx as f64
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.nt as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.nx {
            self.length
        } else {
            i as f64 * self.dx()
        }
    }

    pub fn t(&self, j: usize) -> f64 {
        if j == self.nt {
            self.horizon
        } else {
            j as f64 * self.dt()
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.nx + 1) + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[j * (self.nx + 1) + i] = v;
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let w = self.nx + 1;
        &self.values[j * w..(j + 1) * w]
    }

    pub fn row_mut(&mut self, j: usize) -> &mut [f64] {
        let w = self.nx + 1;
        &mut self.values[j * w..(j + 1) * w]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Time series at spatial node `i`.
    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..=self.nt).map(|j| self.get(i, j)).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn same_grid(&self, other: &Field) -> bool {
        self.nx == other.nx
            && self.nt == other.nt
            && (self.length - other.length).abs() <= 1e-12 * self.length
            && (self.horizon - other.horizon).abs() <= 1e-12 * self.horizon
    }

    /// Bilinear interpolation; arguments are clamped to the grid.
    pub fn interpolate(&self, x: f64, t: f64) -> f64 {
        let fx = (x / self.dx()).clamp(0.0, self.nx as f64);
        let ft = (t / self.dt()).clamp(0.0, self.nt as f64);
        let i = (fx.floor() as usize).min(self.nx - 1);
        let j = (ft.floor() as usize).min(self.nt - 1);
        let (rx, rt) = (fx - i as f64, ft - j as f64);
        let lo = (1.0 - rx) * self.get(i, j) + rx * self.get(i + 1, j);
        let hi = (1.0 - rx) * self.get(i, j + 1) + rx * self.get(i + 1, j + 1);
        (1.0 - rt) * lo + rt * hi
    }

    /// This field sampled on the grid of `target` (same domain required).
    pub fn resample_like(&self, target: &Field) -> Result<Field> {
        if (self.length - target.length).abs() > 1e-12 * self.length
            || (self.horizon - target.horizon).abs() > 1e-12 * self.horizon
        {
            return Err(Error::Grid(format!(
                "domains differ: [0,{}]x[0,{}] vs [0,{}]x[0,{}]",
                self.length, self.horizon, target.length, target.horizon
            )));
        }
        Field::from_fn(target.length, target.horizon, target.nx, target.nt, |x, t| {
            self.interpolate(x, t)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_and_interpolation() {
        let f = Field::from_fn(2.0, 1.0, 4, 5, |x, t| 3.0 * x - t).unwrap();
        assert_eq!(f.row(0).len(), 5);
        assert_eq!(f.get(4, 5), 5.0);
        assert!((f.interpolate(0.3, 0.55) - (0.9 - 0.55)).abs() < 1e-14);
        assert!(Field::zeros(1.0, 1.0, 1, 1).is_err());
    }

    #[test]
    fn resampling_preserves_linear_fields() {
        let f = Field::from_fn(1.0, 2.0, 10, 10, |x, t| x + 2.0 * t).unwrap();
        let g = Field::zeros(1.0, 2.0, 7, 3).unwrap();
        let r = f.resample_like(&g).unwrap();
        for j in 0..=3 {
            for i in 0..=7 {
                assert!((r.get(i, j) - (r.x(i) + 2.0 * r.t(j))).abs() < 1e-13);
            }
        }
    }
}
