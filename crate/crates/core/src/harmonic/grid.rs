use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flat cylinder `[0, L] x (R / 2 pi Z)` sampled at `nx` axial and
/// `ntheta` angular nodes. Both ends of `[0, L]` are nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderGrid {
    pub length: f64,
    pub nx: usize,
    pub ntheta: usize,
}

impl CylinderGrid {
    pub fn new(length: f64, nx: usize, ntheta: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidInput(format!("cylinder length {length} must be positive")));
        }
        if nx < 8 || ntheta < 16 {
            return Err(Error::InvalidInput(format!(
                "resolution {nx}x{ntheta} below the minimum 8x16"
            )));
        }
        Ok(Self { length, nx, ntheta })
    }

    pub fn hx(&self) -> f64 {
        self.length / (self.nx - 1) as f64
    }

    pub fn htheta(&self) -> f64 {
        2.0 * PI / self.ntheta as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.htheta()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ntheta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ntheta + j
    }

    /// Same spacing, twice the length: `2 nx - 1` nodes on `[0, 2L]`.
    pub fn doubled(&self) -> Self {
        Self {
            length: 2.0 * self.length,
            nx: 2 * self.nx - 1,
            ntheta: self.ntheta,
        }
    }

    pub fn check_samples(&self, what: &str, f: &[f64]) -> Result<()> {
        if f.len() != self.ntheta {
            return Err(Error::GridMismatch(format!(
                "{what} has {} samples, grid has ntheta = {}",
                f.len(),
                self.ntheta
            )));
        }
        Ok(())
    }
}

/// Boundary data as a trigonometric polynomial
/// `constant + sum a_n cos(n theta) + sum b_n sin(n theta)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryData {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub cos: Vec<(u32, f64)>,
    #[serde(default)]
    pub sin: Vec<(u32, f64)>,
}

impl BoundaryData {
    pub fn cos_mode(n: u32, amplitude: f64) -> Self {
        Self {
            cos: vec![(n, amplitude)],
            ..Self::default()
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.constant
            + self.cos.iter().map(|&(n, a)| a * (n as f64 * theta).cos()).sum::<f64>()
            + self.sin.iter().map(|&(n, b)| b * (n as f64 * theta).sin()).sum::<f64>()
    }

    pub fn sample(&self, ntheta: usize) -> Vec<f64> {
        let h = 2.0 * PI / ntheta as f64;
        (0..ntheta).map(|j| self.eval(j as f64 * h)).collect()
    }
}

pub fn mean(f: &[f64]) -> f64 {
    f.iter().sum::<f64>() / f.len() as f64
}

pub fn sup_norm(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |m, v| m.max(v.abs()))
}
