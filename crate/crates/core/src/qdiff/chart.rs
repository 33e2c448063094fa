use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Local coordinate `t = (a z + b) / (c z + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl Mobius {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(Error::InvalidInput("degenerate Möbius chart (ad - bc = 0)".into()));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: one(),
            b: zero(),
            c: zero(),
            d: one(),
        }
    }

    /// `t = z - p`.
    pub fn translate_to_origin(p: C64) -> Self {
        Self {
            a: one(),
            b: -p,
            c: zero(),
            d: one(),
        }
    }

    /// `t = 1 / z`.
    pub fn inversion() -> Self {
        Self {
            a: zero(),
            b: one(),
            c: one(),
            d: zero(),
        }
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn to_chart(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn from_chart(&self, t: C64) -> C64 {
        (self.d * t - self.b) / (self.a - self.c * t)
    }

    /// Derivative of the inverse map.
    pub fn dz_dt(&self, t: C64) -> C64 {
        let den = self.a - self.c * t;
        self.det() / (den * den)
    }

    /// Where the point at infinity lands in the chart (`a/c`, or infinity).
    pub fn image_of_infinity(&self) -> C64 {
        if self.c.norm() == 0.0 {
            C64::new(f64::INFINITY, 0.0)
        } else {
            self.a / self.c
        }
    }

    /// Whether the chart sends the given sphere point to `t = 0`.
    pub fn centres(&self, at: super::PoleLocation) -> bool {
        match at {
            super::PoleLocation::Infinity => self.a.norm() == 0.0,
            super::PoleLocation::Finite(p) => {
                let v = self.a * p + self.b;
                let w = self.c * p + self.d;
                v.norm() <= 1e-12 * (1.0 + self.a.norm() * p.norm() + self.b.norm()) && w.norm() > 0.0
            }
        }
    }
}
