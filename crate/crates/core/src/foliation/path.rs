//! Path integrals of `sqrt(q)` and local data at zeros.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::numeric::quadrature::gauss_legendre;
use crate::qdiff::residue::continue_sqrt;
use crate::qdiff::QuadraticDifferential;

fn nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: std::sync::OnceLock<(Vec<f64>, Vec<f64>)> = std::sync::OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_legendre(20);
        (x.iter().map(|t| 0.5 * (t + 1.0)).collect(), w.iter().map(|w| 0.5 * w).collect())
    })
}

/// `\int sqrt(q) dz` along the polyline `pts`, continuing the branch from
/// `hint` (a value of `sqrt(q)` at `pts[0]`). Returns the integral and the
/// branch value at the last point.
pub fn polyline_integral(q: &QuadraticDifferential, pts: &[C64], hint: C64) -> (C64, C64) {
    let (x, w) = nodes();
    let mut s = continue_sqrt(q.eval(pts[0]), hint);
    let mut acc = C64::new(0.0, 0.0);
    for seg in pts.windows(2) {
        let d = seg[1] - seg[0];
        let mut part = C64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            s = continue_sqrt(q.eval(seg[0] + d * *xi), s);
            part += s * *wi;
        }
        s = continue_sqrt(q.eval(seg[1]), s);
        acc += part * d;
    }
    (acc, s)
}

/// `\int_{zero}^{p} sqrt(q) dz` along the chord, where `q` vanishes at
/// `zero`; `s_at_p` fixes the branch at `p`. Uses `z = zero + (p - zero) tau^2`
/// so the square-root endpoint behaviour becomes smooth.
pub fn zero_segment(q: &QuadraticDifferential, zero: C64, p: C64, s_at_p: C64) -> C64 {
    let (x, w) = nodes();
    let d = p - zero;
    let mut s = continue_sqrt(q.eval(p), s_at_p);
    let mut acc = C64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w).rev() {
        let z = zero + d * (xi * xi);
        s = continue_sqrt(q.eval(z), s);
        acc += s * (2.0 * xi * wi);
    }
    acc * d
}

/// Leading coefficient `c` of `q ~ c (z - z0)^m` at a zero of order `m`,
/// from the mean of `q(z)/(z - z0)^m` on a small circle.
pub fn zero_coefficient(q: &QuadraticDifferential, z0: C64, m: u32, r: f64) -> C64 {
    let k = 32;
    (0..k)
        .map(|j| {
            let e = C64::from_polar(r, 2.0 * PI * j as f64 / k as f64);
            q.eval(z0 + e) / e.powu(m)
        })
        .sum::<C64>()
        / k as f64
}

/// Local data at a zero: position, order, coefficient and the distance to
/// the nearest other singular point.
#[derive(Debug, Clone, Copy)]
pub struct ZeroData {
    pub at: C64,
    pub order: u32,
    pub coeff: C64,
    pub isolation: f64,
}

impl ZeroData {
    /// `|\int_{z0}^{z} sqrt(q)|` in the local model `c (z - z0)^m`.
    pub fn flat_distance(&self, z: C64) -> f64 {
        let m = self.order as f64;
        2.0 / (m + 2.0) * self.coeff.norm().sqrt() * (z - self.at).norm().powf((m + 2.0) / 2.0)
    }

    /// Directions of the `m + 2` horizontal (or vertical) prongs.
    pub fn prongs(&self, vertical: bool) -> Vec<f64> {
        let m = self.order as f64;
        let shift = if vertical { PI } else { 0.0 };
        (0..self.order + 2)
            .map(|k| (shift + 2.0 * PI * k as f64 - self.coeff.arg()) / (m + 2.0))
            .collect()
    }
}

/// Distance from `z` to the nearest point of `others`, infinite if empty.
pub fn nearest(z: C64, others: impl IntoIterator<Item = C64>) -> f64 {
    others
        .into_iter()
        .map(|o| (o - z).norm())
        .fold(f64::INFINITY, f64::min)
}

pub fn zero_data(q: &QuadraticDifferential) -> Vec<ZeroData> {
    let sing = q.finite_singularities();
    q.zeros()
        .iter()
        .map(|z| {
            let isolation = nearest(z.at, sing.iter().copied().filter(|s| *s != z.at));
            let r = 0.1 * isolation.min(1.0);
            ZeroData {
                at: z.at,
                order: z.order,
                coeff: zero_coefficient(q, z.at, z.order, r),
                isolation,
            }
        })
        .collect()
}
