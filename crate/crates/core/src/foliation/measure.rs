use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numeric::quadrature::Adaptive;
use crate::numeric::roots::brent;
use crate::qdiff::residue::continue_sqrt;
use crate::qdiff::{Mobius, QuadraticDifferential};

/// A parametrized curve on `[0, 1]`.
pub trait Curve {
    fn point(&self, t: f64) -> C64;
    fn tangent(&self, t: f64) -> C64;
    /// Parameters where the tangent may jump.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arc {
    Segment { from: C64, to: C64 },
    /// `center + radius e^{i theta}` for theta from `from` to `to`.
    Circle { center: C64, radius: f64, from: f64, to: f64 },
    /// The circle `|t| = radius` of a chart, mapped back to `z`.
    ChartCircle { chart: Mobius, radius: f64, from: f64, to: f64 },
    Polyline(Vec<C64>),
}

impl Curve for Arc {
    fn point(&self, t: f64) -> C64 {
        match self {
            Arc::Segment { from, to } => from + (to - from) * t,
            Arc::Circle { center, radius, from, to } => {
                center + C64::from_polar(*radius, from + (to - from) * t)
            }
            Arc::ChartCircle { chart, radius, from, to } => {
                chart.from_chart(C64::from_polar(*radius, from + (to - from) * t))
            }
            Arc::Polyline(p) => {
                let (k, u) = locate(p.len(), t);
                p[k] + (p[k + 1] - p[k]) * u
            }
        }
    }

    fn tangent(&self, t: f64) -> C64 {
        match self {
            Arc::Segment { from, to } => to - from,
            Arc::Circle { radius, from, to, .. } => {
                C64::new(0.0, to - from) * C64::from_polar(*radius, from + (to - from) * t)
            }
            Arc::ChartCircle { chart, radius, from, to } => {
                let w = C64::from_polar(*radius, from + (to - from) * t);
                chart.dz_dt(w) * C64::new(0.0, to - from) * w
            }
            Arc::Polyline(p) => {
                let (k, _) = locate(p.len(), t);
                (p[k + 1] - p[k]) * (p.len() - 1) as f64
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            Arc::Polyline(p) if p.len() > 2 => {
                let m = (p.len() - 1) as f64;
                (1..p.len() - 1).map(|k| k as f64 / m).collect()
            }
            _ => Vec::new(),
        }
    }
}

fn locate(n: usize, t: f64) -> (usize, f64) {
    let m = (n - 1) as f64;
    let x = (t * m).clamp(0.0, m);
    let k = (x.floor() as usize).min(n - 2);
    (k, x - k as f64)
}

/// Samples per unit parameter used to find sign changes of the integrand.
const SAMPLES: usize = 512;

fn check_singularities(q: &QuadraticDifferential, arc: &dyn Curve) -> Result<()> {
    let zeros: Vec<C64> = q.zeros().iter().map(|z| z.at).collect();
    let sing = q.finite_singularities();
    let scale = 1.0 + sing.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let n = 4 * SAMPLES;
    let pts: Vec<C64> = (0..=n).map(|j| arc.point(j as f64 / n as f64)).collect();
    for s in sing {
        let is_zero = zeros.contains(&s);
        let (j, d) = pts
            .iter()
            .enumerate()
            .map(|(j, p)| (j, (p - s).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let spacing = (pts[j.min(n - 1) + 1] - pts[j.min(n - 1)]).norm();
        if d > 2.0 * spacing + 1e-9 * scale {
            continue;
        }
        // golden-section refinement of the distance on the neighbouring cells
        let (mut lo, mut hi) = ((j as f64 - 1.0) / n as f64, (j as f64 + 1.0) / n as f64);
        lo = lo.max(0.0);
        hi = hi.min(1.0);
        let dist = |t: f64| (arc.point(t) - s).norm();
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if dist(a) < dist(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let t = 0.5 * (lo + hi);
        if dist(t) <= 1e-9 * scale {
            let at_end = t < 1e-6 || t > 1.0 - 1e-6;
            if !(is_zero && at_end) {
                return Err(Error::SingularOnArc { t });
            }
        }
    }
    Ok(())
}

/// `\int |Im(sqrt(q(gamma)) gamma')| dt` with the default quadrature.
pub fn transverse_measure(q: &QuadraticDifferential, arc: &dyn Curve) -> Result<f64> {
    transverse_measure_with(q, arc, &Adaptive::default())
}

/// Transverse measure of `arc`, split at the sign changes of
/// `Im(sqrt(q) gamma')` so that every panel is smooth.
///
/// Zeros of `q` may sit at the endpoints; anywhere else they, and poles
/// anywhere, are rejected.
pub fn transverse_measure_with(
    q: &QuadraticDifferential,
    arc: &dyn Curve,
    quad: &Adaptive,
) -> Result<f64> {
    check_singularities(q, arc)?;
    let mut cuts = vec![0.0];
    cuts.extend(arc.breakpoints());
    cuts.push(1.0);
    let mut panels = Vec::new();
    for w in cuts.windows(2) {
        panels.extend(sign_panels(q, arc, w[0], w[1]));
    }
    let integrand = |t: f64| (q.eval(arc.point(t)).sqrt() * arc.tangent(t)).im.abs();
    Ok(panels
        .windows(2)
        .map(|p| quad.integrate_real(integrand, p[0], p[1]))
        .sum())
}

/// Panel boundaries on `[a, b]` at the sign changes of the integrand.
fn sign_panels(q: &QuadraticDifferential, arc: &dyn Curve, a: f64, b: f64) -> Vec<f64> {
    let n = ((SAMPLES as f64 * (b - a)).ceil() as usize).max(16);
    let mut out = vec![a];
    let mut s = C64::new(0.0, 0.0);
    let mut prev: Option<(f64, f64, C64)> = None;
    for j in 0..=n {
        let t = a + (b - a) * j as f64 / n as f64;
        s = continue_sqrt(q.eval(arc.point(t)), s);
        let f = (s * arc.tangent(t)).im;
        if let Some((tp, fp, sp)) = prev {
            if fp != 0.0 && f != 0.0 && fp.signum() != f.signum() {
                let g = |x: f64| (continue_sqrt(q.eval(arc.point(x)), sp) * arc.tangent(x)).im;
                if let Some(r) = brent(g, tp, t, 1e-15) {
                    out.push(r);
                }
            }
        }
        prev = Some((t, f, s));
    }
    if *out.last().unwrap() < b {
        out.push(b);
    }
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    struct Reparam<'a> {
        base: &'a dyn Curve,
        k: f64,
    }

    // t -> t + k t (1 - t), monotone for |k| < 1
    impl Curve for Reparam<'_> {
        fn point(&self, t: f64) -> C64 {
            self.base.point(t + self.k * t * (1.0 - t))
        }
        fn tangent(&self, t: f64) -> C64 {
            self.base.tangent(t + self.k * t * (1.0 - t)) * (1.0 + self.k * (1.0 - 2.0 * t))
        }
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn unit_vertical_segment() {
        let q = QuadraticDifferential::polynomial_real(&[1.0]).unwrap();
        let m = transverse_measure(&q, &Arc::Segment { from: c(0.0, 0.0), to: c(0.0, 1.0) }).unwrap();
        assert!((m - 1.0).abs() < 1e-14);
    }

    #[test]
    fn segment_between_zeros() {
        let q = QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap();
        let m = transverse_measure(&q, &Arc::Segment { from: c(-1.0, 0.0), to: c(1.0, 0.0) })
            .unwrap();
        assert!((m - PI / 2.0).abs() < 1e-10, "{m}");
    }

    #[test]
    fn singular_interior_rejected() {
        let q = QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap();
        let r = transverse_measure(&q, &Arc::Segment { from: c(-2.0, 0.0), to: c(2.0, 0.0) });
        assert!(matches!(r, Err(Error::SingularOnArc { .. })));
    }

    #[test]
    fn sign_changes_on_a_circle() {
        // q = dz^2 on the unit circle: |Im(i e^{i t})| = |cos t|, total 4
        let q = QuadraticDifferential::polynomial_real(&[1.0]).unwrap();
        let arc = Arc::Circle { center: c(0.0, 0.0), radius: 1.0, from: 0.0, to: 2.0 * PI };
        assert!((transverse_measure(&q, &arc).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn polyline_matches_segments() {
        let q = QuadraticDifferential::polynomial_real(&[0.2, 1.0, 0.5]).unwrap();
        let pts = [c(0.5, 1.0), c(1.0, 2.0), c(-0.5, 2.5)];
        let whole = transverse_measure(&q, &Arc::Polyline(pts.to_vec())).unwrap();
        let a = transverse_measure(&q, &Arc::Segment { from: pts[0], to: pts[1] }).unwrap();
        let b = transverse_measure(&q, &Arc::Segment { from: pts[1], to: pts[2] }).unwrap();
        assert!((whole - a - b).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn additive_and_reparametrization_invariant(
            x0 in -2.0..2.0f64, y0 in 0.5..2.0f64, x1 in -2.0..2.0f64, y1 in 0.5..2.0f64,
            split in 0.1..0.9f64, k in -0.9..0.9f64,
        ) {
            let q = QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap();
            let (a, b) = (c(x0, y0), c(x1, y1));
            let m = a + (b - a) * split;
            let whole = Arc::Segment { from: a, to: b };
            let total = transverse_measure(&q, &whole).unwrap();
            let parts = transverse_measure(&q, &Arc::Segment { from: a, to: m }).unwrap()
                + transverse_measure(&q, &Arc::Segment { from: m, to: b }).unwrap();
            prop_assert!((total - parts).abs() <= 1e-9 * (1.0 + total));
            let re = transverse_measure(&q, &Reparam { base: &whole, k }).unwrap();
            prop_assert!((total - re).abs() <= 1e-9 * (1.0 + total));
        }
    }
}
