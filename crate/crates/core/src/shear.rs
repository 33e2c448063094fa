//! Complex periods of horizontal strips and the shear action on them.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::foliation::path::{polyline_integral, zero_segment};
use crate::foliation::FoliationSkeleton;
use crate::format::CsvTable;
use crate::qdiff::QuadraticDifferential;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripPeriod {
    pub strip: usize,
    /// `base + shear`.
    pub period: C64,
    /// `int sqrt(q)` across the strip before any shear, `Im > 0`.
    pub base: C64,
    /// Accumulated real shear.
    pub shear: f64,
    pub width: f64,
    /// `+1` if the integral from `zeros.0` to `zeros.1` already had
    /// `Im > 0`, `-1` if it was negated.
    pub orientation: i8,
}

/// Integrates `sqrt(q)` along the strip's recorded transverse arc.
pub fn strip_period(q: &QuadraticDifferential, skeleton: &FoliationSkeleton, strip: usize) -> Result<StripPeriod> {
    let s = skeleton
        .strips
        .get(strip)
        .ok_or_else(|| Error::InvalidInput(format!("no strip #{strip} (skeleton has {})", skeleton.strips.len())))?;
    let path = &s.arc;
    let n = path.len();
    if n < 3 {
        return Err(Error::DegenerateArc(format!("strip #{strip} arc has {n} points")));
    }
    let is_zero = |z: C64| q.zeros().iter().any(|w| (w.at - z).norm() <= 1e-12 * (1.0 + z.norm()));
    if !is_zero(path[0]) || !is_zero(path[n - 1]) {
        return Err(Error::DegenerateArc(format!("strip #{strip} arc does not end at zeros")));
    }
    if path.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::DegenerateArc(format!("strip #{strip} arc has zero length")));
    }
    let hint = q.eval(path[1]).sqrt();
    let first = zero_segment(q, path[0], path[1], hint);
    let (middle, end) = polyline_integral(q, &path[1..n - 1], hint);
    let last = zero_segment(q, path[n - 1], path[n - 2], end);
    let raw = first + middle - last;
    if raw.im == 0.0 {
        return Err(Error::DegenerateArc(format!("strip #{strip} has zero width")));
    }
    let (period, orientation) = if raw.im > 0.0 { (raw, 1) } else { (-raw, -1) };
    Ok(StripPeriod {
        strip,
        period,
        base: period,
        shear: 0.0,
        width: period.im,
        orientation,
    })
}

pub fn strip_periods(q: &QuadraticDifferential, skeleton: &FoliationSkeleton) -> Result<Vec<StripPeriod>> {
    (0..skeleton.strips.len()).map(|i| strip_period(q, skeleton, i)).collect()
}

pub fn periods_csv(periods: &[StripPeriod]) -> CsvTable {
    let mut t = CsvTable::new(["strip", "re", "im", "width"]);
    for p in periods {
        t.push_floats(&[p.strip as f64, p.period.re, p.period.im, p.width]);
    }
    t
}

/// One real shear per strip.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShearVector(pub Vec<f64>);

/// Shears act only near the origin; `|s_j| <= factor * width_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrustRegion {
    pub factor: f64,
}

impl Default for TrustRegion {
    fn default() -> Self {
        Self { factor: 10.0 }
    }
}

/// Cuts each strip along its middle leaf and reglues with a real
/// translation: `period_j + s_j`, widths untouched. Shears accumulate in
/// `shear`, so applying `s` then `t` equals applying `s + t` exactly.
pub fn apply_shear(periods: &[StripPeriod], s: &ShearVector, trust: TrustRegion) -> Result<Vec<StripPeriod>> {
    if s.0.len() != periods.len() {
        return Err(Error::DimensionMismatch {
            got: s.0.len(),
            expected: periods.len(),
        });
    }
    periods
        .iter()
        .zip(&s.0)
        .map(|(p, &sj)| {
            let limit = trust.factor * p.width;
            let shear = p.shear + sj;
            if !shear.is_finite() || shear.abs() > limit {
                return Err(Error::OutsideTrustRegion {
                    strip: p.strip,
                    value: shear.abs(),
                    limit,
                });
            }
            Ok(StripPeriod {
                period: C64::new(p.base.re + shear, p.base.im),
                shear,
                ..*p
            })
        })
        .collect()
}

/// Periods of a generic skeleton, sheared by `s`.
pub fn shear_skeleton(
    q: &QuadraticDifferential,
    skeleton: &FoliationSkeleton,
    s: &ShearVector,
    trust: TrustRegion,
) -> Result<Vec<StripPeriod>> {
    if let Some(&(from, to)) = skeleton.saddle_connections.first() {
        return Err(Error::SaddleConnection { from, to });
    }
    if s.0.len() != skeleton.strips.len() {
        return Err(Error::DimensionMismatch {
            got: s.0.len(),
            expected: skeleton.strips.len(),
        });
    }
    apply_shear(&strip_periods(q, skeleton)?, s, trust)
}

/// `6g - 6 + sum (n_i + 1)`, the number of strips of a generic foliation.
pub fn generic_strip_count(genus: u32, orders: &[u32]) -> Result<i64> {
    if let Some(&n) = orders.iter().find(|&&n| n < 3) {
        return Err(Error::NotHigherOrder {
            order: n,
            what: "strip count",
        });
    }
    Ok(6 * genus as i64 - 6 + orders.iter().map(|&n| n as i64 + 1).sum::<i64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::strip_decomposition;
    use std::f64::consts::FRAC_PI_2;

    fn z2m1() -> (QuadraticDifferential, FoliationSkeleton) {
        let q = QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap();
        let sk = strip_decomposition(&q).unwrap();
        (q, sk)
    }

    #[test]
    fn period_of_the_strip() {
        let (q, sk) = z2m1();
        let p = strip_period(&q, &sk, 0).unwrap();
        assert!((p.period - C64::new(0.0, FRAC_PI_2)).norm() < 1e-8, "{}", p.period);
        assert!((p.width - sk.strips[0].width).abs() < 1e-6);
        let sheared = apply_shear(&[p], &ShearVector(vec![1.7]), TrustRegion::default()).unwrap();
        assert_eq!(sheared[0].period.re, p.period.re + 1.7);
        assert_eq!(sheared[0].width, p.width);
        assert!(strip_period(&q, &sk, 1).is_err());
    }

    #[test]
    fn scaling() {
        let (q, sk) = z2m1();
        let p = strip_period(&q, &sk, 0).unwrap();
        let c: f64 = 2.5;
        let q2 = q.scaled(C64::new(c * c, 0.0)).unwrap();
        let sk2 = strip_decomposition(&q2).unwrap();
        let p2 = strip_period(&q2, &sk2, 0).unwrap();
        assert!((p2.period - c * p.period).norm() < 1e-7);
    }

    #[test]
    fn errors() {
        let (q, mut sk) = z2m1();
        let p = strip_periods(&q, &sk).unwrap();
        assert!(matches!(
            apply_shear(&p, &ShearVector(vec![1.0, 2.0]), TrustRegion::default()),
            Err(Error::DimensionMismatch { got: 2, expected: 1 })
        ));
        assert!(matches!(
            apply_shear(&p, &ShearVector(vec![100.0]), TrustRegion::default()),
            Err(Error::OutsideTrustRegion { .. })
        ));
        let short = sk.strips[0].arc[..2].to_vec();
        sk.strips[0].arc = short;
        assert!(matches!(strip_period(&q, &sk, 0), Err(Error::DegenerateArc(_))));
        sk.saddle_connections.push((0, 1));
        assert!(matches!(
            shear_skeleton(&q, &sk, &ShearVector(vec![0.0]), TrustRegion::default()),
            Err(Error::SaddleConnection { .. })
        ));
    }

    #[test]
    fn strip_counts() {
        assert_eq!(generic_strip_count(0, &[6]).unwrap(), 1);
        assert_eq!(generic_strip_count(0, &[5]).unwrap(), 0);
        assert_eq!(generic_strip_count(2, &[3, 3]).unwrap(), 14);
        assert!(generic_strip_count(0, &[2]).is_err());
    }
}
