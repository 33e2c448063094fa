use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::roots::brent;
use crate::qdiff::residue::check_disk;
use crate::qdiff::{Form, Mobius, QuadraticDifferential};

use super::measure::{transverse_measure, Arc};

/// Tangency points of the horizontal foliation with a circle `|t| = radius`
/// around a pole, and the transverse measures of the arcs between them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinguishedPoints {
    pub pole: usize,
    pub radius: f64,
    #[serde(skip)]
    pub chart: Mobius,
    /// Sorted angles in `[0, 2 pi)`, measured in the chart.
    pub angles: Vec<f64>,
    /// `arc_measures[j]` belongs to the arc from `angles[j]` to the next
    /// angle counterclockwise.
    pub arc_measures: Vec<f64>,
}

impl DistinguishedPoints {
    /// `sum_j (-1)^j mu_j`.
    pub fn alternating_sum(&self) -> f64 {
        self.arc_measures
            .iter()
            .enumerate()
            .map(|(j, m)| if j % 2 == 0 { *m } else { -*m })
            .sum()
    }

    /// The points in the native coordinate.
    pub fn points(&self) -> Vec<C64> {
        self.angles
            .iter()
            .map(|&a| self.chart.from_chart(C64::from_polar(self.radius, a)))
            .collect()
    }
}

fn pole_chart(q: &QuadraticDifferential, pole: usize) -> Result<Mobius> {
    match q.form() {
        Form::LaurentModel(_) => Ok(Mobius::identity()),
        Form::RationalSphere { .. } => q.default_chart(pole),
    }
}

/// Finds the `n - 2` angles where `q_t(t) t^2` is real and negative on
/// `|t| = radius` in the standard chart at the pole.
pub fn distinguished_points(
    q: &QuadraticDifferential,
    pole: usize,
    radius: f64,
) -> Result<DistinguishedPoints> {
    let n = q.pole(pole)?.order;
    if n < 3 {
        return Err(Error::NotHigherOrder {
            order: n,
            what: "a sink neighborhood",
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!("radius {radius} must be positive")));
    }
    let chart = pole_chart(q, pole)?;
    check_disk(q, pole, &chart, radius).map_err(|e| match e {
        Error::ZeroOnContour { radius } => Error::NotSinkNeighborhood { count: 1, radius },
        Error::ZerosInsideContour { count, radius } => {
            Error::NotSinkNeighborhood { count, radius }
        }
        other => other,
    })?;
    let w = |theta: f64| {
        let t = C64::from_polar(radius, theta);
        q.eval_in_chart(&chart, t) * t * t
    };
    let samples = 128 * n as usize;
    let step = 2.0 * PI / samples as f64;
    let mut angles = Vec::new();
    let mut prev = w(0.0);
    for j in 1..=samples {
        let th = j as f64 * step;
        let cur = w(th);
        if (prev.im > 0.0) != (cur.im > 0.0) {
            if let Some(root) = brent(|x| w(x).im, th - step, th, 1e-15) {
                if w(root).re < 0.0 {
                    angles.push(root.rem_euclid(2.0 * PI));
                }
            }
        }
        prev = cur;
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if angles.len() != (n - 2) as usize {
        return Err(Error::TangencyCount {
            found: angles.len(),
            expected: (n - 2) as usize,
        });
    }
    let k = angles.len();
    let arc_measures = (0..k)
        .map(|j| {
            let from = angles[j];
            let to = if j + 1 < k { angles[j + 1] } else { angles[0] + 2.0 * PI };
            transverse_measure(
                q,
                &Arc::ChartCircle {
                    chart,
                    radius,
                    from,
                    to,
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DistinguishedPoints {
        pole,
        radius,
        chart,
        angles,
        arc_measures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdiff::{LaurentModel, PoleLocation};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn order_five_model_on_unit_circle() {
        let q = QuadraticDifferential::laurent(LaurentModel::new(5, vec![(-5, c(1.0, 0.0))]).unwrap());
        let d = distinguished_points(&q, 0, 1.0).unwrap();
        let want = [PI / 3.0, PI, 5.0 * PI / 3.0];
        for (a, b) in d.angles.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        // the three arcs are congruent under rotation by 2 pi / 3
        for m in &d.arc_measures {
            assert!((m - d.arc_measures[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn normal_form_even_alternating_sum() {
        for n in [4u32, 6, 8] {
            let a = c(0.3, 0.1);
            let q = QuadraticDifferential::laurent(LaurentModel::normal_form(n, a).unwrap());
            let zr = a.norm().powf(-1.0 / (n as f64 / 2.0 - 1.0));
            for r in [0.5 * zr, 0.25 * zr] {
                let d = distinguished_points(&q, 0, r).unwrap();
                assert_eq!(d.angles.len(), n as usize - 2);
                let s = d.alternating_sum().abs();
                assert!((s - 2.0 * PI * 0.3).abs() < 1e-8, "n={n} r={r} s={s}");
            }
        }
    }

    #[test]
    fn z2_minus_one_at_infinity() {
        let q = QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap();
        let inf = q.find_pole(PoleLocation::Infinity).unwrap();
        let d = distinguished_points(&q, inf, 0.2).unwrap();
        assert_eq!(d.angles.len(), 4);
        assert!((d.alternating_sum().abs() - PI).abs() < 1e-8);
    }

    #[test]
    fn zeros_inside_rejected() {
        let q = QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap();
        let inf = q.find_pole(PoleLocation::Infinity).unwrap();
        assert!(matches!(
            distinguished_points(&q, inf, 2.0),
            Err(Error::NotSinkNeighborhood { count: 2, .. })
        ));
    }
}
