use std::cell::Cell;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ode::DormandPrince;
use crate::qdiff::residue::continue_sqrt;
use crate::qdiff::{Mobius, PoleLocation, QuadraticDifferential};

use super::path::{nearest, polyline_integral, zero_data, ZeroData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `sqrt(q) dz` real along the leaf.
    Horizontal,
    /// `sqrt(q) dz` imaginary along the leaf.
    Vertical,
}

impl Kind {
    pub(crate) fn phase(self) -> C64 {
        match self {
            Kind::Horizontal => C64::new(1.0, 0.0),
            Kind::Vertical => C64::new(0.0, 1.0),
        }
    }

    /// The component of `\int sqrt(q) dz` that must stay constant.
    pub(crate) fn invariant(self, v: C64) -> f64 {
        match self {
            Kind::Horizontal => v.im,
            Kind::Vertical => v.re,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    EscapedToPole { pole: usize },
    HitZero { zero: usize },
    MaxLength,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceLimits {
    /// Relative tolerance of the Dormand–Prince pair.
    pub rtol: f64,
    /// Cap on the accumulated flat length.
    pub max_length: f64,
    pub max_steps: usize,
    /// Escape horizon as a multiple of the singular-set scale.
    pub horizon: f64,
    /// Consecutive steps of monotone chart radius required for escape.
    pub monotone_steps: usize,
    /// Flat distance below which a zero counts as hit.
    pub zero_hit: f64,
    /// Zero the trajectory starts from; ignored until it is `leave_radius`
    /// away in flat distance.
    pub exclude_zero: Option<usize>,
    pub leave_radius: f64,
}

impl Default for TraceLimits {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            max_length: f64::INFINITY,
            max_steps: 200_000,
            horizon: 10.0,
            monotone_steps: 100,
            zero_hit: 1e-5,
            exclude_zero: None,
            leave_radius: 1e-3,
        }
    }
}

/// A traced leaf of the horizontal or vertical foliation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<C64>,
    pub kind: Kind,
    pub termination: Termination,
    /// Accumulated flat length `\int |sqrt(q)| |dz|`.
    pub natural_parameter: f64,
    /// Branch of `sqrt(q)` at the first and last sample.
    pub start_branch: C64,
    pub end_branch: C64,
    /// `|Im|` (horizontal) or `|Re|` (vertical) of `\int sqrt(q) dz` along
    /// the samples.
    pub drift: f64,
}

impl Trajectory {
    pub fn drift_per_length(&self) -> f64 {
        if self.natural_parameter > 0.0 {
            self.drift / self.natural_parameter
        } else {
            0.0
        }
    }
}

struct PoleWatch {
    index: usize,
    chart: Mobius,
    r_esc: f64,
    last: f64,
    run: usize,
}

/// Precomputed singular data shared by many traces of one differential.
pub(crate) struct Tracer<'a> {
    pub q: &'a QuadraticDifferential,
    pub zeros: Vec<ZeroData>,
    finite: Vec<C64>,
    scale: f64,
}

impl<'a> Tracer<'a> {
    pub fn new(q: &'a QuadraticDifferential) -> Self {
        let finite = q.finite_singularities();
        let scale = 1.0 + finite.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Self {
            q,
            zeros: zero_data(q),
            finite,
            scale,
        }
    }

    fn watches(&self, horizon: f64) -> Vec<PoleWatch> {
        self.q
            .poles()
            .iter()
            .enumerate()
            .map(|(index, p)| {
                let (chart, r_esc) = match p.at {
                    PoleLocation::Infinity => (Mobius::inversion(), 1.0 / (horizon * self.scale)),
                    PoleLocation::Finite(a) => {
                        let d = nearest(a, self.finite.iter().copied().filter(|s| *s != a));
                        (
                            Mobius::translate_to_origin(a),
                            d.min(self.scale) / horizon,
                        )
                    }
                };
                PoleWatch {
                    index,
                    chart,
                    r_esc,
                    last: f64::INFINITY,
                    run: 0,
                }
            })
            .collect()
    }

    fn step_cap(&self, z: C64) -> f64 {
        0.1 * nearest(z, self.finite.iter().copied()).min(z.norm() + self.scale)
    }

    /// Traces from `start` with the branch `s0` of `sqrt(q)` there; the
    /// leaf is followed in the direction of `phase / s0`.
    pub fn trace(&self, start: C64, s0: C64, kind: Kind, lim: &TraceLimits) -> Result<Trajectory> {
        let q = self.q;
        let v0 = q.eval(start);
        if !(v0.norm() > 0.0) || !v0.is_finite() {
            return Err(Error::StartedAtSingularity(format!("q({start}) = {v0}")));
        }
        if nearest(start, self.finite.iter().copied()) <= 1e-12 * self.scale {
            return Err(Error::StartedAtSingularity(format!("{start}")));
        }
        let phase = kind.phase();
        let dp = DormandPrince::new(lim.rtol);
        let s_ref = Cell::new(continue_sqrt(v0, s0));
        let start_branch = s_ref.get();
        let mut rhs = |y: &[f64; 3]| {
            let z = C64::new(y[0], y[1]);
            let s = continue_sqrt(q.eval(z), s_ref.get());
            let u = phase / s;
            let d = u / u.norm();
            [d.re, d.im, s.norm()]
        };
        let mut watches = self.watches(lim.horizon);
        let mut y = [start.re, start.im, 0.0];
        let mut points = vec![start];
        let mut h = self.step_cap(start) * 0.1;
        let mut excluded = lim.exclude_zero;
        let mut termination = Termination::MaxLength;
        let mut steps = 0;
        loop {
            if steps >= lim.max_steps || y[2] >= lim.max_length {
                break;
            }
            steps += 1;
            let z_prev = C64::new(y[0], y[1]);
            let cap = self.step_cap(z_prev);
            let st = match dp.step(&mut rhs, &y, h, cap, 2) {
                Ok(st) => st,
                Err(_) => {
                    if let Some(k) = self.nearest_zero(z_prev) {
                        termination = Termination::HitZero { zero: k };
                    }
                    break;
                }
            };
            y = st.y;
            h = st.h_next;
            let z = C64::new(y[0], y[1]);
            s_ref.set(continue_sqrt(q.eval(z), s_ref.get()));
            points.push(z);

            if let Some(k) = excluded {
                if self.zeros[k].flat_distance(z) > lim.leave_radius {
                    excluded = None;
                }
            }
            if let Some(k) = self
                .zeros
                .iter()
                .enumerate()
                .filter(|(k, _)| Some(*k) != excluded)
                .find(|(_, zd)| zd.flat_distance(z) < lim.zero_hit)
                .map(|(k, _)| k)
            {
                termination = Termination::HitZero { zero: k };
                break;
            }
            let mut escaped = None;
            for w in &mut watches {
                let rho = w.chart.to_chart(z).norm();
                if rho < w.last {
                    w.run += 1;
                } else {
                    w.run = 0;
                }
                w.last = rho;
                if rho < w.r_esc && w.run >= lim.monotone_steps {
                    escaped = Some(w.index);
                }
            }
            if let Some(pole) = escaped {
                termination = Termination::EscapedToPole { pole };
                break;
            }
            if y[2] > 10.0 * lim.zero_hit
                && steps > 10
                && segment_distance(start, z_prev, z) < 1e-9 * self.scale
            {
                termination = Termination::Closed;
                break;
            }
        }
        let end_branch = s_ref.get();
        let (integral, _) = polyline_integral(q, &points, start_branch);
        Ok(Trajectory {
            drift: kind.invariant(integral).abs(),
            points,
            kind,
            termination,
            natural_parameter: y[2],
            start_branch,
            end_branch,
        })
    }

    fn nearest_zero(&self, z: C64) -> Option<usize> {
        self.zeros
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.flat_distance(z).total_cmp(&b.1.flat_distance(z)))
            .map(|(k, _)| k)
    }
}

fn segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Traces the leaf of the given kind through `start`.
///
/// `orientation` (`+1` or `-1`) picks the direction: the leaf is followed
/// along `orientation * e^{i alpha} / sqrt(q)` with the principal branch at
/// the start.
pub fn trace_trajectory(
    q: &QuadraticDifferential,
    start: C64,
    kind: Kind,
    orientation: f64,
    limits: &TraceLimits,
) -> Result<Trajectory> {
    let s0 = q.eval(start).sqrt() * orientation.signum();
    Tracer::new(q).trace(start, s0, kind, limits)
}

/// As [`trace_trajectory`], with an explicit starting branch `s0`.
pub fn trace_from(
    q: &QuadraticDifferential,
    start: C64,
    s0: C64,
    kind: Kind,
    limits: &TraceLimits,
) -> Result<Trajectory> {
    Tracer::new(q).trace(start, s0, kind, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Poly;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_differential_gives_straight_lines() {
        let q = QuadraticDifferential::polynomial_real(&[1.0]).unwrap();
        let t = trace_trajectory(&q, c(0.0, 0.0), Kind::Horizontal, 1.0, &TraceLimits::default())
            .unwrap();
        assert_eq!(t.termination, Termination::EscapedToPole { pole: 0 });
        assert!(t.points.iter().all(|p| p.im.abs() < 1e-14 && p.re >= 0.0));
        assert!(t.drift < 1e-10);
        let back = trace_trajectory(&q, c(0.0, 0.0), Kind::Vertical, -1.0, &TraceLimits::default())
            .unwrap();
        assert!(back.points.iter().all(|p| p.re.abs() < 1e-14 && p.im <= 0.0));
    }

    #[test]
    fn rejects_singular_start() {
        let q = QuadraticDifferential::polynomial_real(&[0.0, 1.0]).unwrap();
        assert!(matches!(
            trace_trajectory(&q, c(0.0, 0.0), Kind::Horizontal, 1.0, &TraceLimits::default()),
            Err(Error::StartedAtSingularity(_))
        ));
    }

    #[test]
    fn leaves_of_z2_minus_one_keep_their_height() {
        let q = QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap();
        for start in [c(0.3, 0.2), c(-2.0, 1.0), c(0.0, -0.5)] {
            for orient in [1.0, -1.0] {
                let t = trace_trajectory(&q, start, Kind::Horizontal, orient, &TraceLimits::default())
                    .unwrap();
                assert!(matches!(t.termination, Termination::EscapedToPole { .. }));
                assert!(t.drift_per_length() < 1e-8, "{}", t.drift_per_length());
            }
        }
    }

    #[test]
    fn vertical_crosses_the_strip() {
        // Im of the flat coordinate runs over [Im Phi(-1), Im Phi(1)], a gap of
        // pi/2, as the vertical leaf through 0.01i crosses both boundaries
        use crate::foliation::path::zero_segment;
        let q = QuadraticDifferential::polynomial_real(&[-1.0, 0.0, 1.0]).unwrap();
        let start = c(0.0, 0.01);
        let lim = TraceLimits::default();
        let fwd = trace_trajectory(&q, start, Kind::Vertical, 1.0, &lim).unwrap();
        let bwd = trace_trajectory(&q, start, Kind::Vertical, -1.0, &lim).unwrap();
        assert!(fwd.drift_per_length() < 1e-8 && bwd.drift_per_length() < 1e-8);
        let s = fwd.start_branch;
        let left = zero_segment(&q, c(-1.0, 0.0), start, s).im;
        let right = zero_segment(&q, c(1.0, 0.0), start, s).im;
        assert!(((left - right).abs() - PI / 2.0).abs() < 1e-12);
        // heights of the two boundary lines relative to the start
        let (hl, hr) = (-left, -right);
        assert!(hl * hr < 0.0);
        let hf = polyline_integral(&q, &fwd.points, fwd.start_branch).0.im;
        let hb = polyline_integral(&q, &bwd.points, fwd.start_branch).0.im;
        assert!(hf * hb < 0.0);
        let (up, down) = if hf > 0.0 { (hf, hb) } else { (hb, hf) };
        assert!(up > hl.max(hr) && down < hl.min(hr));
    }

    #[test]
    fn finite_pole_escape() {
        // q = 1/z^4 has poles at 0 (order 4) and infinity (order 0 -> none)
        let q = QuadraticDifferential::rational(
            Poly::constant(c(1.0, 0.0)),
            Poly::monomial(c(1.0, 0.0), 4),
        )
        .unwrap();
        let t = trace_trajectory(&q, c(1.0, 0.5), Kind::Horizontal, 1.0, &TraceLimits::default())
            .unwrap();
        assert_eq!(t.termination, Termination::EscapedToPole { pole: 0 });
        assert!(t.drift_per_length() < 1e-8);
    }
}
