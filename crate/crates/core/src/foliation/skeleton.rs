use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::roots::brent;
use crate::qdiff::residue::continue_sqrt;
use crate::qdiff::{Form, QuadraticDifferential};

use super::path::{polyline_integral, zero_segment};
use super::trajectory::{Kind, Termination, TraceLimits, Tracer, Trajectory};

/// A horizontal leaf launched from a zero along one of its prongs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Separatrix {
    pub zero: usize,
    pub prong: usize,
    pub angle: f64,
    pub termination: Termination,
    /// Asymptotic direction index at the pole it escapes to.
    pub escape_direction: Option<usize>,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatrixGraph {
    pub separatrices: Vec<Separatrix>,
    /// Unordered zero pairs joined by a separatrix.
    pub saddle_connections: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HalfPlane {
    pub pole: usize,
    pub sector: usize,
}

/// A horizontal strip with one zero on each boundary line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Strip {
    pub zeros: (usize, usize),
    /// `\int sqrt(q)` from `zeros.0` to `zeros.1` across the strip, with
    /// `Im > 0`.
    pub period: C64,
    pub width: f64,
    /// Difference between the widths measured from the two boundary zeros.
    pub width_check: f64,
    /// The transverse path the period was integrated along, starting and
    /// ending at the boundary zeros.
    #[serde(skip)]
    pub arc: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoliationSkeleton {
    pub separatrices: Vec<Separatrix>,
    pub half_planes: Vec<HalfPlane>,
    pub strips: Vec<Strip>,
    pub saddle_connections: Vec<(usize, usize)>,
    #[serde(skip)]
    pub vertical_rays: Vec<Trajectory>,
}

impl FoliationSkeleton {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }
}

fn limits_from(zero: usize) -> TraceLimits {
    TraceLimits {
        exclude_zero: Some(zero),
        ..TraceLimits::default()
    }
}

/// Launches the leaf of the given kind from zero `k` close to `angle`,
/// adjusted so that the start lies on the leaf.
fn launch(tr: &Tracer, k: usize, angle: f64, kind: Kind) -> Result<(f64, Trajectory)> {
    let zd = tr.zeros[k];
    let m = zd.order as f64;
    let eps = 1e-3 * zd.isolation.min(1.0);
    let local = |phi: f64| zd.coeff.sqrt() * C64::from_polar(eps.powf(m / 2.0), m * phi / 2.0);
    let g = |phi: f64| {
        let p = zd.at + C64::from_polar(eps, phi);
        kind.invariant(zero_segment(tr.q, zd.at, p, local(phi)))
    };
    let half = 0.4 * PI / (m + 2.0);
    let phi = brent(g, angle - half, angle + half, 1e-15).unwrap_or(angle);
    let start = zd.at + C64::from_polar(eps, phi);
    let mut s0 = continue_sqrt(tr.q.eval(start), local(phi));
    let d = kind.phase() / s0;
    if (d * C64::from_polar(1.0, -phi)).re < 0.0 {
        s0 = -s0;
    }
    Ok((phi, tr.trace(start, s0, kind, &limits_from(k))?))
}

/// Which of the `n - 2` horizontal directions at the pole a leaf ending at
/// `end` approaches.
fn escape_direction(q: &QuadraticDifferential, pole: usize, end: C64) -> Result<usize> {
    let n = q.pole(pole)?.order;
    let chart = q.default_chart(pole)?;
    let t = chart.to_chart(end);
    if n <= 2 {
        return Ok(0);
    }
    // leading coefficient of q_t ~ c t^{-n}, from the mean on a circle
    let r = 0.5 * t.norm();
    let k = 32;
    let c: C64 = (0..k)
        .map(|j| {
            let w = C64::from_polar(r, 2.0 * PI * j as f64 / k as f64);
            q.eval_in_chart(&chart, w) * w.powu(n)
        })
        .sum::<C64>()
        / k as f64;
    let m = (n - 2) as f64;
    let arg = t.arg();
    (0..n - 2)
        .map(|j| {
            let phi = (c.arg() - 2.0 * PI * j as f64) / m;
            let d = (arg - phi).rem_euclid(2.0 * PI);
            (j as usize, d.min(2.0 * PI - d))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(j, _)| j)
        .ok_or_else(|| Error::InvalidInput("pole without directions".into()))
}

fn trace_all(tr: &Tracer, kind: Kind) -> Result<Vec<(usize, usize, f64, Trajectory)>> {
    let jobs: Vec<(usize, usize, f64)> = tr
        .zeros
        .iter()
        .enumerate()
        .flat_map(|(k, zd)| {
            zd.prongs(kind == Kind::Vertical)
                .into_iter()
                .enumerate()
                .map(move |(j, a)| (k, j, a))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(k, j, a)| launch(tr, k, a, kind).map(|(phi, t)| (k, j, phi, t)))
        .collect()
}

/// Traces every horizontal separatrix and records saddle connections.
pub fn separatrix_graph(q: &QuadraticDifferential) -> Result<SeparatrixGraph> {
    let tr = Tracer::new(q);
    let mut separatrices = Vec::new();
    let mut saddle_connections = Vec::new();
    for (zero, prong, angle, trajectory) in trace_all(&tr, Kind::Horizontal)? {
        let escape_direction = match trajectory.termination {
            Termination::EscapedToPole { pole } => Some(escape_direction(
                q,
                pole,
                *trajectory.points.last().unwrap(),
            )?),
            Termination::HitZero { zero: other } => {
                let pair = (zero.min(other), zero.max(other));
                if !saddle_connections.contains(&pair) {
                    saddle_connections.push(pair);
                }
                None
            }
            _ => None,
        };
        separatrices.push(Separatrix {
            zero,
            prong,
            angle,
            termination: trajectory.termination,
            escape_direction,
            trajectory,
        });
    }
    Ok(SeparatrixGraph {
        separatrices,
        saddle_connections,
    })
}

struct Chunk {
    lo: C64,
    hi: C64,
    start: usize,
    end: usize,
}

fn chunks(pts: &[C64]) -> Vec<Chunk> {
    const SIZE: usize = 32;
    let mut out = Vec::new();
    let mut start = 0;
    while start + 1 < pts.len() {
        let end = (start + SIZE).min(pts.len() - 1);
        let (mut lo, mut hi) = (pts[start], pts[start]);
        for p in &pts[start..=end] {
            lo = C64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = C64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        out.push(Chunk { lo, hi, start, end });
        start = end;
    }
    out
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Parameters `(u, v)` of the intersection of `[p, p2]` and `[s, s2]`.
fn intersect(p: C64, p2: C64, s: C64, s2: C64) -> Option<(f64, f64)> {
    let r = p2 - p;
    let d = s2 - s;
    let den = cross(r, d);
    if den == 0.0 {
        return None;
    }
    let u = cross(s - p, d) / den;
    let v = cross(s - p, r) / den;
    ((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v)).then_some((u, v))
}

struct Detection {
    from: usize,
    prong: usize,
    to: usize,
    /// Prong of `to` whose separatrix was crossed; `None` for a direct hit.
    crossed: Option<usize>,
    period: C64,
    path: Vec<C64>,
}

/// Period along `path`, whose first and last points are zeros of `q`;
/// `hint` is the branch at `path[1]`.
fn period_along(q: &QuadraticDifferential, path: &[C64], hint: C64) -> C64 {
    let n = path.len();
    let first = zero_segment(q, path[0], path[1], hint);
    let (middle, s_end) = polyline_integral(q, &path[1..n - 1], hint);
    let last = zero_segment(q, path[n - 1], path[n - 2], s_end);
    let p = first + middle - last;
    if p.im < 0.0 {
        -p
    } else {
        p
    }
}

fn detect(
    q: &QuadraticDifferential,
    zeros: &[C64],
    seps: &[Separatrix],
    seps_chunks: &[Vec<Chunk>],
    from: usize,
    prong: usize,
    ray: &Trajectory,
) -> Result<Option<Detection>> {
    if let Termination::HitZero { zero } = ray.termination {
        let mut path = vec![zeros[from]];
        path.extend_from_slice(&ray.points);
        path.push(zeros[zero]);
        return Ok(Some(Detection {
            from,
            prong,
            to: zero,
            crossed: None,
            period: period_along(q, &path, ray.start_branch),
            path,
        }));
    }
    let pts = &ray.points;
    for i in 0..pts.len().saturating_sub(1) {
        let (a, b) = (pts[i], pts[i + 1]);
        let lo = C64::new(a.re.min(b.re), a.im.min(b.im));
        let hi = C64::new(a.re.max(b.re), a.im.max(b.im));
        let mut best: Option<(f64, usize, usize, f64)> = None;
        for (si, (sep, ch)) in seps.iter().zip(seps_chunks).enumerate() {
            if sep.zero == from && sep.trajectory.points.len() < 2 {
                continue;
            }
            for c in ch {
                if c.lo.re > hi.re || c.hi.re < lo.re || c.lo.im > hi.im || c.hi.im < lo.im {
                    continue;
                }
                let sp = &sep.trajectory.points;
                for l in c.start..c.end {
                    if let Some((u, v)) = intersect(a, b, sp[l], sp[l + 1]) {
                        if best.map_or(true, |bst| u < bst.0) {
                            best = Some((u, si, l, v));
                        }
                    }
                }
            }
        }
        if let Some((u, si, l, v)) = best {
            let sep = &seps[si];
            let sp = &sep.trajectory.points;
            let x = a + (b - a) * u;
            let mut path = vec![zeros[from]];
            path.extend_from_slice(&pts[..=i]);
            path.push(x);
            let y = sp[l] + (sp[l + 1] - sp[l]) * v;
            if (y - x).norm() > 0.0 {
                path.push(y);
            }
            path.extend(sp[..=l].iter().rev());
            path.push(zeros[sep.zero]);
            path.dedup();
            return Ok(Some(Detection {
                from,
                prong,
                to: sep.zero,
                crossed: Some(sep.prong),
                period: period_along(q, &path, ray.start_branch),
                path,
            }));
        }
    }
    match ray.termination {
        Termination::EscapedToPole { .. } => Ok(None),
        other => Err(Error::DecompositionIncomplete(format!(
            "vertical ray {prong} from zero #{from} ended with {other:?} without crossing a separatrix"
        ))),
    }
}

fn adjacent(crossed: usize, prong: usize, order: u32) -> bool {
    let k = (order + 2) as usize;
    crossed == prong || crossed == (prong + 1) % k
}

/// Decomposes the plane into half-planes and horizontal strips.
///
/// Requires a rational differential with simple zeros and poles of order
/// at least 3. A separatrix running into a zero is reported as a saddle
/// connection; a strip count different from `sum (n_i + 1) - 6` is
/// reported as an incomplete decomposition.
pub fn strip_decomposition(q: &QuadraticDifferential) -> Result<FoliationSkeleton> {
    if !matches!(q.form(), Form::RationalSphere { .. }) {
        return Err(Error::InvalidInput(
            "strip decomposition needs a differential on the sphere".into(),
        ));
    }
    if let Some(z) = q.zeros().iter().find(|z| z.order != 1) {
        return Err(Error::InvalidInput(format!(
            "strip decomposition needs simple zeros; zero at {} has order {}",
            z.at, z.order
        )));
    }
    if let Some(p) = q.poles().iter().find(|p| p.order < 3) {
        return Err(Error::NotHigherOrder {
            order: p.order,
            what: "the strip decomposition",
        });
    }
    let graph = separatrix_graph(q)?;
    if let Some(&(from, to)) = graph.saddle_connections.first() {
        return Err(Error::SaddleConnection { from, to });
    }
    if let Some(s) = graph
        .separatrices
        .iter()
        .find(|s| !matches!(s.termination, Termination::EscapedToPole { .. }))
    {
        return Err(Error::DecompositionIncomplete(format!(
            "separatrix {} of zero #{} ended with {:?}",
            s.prong, s.zero, s.termination
        )));
    }
    let mut half_planes = Vec::new();
    for (p, pole) in q.poles().iter().enumerate() {
        let sectors = (pole.order - 2) as usize;
        if !q.zeros().is_empty() {
            let mut hit = vec![false; sectors];
            for s in graph.separatrices.iter() {
                if s.termination == (Termination::EscapedToPole { pole: p }) {
                    if let Some(d) = s.escape_direction {
                        hit[d] = true;
                    }
                }
            }
            if let Some(d) = hit.iter().position(|h| !h) {
                return Err(Error::DecompositionIncomplete(format!(
                    "no separatrix reaches direction {d} of pole #{p}"
                )));
            }
        }
        half_planes.extend((0..sectors).map(|sector| HalfPlane { pole: p, sector }));
    }

    let tr = Tracer::new(q);
    let rays = trace_all(&tr, Kind::Vertical)?;
    let zeros: Vec<C64> = q.zeros().iter().map(|z| z.at).collect();
    let seps_chunks: Vec<Vec<Chunk>> = graph
        .separatrices
        .iter()
        .map(|s| chunks(&s.trajectory.points))
        .collect();
    let detections: Vec<Detection> = rays
        .par_iter()
        .map(|(k, j, _, ray)| detect(q, &zeros, &graph.separatrices, &seps_chunks, *k, *j, ray))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut used = vec![false; detections.len()];
    let mut strips = Vec::new();
    for i in 0..detections.len() {
        if used[i] {
            continue;
        }
        let d = &detections[i];
        let partner = (i + 1..detections.len()).find(|&j| {
            let e = &detections[j];
            !used[j]
                && e.from == d.to
                && e.to == d.from
                && match (d.crossed, e.crossed) {
                    (None, None) => true,
                    (Some(cd), Some(ce)) => {
                        adjacent(cd, e.prong, q.zeros()[e.from].order)
                            && adjacent(ce, d.prong, q.zeros()[d.from].order)
                    }
                    _ => false,
                }
        });
        let Some(j) = partner else {
            return Err(Error::DecompositionIncomplete(format!(
                "strip seen from zero #{} (vertical prong {}) has no partner from zero #{}",
                d.from, d.prong, d.to
            )));
        };
        used[i] = true;
        used[j] = true;
        let e = &detections[j];
        strips.push(Strip {
            zeros: (d.from, d.to),
            period: d.period,
            width: d.period.im,
            width_check: (d.period.im - e.period.im).abs(),
            arc: d.path.clone(),
        });
    }
    let chi: i64 = q.poles().iter().map(|p| p.order as i64 + 1).sum::<i64>() - 6;
    if strips.len() as i64 != chi {
        return Err(Error::DecompositionIncomplete(format!(
            "found {} strips, expected {chi}",
            strips.len()
        )));
    }
    Ok(FoliationSkeleton {
        separatrices: graph.separatrices,
        half_planes,
        strips,
        saddle_connections: graph.saddle_connections,
        vertical_rays: rays.into_iter().map(|r| r.3).collect(),
    })
}
