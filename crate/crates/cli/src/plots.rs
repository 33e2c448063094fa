//! Scenes for trajectories, strip decompositions and trees.

use std::f64::consts::PI;

use folia::foliation::{FoliationSkeleton, Separatrix, Termination, Trajectory};
use folia::qdiff::{PoleLocation, QuadraticDifferential};
use folia::rtree::MetricTree;
use num_complex::Complex64 as C64;

use crate::svg::{PlotDocument, Swatch, PALETTE};

fn singular_points(q: &QuadraticDifferential) -> Vec<C64> {
    q.zeros()
        .iter()
        .map(|z| z.at)
        .chain(q.poles().iter().filter_map(|p| match p.at {
            PoleLocation::Finite(c) => Some(c),
            PoleLocation::Infinity => None,
        }))
        .collect()
}

fn mark_singularities(doc: &mut PlotDocument, q: &QuadraticDifferential) {
    for z in q.zeros() {
        doc.dot(z.at, "black", 3.5);
    }
    doc.legend("black", "zero", Swatch::Dot);
    let mut finite = false;
    for p in q.poles() {
        if let PoleLocation::Finite(c) = p.at {
            doc.cross(c, "#d62728");
            finite = true;
        }
    }
    if finite {
        doc.legend("#d62728", "pole", Swatch::Cross);
    }
}

pub fn trace_scene(q: &QuadraticDifferential, start: C64, legs: &[Trajectory]) -> PlotDocument {
    let mut pts = singular_points(q);
    pts.push(start);
    let mut doc = PlotDocument::fitting("trajectory", &pts, 1.0, 1.0);
    for (k, leg) in legs.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        doc.polyline(&leg.points, color, 1.5, false);
        doc.legend(color, format!("leg {k}"), Swatch::Line { dashed: false });
    }
    mark_singularities(&mut doc, q);
    doc.dot(start, PALETTE[2], 3.0);
    doc.legend(PALETTE[2], "start", Swatch::Dot);
    doc
}

fn with_zero(q: &QuadraticDifferential, s: &Separatrix) -> Vec<C64> {
    let mut v = vec![q.zeros()[s.zero].at];
    v.extend_from_slice(&s.trajectory.points);
    v
}

/// Region bounded by two separatrices from one zero that escape along
/// consecutive directions of the same pole, closed by a circular arc far
/// out (or close in, for a finite pole) that avoids the other escape
/// directions.
fn half_plane_polygon(
    q: &QuadraticDifferential,
    doc: &PlotDocument,
    sk: &FoliationSkeleton,
    pole: usize,
    sector: usize,
) -> Option<Vec<C64>> {
    let order = q.poles().get(pole)?.order as usize;
    let m = order.checked_sub(2).filter(|&m| m > 0)?;
    let next = (sector + 1) % m;
    let to_pole = |s: &&Separatrix| s.termination == (Termination::EscapedToPole { pole });
    let seps: Vec<&Separatrix> = sk.separatrices.iter().filter(to_pole).collect();
    let (a, b) = seps.iter().find_map(|a| {
        if a.escape_direction != Some(sector) {
            return None;
        }
        seps.iter()
            .find(|b| b.zero == a.zero && b.escape_direction == Some(next) && b.prong != a.prong)
            .map(|b| (*a, *b))
    })?;
    let (c, far) = match q.poles()[pole].at {
        PoleLocation::Infinity => (doc.center(), true),
        PoleLocation::Finite(p) => (p, false),
    };
    let pa = with_zero(q, a);
    let pb = with_zero(q, b);
    let (ea, eb) = (*pa.last()? - c, *pb.last()? - c);
    let radius = if far {
        ea.norm().max(eb.norm()).max(3.0 * doc.half_width())
    } else {
        0.5 * ea.norm().min(eb.norm())
    };
    let (ta, tb) = (ea.arg(), eb.arg());
    let others: Vec<f64> = seps
        .iter()
        .filter(|s| s.escape_direction != Some(sector) && s.escape_direction != Some(next))
        .filter_map(|s| s.trajectory.points.last().map(|&z| (z - c).arg()))
        .collect();
    let ccw = (ta - tb).rem_euclid(2.0 * PI);
    let inside_ccw = |t: f64| (t - tb).rem_euclid(2.0 * PI) < ccw;
    let ccw_clear = others.iter().all(|&t| !inside_ccw(t));
    let cw_clear = others.iter().all(|&t| inside_ccw(t));
    let sweep = match (ccw_clear, cw_clear) {
        (true, false) => ccw,
        (false, true) => ccw - 2.0 * PI,
        _ if ccw <= PI => ccw,
        _ => ccw - 2.0 * PI,
    };
    let mut poly: Vec<C64> = pa.iter().rev().copied().collect();
    poly.extend(pb.iter().skip(1).copied());
    let steps = 64;
    poly.extend((0..=steps).map(|k| c + C64::from_polar(radius, tb + sweep * k as f64 / steps as f64)));
    Some(poly)
}

pub fn decompose_scene(q: &QuadraticDifferential, sk: &FoliationSkeleton) -> PlotDocument {
    let pts = singular_points(q);
    let mut doc = PlotDocument::fitting("strip decomposition", &pts, 1.0, 1.0);
    for (k, hp) in sk.half_planes.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        if let Some(poly) = half_plane_polygon(q, &doc, sk, hp.pole, hp.sector) {
            doc.polygon(&poly, color, 0.35);
            doc.legend(
                color,
                format!("half-plane: pole {} sector {}", hp.pole, hp.sector),
                Swatch::Fill,
            );
        }
    }
    for s in &sk.separatrices {
        doc.polyline(&with_zero(q, s), "#333333", 1.5, false);
    }
    doc.legend("#333333", "separatrix", Swatch::Line { dashed: false });
    for (k, strip) in sk.strips.iter().enumerate() {
        doc.polyline(&strip.arc, "#1f1f7a", 1.2, true);
        if let Some(&mid) = strip.arc.get(strip.arc.len() / 2) {
            doc.label(mid, format!("strip {k}: width {:.4}", strip.width));
        }
    }
    if !sk.strips.is_empty() {
        doc.legend("#1f1f7a", "strip transverse arc", Swatch::Line { dashed: true });
    }
    mark_singularities(&mut doc, q);
    doc
}

/// Equal-angle layout: each vertex receives a wedge proportional to the
/// number of ends (rays and leaves) below it.
pub fn tree_scene(tree: &MetricTree, title: &str) -> PlotDocument {
    let n = tree.vertex_count();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in tree.edges() {
        adj[e.u].push((e.v, e.length));
        adj[e.v].push((e.u, e.length));
    }
    let mut rays: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in tree.rays() {
        rays[r.vertex].push(r.label);
    }
    let root = tree.basepoint().unwrap_or(0);
    let total = tree.total_length();
    let unit = if tree.edges().is_empty() || total <= 0.0 {
        1.0
    } else {
        total / tree.edges().len() as f64
    };

    // parent pointers and a preorder
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        for &(w, _) in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
        k += 1;
    }
    let children = |v: usize| -> Vec<(usize, f64)> {
        adj[v].iter().copied().filter(|&(w, _)| parent[w] == v && w != v).collect()
    };
    let mut weight = vec![0usize; n];
    for &v in order.iter().rev() {
        let kids = children(v);
        let own = rays[v].len() + usize::from(kids.is_empty() && rays[v].is_empty());
        weight[v] = own + kids.iter().map(|&(w, _)| weight[w]).sum::<usize>();
    }

    let mut pos = vec![C64::new(0.0, 0.0); n];
    let mut wedge = vec![(0.0, 2.0 * PI); n];
    let mut ray_lines: Vec<(C64, C64, usize)> = Vec::new();
    for &v in &order {
        let (lo, hi) = wedge[v];
        let span = (hi - lo) / weight[v].max(1) as f64;
        let mut at = lo;
        for &label in &rays[v] {
            let dir = C64::from_polar(1.0, at + 0.5 * span);
            ray_lines.push((pos[v], pos[v] + dir * unit, label));
            at += span;
        }
        for (w, len) in children(v) {
            let share = span * weight[w] as f64;
            wedge[w] = (at, at + share);
            let shown = len.max(0.15 * unit);
            pos[w] = pos[v] + C64::from_polar(shown, at + 0.5 * share);
            at += share;
        }
    }

    let mut pts = pos.clone();
    pts.extend(ray_lines.iter().map(|r| r.1));
    let mut doc = PlotDocument::fitting(title, &pts, 0.3, 0.5);
    for e in tree.edges() {
        doc.polyline(&[pos[e.u], pos[e.v]], "#333333", 1.5, false);
    }
    for (from, to, label) in &ray_lines {
        doc.polyline(&[*from, *to], PALETTE[0], 1.2, true);
        doc.label(*to, format!("ray {label}"));
    }
    for (v, p) in pos.iter().enumerate() {
        doc.dot(*p, if v == root { "#d62728" } else { "black" }, 3.0);
    }
    doc.legend("#333333", "finite edge", Swatch::Line { dashed: false });
    doc.legend(PALETTE[0], "infinite ray", Swatch::Line { dashed: true });
    doc.legend("#d62728", "base vertex", Swatch::Dot);
    doc
}
