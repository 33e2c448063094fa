use super::leafspace::{LeafSpaceCase, PoleLeafSpace};
use super::tree::{Edge, MetricTree, Ray, ZAction};
use crate::error::{Error, Result};

fn positions(tree: &MetricTree, path: &[usize]) -> Vec<f64> {
    let d = tree.distances_from(path[0]);
    path.iter().map(|&v| d[v]).collect()
}

/// Glues the fundamental domain of a pole leaf space into `t0` along the
/// marked boundary data of `t0`: an axis segment whose length is the
/// boundary measure, or a fixed point when that measure is zero.
pub fn glue_trees(t0: &MetricTree, tu: &PoleLeafSpace) -> Result<MetricTree> {
    let marked = t0
        .z_action()
        .ok_or_else(|| Error::MarkedDataMissing("T0 carries no boundary axis or fixed point".into()))?;
    let dom = &tu.fundamental_domain;
    let ray_offset = t0.rays().len();
    let mut rays: Vec<Ray> = t0.rays().to_vec();
    match (marked, tu.case) {
        (ZAction::Translation { axis, length }, LeafSpaceCase::PositiveMeasure) => {
            let tau = tu.translation_length;
            let tol = 1e-9 * tau.max(1.0);
            if (length - tau).abs() > tol {
                return Err(Error::MeasureMismatch {
                    tree: *length,
                    leaf_space: tau,
                });
            }
            let (Some(&s), Some(&e)) = (axis.first(), axis.last()) else {
                return Err(Error::MarkedDataMissing("empty axis in T0".into()));
            };
            let path0 = t0.path(s, e);
            let pos0 = positions(t0, &path0);
            if (pos0[pos0.len() - 1] - length).abs() > tol {
                return Err(Error::InconsistentLengths(format!(
                    "marked axis of T0 has length {} but records measure {length}",
                    pos0[pos0.len() - 1]
                )));
            }
            let Some(ZAction::Translation { axis: axis_u, .. }) = dom.z_action() else {
                return Err(Error::MarkedDataMissing("leaf space carries no axis".into()));
            };
            let pos_u = positions(dom, axis_u);

            // subdivide the T0 axis at TU axis positions
            let mut n = t0.vertex_count();
            let mut new_points: Vec<(f64, usize)> = Vec::new();
            let mut map_u = vec![usize::MAX; dom.vertex_count()];
            for (&v, &x) in axis_u.iter().zip(&pos_u) {
                if let Some(i) = pos0.iter().position(|p| (p - x).abs() <= tol) {
                    map_u[v] = path0[i];
                } else {
                    map_u[v] = n;
                    new_points.push((x, n));
                    n += 1;
                }
            }
            let mut edges = Vec::with_capacity(t0.edges().len() + dom.edges().len());
            for edge in t0.edges() {
                let i = path0
                    .windows(2)
                    .position(|w| (w[0], w[1]) == (edge.u, edge.v) || (w[1], w[0]) == (edge.u, edge.v));
                let Some(i) = i else {
                    edges.push(*edge);
                    continue;
                };
                let (a, b) = (pos0[i], pos0[i + 1]);
                let mut chain: Vec<(f64, usize)> = vec![(a, path0[i])];
                chain.extend(new_points.iter().filter(|(x, _)| *x > a && *x < b));
                chain.push((b, path0[i + 1]));
                chain.sort_by(|p, q| p.0.total_cmp(&q.0));
                for w in chain.windows(2) {
                    edges.push(Edge {
                        u: w[0].1,
                        v: w[1].1,
                        length: w[1].0 - w[0].0,
                    });
                }
            }
            for slot in map_u.iter_mut().filter(|s| **s == usize::MAX) {
                *slot = n;
                n += 1;
            }
            let on_axis = |v: usize| axis_u.contains(&v);
            edges.extend(dom.edges().iter().filter(|e| !(on_axis(e.u) && on_axis(e.v))).map(|e| Edge {
                u: map_u[e.u],
                v: map_u[e.v],
                length: e.length,
            }));
            rays.extend(dom.rays().iter().map(|r| Ray {
                vertex: map_u[r.vertex],
                label: r.label + ray_offset,
            }));
            MetricTree::with_data(n, edges, rays, t0.basepoint(), None)
        }
        (ZAction::FixedPoint { vertex, .. }, LeafSpaceCase::ZeroMeasure) => {
            let Some(ZAction::FixedPoint { vertex: root, .. }) = dom.z_action() else {
                return Err(Error::MarkedDataMissing("leaf space carries no root".into()));
            };
            let mut n = t0.vertex_count();
            let map_u: Vec<usize> = (0..dom.vertex_count())
                .map(|v| {
                    if v == *root {
                        *vertex
                    } else {
                        n += 1;
                        n - 1
                    }
                })
                .collect();
            let mut edges = t0.edges().to_vec();
            edges.extend(dom.edges().iter().map(|e| Edge {
                u: map_u[e.u],
                v: map_u[e.v],
                length: e.length,
            }));
            rays.extend(dom.rays().iter().map(|r| Ray {
                vertex: map_u[r.vertex],
                label: r.label + ray_offset,
            }));
            MetricTree::with_data(
                n,
                edges,
                rays,
                t0.basepoint(),
                Some(ZAction::FixedPoint {
                    vertex: *vertex,
                    infinite_copies: true,
                }),
            )
        }
        (ZAction::Translation { length, .. }, LeafSpaceCase::ZeroMeasure) => Err(Error::MeasureMismatch {
            tree: *length,
            leaf_space: 0.0,
        }),
        (ZAction::FixedPoint { .. }, LeafSpaceCase::PositiveMeasure) => Err(Error::MeasureMismatch {
            tree: 0.0,
            leaf_space: tu.translation_length,
        }),
    }
}
