use serde::Serialize;

use super::expansion::ExpansionType;
use super::tree::{edge_path, Edge, MetricTree, Ray, ZAction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafSpaceCase {
    PositiveMeasure,
    ZeroMeasure,
}

/// Parameters of a pole neighbourhood leaf space.
#[derive(Debug, Clone, PartialEq)]
pub enum LeafSpaceData {
    /// Boundary with transverse measure `tau > 0`: an expansion of a
    /// valence-`n` vertex plus the lengths `a0`, `a_last` of the edges
    /// ending at the axis points `q_-`, `q_+`.
    Positive {
        tau: f64,
        expansion: ExpansionType,
        lengths: Vec<f64>,
        a0: f64,
        a_last: f64,
    },
    /// Boundary of measure zero: a rooted tree, given as an expansion of a
    /// valence-`(n-1)` vertex whose leaf 0 is the edge to the root (none for
    /// `n = 3`). `root_length` is the signed width of the bi-infinite strip
    /// next to the boundary.
    Zero {
        expansion: Option<ExpansionType>,
        lengths: Vec<f64>,
        root_length: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleLeafSpace {
    pub order: u32,
    pub fundamental_domain: MetricTree,
    pub translation_length: f64,
    pub case: LeafSpaceCase,
    pub strip_widths: Vec<f64>,
    pub parameter_dimension: usize,
}

fn check_lengths(lengths: &[f64], expected: usize) -> Result<()> {
    if lengths.len() != expected {
        return Err(Error::InconsistentLengths(format!(
            "{} expansion lengths, expected {expected}",
            lengths.len()
        )));
    }
    if let Some(l) = lengths.iter().find(|l| !(**l >= 0.0) || !l.is_finite()) {
        return Err(Error::InconsistentLengths(format!("expansion length {l}")));
    }
    Ok(())
}

fn positive_domain(
    expansion: &ExpansionType,
    lengths: &[f64],
    a0: f64,
    a_last: f64,
) -> (Vec<Edge>, Vec<usize>, f64) {
    let g = expansion.graph();
    let qm = g.vertex_count;
    let qp = qm + 1;
    let mut edges: Vec<Edge> = g
        .internal
        .iter()
        .zip(lengths)
        .map(|(&(u, v), &length)| Edge { u, v, length })
        .collect();
    edges.push(Edge {
        u: qm,
        v: g.leaves[0],
        length: a0,
    });
    edges.push(Edge {
        u: g.leaves[expansion.valence() - 1],
        v: qp,
        length: a_last,
    });
    let axis = edge_path(qp + 1, &edges, qm, qp);
    let d = axis
        .windows(2)
        .map(|w| {
            edges
                .iter()
                .find(|e| (e.u, e.v) == (w[0], w[1]) || (e.v, e.u) == (w[0], w[1]))
                .map_or(0.0, |e| e.length)
        })
        .sum();
    (edges, axis, d)
}

/// Translation length `d(q_-, q_+)` determined by positive-measure data.
pub fn axis_length(expansion: &ExpansionType, lengths: &[f64], a0: f64, a_last: f64) -> Result<f64> {
    check_lengths(lengths, expansion.parameter_dimension())?;
    Ok(positive_domain(expansion, lengths, a0, a_last).2)
}

/// Fundamental domain of the Z-invariant leaf space of the lifted
/// foliation on a punctured neighbourhood of an order-`n` pole.
pub fn build_pole_leafspace(n: u32, data: &LeafSpaceData) -> Result<PoleLeafSpace> {
    if n < 3 {
        return Err(Error::NotHigherOrder { order: n, what: "pole leaf space" });
    }
    let rays = n as usize - 2;
    match data {
        LeafSpaceData::Positive {
            tau,
            expansion,
            lengths,
            a0,
            a_last,
        } => {
            if *tau < 0.0 {
                return Err(Error::NegativeMeasure(*tau));
            }
            if *tau == 0.0 {
                return Err(Error::InconsistentLengths(
                    "positive-measure data with tau = 0".into(),
                ));
            }
            if expansion.valence() != n as usize {
                return Err(Error::InconsistentLengths(format!(
                    "expansion of valence {} for a pole of order {n}",
                    expansion.valence()
                )));
            }
            check_lengths(lengths, n as usize - 3)?;
            if !(*a0 >= 0.0 && *a_last >= 0.0) || *a0 + *a_last <= 0.0 {
                return Err(Error::InconsistentLengths(format!(
                    "a0 = {a0}, a_last = {a_last}: need both nonnegative and not both zero"
                )));
            }
            let (edges, axis, d) = positive_domain(expansion, lengths, *a0, *a_last);
            let g = expansion.graph();
            let qm = g.vertex_count;
            if (d - tau).abs() > 1e-9 * tau.max(1.0) {
                return Err(Error::InconsistentLengths(format!(
                    "d(q_-, q_+) = {d} but boundary measure is {tau}"
                )));
            }
            let ray_list: Vec<Ray> = (1..n as usize - 1)
                .map(|k| Ray {
                    vertex: g.leaves[k],
                    label: k - 1,
                })
                .collect();
            let tree = MetricTree::with_data(
                g.vertex_count + 2,
                edges,
                ray_list,
                Some(qm),
                Some(ZAction::Translation {
                    axis,
                    length: *tau,
                }),
            )?;
            let mut strip_widths = lengths.clone();
            strip_widths.push(a0 + a_last);
            Ok(PoleLeafSpace {
                order: n,
                fundamental_domain: tree,
                translation_length: *tau,
                case: LeafSpaceCase::PositiveMeasure,
                strip_widths,
                parameter_dimension: lengths.len() + 1,
            })
        }
        LeafSpaceData::Zero {
            expansion,
            lengths,
            root_length,
        } => {
            if !root_length.is_finite() {
                return Err(Error::InconsistentLengths(format!("root length {root_length}")));
            }
            let width = root_length.abs();
            let shift = usize::from(*root_length < 0.0);
            let label = |k: usize| (k - 1 + shift) % rays;
            let tree = match expansion {
                None => {
                    if n != 3 {
                        return Err(Error::InconsistentLengths(format!(
                            "zero-measure data for order {n} needs an expansion of valence {}",
                            n - 1
                        )));
                    }
                    if *root_length != 0.0 || !lengths.is_empty() {
                        return Err(Error::InconsistentLengths(
                            "order 3 with zero measure has no free lengths".into(),
                        ));
                    }
                    MetricTree::with_data(
                        1,
                        Vec::new(),
                        vec![Ray { vertex: 0, label: 0 }],
                        Some(0),
                        Some(ZAction::FixedPoint {
                            vertex: 0,
                            infinite_copies: true,
                        }),
                    )?
                }
                Some(exp) => {
                    if exp.valence() != n as usize - 1 {
                        return Err(Error::InconsistentLengths(format!(
                            "zero-measure expansion of valence {}, expected {}",
                            exp.valence(),
                            n - 1
                        )));
                    }
                    check_lengths(lengths, n as usize - 4)?;
                    let g = exp.graph();
                    let root = g.vertex_count;
                    let mut edges: Vec<Edge> = g
                        .internal
                        .iter()
                        .zip(lengths)
                        .map(|(&(u, v), &length)| Edge { u, v, length })
                        .collect();
                    edges.push(Edge {
                        u: root,
                        v: g.leaves[0],
                        length: width,
                    });
                    let ray_list = (1..n as usize - 1)
                        .map(|k| Ray {
                            vertex: g.leaves[k],
                            label: label(k),
                        })
                        .collect();
                    MetricTree::with_data(
                        root + 1,
                        edges,
                        ray_list,
                        Some(root),
                        Some(ZAction::FixedPoint {
                            vertex: root,
                            infinite_copies: true,
                        }),
                    )?
                }
            };
            let mut strip_widths = lengths.clone();
            if expansion.is_some() {
                strip_widths.push(width);
            }
            let parameter_dimension = strip_widths.len();
            Ok(PoleLeafSpace {
                order: n,
                fundamental_domain: tree,
                translation_length: 0.0,
                case: LeafSpaceCase::ZeroMeasure,
                strip_widths,
                parameter_dimension,
            })
        }
    }
}
