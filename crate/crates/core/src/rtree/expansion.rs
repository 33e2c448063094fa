use rayon::prelude::*;
use serde::Serialize;

use super::tree::{Edge, MetricTree, Ray};
use crate::error::{Error, Result};

/// Combinatorial type of a planar trivalent expansion of a valence-`V`
/// vertex.
///
/// Encoded as a triangulation of a convex `V`-gon with corners
/// `0..V`: side `k` joins corners `k` and `k+1 (mod V)` and is dual to leaf
/// `k`; every diagonal `(a, b)` is dual to an internal edge splitting the
/// leaves into the cyclic intervals `a..b` and its complement; triangles
/// are the trivalent vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExpansionType {
    valence: usize,
    diagonals: Vec<(usize, usize)>,
}

/// Incidence data of an expansion: trivalent vertices, internal edges (one
/// per diagonal, same order) and the vertex each leaf hangs off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionGraph {
    pub vertex_count: usize,
    pub internal: Vec<(usize, usize)>,
    pub leaves: Vec<usize>,
}

pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 0..n as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

fn triangulate(i: usize, j: usize) -> Vec<Vec<(usize, usize)>> {
    if j - i < 2 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in i + 1..j {
        let left = triangulate(i, k);
        let right = triangulate(k, j);
        for l in &left {
            for r in &right {
                let mut d = Vec::with_capacity(l.len() + r.len() + 2);
                if k - i >= 2 {
                    d.push((i, k));
                }
                if j - k >= 2 {
                    d.push((k, j));
                }
                d.extend_from_slice(l);
                d.extend_from_slice(r);
                out.push(d);
            }
        }
    }
    out
}

/// All planar trivalent expansions of a valence-`valence` vertex, in
/// canonical (sorted) order. There are `catalan(valence - 2)` of them.
pub fn enumerate_expansions(valence: usize) -> Result<Vec<ExpansionType>> {
    if valence < 3 {
        return Err(Error::ValenceTooSmall(valence));
    }
    let last = valence - 1;
    let mut types: Vec<ExpansionType> = (1..last)
        .into_par_iter()
        .flat_map_iter(|k| {
            let left = triangulate(0, k);
            let right = triangulate(k, last);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut d: Vec<(usize, usize)> = Vec::new();
                    if k >= 2 {
                        d.push((0, k));
                    }
                    if last - k >= 2 {
                        d.push((k, last));
                    }
                    d.extend_from_slice(l);
                    d.extend_from_slice(r);
                    out.push(ExpansionType::from_sorted(valence, d));
                }
            }
            out
        })
        .collect();
    types.sort();
    Ok(types)
}

impl ExpansionType {
    fn from_sorted(valence: usize, mut diagonals: Vec<(usize, usize)>) -> Self {
        diagonals.sort_unstable();
        Self { valence, diagonals }
    }

    /// Builds a type from diagonals of the `valence`-gon, checking that they
    /// form a triangulation.
    pub fn from_diagonals(valence: usize, diagonals: &[(usize, usize)]) -> Result<Self> {
        if valence < 3 {
            return Err(Error::ValenceTooSmall(valence));
        }
        let mut d: Vec<(usize, usize)> = diagonals
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        d.sort_unstable();
        d.dedup();
        let bad = d.len() != valence - 3
            || d.iter().any(|&(a, b)| b >= valence || b - a < 2 || (a == 0 && b == valence - 1))
            || d.iter().enumerate().any(|(i, x)| d[i + 1..].iter().any(|y| cross(*x, *y)));
        if bad {
            return Err(Error::InvalidInput(format!(
                "{diagonals:?} is not a triangulation of a {valence}-gon"
            )));
        }
        Ok(Self { valence, diagonals: d })
    }

    pub fn valence(&self) -> usize {
        self.valence
    }

    pub fn diagonals(&self) -> &[(usize, usize)] {
        &self.diagonals
    }

    /// Number of finite edge lengths, `V - 3`.
    pub fn parameter_dimension(&self) -> usize {
        self.valence - 3
    }

    /// Leaf bipartition dual to each internal edge, as the sorted leaf set
    /// on the side not containing leaf `V - 1`.
    pub fn splits(&self) -> Vec<Vec<usize>> {
        self.diagonals.iter().map(|&(a, b)| (a..b).collect()).collect()
    }

    fn has_chord(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        b - a == 1 || (a == 0 && b == self.valence - 1) || self.diagonals.binary_search(&(a, b)).is_ok()
    }

    fn triangles(&self) -> Vec<[usize; 3]> {
        let v = self.valence;
        let mut out = Vec::with_capacity(v - 2);
        for i in 0..v {
            for j in i + 1..v {
                if !self.has_chord(i, j) {
                    continue;
                }
                for k in j + 1..v {
                    if self.has_chord(j, k) && self.has_chord(i, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    pub fn graph(&self) -> ExpansionGraph {
        let v = self.valence;
        let tris = self.triangles();
        let owner = |a: usize, b: usize| {
            tris.iter()
                .enumerate()
                .filter(|(_, t)| t.contains(&a) && t.contains(&b))
                .map(|(i, _)| i)
                .collect::<Vec<_>>()
        };
        let internal = self
            .diagonals
            .iter()
            .map(|&(a, b)| {
                let o = owner(a, b);
                (o[0], o[1])
            })
            .collect();
        let leaves = (0..v).map(|k| owner(k, (k + 1) % v)[0]).collect();
        ExpansionGraph {
            vertex_count: tris.len(),
            internal,
            leaves,
        }
    }

    /// Metric tree with internal edge `i` of length `lengths[i]` and leaf `k`
    /// realized as ray `k`.
    pub fn to_tree(&self, lengths: &[f64]) -> Result<MetricTree> {
        if lengths.len() != self.parameter_dimension() {
            return Err(Error::InconsistentLengths(format!(
                "{} lengths for {} internal edges",
                lengths.len(),
                self.parameter_dimension()
            )));
        }
        let g = self.graph();
        let edges = g
            .internal
            .iter()
            .zip(lengths)
            .map(|(&(u, v), &length)| Edge { u, v, length })
            .collect();
        let rays = g
            .leaves
            .iter()
            .enumerate()
            .map(|(label, &vertex)| Ray { vertex, label })
            .collect();
        MetricTree::new(g.vertex_count, edges, rays)
    }

    /// Whitehead move on internal edge `i`: the diagonal is replaced by the
    /// other diagonal of its quadrilateral.
    pub fn whitehead_flip(&self, i: usize) -> Result<Self> {
        let &(a, b) = self.diagonals.get(i).ok_or_else(|| {
            Error::InvalidInput(format!("no internal edge {i} in a type with {}", self.diagonals.len()))
        })?;
        let apex: Vec<usize> = self
            .triangles()
            .into_iter()
            .filter(|t| t.contains(&a) && t.contains(&b))
            .map(|t| t.into_iter().find(|&x| x != a && x != b).unwrap_or(a))
            .collect();
        let mut d = self.diagonals.clone();
        d[i] = (apex[0].min(apex[1]), apex[0].max(apex[1]));
        Ok(Self::from_sorted(self.valence, d))
    }

    /// The degenerate tree obtained by shrinking internal edge `i` to zero,
    /// recorded by its surviving diagonals.
    pub fn collapse(&self, i: usize) -> Result<Vec<(usize, usize)>> {
        if i >= self.diagonals.len() {
            return Err(Error::InvalidInput(format!("no internal edge {i}")));
        }
        let mut d = self.diagonals.clone();
        d.remove(i);
        Ok(d)
    }

    /// Whether this type re-expands the collapsed tree `collapsed`.
    pub fn refines(&self, collapsed: &[(usize, usize)]) -> bool {
        collapsed.iter().all(|c| self.diagonals.binary_search(c).is_ok())
    }
}

fn cross((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}
