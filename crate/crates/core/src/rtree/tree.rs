use std::collections::VecDeque;
use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// An infinite ray leaving `vertex`, carrying a cyclic label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ray {
    pub vertex: usize,
    pub label: usize,
}

/// The infinite cyclic group generated by the boundary loop of a pole
/// neighbourhood, acting on the tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZAction {
    /// Translation along an axis; `axis` lists the vertices of one
    /// fundamental segment, from `q_-` to `q_+`.
    Translation { axis: Vec<usize>, length: f64 },
    /// A fixed point. `infinite_copies` marks that Z-many copies of the
    /// attached domain hang off `vertex` but only one is stored.
    FixedPoint { vertex: usize, infinite_copies: bool },
}

/// Finite metric tree with labelled infinite rays.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricTree {
    vertex_count: usize,
    edges: Vec<Edge>,
    rays: Vec<Ray>,
    basepoint: Option<usize>,
    z_action: Option<ZAction>,
}

/// Vertex path from `u` to `v` in an acyclic edge list, inclusive of both
/// ends; empty if they are not connected.
pub(crate) fn edge_path(vertex_count: usize, edges: &[Edge], u: usize, v: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; vertex_count];
    prev[u] = u;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for e in edges {
            let y = if e.u == x {
                e.v
            } else if e.v == x {
                e.u
            } else {
                continue;
            };
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    if prev[v] == usize::MAX {
        return Vec::new();
    }
    let mut out = vec![v];
    let mut x = v;
    while x != u {
        x = prev[x];
        out.push(x);
    }
    out.reverse();
    out
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl MetricTree {
    /// Builds and validates a tree. Zero-length edges are contracted (vertex
    /// indices are then renumbered in order of first appearance of their
    /// class), rays must carry distinct labels `0..k`.
    pub fn new(vertex_count: usize, edges: Vec<Edge>, rays: Vec<Ray>) -> Result<Self> {
        Self::with_data(vertex_count, edges, rays, None, None)
    }

    pub fn with_data(
        vertex_count: usize,
        edges: Vec<Edge>,
        rays: Vec<Ray>,
        basepoint: Option<usize>,
        z_action: Option<ZAction>,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        for e in &edges {
            if e.u >= vertex_count || e.v >= vertex_count {
                return Err(Error::NotATree(format!("edge {}-{} out of range", e.u, e.v)));
            }
            if !(e.length >= 0.0) || !e.length.is_finite() {
                return Err(Error::InconsistentLengths(format!(
                    "edge {}-{} has length {}",
                    e.u, e.v, e.length
                )));
            }
        }
        for r in &rays {
            if r.vertex >= vertex_count {
                return Err(Error::NotATree(format!("ray at missing vertex {}", r.vertex)));
            }
        }
        let mut labels: Vec<usize> = rays.iter().map(|r| r.label).collect();
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, l)| i != *l) {
            return Err(Error::InvalidInput(format!(
                "ray labels {labels:?} are not a permutation of 0..{}",
                rays.len()
            )));
        }
        // acyclic + connected on the full edge set
        let mut dsu = Dsu::new(vertex_count);
        for e in &edges {
            if !dsu.union(e.u, e.v) {
                return Err(Error::NotATree(format!("edge {}-{} closes a cycle", e.u, e.v)));
            }
        }
        if edges.len() + 1 != vertex_count {
            return Err(Error::NotATree(format!(
                "{} vertices but {} edges: not connected",
                vertex_count,
                edges.len()
            )));
        }
        // contract zero-length edges
        let mut zero = Dsu::new(vertex_count);
        for e in edges.iter().filter(|e| e.length == 0.0) {
            zero.union(e.u, e.v);
        }
        let mut index = vec![usize::MAX; vertex_count];
        let mut next = 0;
        let mut map = vec![0; vertex_count];
        for (v, slot) in map.iter_mut().enumerate() {
            let r = zero.find(v);
            if index[r] == usize::MAX {
                index[r] = next;
                next += 1;
            }
            *slot = index[r];
        }
        let edges = edges
            .into_iter()
            .filter(|e| e.length > 0.0)
            .map(|e| Edge {
                u: map[e.u],
                v: map[e.v],
                length: e.length,
            })
            .collect();
        let rays = rays
            .into_iter()
            .map(|r| Ray {
                vertex: map[r.vertex],
                label: r.label,
            })
            .collect();
        let z_action = z_action.map(|z| match z {
            ZAction::Translation { axis, length } => {
                let mut axis: Vec<usize> = axis.into_iter().map(|v| map[v]).collect();
                axis.dedup();
                ZAction::Translation { axis, length }
            }
            ZAction::FixedPoint {
                vertex,
                infinite_copies,
            } => ZAction::FixedPoint {
                vertex: map[vertex],
                infinite_copies,
            },
        });
        Ok(Self {
            vertex_count: next,
            edges,
            rays,
            basepoint: basepoint.map(|b| map[b]),
            z_action,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    pub fn z_action(&self) -> Option<&ZAction> {
        self.z_action.as_ref()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
            + self.rays.iter().filter(|r| r.vertex == v).count()
    }

    /// Whether every vertex is reachable from vertex 0 and `|E| = |V| - 1`.
    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.vertex_count {
            return false;
        }
        self.distances_from(0).iter().all(|d| d.is_finite())
    }

    /// Path metric distances from `v` to every vertex.
    pub fn distances_from(&self, v: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.vertex_count];
        dist[v] = 0.0;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for e in &self.edges {
                let y = if e.u == x {
                    e.v
                } else if e.v == x {
                    e.u
                } else {
                    continue;
                };
                if dist[y].is_infinite() {
                    dist[y] = dist[x] + e.length;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.distances_from(u)[v]
    }

    /// Vertices on the geodesic from `u` to `v`, inclusive.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        edge_path(self.vertex_count, &self.edges, u, v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertex_count,
            "edges": self.edges.iter().map(|e| serde_json::json!([e.u, e.v, e.length])).collect::<Vec<_>>(),
            "rays": self.rays.iter().map(|r| serde_json::json!([r.vertex, r.label])).collect::<Vec<_>>(),
            "basepoint": self.basepoint,
            "z_action": self.z_action,
        })
    }

    /// Graphviz rendering; rays end at small invisible nodes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph tree {\n  node [shape=point];\n");
        for v in 0..self.vertex_count {
            let _ = writeln!(s, "  v{v};");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -- v{} [label=\"{}\"];", e.u, e.v, fmt_f64(e.length));
        }
        for r in &self.rays {
            let _ = writeln!(s, "  r{} [style=invis];", r.label);
            let _ = writeln!(
                s,
                "  v{} -- r{} [style=dashed, label=\"ray {}\"];",
                r.vertex, r.label, r.label
            );
        }
        s.push_str("}\n");
        s
    }
}
