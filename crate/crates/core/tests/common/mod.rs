//! Brute-force oracle for planar trivalent trees: every leaf-labelled
//! unrooted binary tree by stepwise insertion, kept when all of its splits
//! are cyclic intervals.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Split = BTreeSet<usize>;

/// Unrooted binary trees on leaves `0..v` by stepwise leaf insertion,
/// each returned as its set of nontrivial splits (side without leaf 0).
pub fn all_binary_trees(v: usize) -> Vec<BTreeSet<Split>> {
    // leaves are nodes 0..v, internal nodes follow
    let mut trees: Vec<Vec<(usize, usize)>> = vec![vec![(0, v), (1, v), (2, v)]];
    for leaf in 3..v {
        let mut next = Vec::new();
        for t in &trees {
            let fresh = t.iter().flat_map(|&(a, b)| [a, b]).max().unwrap() + 1;
            for i in 0..t.len() {
                let (a, b) = t[i];
                let mut u = t.clone();
                u[i] = (a, fresh);
                u.push((fresh, b));
                u.push((fresh, leaf));
                next.push(u);
            }
        }
        trees = next;
    }
    trees.iter().map(|t| splits(t, v)).collect()
}

fn splits(edges: &[(usize, usize)], v: usize) -> BTreeSet<Split> {
    let mut out = BTreeSet::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a < v || b < v {
            continue;
        }
        let mut side = BTreeSet::from([b]);
        let mut stack = vec![b];
        while let Some(x) = stack.pop() {
            for (j, &(p, q)) in edges.iter().enumerate() {
                if j == i {
                    continue;
                }
                let y = if p == x { q } else if q == x { p } else { continue };
                if side.insert(y) {
                    stack.push(y);
                }
            }
        }
        let leaves: Split = side.into_iter().filter(|&x| x < v).collect();
        out.insert(normalize(leaves, v));
    }
    out
}

pub fn is_cyclic_interval(s: &Split, v: usize) -> bool {
    let starts = (0..v).filter(|&k| s.contains(&k) && !s.contains(&((k + v - 1) % v))).count();
    starts == 1
}

pub fn double_factorial(n: usize) -> usize {
    (1..=n).rev().step_by(2).product()
}

/// Normalizes a split to the side without leaf 0.
pub fn normalize(s: Split, v: usize) -> Split {
    if s.contains(&0) {
        (0..v).filter(|x| !s.contains(x)).collect()
    } else {
        s
    }
}

/// Split sets of the planar trees on `v` cyclically ordered leaves.
pub fn planar_split_sets(v: usize) -> BTreeSet<BTreeSet<Split>> {
    all_binary_trees(v)
        .into_iter()
        .filter(|t| t.iter().all(|s| is_cyclic_interval(s, v)))
        .collect()
}

/// Split sets of the library's expansion types.
pub fn expansion_split_sets(types: &[folia::rtree::ExpansionType]) -> BTreeSet<BTreeSet<Split>> {
    types
        .iter()
        .map(|t| {
            let v = t.valence();
            t.splits().into_iter().map(|s| normalize(s.into_iter().collect(), v)).collect()
        })
        .collect()
}
