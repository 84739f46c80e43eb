//! Complementary regions of a finite leaf set.
//!
//! Leaves and the circle arcs between consecutive leaf endpoints form a
//! planar map; each face inside the disk is a gap. Faces are traced by the
//! usual rotation-system walk: arriving at a vertex, leave along the edge
//! immediately clockwise of the one just used.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::angle::Angle;
use crate::chord::{to_rational, Chord};
use crate::lamination::Lamination;
use crate::polygon::Polygon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Leaf,
    /// A circle arc between consecutive endpoints: an artifact of the
    /// finite depth, not a leaf.
    Arc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapEdge {
    pub from: Angle,
    pub to: Angle,
    pub kind: EdgeKind,
}

/// One face, listed counter-clockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub edges: Vec<GapEdge>,
}

impl Gap {
    pub fn vertices(&self) -> Vec<Angle> {
        self.edges.iter().map(|e| e.from.clone()).collect()
    }

    /// `None` only for the single gap of an empty lamination.
    pub fn polygon(&self) -> Option<Polygon> {
        if self.edges.is_empty() {
            None
        } else {
            Some(Polygon::from_points(self.vertices()))
        }
    }

    pub fn has_artifact(&self) -> bool {
        self.edges.iter().any(|e| e.kind == EdgeKind::Arc)
    }

    pub fn leaf_edges(&self) -> impl Iterator<Item = Chord> + '_ {
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Leaf)
            .map(|e| Chord::new(e.from.clone(), e.to.clone()))
    }

    /// Total length of the circle arcs on the boundary.
    pub fn arc_length(&self) -> BigRational {
        if self.edges.is_empty() {
            return BigRational::from_integer(1.into());
        }
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Arc)
            .fold(BigRational::zero(), |acc, e| {
                acc + to_rational(&e.from.ccw_to(&e.to))
            })
    }

    /// Euclidean area of the polygon on the boundary vertices, with the
    /// circle embedded as `t -> (cos 2 pi t, sin 2 pi t)`. Curved arc segments
    /// are not included.
    pub fn area(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .edges
            .iter()
            .map(|e| crate::hausdorff::embed(&e.from))
            .collect();
        let n = pts.len();
        let twice: f64 = (0..n)
            .map(|i| {
                let (x0, y0) = pts[i];
                let (x1, y1) = pts[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum();
        twice.abs() / 2.0
    }
}

/// Every gap of the lamination.
pub fn gaps(l: &Lamination) -> Vec<Gap> {
    let pts = l.endpoints();
    let n = pts.len();
    if n == 0 {
        return vec![Gap { edges: Vec::new() }];
    }
    let index: HashMap<&Angle, usize> = pts.iter().enumerate().map(|(i, a)| (a, i)).collect();

    // Rotation at each vertex, sorted by key: 0 = arc to next point,
    // k in 1..n = leaf to the point k steps ahead, n = arc from previous.
    let mut rot: Vec<Vec<(usize, usize, EdgeKind)>> = (0..n)
        .map(|w| {
            vec![
                (0, (w + 1) % n, EdgeKind::Arc),
                (n, (w + n - 1) % n, EdgeKind::Arc),
            ]
        })
        .collect();
    for c in l.leaves() {
        let i = index[c.a()];
        let j = index[c.b()];
        rot[i].push(((j + n - i) % n, j, EdgeKind::Leaf));
        rot[j].push(((i + n - j) % n, i, EdgeKind::Leaf));
    }
    for r in &mut rot {
        r.sort_by_key(|e| e.0);
    }

    // Directed edge ids: (vertex, position in its rotation). Only arcs
    // oriented counter-clockwise (key 0) bound faces inside the disk, so the
    // key-n slots are never used as outgoing edges.
    let mut used: Vec<Vec<bool>> = rot.iter().map(|r| vec![false; r.len()]).collect();
    let position_of = |w: usize, key: usize, to: usize, kind: EdgeKind| -> usize {
        rot[w]
            .binary_search_by(|e| e.0.cmp(&key))
            .inspect(|&p| debug_assert!(rot[w][p].1 == to && rot[w][p].2 == kind))
            .expect("reverse edge present")
    };

    let mut out = Vec::new();
    for v in 0..n {
        for p in 0..rot[v].len() {
            if used[v][p] || rot[v][p].0 == n {
                continue;
            }
            let mut edges = Vec::new();
            let (mut w, mut q) = (v, p);
            while !used[w][q] {
                used[w][q] = true;
                let (_, to, kind) = rot[w][q];
                edges.push(GapEdge {
                    from: pts[w].clone(),
                    to: pts[to].clone(),
                    kind,
                });
                // reverse edge at `to`
                let back_key = match kind {
                    EdgeKind::Arc => n,
                    EdgeKind::Leaf => (w + n - to) % n,
                };
                let back = position_of(to, back_key, w, kind);
                let next = if back == 0 {
                    rot[to].len() - 1
                } else {
                    back - 1
                };
                w = to;
                q = next;
            }
            out.push(Gap { edges });
        }
    }
    out
}
