//! Floating-point Hausdorff distance between finite unions of inscribed
//! points, chords and filled polygons. Used for convergence probes and
//! rendering only, never for combinatorial predicates.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use crate::angle::Angle;
use crate::polygon::Polygon;

type Pt = (f64, f64);

/// `t -> (cos 2 pi t, sin 2 pi t)`.
pub fn embed(t: &Angle) -> Pt {
    let x = t.to_f64() * TAU;
    (x.cos(), x.sin())
}

/// A compact subset of the closed disk given as a union of inscribed hulls.
#[derive(Clone, Debug, Default)]
pub struct CompactSet {
    pieces: Vec<Vec<Pt>>,
}

impl CompactSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_polygons<'a>(ps: impl IntoIterator<Item = &'a Polygon>) -> Self {
        let mut s = Self::new();
        for p in ps {
            s.push(p);
        }
        s
    }

    pub fn push(&mut self, p: &Polygon) {
        // vertices ascend in angle, so the embedded polygon is counter-clockwise
        self.pieces.push(p.vertices().iter().map(embed).collect());
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Distance from a point to the set.
    pub fn distance_to(&self, x: Pt) -> f64 {
        self.pieces
            .iter()
            .map(|p| piece_distance(x, p))
            .fold(f64::INFINITY, f64::min)
    }
}

fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

fn norm(a: Pt) -> f64 {
    a.0.hypot(a.1)
}

fn cross(a: Pt, b: Pt) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn segment_distance(x: Pt, a: Pt, b: Pt) -> f64 {
    let ab = sub(b, a);
    let len2 = ab.0 * ab.0 + ab.1 * ab.1;
    if len2 == 0.0 {
        return norm(sub(x, a));
    }
    let t = (((x.0 - a.0) * ab.0 + (x.1 - a.1) * ab.1) / len2).clamp(0.0, 1.0);
    norm(sub(x, (a.0 + t * ab.0, a.1 + t * ab.1)))
}

fn piece_distance(x: Pt, p: &[Pt]) -> f64 {
    match p.len() {
        0 => f64::INFINITY,
        1 => norm(sub(x, p[0])),
        2 => segment_distance(x, p[0], p[1]),
        n => {
            let inside = (0..n).all(|i| cross(sub(p[(i + 1) % n], p[i]), sub(x, p[i])) >= 0.0);
            if inside {
                0.0
            } else {
                (0..n)
                    .map(|i| segment_distance(x, p[i], p[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// A simplex cell (1, 2 or 3 corners) in the branch-and-bound search.
struct Cell {
    corners: Vec<Pt>,
    center_value: f64,
    upper: f64,
}

impl Cell {
    fn new(corners: Vec<Pt>, target: &CompactSet) -> Cell {
        let k = corners.len() as f64;
        let c = corners
            .iter()
            .fold((0.0, 0.0), |acc, p| (acc.0 + p.0 / k, acc.1 + p.1 / k));
        let radius = corners.iter().map(|p| norm(sub(*p, c))).fold(0.0, f64::max);
        let center_value = target.distance_to(c);
        // distance to one convex piece is convex, so its max over the cell
        // is attained at a corner
        let convex = target
            .pieces
            .iter()
            .map(|p| {
                corners
                    .iter()
                    .map(|x| piece_distance(*x, p))
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        Cell {
            upper: convex.min(center_value + radius),
            center_value,
            corners,
        }
    }

    fn upper(&self) -> f64 {
        self.upper
    }

    fn split(&self) -> Vec<Vec<Pt>> {
        let mid = |a: Pt, b: Pt| ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        match self.corners.as_slice() {
            [a, b] => {
                let m = mid(*a, *b);
                vec![vec![*a, m], vec![m, *b]]
            }
            [a, b, c] => {
                let (ab, bc, ca) = (mid(*a, *b), mid(*b, *c), mid(*c, *a));
                vec![
                    vec![*a, ab, ca],
                    vec![ab, *b, bc],
                    vec![ca, bc, *c],
                    vec![ab, bc, ca],
                ]
            }
            _ => vec![],
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.upper() == other.upper()
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper().total_cmp(&other.upper())
    }
}

/// `sup_{x in from} d(x, to)` to within `tol`.
pub fn directed_distance(from: &CompactSet, to: &CompactSet, tol: f64) -> f64 {
    if from.is_empty() {
        return 0.0;
    }
    if to.is_empty() {
        return f64::INFINITY;
    }
    let mut heap = BinaryHeap::new();
    let mut best: f64 = 0.0;
    for piece in &from.pieces {
        for v in piece {
            best = best.max(to.distance_to(*v));
        }
        match piece.len() {
            1 => {}
            2 => heap.push(Cell::new(piece.clone(), to)),
            n => {
                for i in 1..n - 1 {
                    heap.push(Cell::new(vec![piece[0], piece[i], piece[i + 1]], to));
                }
            }
        }
    }
    while let Some(cell) = heap.pop() {
        best = best.max(cell.center_value);
        if cell.upper() <= best + tol {
            break;
        }
        for corners in cell.split() {
            for v in &corners {
                best = best.max(to.distance_to(*v));
            }
            let child = Cell::new(corners, to);
            if child.upper() > best + tol {
                heap.push(child);
            }
        }
    }
    best
}

/// Symmetric Hausdorff distance, accurate to about `1e-10`.
pub fn hausdorff_distance(a: &CompactSet, b: &CompactSet) -> f64 {
    const TOL: f64 = 1e-11;
    directed_distance(a, b, TOL).max(directed_distance(b, a, TOL))
}
