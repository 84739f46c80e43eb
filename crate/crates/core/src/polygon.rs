//! Convex hulls of finite sets of circle points.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;

use crate::angle::{check_degree, Angle};
use crate::chord::{to_rational, Chord};
use crate::error::{Error, Result};

/// Convex hull of finitely many circle points. Vertices are distinct and
/// stored ascending in `[0, 1)`, which is a strictly increasing circular
/// order. One vertex is a point, two are a chord.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polygon {
    vertices: Vec<Angle>,
}

/// An open complementary arc of a polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    pub start: Angle,
    pub end: Angle,
    pub length: BigRational,
}

impl Hole {
    /// Membership in the open arc `(start, end)`.
    pub fn contains(&self, x: &Angle) -> bool {
        if self.start == self.end {
            return x != &self.start;
        }
        let off = self.start.ccw_to(x);
        !off.is_zero() && off < self.start.ccw_to(&self.end)
    }
}

impl Polygon {
    /// Hull of the given points; duplicates are dropped. Panics on empty input.
    pub fn from_points(points: impl IntoIterator<Item = Angle>) -> Polygon {
        let mut vertices: Vec<Angle> = points.into_iter().collect();
        assert!(!vertices.is_empty(), "polygon needs at least one vertex");
        vertices.sort();
        vertices.dedup();
        Polygon { vertices }
    }

    pub fn point(x: Angle) -> Polygon {
        Polygon { vertices: vec![x] }
    }

    pub fn from_chord(c: &Chord) -> Polygon {
        Polygon::from_points([c.a().clone(), c.b().clone()])
    }

    pub fn fracs(v: &[(i64, i64)]) -> Polygon {
        Polygon::from_points(v.iter().map(|&(p, q)| Angle::frac(p, q)))
    }

    pub fn vertices(&self) -> &[Angle] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn as_chord(&self) -> Option<Chord> {
        match self.vertices.as_slice() {
            [x, y] => Some(Chord::new(x.clone(), y.clone())),
            _ => None,
        }
    }

    pub fn contains_vertex(&self, x: &Angle) -> bool {
        self.vertices.binary_search(x).is_ok()
    }

    /// Boundary edges, consecutive vertices with wrap-around. A chord has
    /// one edge, a point none.
    pub fn edges(&self) -> Vec<Chord> {
        let n = self.vertices.len();
        match n {
            1 => vec![],
            2 => vec![Chord::new(
                self.vertices[0].clone(),
                self.vertices[1].clone(),
            )],
            _ => (0..n)
                .map(|i| Chord::new(self.vertices[i].clone(), self.vertices[(i + 1) % n].clone()))
                .collect(),
        }
    }

    /// Open complementary arcs; their lengths sum to one.
    pub fn holes(&self) -> Vec<Hole> {
        let n = self.vertices.len();
        if n == 1 {
            let v = self.vertices[0].clone();
            return vec![Hole {
                start: v.clone(),
                end: v,
                length: BigRational::one(),
            }];
        }
        (0..n)
            .map(|i| {
                let start = self.vertices[i].clone();
                let end = self.vertices[(i + 1) % n].clone();
                let length = to_rational(&start.ccw_to(&end));
                Hole { start, end, length }
            })
            .collect()
    }

    /// Hull containment; for inscribed hulls this is vertex containment.
    pub fn is_subset_of(&self, other: &Polygon) -> bool {
        self.vertices.iter().all(|v| other.contains_vertex(v))
    }

    pub fn rotate(&self, by: &Angle) -> Polygon {
        Polygon::from_points(self.vertices.iter().map(|v| v + by))
    }

    /// Chords between every pair of vertices, edges included.
    pub fn all_chords(&self) -> Vec<Chord> {
        let v = &self.vertices;
        let mut out = Vec::new();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                out.push(Chord::new(v[i].clone(), v[j].clone()));
            }
        }
        out
    }
}

/// Hull of the vertex images under `x -> d x`.
pub fn polygon_image(d: u32, p: &Polygon) -> Result<Polygon> {
    check_degree(d)?;
    Ok(Polygon::from_points(p.vertices.iter().map(|v| v.times(d))))
}

/// Whether two inscribed hulls meet in the closed disk.
///
/// They are disjoint exactly when every vertex of one lies in a single open
/// hole of the other.
pub fn polygons_intersect(p: &Polygon, q: &Polygon) -> bool {
    !(inside_one_hole(p, q) || inside_one_hole(q, p))
}

fn inside_one_hole(p: &Polygon, q: &Polygon) -> bool {
    p.holes()
        .iter()
        .any(|h| q.vertices.iter().all(|v| h.contains(v)))
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CH{{{self}}}")
    }
}

impl FromStr for Polygon {
    type Err = Error;

    /// Comma-separated angles in circular order.
    fn from_str(s: &str) -> Result<Polygon> {
        let pts: Vec<Angle> = s.split(',').map(|t| t.parse()).collect::<Result<_>>()?;
        if pts.is_empty() {
            return Err(Error::Parse("empty polygon".into()));
        }
        let n = pts.len();
        if n >= 3 && !crate::angle::cyclically_ordered(&pts, true) {
            return Err(Error::Parse(format!(
                "polygon {s:?} is not in circular order"
            )));
        }
        let p = Polygon::from_points(pts);
        if p.len() != n {
            return Err(Error::Parse(format!("polygon {s:?} repeats a vertex")));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn poly(v: &[(i64, i64)]) -> Polygon {
        Polygon::fracs(v)
    }

    #[test]
    fn image_examples() {
        assert_eq!(
            polygon_image(3, &poly(&[(0, 1), (1, 3), (2, 3)])).unwrap(),
            poly(&[(0, 1)])
        );
        assert_eq!(
            polygon_image(3, &poly(&[(0, 1), (1, 12), (1, 3), (5, 12)])).unwrap(),
            poly(&[(0, 1), (1, 4)])
        );
        assert_eq!(polygon_image(3, &poly(&[(1, 4)])).unwrap(), poly(&[(3, 4)]));
    }

    #[test]
    fn intersect_examples() {
        assert!(polygons_intersect(
            &poly(&[(0, 1), (1, 3), (2, 3)]),
            &poly(&[(1, 6), (1, 2), (5, 6)])
        ));
        assert!(!polygons_intersect(
            &poly(&[(0, 1), (1, 12), (1, 3), (5, 12)]),
            &poly(&[(1, 2), (7, 12)])
        ));
        assert!(polygons_intersect(
            &poly(&[(0, 1), (1, 4)]),
            &poly(&[(1, 4), (1, 2)])
        ));
        assert!(polygons_intersect(&poly(&[(1, 4)]), &poly(&[(1, 4)])));
        assert!(!polygons_intersect(&poly(&[(1, 4)]), &poly(&[(1, 2)])));
    }

    #[test]
    fn holes_sum_to_one() {
        for p in [
            poly(&[(1, 5)]),
            poly(&[(0, 1), (1, 2)]),
            poly(&[(1, 7), (3, 7), (6, 7)]),
        ] {
            let total = p
                .holes()
                .iter()
                .fold(BigRational::zero(), |acc, h| acc + h.length.clone());
            assert_eq!(total, BigRational::one());
        }
    }

    #[test]
    fn edges_of_small_polygons() {
        assert!(poly(&[(1, 2)]).edges().is_empty());
        assert_eq!(poly(&[(0, 1), (1, 2)]).edges().len(), 1);
        assert_eq!(poly(&[(0, 1), (1, 3), (2, 3)]).edges().len(), 3);
    }

    #[test]
    fn parse_polygon() {
        assert_eq!(
            "0,1/3,2/3".parse::<Polygon>().unwrap(),
            poly(&[(0, 1), (1, 3), (2, 3)])
        );
        assert_eq!(
            "2/3,0,1/3".parse::<Polygon>().unwrap(),
            poly(&[(0, 1), (1, 3), (2, 3)])
        );
        assert!("0,2/3,1/3".parse::<Polygon>().is_err());
        assert!("0,0".parse::<Polygon>().is_err());
    }
}
