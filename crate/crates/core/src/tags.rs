//! Minor sets, co-critical sets and mixed tags of marked cubic laminations.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::angle::Angle;
use crate::chord::to_rational;
use crate::error::{Error, Result};
use crate::hausdorff::{directed_distance, CompactSet};
use crate::polygon::{polygon_image, polygons_intersect, Polygon};
use crate::quad::MarkedLamination;

/// `σ₃(C²)`.
pub fn minor_set(m: &MarkedLamination) -> Polygon {
    polygon_image(3, m.c2()).expect("degree 3")
}

/// `co(C¹)`: `C¹` itself when it is the only critical object (or the
/// pattern is unicritical); otherwise the hull of the points of the unique
/// hole longer than 1/3 that map into the vertex set of `σ₃(C¹)`.
pub fn cocritical_set(m: &MarkedLamination) -> Result<Polygon> {
    let c = m.c1();
    if m.is_unicritical() || m.is_sole_critical_object(c) {
        return Ok(c.clone());
    }
    cocritical_of(c)
}

/// The hole branch of [`cocritical_set`] for a bare critical set.
pub fn cocritical_of(c: &Polygon) -> Result<Polygon> {
    let third = num_rational::BigRational::new(1.into(), 3.into());
    let long: Vec<_> = c.holes().into_iter().filter(|h| h.length > third).collect();
    let [hole] = long.as_slice() else {
        return Err(Error::MalformedPattern(format!(
            "{c:?} has {} holes longer than 1/3",
            long.len()
        )));
    };
    let image = polygon_image(3, c)?;
    let mut pts = Vec::new();
    for v in image.vertices() {
        for x in v.preimages(3)? {
            if hole.contains(&x) {
                pts.push(x);
            }
        }
    }
    Ok(Polygon::from_points(pts))
}

/// `co(C¹) × σ₃(C²)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedTag {
    pub left: Polygon,
    pub right: Polygon,
}

impl MixedTag {
    pub fn of(m: &MarkedLamination) -> Result<MixedTag> {
        Ok(MixedTag {
            left: cocritical_set(m)?,
            right: minor_set(m),
        })
    }

    /// Product sets meet iff both coordinates meet.
    pub fn intersects(&self, other: &MixedTag) -> bool {
        polygons_intersect(&self.left, &other.left) && polygons_intersect(&self.right, &other.right)
    }

    pub fn relation(&self, other: &MixedTag) -> TagRelation {
        if !self.intersects(other) {
            TagRelation::Disjoint
        } else if self == other {
            TagRelation::Equal
        } else {
            TagRelation::Overlap
        }
    }
}

impl fmt::Display for MixedTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "left: {}", self.left)?;
        writeln!(f, "right: {}", self.right)
    }
}

impl FromStr for MixedTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut left = None;
        let mut right = None;
        for (i, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parsed = if let Some(rest) = line.strip_prefix("left:") {
                rest.trim().parse().map(|p| left = Some(p))
            } else if let Some(rest) = line.strip_prefix("right:") {
                rest.trim().parse().map(|p| right = Some(p))
            } else {
                Err(Error::Parse(format!("unexpected line {line:?}")))
            };
            parsed.map_err(|e| e.at_line(i + 1))?;
        }
        match (left, right) {
            (Some(left), Some(right)) => Ok(MixedTag { left, right }),
            _ => Err(Error::Parse("tag needs both left: and right: lines".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TagRelation {
    Disjoint,
    Equal,
    /// Intersecting but unequal tags.
    Overlap,
}

impl fmt::Display for TagRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TagRelation::Disjoint => "disjoint",
            TagRelation::Equal => "equal",
            TagRelation::Overlap => "overlap",
        })
    }
}

pub fn mixed_tag_relation(m1: &MarkedLamination, m2: &MarkedLamination) -> Result<TagRelation> {
    Ok(MixedTag::of(m1)?.relation(&MixedTag::of(m2)?))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyReport {
    pub disjoint: usize,
    pub equal: usize,
    pub overlap: usize,
    /// Every pair `i < j` with its relation, in order.
    pub pairs: Vec<(usize, usize, TagRelation)>,
}

impl FamilyReport {
    pub fn overlaps(&self) -> impl Iterator<Item = &(usize, usize, TagRelation)> {
        self.pairs.iter().filter(|p| p.2 == TagRelation::Overlap)
    }

    pub fn passed(&self) -> bool {
        self.overlap == 0
    }
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# disjoint={} equal={} overlap={}",
            self.disjoint, self.equal, self.overlap
        )?;
        for (i, j, r) in &self.pairs {
            writeln!(f, "pair {i} {j}: {r}")?;
        }
        Ok(())
    }
}

/// Relation of every unordered pair of tags.
pub fn tag_family_report(tags: &[MixedTag]) -> FamilyReport {
    let n = tags.len();
    let pairs: Vec<(usize, usize, TagRelation)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, tags[i].relation(&tags[j])))
        .collect();
    let count = |r| pairs.iter().filter(|p| p.2 == r).count();
    FamilyReport {
        disjoint: count(TagRelation::Disjoint),
        equal: count(TagRelation::Equal),
        overlap: count(TagRelation::Overlap),
        pairs,
    }
}

pub fn family_disjoint_or_equal(family: &[MarkedLamination]) -> Result<FamilyReport> {
    let tags: Vec<MixedTag> = family.par_iter().map(MixedTag::of).collect::<Result<_>>()?;
    Ok(tag_family_report(&tags))
}

/// Default bound on the final term's distance from the limit pattern.
pub const USC_THRESHOLD: f64 = 1e-2;

/// Upper semi-continuity probe with [`USC_THRESHOLD`].
pub fn usc_probe(sequence: &[MarkedLamination], limit: &MarkedLamination) -> Result<bool> {
    usc_probe_with(sequence, limit, USC_THRESHOLD)
}

/// Checks that the critical patterns `Cₙʲ` accumulate inside `Cʲ` of the
/// limit.
///
/// The one-sided excess `sup_{x in Cₙʲ} d(x, Cʲ)` must be nonincreasing and
/// end below `threshold`; otherwise the sequence is rejected as
/// non-convergent. The verdict extrapolates each vertex of the last three
/// terms with Aitken's Δ² (exact for geometric sequences, which is what
/// pullback along a periodic branch produces) and asks for exact containment
/// of the extrapolated points in `Cʲ`. Shorter sequences use the last term.
pub fn usc_probe_with(
    sequence: &[MarkedLamination],
    limit: &MarkedLamination,
    threshold: f64,
) -> Result<bool> {
    if sequence.is_empty() {
        return Err(Error::NonConvergent("empty sequence".into()));
    }
    let targets = [limit.c1(), limit.c2()];
    for (j, target) in targets.iter().enumerate() {
        let to = CompactSet::from_polygons([*target]);
        let excess: Vec<f64> = sequence
            .iter()
            .map(|m| {
                let from = CompactSet::from_polygons([m.pattern()[j]]);
                directed_distance(&from, &to, 1e-12)
            })
            .collect();
        if let Some(w) = excess.windows(2).find(|w| w[1] > w[0] + 1e-9) {
            return Err(Error::NonConvergent(format!(
                "excess of pattern entry {} grows from {} to {}",
                j + 1,
                w[0],
                w[1]
            )));
        }
        let tail = *excess.last().expect("nonempty");
        if tail >= threshold {
            return Err(Error::NonConvergent(format!(
                "pattern entry {} stays {tail} away from the limit",
                j + 1
            )));
        }
    }
    let last3 = &sequence[sequence.len().saturating_sub(3)..];
    for (j, target) in targets.iter().enumerate() {
        let terms: Vec<&Polygon> = last3.iter().map(|m| m.pattern()[j]).collect();
        let limits = vertex_limits(&terms)?;
        if !Polygon::from_points(limits).is_subset_of(target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Limit points of the vertices of the last polygon in `terms`. Vertices are
/// traced back by circular order when the vertex counts agree, else to the
/// nearest vertex.
fn vertex_limits(terms: &[&Polygon]) -> Result<Vec<Angle>> {
    let last = terms.last().expect("nonempty");
    if terms.len() < 3 {
        return Ok(last.vertices().to_vec());
    }
    let (p0, p1) = (trace(terms[0], last), trace(terms[1], last));
    last.vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x2 = to_rational(v);
            let lift = |w: &Angle| {
                let mut x = to_rational(w);
                let half = BigRational::new(1.into(), 2.into());
                while &x - &x2 > half {
                    x -= BigRational::one();
                }
                while &x2 - &x > half {
                    x += BigRational::one();
                }
                x
            };
            let (x0, x1) = (lift(&p0[i]), lift(&p1[i]));
            let (d1, d2) = (&x1 - &x0, &x2 - &x1);
            let curve = &d2 - &d1;
            let x = if d2.is_zero() {
                x2
            } else if curve.is_zero() {
                return Err(Error::NonConvergent(format!(
                    "vertex {v} moves without converging"
                )));
            } else {
                &x2 - &d2 * &d2 / curve
            };
            Ok(Angle::new(x.numer().clone(), x.denom().clone()))
        })
        .collect()
}

fn circular_distance(a: &Angle, b: &Angle) -> f64 {
    let d = (a.to_f64() - b.to_f64()).abs();
    d.min(1.0 - d)
}

/// For each vertex of `to`, its counterpart in `from`.
fn trace(from: &Polygon, to: &Polygon) -> Vec<Angle> {
    let (f, t) = (from.vertices(), to.vertices());
    if f.len() == t.len() {
        let n = t.len();
        let cost = |r: usize| -> f64 {
            (0..n)
                .map(|i| circular_distance(&t[i], &f[(i + r) % n]))
                .sum()
        };
        let r = (0..n)
            .min_by(|&a, &b| cost(a).total_cmp(&cost(b)))
            .expect("nonempty");
        return (0..n).map(|i| f[(i + r) % n].clone()).collect();
    }
    t.iter()
        .map(|v| {
            f.iter()
                .min_by(|a, b| circular_distance(a, v).total_cmp(&circular_distance(b, v)))
                .cloned()
                .expect("nonempty pattern")
        })
        .collect()
}
