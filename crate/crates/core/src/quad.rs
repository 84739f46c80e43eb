//! Critical quadrilaterals, strong linkage, and the linked /
//! essentially-equal classification of critically marked cubic laminations.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::angle::{check_degree, winding_ok, Angle};
use crate::chord::{is_critical, Chord};
use crate::error::{Error, Result};
use crate::gaps::gaps;
use crate::lamination::{critical_objects, is_critical_gap, Lamination};
use crate::polygon::Polygon;

/// A circularly ordered quadruple `[a0, a1, a2, a3]` whose diagonals
/// `a0a2` and `a1a3` (the spikes) are critical. Vertices may repeat, so the
/// hull can be a quadrilateral, a triangle or a single critical chord.
///
/// Stored as the lexicographically smallest of its four rotations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CriticalQuadrilateral {
    degree: u32,
    v: [Angle; 4],
}

impl CriticalQuadrilateral {
    pub fn new(degree: u32, v: [Angle; 4]) -> Result<Self> {
        check_degree(degree)?;
        if !winding_ok(&v, false) {
            return Err(Error::Invalid(format!(
                "quadruple {} is not circularly ordered",
                fmt_quad(&v)
            )));
        }
        let s1 = Chord::new(v[0].clone(), v[2].clone());
        let s2 = Chord::new(v[1].clone(), v[3].clone());
        if !is_critical(degree, &s1) || !is_critical(degree, &s2) {
            return Err(Error::Invalid(format!(
                "spikes of {} are not critical",
                fmt_quad(&v)
            )));
        }
        let best = (0..4)
            .map(|k| {
                [
                    v[k].clone(),
                    v[(k + 1) % 4].clone(),
                    v[(k + 2) % 4].clone(),
                    v[(k + 3) % 4].clone(),
                ]
            })
            .min()
            .expect("four rotations");
        Ok(CriticalQuadrilateral { degree, v: best })
    }

    pub fn fracs(degree: u32, v: [(i64, i64); 4]) -> Result<Self> {
        Self::new(degree, v.map(|(p, q)| Angle::frac(p, q)))
    }

    /// The degenerate quadruple `[a, a, b, b]` of a critical chord.
    pub fn from_critical_chord(degree: u32, c: &Chord) -> Result<Self> {
        Self::new(
            degree,
            [c.a().clone(), c.a().clone(), c.b().clone(), c.b().clone()],
        )
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn vertices(&self) -> &[Angle; 4] {
        &self.v
    }

    pub fn spikes(&self) -> [Chord; 2] {
        [
            Chord::new(self.v[0].clone(), self.v[2].clone()),
            Chord::new(self.v[1].clone(), self.v[3].clone()),
        ]
    }

    pub fn hull(&self) -> Polygon {
        Polygon::from_points(self.v.iter().cloned())
    }

    /// Two cyclically adjacent vertices coincide.
    pub fn is_degenerate(&self) -> bool {
        (0..4).any(|i| self.v[i] == self.v[(i + 1) % 4])
    }

    /// Maps onto a non-degenerate leaf.
    pub fn is_collapsing(&self) -> bool {
        self.v[0].times(self.degree) != self.v[1].times(self.degree)
    }

    /// Edges `a0a1, a2a3` and `a1a2, a3a0` as two opposite pairs.
    pub fn opposite_edge_pairs(&self) -> [[Chord; 2]; 2] {
        let e = |i: usize, j: usize| Chord::new(self.v[i].clone(), self.v[j].clone());
        [[e(0, 1), e(2, 3)], [e(1, 2), e(3, 0)]]
    }

    pub fn shares_spike(&self, other: &Self) -> bool {
        let a = self.spikes();
        other.spikes().iter().any(|s| a.contains(s))
    }
}

fn fmt_quad(v: &[Angle; 4]) -> String {
    format!("[{},{},{},{}]", v[0], v[1], v[2], v[3])
}

impl fmt::Display for CriticalQuadrilateral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_quad(&self.v))
    }
}

impl fmt::Debug for CriticalQuadrilateral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{self}")
    }
}

/// Parses `[p/q,p/q,p/q,p/q]` for the given degree.
pub fn parse_quad(degree: u32, s: &str) -> Result<CriticalQuadrilateral> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("quadrilateral {s:?} must be bracketed")))?;
    let pts: Vec<Angle> = inner
        .split(',')
        .map(Angle::from_str)
        .collect::<Result<_>>()?;
    let v: [Angle; 4] = pts
        .try_into()
        .map_err(|_| Error::Parse(format!("quadrilateral {s:?} needs four vertices")))?;
    CriticalQuadrilateral::new(degree, v).map_err(|e| Error::Parse(e.to_string()))
}

/// Whether the vertices can be numbered so that
/// `a0 <= b0 <= a1 <= b1 <= a2 <= b2 <= a3 <= b3 <= a0` around the circle.
pub fn strongly_linked(a: &CriticalQuadrilateral, b: &CriticalQuadrilateral) -> bool {
    (0..4).any(|k| {
        let chain: Vec<Angle> = (0..4)
            .flat_map(|i| [a.v[i].clone(), b.v[(i + k) % 4].clone()])
            .collect();
        winding_ok(&chain, false)
    })
}

/// A critical set is realized in `l` when it is a leaf, or the vertex set of
/// a gap bounded entirely by leaves.
pub fn is_realized(l: &Lamination, p: &Polygon) -> bool {
    match p.len() {
        0 | 1 => false,
        2 => l.contains(&p.as_chord().expect("two vertices")),
        _ => gaps(l)
            .iter()
            .filter(|g| !g.has_artifact())
            .any(|g| g.polygon().as_ref() == Some(p)),
    }
}

/// `(q1, q2)` is a quadratically critical portrait of `l`: both are leaves or
/// gaps of `l`, and they are distinct.
pub fn validate_portrait(
    l: &Lamination,
    q1: &CriticalQuadrilateral,
    q2: &CriticalQuadrilateral,
) -> Result<bool> {
    for q in [q1, q2] {
        if !is_realized(l, &q.hull()) {
            return Err(Error::NotRealized(q.to_string()));
        }
    }
    Ok(q1 != q2)
}

/// Cubic lamination with an ordered critical pattern `(c1, c2)`.
#[derive(Clone, Debug)]
pub struct MarkedLamination {
    lamination: Arc<Lamination>,
    c1: Polygon,
    c2: Polygon,
    objects: Arc<Vec<Polygon>>,
    quads: Arc<OnceLock<[Vec<CriticalQuadrilateral>; 2]>>,
}

impl PartialEq for MarkedLamination {
    fn eq(&self, other: &Self) -> bool {
        self.c1 == other.c1
            && self.c2 == other.c2
            && (Arc::ptr_eq(&self.lamination, &other.lamination)
                || self.lamination == other.lamination)
    }
}

impl MarkedLamination {
    /// Checks that `c1`, `c2` are critical sets of the lamination and that
    /// the pattern is injective off the critical sets.
    pub fn new(lamination: Arc<Lamination>, c1: Polygon, c2: Polygon) -> Result<Self> {
        let objects = critical_objects(&lamination);
        Self::with_objects(lamination, c1, c2, &objects)
    }

    /// Like [`MarkedLamination::new`] with precomputed critical objects.
    pub fn with_objects(
        lamination: Arc<Lamination>,
        c1: Polygon,
        c2: Polygon,
        objects: &[Polygon],
    ) -> Result<Self> {
        if lamination.degree() != 3 {
            return Err(Error::MalformedPattern(format!(
                "marked laminations are cubic, got degree {}",
                lamination.degree()
            )));
        }
        for c in [&c1, &c2] {
            let ok = match c.len() {
                2 => {
                    let ch = c.as_chord().expect("chord");
                    lamination.contains(&ch) && is_critical(3, &ch)
                }
                n if n >= 3 => is_critical_gap(3, c) && objects.iter().any(|o| c.is_subset_of(o)),
                _ => false,
            };
            if !ok {
                return Err(Error::MalformedPattern(format!(
                    "{c:?} is not a critical set of the lamination"
                )));
            }
        }
        if !is_marked_pattern(3, &c1, &c2)? {
            return Err(Error::MalformedPattern(format!(
                "pattern ({c1:?}, {c2:?}) is not injective off its critical sets"
            )));
        }
        Ok(MarkedLamination {
            lamination,
            c1,
            c2,
            objects: Arc::new(objects.to_vec()),
            quads: Arc::default(),
        })
    }

    pub fn lamination(&self) -> &Lamination {
        &self.lamination
    }

    pub fn shared_lamination(&self) -> Arc<Lamination> {
        Arc::clone(&self.lamination)
    }

    pub fn c1(&self) -> &Polygon {
        &self.c1
    }

    pub fn c2(&self) -> &Polygon {
        &self.c2
    }

    pub fn pattern(&self) -> [&Polygon; 2] {
        [&self.c1, &self.c2]
    }

    pub fn critical_objects(&self) -> &[Polygon] {
        &self.objects
    }

    /// All-critical triangles among the lamination's critical objects.
    pub fn all_critical_triangles(&self) -> impl Iterator<Item = &Polygon> {
        self.objects
            .iter()
            .filter(|o| o.len() == 3 && o.edges().iter().all(|e| is_critical(3, e)))
    }

    /// `p` is the one and only critical object of the lamination.
    pub fn is_sole_critical_object(&self, p: &Polygon) -> bool {
        self.objects.len() == 1 && &self.objects[0] == p
    }

    /// [`candidate_quads`] of `c1` and `c2`, computed once.
    pub fn candidate_quads(&self) -> &[Vec<CriticalQuadrilateral>; 2] {
        self.quads
            .get_or_init(|| [candidate_quads(&self.c1), candidate_quads(&self.c2)])
    }

    pub fn is_unicritical(&self) -> bool {
        self.c1 == self.c2
    }
}

/// Every component of the disk minus `c1 ∪ c2` meets the circle in arcs on
/// which `x -> d x` is injective.
pub fn is_marked_pattern(d: u32, c1: &Polygon, c2: &Polygon) -> Result<bool> {
    let mut edges: Vec<Chord> = c1.edges();
    edges.extend(c2.edges());
    let frame = Lamination::new(d, 0, edges)?;
    for g in gaps(&frame) {
        let arcs: Vec<(Angle, Angle)> = g
            .edges
            .iter()
            .filter(|e| e.kind == crate::gaps::EdgeKind::Arc)
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect();
        if arcs.is_empty() {
            continue;
        }
        if !images_disjoint(d, &arcs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The open arcs map injectively: each image has length at most one turn
/// and images are pairwise disjoint.
pub(crate) fn images_disjoint(d: u32, arcs: &[(Angle, Angle)]) -> bool {
    use num_rational::BigRational;
    let one = BigRational::from_integer(1.into());
    let mut images: Vec<(BigRational, BigRational)> = Vec::new();
    for (s, e) in arcs {
        let len = crate::chord::to_rational(&s.ccw_to(e));
        let len = if s == e { one.clone() } else { len };
        let img_len = len * BigRational::from_integer(d.into());
        if img_len > one {
            return false;
        }
        let start = crate::chord::to_rational(&s.times(d));
        images.push((start, img_len));
    }
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let (s1, l1) = &images[i];
            let (s2, l2) = &images[j];
            // open arcs (s1, s1+l1), (s2, s2+l2) on R/Z
            let off = frac(&(s2 - s1));
            let back = frac(&(s1 - s2));
            if &off < l1 || &back < l2 {
                return false;
            }
        }
    }
    true
}

fn frac(x: &num_rational::BigRational) -> num_rational::BigRational {
    x - x.floor()
}

/// Outcome of [`classify_pair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairClass {
    Linked,
    EssentiallyEqual,
    Unrelated,
}

/// Critical quadrilaterals inside a critical set that may stand for it in a
/// quadratically critical portrait: its critical edges, vertex quadruples
/// with critical spikes (collapsing ones must share a pair of opposite
/// edges with the set), and degenerate quadruples on all-critical triangles.
pub fn candidate_quads(c: &Polygon) -> Vec<CriticalQuadrilateral> {
    let d = 3;
    let v = c.vertices();
    let edges = c.edges();
    let mut out = Vec::new();
    if let Some(ch) = c.as_chord() {
        if is_critical(d, &ch) {
            out.push(CriticalQuadrilateral::from_critical_chord(d, &ch).expect("critical"));
        }
        return out;
    }
    for e in &edges {
        if is_critical(d, e) {
            out.push(CriticalQuadrilateral::from_critical_chord(d, e).expect("critical"));
        }
    }
    let n = v.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let tri = [&v[i], &v[j], &v[k]];
                let img = v[i].times(d);
                if v[j].times(d) == img && v[k].times(d) == img {
                    let (a, b, cc) = (tri[0].clone(), tri[1].clone(), tri[2].clone());
                    for q in [
                        [a.clone(), a.clone(), b.clone(), cc.clone()],
                        [a.clone(), b.clone(), b.clone(), cc.clone()],
                        [a.clone(), b.clone(), cc.clone(), cc.clone()],
                    ] {
                        out.push(CriticalQuadrilateral::new(d, q).expect("all-critical"));
                    }
                }
                for l in k + 1..n {
                    let q = [v[i].clone(), v[j].clone(), v[k].clone(), v[l].clone()];
                    let Ok(q) = CriticalQuadrilateral::new(d, q) else {
                        continue;
                    };
                    if q.is_collapsing() {
                        let shares = q
                            .opposite_edge_pairs()
                            .iter()
                            .any(|pair| pair.iter().all(|e| edges.contains(e)));
                        if !shares {
                            continue;
                        }
                    }
                    out.push(q);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Searches for quadratically critical portraits `Q_i^j ⊂ C_i^j` witnessing
/// that the two marked laminations are linked or essentially equal.
/// Essentially equal wins over linked when both witnesses exist.
pub fn classify_pair(m1: &MarkedLamination, m2: &MarkedLamination) -> PairClass {
    if m1
        .all_critical_triangles()
        .any(|t| m2.all_critical_triangles().any(|u| u == t))
    {
        return PairClass::EssentiallyEqual;
    }
    let [a1s, a2s] = m1.candidate_quads();
    let [b1s, b2s] = m2.candidate_quads();
    // strong linkage is decided per coordinate, so pair up survivors only
    let first: Vec<(&CriticalQuadrilateral, &CriticalQuadrilateral)> = a1s
        .iter()
        .flat_map(|a| b1s.iter().map(move |b| (a, b)))
        .filter(|(a, b)| strongly_linked(a, b))
        .collect();
    if first.is_empty() {
        return PairClass::Unrelated;
    }
    let second: Vec<(&CriticalQuadrilateral, &CriticalQuadrilateral)> = a2s
        .iter()
        .flat_map(|a| b2s.iter().map(move |b| (a, b)))
        .filter(|(a, b)| strongly_linked(a, b))
        .collect();
    let mut linked = false;
    for (a1, b1) in &first {
        for (a2, b2) in &second {
            // each side must be a portrait: distinct quadrilaterals
            if a1 == a2 || b1 == b2 {
                continue;
            }
            if a1.shares_spike(b1) && a2.shares_spike(b2) {
                return PairClass::EssentiallyEqual;
            }
            linked = true;
        }
    }
    if linked {
        PairClass::Linked
    } else {
        PairClass::Unrelated
    }
}

/// What a linked or essentially equal pair of perfect marked laminations must
/// satisfy: equal leaf sets up to the common depth and `C_1^j ⊇ C_2^j`.
/// Returns a description of the first violation.
pub fn linked_pair_violation(m1: &MarkedLamination, m2: &MarkedLamination) -> Option<String> {
    let n = m1.lamination().depth().min(m2.lamination().depth());
    if m1.lamination().truncated(n) != m2.lamination().truncated(n) {
        return Some(format!("leaf sets differ up to depth {n}"));
    }
    if !m2.c1().is_subset_of(m1.c1()) || !m2.c2().is_subset_of(m1.c2()) {
        return Some(format!(
            "pattern ({:?}, {:?}) does not contain ({:?}, {:?})",
            m1.c1(),
            m1.c2(),
            m2.c1(),
            m2.c2()
        ));
    }
    None
}
