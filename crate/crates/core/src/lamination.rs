//! Finite-depth laminations and their sibling-invariance check.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::angle::{check_degree, Angle};
use crate::chord::{is_critical, linked, Chord};
use crate::error::{Error, Result};
use crate::gaps::{gaps, EdgeKind};
use crate::polygon::Polygon;

/// A finite set of pairwise unlinked leaves, each tagged with the pullback
/// generation that produced it. `depth` is the deepest generation the set
/// claims to be complete up to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lamination {
    degree: u32,
    depth: u32,
    leaves: HashMap<Chord, u32>,
}

impl Lamination {
    /// All leaves get generation 0.
    pub fn new(degree: u32, depth: u32, leaves: impl IntoIterator<Item = Chord>) -> Result<Self> {
        Self::with_generations(degree, depth, leaves.into_iter().map(|c| (c, 0)))
    }

    /// Duplicate chords keep their smallest generation.
    pub fn with_generations(
        degree: u32,
        depth: u32,
        leaves: impl IntoIterator<Item = (Chord, u32)>,
    ) -> Result<Self> {
        check_degree(degree)?;
        let mut map: HashMap<Chord, u32> = HashMap::new();
        for (c, g) in leaves {
            if c.is_degenerate() {
                return Err(Error::Invalid(format!("degenerate leaf {c}")));
            }
            let e = map.entry(c).or_insert(g);
            *e = (*e).min(g);
        }
        let chords: Vec<&Chord> = map.keys().collect();
        if let Some((x, y)) = find_linked_pair(&chords) {
            return Err(Error::Invalid(format!("leaves {x} and {y} are linked")));
        }
        Ok(Lamination {
            degree,
            depth,
            leaves: map,
        })
    }

    pub(crate) fn from_parts_unchecked(
        degree: u32,
        depth: u32,
        leaves: HashMap<Chord, u32>,
    ) -> Self {
        Lamination {
            degree,
            depth,
            leaves,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn contains(&self, c: &Chord) -> bool {
        self.leaves.contains_key(c)
    }

    pub fn generation(&self, c: &Chord) -> Option<u32> {
        self.leaves.get(c).copied()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Chord> {
        self.leaves.keys()
    }

    /// Leaves sorted by (generation, chord).
    pub fn sorted_leaves(&self) -> Vec<(&Chord, u32)> {
        let mut v: Vec<(&Chord, u32)> = self.leaves.iter().map(|(c, &g)| (c, g)).collect();
        v.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(y.0)));
        v
    }

    /// Leaves of generation at most `n`.
    pub fn truncated(&self, n: u32) -> HashSet<&Chord> {
        self.leaves
            .iter()
            .filter(|(_, &g)| g <= n)
            .map(|(c, _)| c)
            .collect()
    }

    /// Every distinct leaf endpoint, ascending.
    pub fn endpoints(&self) -> Vec<Angle> {
        let mut v: Vec<Angle> = self
            .leaves
            .keys()
            .flat_map(|c| [c.a().clone(), c.b().clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// The line-oriented dump: a `degree=<d> depth=<n>` header, then one
    /// chord per line sorted within each generation. Generation groups are
    /// introduced by `# generation <k>` lines, omitted when every leaf has
    /// generation 0.
    pub fn dump(&self) -> String {
        let mut out = format!("degree={} depth={}\n", self.degree, self.depth);
        let sorted = self.sorted_leaves();
        let marked = sorted.iter().any(|(_, g)| *g > 0);
        let mut current = None;
        for (c, g) in sorted {
            if marked && current != Some(g) {
                let _ = writeln!(out, "# generation {g}");
                current = Some(g);
            }
            let _ = writeln!(out, "{c}");
        }
        out
    }

    /// Inverse of [`Lamination::dump`]; errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) =
            lines
                .find(|(_, l)| !l.trim().is_empty())
                .ok_or_else(|| Error::ParseLine {
                    line: 1,
                    msg: "missing header".into(),
                })?;
        let (degree, depth) = parse_header(header).map_err(|e| e.at_line(1))?;
        let mut gen = 0u32;
        let mut leaves = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(k) = rest.strip_prefix("generation") {
                    gen = k.trim().parse().map_err(|_| Error::ParseLine {
                        line: i + 1,
                        msg: format!("bad generation marker {line:?}"),
                    })?;
                }
                continue;
            }
            let c: Chord = line.parse().map_err(|e: Error| e.at_line(i + 1))?;
            if c.is_degenerate() {
                return Err(Error::ParseLine {
                    line: i + 1,
                    msg: format!("degenerate leaf {c}"),
                });
            }
            leaves.push((c, gen));
        }
        Self::with_generations(degree, depth, leaves)
    }
}

fn parse_header(line: &str) -> Result<(u32, u32)> {
    let mut degree = None;
    let mut depth = None;
    for tok in line.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token {tok:?}")))?;
        let v: u32 = v
            .parse()
            .map_err(|_| Error::Parse(format!("bad header value {tok:?}")))?;
        match k {
            "degree" => degree = Some(v),
            "depth" => depth = Some(v),
            _ => return Err(Error::Parse(format!("unknown header key {k:?}"))),
        }
    }
    match (degree, depth) {
        (Some(d), Some(n)) => Ok((d, n)),
        _ => Err(Error::Parse("header must be `degree=<d> depth=<n>`".into())),
    }
}

/// Finds two linked chords, if any, in `O(n log n)`.
///
/// Sweeps endpoints in ascending order keeping a stack of open chords;
/// a set is unlinked iff chords close in last-opened-first-closed order.
pub fn find_linked_pair<'a>(chords: &[&'a Chord]) -> Option<(&'a Chord, &'a Chord)> {
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    enum Kind {
        Close,
        Open,
    }
    let mut events: Vec<(&Angle, Kind, usize)> = Vec::with_capacity(chords.len() * 2);
    for (i, c) in chords.iter().enumerate() {
        if c.is_degenerate() {
            continue;
        }
        events.push((c.a(), Kind::Open, i));
        events.push((c.b(), Kind::Close, i));
    }
    events.sort_by(|x, y| {
        x.0.cmp(y.0)
            .then_with(|| x.1.cmp(&y.1))
            .then_with(|| match x.1 {
                // closing: later starts first
                Kind::Close => chords[y.2].a().cmp(chords[x.2].a()),
                // opening: longer chords first
                Kind::Open => chords[y.2].b().cmp(chords[x.2].b()),
            })
    });
    let mut stack: Vec<usize> = Vec::new();
    for (_, kind, i) in events {
        match kind {
            Kind::Open => stack.push(i),
            Kind::Close => {
                let top = stack.pop().expect("close without open");
                if top != i {
                    return Some((chords[i], chords[top]));
                }
            }
        }
    }
    None
}

/// Which clause of sibling invariance a leaf violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvarianceCondition {
    /// The image leaf is missing.
    Forward,
    /// No leaf maps onto this one.
    Pullback,
    /// Fewer than `d` pairwise disjoint leaves share the image.
    Siblings,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceFailure {
    pub leaf: Chord,
    pub condition: InvarianceCondition,
}

/// Outcome of [`check_sibling_invariant`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvarianceReport {
    pub tested: usize,
    pub failures: Vec<InvarianceFailure>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the three sibling-invariance clauses for every leaf of generation
/// at most `depth - 1`. Deeper leaves are where the finite approximation is
/// cut off and are not tested.
pub fn check_sibling_invariant(l: &Lamination) -> InvarianceReport {
    let d = l.degree;
    let mut by_image: HashMap<Chord, Vec<&Chord>> = HashMap::new();
    for c in l.leaves.keys() {
        let img = c.image(d);
        if !img.is_degenerate() {
            by_image.entry(img).or_default().push(c);
        }
    }
    let tested: Vec<&Chord> = match l.depth.checked_sub(1) {
        Some(limit) => l
            .leaves
            .iter()
            .filter(|(_, &g)| g <= limit)
            .map(|(c, _)| c)
            .collect(),
        None => Vec::new(),
    };
    let mut failures: Vec<InvarianceFailure> = tested
        .par_iter()
        .flat_map_iter(|&leaf| {
            let mut out = Vec::new();
            let img = leaf.image(d);
            if !img.is_degenerate() && !l.contains(&img) {
                out.push(InvarianceCondition::Forward);
            }
            if !by_image.contains_key(leaf) {
                out.push(InvarianceCondition::Pullback);
            }
            if !img.is_degenerate() {
                let family = &by_image[&img];
                let candidates: Vec<&Chord> = family
                    .iter()
                    .copied()
                    .filter(|s| *s != leaf && !s.meets(leaf))
                    .collect();
                let mut chosen = Vec::new();
                if !disjoint_choice(&candidates, d as usize - 1, &mut chosen) {
                    out.push(InvarianceCondition::Siblings);
                }
            }
            out.into_iter().map(move |condition| InvarianceFailure {
                leaf: leaf.clone(),
                condition,
            })
        })
        .collect();
    failures.sort_by(|x, y| x.leaf.cmp(&y.leaf));
    InvarianceReport {
        tested: tested.len(),
        failures,
    }
}

/// Picks `k` pairwise disjoint chords from `pool` by backtracking.
fn disjoint_choice<'a>(pool: &[&'a Chord], k: usize, chosen: &mut Vec<&'a Chord>) -> bool {
    if chosen.len() == k {
        return true;
    }
    for (i, c) in pool.iter().enumerate() {
        if chosen.iter().all(|s| !s.meets(c)) {
            chosen.push(c);
            if disjoint_choice(&pool[i + 1..], k, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Maximal critical sets: critical leaves and closed gaps that are
/// all-critical or contain a critical chord in their interior.
///
/// Only gaps bounded entirely by leaves are considered; regions still
/// touching the circle along an arc are artifacts of the finite depth.
pub fn critical_objects(l: &Lamination) -> Vec<Polygon> {
    let d = l.degree;
    let mut gap_objects: Vec<Polygon> = Vec::new();
    for g in gaps(l) {
        if g.edges.iter().any(|e| e.kind == EdgeKind::Arc) {
            continue;
        }
        let Some(p) = g.polygon() else { continue };
        if is_critical_gap(d, &p) {
            gap_objects.push(p);
        }
    }
    let mut out: Vec<Polygon> = l
        .leaves
        .keys()
        .filter(|c| is_critical(d, c))
        .filter(|c| {
            let p = Polygon::from_chord(c);
            !gap_objects.iter().any(|g| p.is_subset_of(g))
        })
        .map(Polygon::from_chord)
        .collect();
    out.extend(gap_objects);
    out.sort();
    out
}

/// All-critical, or some non-edge diagonal is critical.
pub fn is_critical_gap(d: u32, p: &Polygon) -> bool {
    if p.len() < 3 {
        return false;
    }
    let edges = p.edges();
    if edges.iter().all(|e| is_critical(d, e)) {
        return true;
    }
    p.all_chords()
        .iter()
        .any(|c| !edges.contains(c) && is_critical(d, c))
}

/// Finite-depth proxy for isolated leaves: leaves with no other leaf whose
/// endpoints are both within `radius` (circular distance) of theirs.
pub fn isolated_leaves(l: &Lamination, radius: f64) -> Vec<Chord> {
    let leaves: Vec<(&Chord, f64, f64)> = l
        .leaves
        .keys()
        .map(|c| (c, c.a().to_f64(), c.b().to_f64()))
        .collect();
    let near = |x: f64, y: f64| {
        let t = (x - y).rem_euclid(1.0);
        t.min(1.0 - t) <= radius
    };
    let mut out: Vec<Chord> = leaves
        .par_iter()
        .filter(|(c, a, b)| {
            !leaves.iter().any(|(o, oa, ob)| {
                o != c && ((near(*a, *oa) && near(*b, *ob)) || (near(*a, *ob) && near(*b, *oa)))
            })
        })
        .map(|(c, _, _)| (*c).clone())
        .collect();
    out.sort();
    out
}

/// Brute-force pairwise scan; the sweep in [`find_linked_pair`] is checked
/// against it in tests.
pub fn count_linked_pairs(chords: &[Chord]) -> usize {
    let mut n = 0;
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if linked(&chords[i], &chords[j]) {
                n += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(p: i64, q: i64, r: i64, s: i64) -> Chord {
        Chord::frac(p, q, r, s)
    }

    #[test]
    fn rejects_linked_leaves() {
        let err = Lamination::new(2, 0, [ch(0, 1, 1, 2), ch(1, 4, 3, 4)]).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
        assert!(Lamination::new(3, 0, [ch(0, 1, 1, 3), ch(1, 3, 2, 3), ch(0, 1, 2, 3)]).is_ok());
    }

    #[test]
    fn single_diameter_lacks_pullback() {
        let l = Lamination::new(2, 1, [ch(0, 1, 1, 2)]).unwrap();
        let r = check_sibling_invariant(&l);
        assert_eq!(r.tested, 1);
        assert_eq!(
            r.failures,
            vec![InvarianceFailure {
                leaf: ch(0, 1, 1, 2),
                condition: InvarianceCondition::Pullback
            }]
        );
    }

    #[test]
    fn empty_lamination_passes() {
        let l = Lamination::new(3, 0, []).unwrap();
        assert!(check_sibling_invariant(&l).passed());
    }

    #[test]
    fn dump_round_trip_with_generations() {
        let l = Lamination::with_generations(
            3,
            2,
            [
                (ch(0, 1, 1, 3), 0),
                (ch(1, 2, 5, 6), 0),
                (ch(1, 9, 2, 9), 1),
            ],
        )
        .unwrap();
        let text = l.dump();
        assert_eq!(
            text,
            "degree=3 depth=2\n# generation 0\n0-1/3\n1/2-5/6\n# generation 1\n1/9-2/9\n"
        );
        assert_eq!(Lamination::parse(&text).unwrap(), l);
        let plain = "degree=2 depth=1\n0-1/2\n";
        assert_eq!(Lamination::parse(plain).unwrap().dump(), plain);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Lamination::parse("degree=2 depth=1\n0-1/2\nfoo\n").unwrap_err();
        assert!(matches!(err, Error::ParseLine { line: 3, .. }));
        let err = Lamination::parse("degree=x depth=1\n").unwrap_err();
        assert!(matches!(err, Error::ParseLine { line: 1, .. }));
    }

    #[test]
    fn critical_objects_of_two_leaves() {
        let l = Lamination::new(3, 0, [ch(0, 1, 1, 3), ch(1, 2, 5, 6)]).unwrap();
        assert_eq!(
            critical_objects(&l),
            vec![
                Polygon::fracs(&[(0, 1), (1, 3)]),
                Polygon::fracs(&[(1, 2), (5, 6)])
            ]
        );
    }

    #[test]
    fn all_critical_triangle_absorbs_its_edges() {
        let l = Lamination::new(3, 0, [ch(0, 1, 1, 3), ch(1, 3, 2, 3), ch(0, 1, 2, 3)]).unwrap();
        assert_eq!(
            critical_objects(&l),
            vec![Polygon::fracs(&[(0, 1), (1, 3), (2, 3)])]
        );
    }

    #[test]
    fn sweep_matches_brute_force_on_small_grid() {
        let mut chords = Vec::new();
        for i in 0..10 {
            for j in i + 1..10 {
                chords.push(ch(i, 10, j, 10));
            }
        }
        // every subset of a sliding window
        for start in 0..chords.len().saturating_sub(6) {
            for mask in 0u32..64 {
                let subset: Vec<Chord> = (0..6)
                    .filter(|k| mask & (1 << k) != 0)
                    .map(|k| chords[start + k].clone())
                    .collect();
                let refs: Vec<&Chord> = subset.iter().collect();
                assert_eq!(
                    find_linked_pair(&refs).is_some(),
                    count_linked_pairs(&subset) > 0,
                    "{subset:?}"
                );
            }
        }
    }
}
