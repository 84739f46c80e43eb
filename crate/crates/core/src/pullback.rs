//! Thurston pullback: grow a lamination from a critical portrait by taking
//! iterated sibling preimages that avoid the critical sets.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::angle::{check_degree, Angle, Arc, Closedness};
use crate::chord::Chord;
use crate::error::{Error, Result};
use crate::gaps::{gaps, EdgeKind};
use crate::lamination::{find_linked_pair, Lamination};
use crate::quad::{images_disjoint, parse_quad, CriticalQuadrilateral};

/// Forward orbits longer than this are treated as non-preperiodic input.
const ORBIT_LIMIT: usize = 100_000;

/// `d - 1` critical quadrilaterals; degenerate quadruples stand for
/// critical leaves and all-critical triangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPortrait {
    degree: u32,
    criticals: Vec<CriticalQuadrilateral>,
    /// Only used to order randomized enumeration.
    pub seed: Option<u64>,
}

impl CriticalPortrait {
    pub fn new(degree: u32, criticals: Vec<CriticalQuadrilateral>) -> Result<Self> {
        check_degree(degree)?;
        if criticals.len() != degree as usize - 1 {
            return Err(Error::InvalidPortrait(format!(
                "degree {degree} needs {} critical quadrilaterals, got {}",
                degree - 1,
                criticals.len()
            )));
        }
        if let Some(q) = criticals.iter().find(|q| q.degree() != degree) {
            return Err(Error::InvalidPortrait(format!(
                "{q} has degree {}",
                q.degree()
            )));
        }
        Ok(CriticalPortrait {
            degree,
            criticals,
            seed: None,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn criticals(&self) -> &[CriticalQuadrilateral] {
        &self.criticals
    }

    /// Edges of the critical hulls.
    pub fn frame(&self) -> Vec<Chord> {
        let mut v: Vec<Chord> = self
            .criticals
            .iter()
            .flat_map(|q| q.hull().edges())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn dump(&self) -> String {
        let mut s = format!("degree={}\n", self.degree);
        if let Some(seed) = self.seed {
            writeln!(s, "seed={seed}").unwrap();
        }
        for q in &self.criticals {
            writeln!(s, "{q}").unwrap();
        }
        s
    }

    /// Parses the text form written by [`CriticalPortrait::dump`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut degree = None;
        let mut seed = None;
        let mut quads = Vec::new();
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            last = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |e: Error| e.at_line(i + 1);
            if let Some(v) = line.strip_prefix("degree=") {
                if degree.is_some() || !quads.is_empty() {
                    return Err(at(Error::Parse("degree= must come first, once".into())));
                }
                let d: u32 = v
                    .trim()
                    .parse()
                    .map_err(|_| at(Error::Parse(format!("bad degree {v:?}"))))?;
                check_degree(d).map_err(|e| at(Error::Parse(e.to_string())))?;
                degree = Some(d);
            } else if let Some(v) = line.strip_prefix("seed=") {
                seed = Some(
                    v.trim()
                        .parse()
                        .map_err(|_| at(Error::Parse(format!("bad seed {v:?}"))))?,
                );
            } else {
                let d = degree.ok_or_else(|| at(Error::Parse("missing degree= header".into())))?;
                quads.push(parse_quad(d, line).map_err(at)?);
            }
        }
        let d = degree.ok_or_else(|| Error::Parse("missing degree= header".into()).at_line(1))?;
        let mut p = CriticalPortrait::new(d, quads)
            .map_err(|e| Error::Parse(e.to_string()).at_line(last.max(1)))?;
        p.seed = seed;
        Ok(p)
    }
}

/// Result of [`pullback_generate_with`].
#[derive(Clone, Debug)]
pub struct Pullback {
    pub lamination: Lamination,
    /// Pullbacks where a preimage endpoint sat on the boundary of two
    /// branch regions and the counter-clockwise tie-break decided.
    pub ties: usize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PullbackOptions {
    /// Fail with [`Error::AmbiguousBranch`] instead of breaking ties.
    pub strict: bool,
}

/// The portrait's hull edges and forward orbits at generation 0, then
/// generation `k` = the sibling preimages of generation `k - 1`, up to
/// `depth`.
pub fn pullback_generate(p: &CriticalPortrait, depth: u32) -> Result<Lamination> {
    pullback_generate_with(p, depth, PullbackOptions::default()).map(|r| r.lamination)
}

pub fn pullback_generate_with(
    p: &CriticalPortrait,
    depth: u32,
    opts: PullbackOptions,
) -> Result<Pullback> {
    let d = p.degree;
    let frame = p.frame();
    let regions = branch_regions(d, &frame)?;

    let mut leaves: HashMap<Chord, u32> = HashMap::new();
    for c in &frame {
        let mut c = c.clone();
        for _ in 0..ORBIT_LIMIT {
            if c.is_degenerate() || leaves.contains_key(&c) {
                break;
            }
            let next = c.image(d);
            leaves.insert(c, 0);
            c = next;
        }
        if !c.is_degenerate() && !leaves.contains_key(&c) {
            return Err(Error::InvalidPortrait(format!(
                "forward orbit of {c} does not close up"
            )));
        }
    }
    {
        let all: Vec<&Chord> = leaves.keys().collect();
        if let Some((x, y)) = find_linked_pair(&all) {
            return Err(Error::InvalidPortrait(format!(
                "forward orbits cross: {x} and {y}"
            )));
        }
    }

    let mut ties = 0;
    let mut frontier: Vec<Chord> = leaves.keys().cloned().collect();
    frontier.sort();
    for g in 1..=depth {
        let mut next = Vec::new();
        for leaf in &frontier {
            for c in pull_back_leaf(d, &regions, leaf, opts.strict, &mut ties)? {
                if !leaves.contains_key(&c) {
                    leaves.insert(c.clone(), g);
                    next.push(c);
                }
            }
        }
        next.sort();
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    let all: Vec<&Chord> = leaves.keys().collect();
    if let Some((x, y)) = find_linked_pair(&all) {
        return Err(Error::InvalidPortrait(format!(
            "pullback produced crossing leaves {x} and {y}"
        )));
    }
    Ok(Pullback {
        lamination: Lamination::from_parts_unchecked(d, depth, leaves),
        ties,
    })
}

/// A complementary component of the critical hulls, given by its circle
/// arcs.
#[derive(Clone, Debug)]
pub(crate) struct Region {
    arcs: Vec<(Angle, Angle)>,
}

impl Region {
    pub(crate) fn arcs(&self) -> &[(Angle, Angle)] {
        &self.arcs
    }

    fn contains(&self, x: &Angle, closedness: Closedness) -> bool {
        self.arcs
            .iter()
            .any(|(s, e)| Arc::new(s.clone(), e.clone(), closedness).contains(x))
    }
}

/// Components of the disk minus the critical hulls, each checked to map
/// injectively to the circle.
pub(crate) fn branch_regions(d: u32, frame: &[Chord]) -> Result<Vec<Region>> {
    let lam = Lamination::new(d, 0, frame.iter().cloned())
        .map_err(|e| Error::InvalidPortrait(e.to_string()))?;
    let mut out = Vec::new();
    for g in gaps(&lam) {
        let arcs: Vec<(Angle, Angle)> = g
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Arc)
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect();
        if arcs.is_empty() {
            continue;
        }
        if !images_disjoint(d, &arcs) {
            let shown: Vec<String> = arcs.iter().map(|(s, e)| format!("({s},{e})")).collect();
            return Err(Error::InvalidPortrait(format!(
                "degree-{d} map is not injective on region {}",
                shown.join(" ")
            )));
        }
        out.push(Region { arcs });
    }
    Ok(out)
}

/// In each region whose closure holds exactly one preimage of each endpoint,
/// join them. Boundary collisions fall back to half-open arcs `[s, e)`.
fn pull_back_leaf(
    d: u32,
    regions: &[Region],
    leaf: &Chord,
    strict: bool,
    ties: &mut usize,
) -> Result<Vec<Chord>> {
    let pu = leaf.a().preimages(d)?;
    let pw = leaf.b().preimages(d)?;
    let mut out = Vec::new();
    for r in regions {
        let pick = |pts: &[Angle], ties: &mut usize| -> Result<Option<Angle>> {
            let closed: Vec<&Angle> = pts
                .iter()
                .filter(|x| r.contains(x, Closedness::Closed))
                .collect();
            if closed.len() <= 1 {
                return Ok(closed.first().map(|x| (*x).clone()));
            }
            if strict {
                return Err(Error::AmbiguousBranch(format!(
                    "preimages of {} at {} leave the branch undetermined",
                    leaf,
                    closed
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
            *ties += 1;
            let half: Vec<&&Angle> = closed
                .iter()
                .filter(|x| r.contains(x, Closedness::HalfOpenLeft))
                .collect();
            match half.as_slice() {
                [] => Ok(None),
                [x] => Ok(Some((**x).clone())),
                _ => Err(Error::InvalidPortrait(format!(
                    "region {:?} holds several preimages of an endpoint of {leaf}",
                    r.arcs
                ))),
            }
        };
        let (Some(x), Some(y)) = (pick(&pu, ties)?, pick(&pw, ties)?) else {
            continue;
        };
        if x != y {
            out.push(Chord::new(x, y));
        }
    }
    Ok(out)
}
