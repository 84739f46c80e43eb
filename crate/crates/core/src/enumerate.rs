//! Enumeration of cubic portraits with strictly preperiodic critical data,
//! pulled back and filtered down to dendritic marked laminations.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::angle::Angle;
use crate::chord::Chord;
use crate::error::Result;
use crate::gaps::gaps;
use crate::lamination::{check_sibling_invariant, critical_objects, Lamination};
use crate::polygon::{polygons_intersect, Polygon};
use crate::pullback::{branch_regions, pullback_generate_with, CriticalPortrait, PullbackOptions};
use crate::quad::{is_marked_pattern, CriticalQuadrilateral, MarkedLamination};

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub max_preperiod: u32,
    pub max_period: u32,
    /// Stop after this many marked laminations.
    pub count: usize,
    /// Pullback depth used for the filters.
    pub depth: u32,
    pub seed: u64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_preperiod: 2,
            max_period: 2,
            count: 100,
            depth: 8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub accepted: Vec<(CriticalPortrait, MarkedLamination)>,
    /// Candidate portrait and why it was dropped.
    pub skipped: Vec<(String, String)>,
}

/// [`enumerate_with`] at the default depth and seed.
pub fn enumerate_dendritic_portraits(
    max_preperiod: u32,
    max_period: u32,
    count: usize,
) -> Result<Vec<(CriticalPortrait, MarkedLamination)>> {
    let opts = EnumerateOptions {
        max_preperiod,
        max_period,
        count,
        ..EnumerateOptions::default()
    };
    Ok(enumerate_with(&opts).accepted)
}

/// Critical object of a candidate portrait.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Piece {
    Leaf(Chord),
    Quad(CriticalQuadrilateral),
}

impl Piece {
    fn hull(&self) -> Polygon {
        match self {
            Piece::Leaf(c) => Polygon::from_chord(c),
            Piece::Quad(q) => q.hull(),
        }
    }

    fn quad(&self) -> CriticalQuadrilateral {
        match self {
            Piece::Leaf(c) => CriticalQuadrilateral::from_critical_chord(3, c).expect("critical"),
            Piece::Quad(q) => q.clone(),
        }
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Candidate {
    Pair(Piece, Piece),
    Triangle(Angle),
}

/// Angles with preperiod in `1..=k` and period at most `p` under tripling.
pub fn strictly_preperiodic(k: u32, p: u32) -> Vec<Angle> {
    let mut out = BTreeSet::new();
    for pre in 1..=k {
        for per in 1..=p {
            let den = 3i64.pow(pre) * (3i64.pow(per) - 1);
            for n in 0..den {
                let a = Angle::frac(n, den);
                let (x, y) = a.orbit_type(3);
                if (1..=k as usize).contains(&x) && y <= p as usize {
                    out.insert(a);
                }
            }
        }
    }
    out.into_iter().collect()
}

fn is_periodic(a: &Angle) -> bool {
    a.orbit_type(3).0 == 0
}

/// Raw material for candidate portraits.
struct Pool {
    leaves: Vec<Chord>,
    triangles: Vec<Angle>,
    /// Possible minor endpoints: strictly preperiodic one step earlier.
    minor_points: Vec<Angle>,
}

impl Pool {
    fn new(k: u32, p: u32) -> Pool {
        let s = strictly_preperiodic(k, p);
        let set: HashSet<&Angle> = s.iter().collect();
        let third = Angle::frac(1, 3);
        let mut leaves = BTreeSet::new();
        let mut triangles = Vec::new();
        for a in &s {
            let b = a + &third;
            if set.contains(&b) {
                leaves.insert(Chord::new(a.clone(), b.clone()));
                let c = &b + &third;
                if a < &b && a < &c && set.contains(&c) {
                    triangles.push(a.clone());
                }
            }
        }
        let minor_points = s
            .iter()
            .filter(|a| a.orbit_type(3).0 < k as usize)
            .cloned()
            .collect();
        Pool {
            leaves: leaves.into_iter().collect(),
            triangles,
            minor_points,
        }
    }

    fn leaf(&self, rng: &mut ChaCha8Rng) -> Option<Piece> {
        self.leaves.choose(rng).cloned().map(Piece::Leaf)
    }

    /// A collapsing quadrilateral over a random minor, if the draw gives one.
    fn quad(&self, rng: &mut ChaCha8Rng) -> Option<Piece> {
        let u = self.minor_points.choose(rng)?;
        let w = self.minor_points.choose(rng)?;
        if u == w {
            return None;
        }
        let (su, sw) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let mut v: Vec<(Angle, bool)> = Vec::new();
        let pu = u.preimages(3).expect("degree 3");
        let pw = w.preimages(3).expect("degree 3");
        v.extend(
            pu.into_iter()
                .enumerate()
                .filter(|e| e.0 != su)
                .map(|e| (e.1, true)),
        );
        v.extend(
            pw.into_iter()
                .enumerate()
                .filter(|e| e.0 != sw)
                .map(|e| (e.1, false)),
        );
        v.sort();
        if v[0].1 == v[1].1 || v[1].1 == v[2].1 || v[2].1 == v[3].1 {
            return None;
        }
        let q = [
            v[0].0.clone(),
            v[1].0.clone(),
            v[2].0.clone(),
            v[3].0.clone(),
        ];
        let q = Piece::Quad(CriticalQuadrilateral::new(3, q).ok()?);
        piece_orbit_ok(&q).then_some(q)
    }

    fn candidate(&self, rng: &mut ChaCha8Rng) -> Option<Candidate> {
        let roll: f64 = rng.gen();
        let quads = !self.minor_points.is_empty();
        let (a, b) = if roll < 0.08 && !self.triangles.is_empty() {
            return self.triangles.choose(rng).cloned().map(Candidate::Triangle);
        } else if roll < 0.5 || !quads {
            (self.leaf(rng)?, self.leaf(rng)?)
        } else if roll < 0.85 {
            (self.leaf(rng)?, self.quad(rng)?)
        } else {
            (self.quad(rng)?, self.quad(rng)?)
        };
        if polygons_intersect(&a.hull(), &b.hull()) {
            return None;
        }
        Some(if a <= b {
            Candidate::Pair(a, b)
        } else {
            Candidate::Pair(b, a)
        })
    }
}

/// The piece's own forward data does not cross itself.
fn piece_orbit_ok(p: &Piece) -> bool {
    let Piece::Quad(q) = p else { return true };
    let mut leaves = q.hull().edges();
    let v = q.vertices();
    let mut c = Chord::new(v[0].times(3), v[1].times(3));
    while !c.is_degenerate() && !leaves.contains(&c) {
        leaves.push(c.clone());
        c = c.image(3);
    }
    let refs: Vec<&Chord> = leaves.iter().collect();
    crate::lamination::find_linked_pair(&refs).is_none()
}

/// Runs the generator: candidates are drawn from a seeded stream, evaluated
/// in parallel batches and kept in draw order.
pub fn enumerate_with(opts: &EnumerateOptions) -> Enumeration {
    let pool = Pool::new(opts.max_preperiod, opts.max_period);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seen: HashSet<Candidate> = HashSet::new();
    let mut out = Enumeration {
        accepted: Vec::new(),
        skipped: Vec::new(),
    };
    let batch = rayon::current_num_threads().max(1) * 4;
    let max_draws = opts.count * 200 + 1000;
    let mut draws = 0;
    while out.accepted.len() < opts.count && draws < max_draws {
        let mut chunk = Vec::new();
        while chunk.len() < batch && draws < max_draws {
            draws += 1;
            if let Some(c) = pool.candidate(&mut rng) {
                if seen.insert(c.clone()) {
                    chunk.push(c);
                }
            }
        }
        let results: Vec<_> = chunk.par_iter().map(|c| evaluate(c, opts)).collect();
        for r in results {
            match r {
                Ok((p, ms)) => {
                    for m in ms {
                        out.accepted.push((p.clone(), m));
                    }
                }
                Err(skip) => out.skipped.push(skip),
            }
        }
    }
    out.accepted.truncate(opts.count);
    out
}

type Evaluated = std::result::Result<(CriticalPortrait, Vec<MarkedLamination>), (String, String)>;

fn evaluate(c: &Candidate, opts: &EnumerateOptions) -> Evaluated {
    let (portrait, patterns) = match c {
        Candidate::Pair(x, y) => {
            let p = CriticalPortrait::new(3, vec![x.quad(), y.quad()])
                .expect("two cubic quadrilaterals");
            let (a, b) = (x.hull(), y.hull());
            (p, vec![(a.clone(), b.clone()), (b, a)])
        }
        Candidate::Triangle(a) => {
            let b = a + &Angle::frac(1, 3);
            let c = &b + &Angle::frac(1, 3);
            let q1 = CriticalQuadrilateral::new(3, [a.clone(), a.clone(), b.clone(), c.clone()]);
            let q2 = CriticalQuadrilateral::new(3, [a.clone(), b.clone(), b.clone(), c.clone()]);
            let p = CriticalPortrait::new(3, vec![q1.expect("critical"), q2.expect("critical")])
                .expect("two cubic quadrilaterals");
            let t = Polygon::from_points([a.clone(), b, c]);
            (p, vec![(t.clone(), t)])
        }
    };
    let name = portrait
        .dump()
        .lines()
        .skip(1)
        .collect::<Vec<_>>()
        .join(" ");
    let skip = |why: String| (name.clone(), why);

    let (c1, c2) = &patterns[0];
    match is_marked_pattern(3, c1, c2) {
        Ok(true) => {}
        Ok(false) => {
            return Err(skip(
                "pattern is not injective off the critical sets".into(),
            ))
        }
        Err(e) => return Err(skip(e.to_string())),
    }
    let strict = PullbackOptions { strict: true };
    let base = pullback_generate_with(&portrait, 0, strict).map_err(|e| skip(e.to_string()))?;
    if let Some(why) = itinerary_mismatch(&portrait, &base.lamination) {
        return Err(skip(why));
    }
    let full =
        pullback_generate_with(&portrait, opts.depth, strict).map_err(|e| skip(e.to_string()))?;
    let l = full.lamination;
    let report = check_sibling_invariant(&l);
    if !report.passed() {
        return Err(skip(format!(
            "{} invariance failures",
            report.failures.len()
        )));
    }
    let objects = critical_objects(&l);
    let mut expected: Vec<Polygon> = patterns
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    expected.sort();
    expected.dedup();
    if objects != expected {
        return Err(skip(format!(
            "critical objects {objects:?} differ from the portrait"
        )));
    }
    let window = opts.max_period.max(2);
    if opts.depth > window {
        let now = max_gap_size(&l, opts.depth);
        let before = max_gap_size(&l, opts.depth - window);
        if now != before {
            return Err(skip(format!(
                "largest gap grows from {before} to {now} sides between depths {} and {}",
                opts.depth - window,
                opts.depth
            )));
        }
    }
    let l = Arc::new(l);
    let ms = patterns
        .into_iter()
        .map(|(a, b)| MarkedLamination::with_objects(Arc::clone(&l), a, b, &objects))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| skip(e.to_string()))?;
    Ok((portrait, ms))
}

/// Most sides (leaves and arcs) of any gap of the leaves of generation at
/// most `depth`.
///
/// Approximations of a gap with infinitely many sides keep gaining sides as
/// the depth grows; approximations of a finite polygon do not.
pub fn max_gap_size(l: &Lamination, depth: u32) -> usize {
    let sub = Lamination::from_parts_unchecked(
        l.degree(),
        depth,
        l.sorted_leaves()
            .into_iter()
            .filter(|(_, g)| *g <= depth)
            .map(|(c, g)| (c.clone(), g))
            .collect(),
    );
    gaps(&sub).iter().map(|g| g.edges.len()).max().unwrap_or(0)
}

/// Periodic points in the portrait's forward data must be identified, by
/// itinerary, with exactly the points the generation-0 leaves join them to.
/// A larger class means the portrait misses a critical polygon.
fn itinerary_mismatch(p: &CriticalPortrait, base: &Lamination) -> Option<String> {
    const MAX_N: usize = 9;
    let frame = p.frame();
    let regions = branch_regions(3, &frame).ok()?;
    let mut breaks: Vec<Angle> = frame
        .iter()
        .flat_map(|c| [c.a().clone(), c.b().clone()])
        .collect();
    breaks.sort();
    breaks.dedup();
    // region of the open interval starting at each break
    let owner: Vec<usize> = breaks
        .iter()
        .map(|b| {
            regions
                .iter()
                .position(|r| r.arcs().iter().any(|(s, _)| s == b))
                .expect("every arc bounds a region")
        })
        .collect();
    let br: Vec<(u128, u128)> = breaks
        .iter()
        .map(|b| (small(b.numerator()), small(b.denominator())))
        .collect();

    // connected classes of generation-0 leaves
    let mut adj: HashMap<Angle, Vec<Angle>> = HashMap::new();
    for c in base.leaves() {
        adj.entry(c.a().clone()).or_default().push(c.b().clone());
        adj.entry(c.b().clone()).or_default().push(c.a().clone());
    }
    let class_of = |z: &Angle| -> BTreeSet<Angle> {
        let mut seen = BTreeSet::from([z.clone()]);
        let mut stack = vec![z.clone()];
        while let Some(x) = stack.pop() {
            for y in adj.get(&x).into_iter().flatten() {
                if seen.insert(y.clone()) {
                    stack.push(y.clone());
                }
            }
        }
        seen
    };

    let mut periodic = BTreeSet::new();
    for b in &breaks {
        for x in b.orbit(3) {
            if is_periodic(&x) {
                periodic.insert(x);
            }
        }
    }
    for z in &periodic {
        let per = z.orbit_type(3).1;
        let expected = class_of(z);
        for r in 1..=3 {
            let n = per * r;
            if n > MAX_N {
                break;
            }
            let big_n: u128 = 3u128.pow(n as u32) - 1;
            let zk = small(z.numerator()) * big_n / small(z.denominator());
            let symbol = |k: u128| -> Option<usize> {
                // position among breaks of k / big_n
                let idx = br.partition_point(|(p, q)| p * big_n <= k * q);
                if idx > 0 && br[idx - 1].0 * big_n == k * br[idx - 1].1 {
                    return None;
                }
                Some(owner[(idx + br.len() - 1) % br.len()])
            };
            let itinerary = |mut k: u128| -> Option<Vec<usize>> {
                let mut v = Vec::with_capacity(n);
                for _ in 0..n {
                    v.push(symbol(k)?);
                    k = 3 * k % big_n;
                }
                Some(v)
            };
            let Some(target) = itinerary(zk) else {
                return Some(format!("periodic point {z} is a critical vertex"));
            };
            let class: BTreeSet<Angle> = (0..big_n)
                .filter(|&k| itinerary(k).as_ref() == Some(&target))
                .map(|k| Angle::new(k as i64, big_n as i64))
                .collect();
            let want: BTreeSet<Angle> = expected
                .iter()
                .filter(|a| n % a.orbit_type(3).1.max(1) == 0 && a.orbit_type(3).0 == 0)
                .cloned()
                .collect();
            if class != want {
                return Some(format!(
                    "periodic point {z} shares its itinerary with {:?}, expected {:?}",
                    class, want
                ));
            }
        }
    }
    None
}

fn small(x: &num_bigint::BigUint) -> u128 {
    u128::try_from(x).expect("denominator fits in 128 bits")
}
