//! Chords of the unit disk with endpoints at exact angles.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::angle::{check_degree, Angle};
use crate::error::{Error, Result};

/// An unordered pair of circle points, stored with `a <= b` in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    a: Angle,
    b: Angle,
}

impl Chord {
    pub fn new(x: Angle, y: Angle) -> Chord {
        if x <= y {
            Chord { a: x, b: y }
        } else {
            Chord { a: y, b: x }
        }
    }

    pub fn frac(p: i64, q: i64, r: i64, s: i64) -> Chord {
        Chord::new(Angle::frac(p, q), Angle::frac(r, s))
    }

    pub fn a(&self) -> &Angle {
        &self.a
    }

    pub fn b(&self) -> &Angle {
        &self.b
    }

    pub fn endpoints(&self) -> [&Angle; 2] {
        [&self.a, &self.b]
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn has_endpoint(&self, x: &Angle) -> bool {
        &self.a == x || &self.b == x
    }

    /// True iff `x` lies strictly between the endpoints on the arc `(a, b)`.
    pub(crate) fn separates_inside(&self, x: &Angle) -> bool {
        &self.a < x && x < &self.b
    }

    /// Image under `x -> d x`; may be degenerate.
    pub fn image(&self, d: u32) -> Chord {
        Chord::new(self.a.times(d), self.b.times(d))
    }

    /// Length of the shorter of the two arcs cut by the chord.
    pub fn short_length(&self) -> BigRational {
        let l = self.a.ccw_to(&self.b);
        let l = to_rational(&l);
        let half = BigRational::new(1.into(), 2.into());
        if l > half {
            BigRational::from_integer(1.into()) - l
        } else {
            l
        }
    }

    /// Shares at least one endpoint with `other` or crosses it.
    pub fn meets(&self, other: &Chord) -> bool {
        linked(self, other) || self.has_endpoint(&other.a) || self.has_endpoint(&other.b)
    }

    pub fn rotate(&self, by: &Angle) -> Chord {
        Chord::new(&self.a + by, &self.b + by)
    }
}

pub(crate) fn to_rational(x: &Angle) -> BigRational {
    BigRational::new(x.numerator().clone().into(), x.denominator().clone().into())
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

impl FromStr for Chord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Chord> {
        let (x, y) = s
            .trim()
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("bad chord {s:?}")))?;
        Ok(Chord::new(x.parse()?, y.parse()?))
    }
}

/// Two distinct non-degenerate chords crossing in the open disk.
pub fn linked(c1: &Chord, c2: &Chord) -> bool {
    if c1 == c2 || c1.is_degenerate() || c2.is_degenerate() {
        return false;
    }
    if c1.has_endpoint(&c2.a) || c1.has_endpoint(&c2.b) {
        return false;
    }
    c1.separates_inside(&c2.a) != c1.separates_inside(&c2.b)
}

/// Non-degenerate chord whose endpoints share their image.
pub fn is_critical(d: u32, c: &Chord) -> bool {
    !c.is_degenerate() && c.a.times(d) == c.b.times(d)
}

/// The `d - 1` siblings of a non-critical chord: chords with the same image,
/// pairwise disjoint and disjoint from `c`.
///
/// When several disjoint matchings exist, the one whose chords stay inside
/// closed fundamental arcs `[k/d, (k+1)/d]` wins, then the shortest.
pub fn siblings(d: u32, c: &Chord) -> Result<Vec<Chord>> {
    check_degree(d)?;
    if c.is_degenerate() || is_critical(d, c) {
        return Err(Error::CriticalChord(c.to_string()));
    }
    let xs: Vec<Angle> =
        c.a.times(d)
            .preimages(d)?
            .into_iter()
            .filter(|x| x != &c.a)
            .collect();
    let ys: Vec<Angle> =
        c.b.times(d)
            .preimages(d)?
            .into_iter()
            .filter(|y| y != &c.b)
            .collect();

    let mut best: Option<(usize, BigRational, Vec<Chord>)> = None;
    let mut perm: Vec<usize> = (0..ys.len()).collect();
    permutations(&mut perm, 0, &mut |p| {
        let chords: Vec<Chord> = xs
            .iter()
            .zip(p)
            .map(|(x, &j)| Chord::new(x.clone(), ys[j].clone()))
            .collect();
        let ok = chords
            .iter()
            .enumerate()
            .all(|(i, s)| !linked(s, c) && chords[i + 1..].iter().all(|t| !linked(s, t)));
        if !ok {
            return;
        }
        let outside = chords.iter().filter(|s| !in_fundamental_arc(d, s)).count();
        let total = chords
            .iter()
            .fold(BigRational::zero(), |acc, s| acc + s.short_length());
        let mut sorted = chords;
        sorted.sort();
        let key = (outside, total, sorted);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    // A non-critical chord always admits the rotated matching family's
    // unlinked completion, so a valid matching exists.
    best.map(|(_, _, v)| v)
        .ok_or_else(|| Error::Invalid(format!("no disjoint sibling family for {c}")))
}

fn in_fundamental_arc(d: u32, c: &Chord) -> bool {
    // k = floor(d a); chord fits iff d b <= k + 1.
    let k: BigUint = (c.a.numerator() * d) / c.a.denominator();
    c.b.numerator() * d <= (k + 1u32) * c.b.denominator()
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(p: i64, q: i64, r: i64, s: i64) -> Chord {
        Chord::frac(p, q, r, s)
    }

    #[test]
    fn canonical_form() {
        let c = ch(3, 4, 1, 4);
        assert_eq!(c.a(), &Angle::frac(1, 4));
        assert_eq!(c, ch(1, 4, 3, 4));
        assert!(ch(1, 3, 1, 3).is_degenerate());
    }

    #[test]
    fn linked_examples() {
        assert!(linked(&ch(0, 1, 1, 2), &ch(1, 4, 3, 4)));
        assert!(!linked(&ch(0, 1, 1, 4), &ch(1, 4, 1, 2)));
        assert!(linked(&ch(0, 1, 1, 3), &ch(1, 12, 1, 2)));
        assert!(!linked(&ch(0, 1, 1, 2), &ch(0, 1, 1, 2)));
        assert!(!linked(&ch(0, 1, 0, 1), &ch(1, 4, 3, 4)));
    }

    #[test]
    fn critical_examples() {
        assert!(is_critical(3, &ch(0, 1, 1, 3)));
        assert!(!is_critical(3, &ch(0, 1, 1, 2)));
        assert!(is_critical(2, &ch(0, 1, 1, 2)));
        assert!(!is_critical(3, &ch(1, 3, 1, 3)));
    }

    #[test]
    fn sibling_examples() {
        assert_eq!(
            siblings(3, &ch(0, 1, 1, 6)).unwrap(),
            vec![ch(1, 3, 1, 2), ch(2, 3, 5, 6)]
        );
        assert_eq!(siblings(2, &ch(1, 3, 2, 3)).unwrap(), vec![ch(1, 6, 5, 6)]);
        assert!(matches!(
            siblings(3, &ch(0, 1, 1, 3)),
            Err(Error::CriticalChord(_))
        ));
    }

    #[test]
    fn parse_chord() {
        assert_eq!("0-1/2".parse::<Chord>().unwrap(), ch(0, 1, 1, 2));
        assert_eq!(ch(1, 6, 5, 6).to_string(), "1/6-5/6");
        assert!("1/2".parse::<Chord>().is_err());
    }
}
