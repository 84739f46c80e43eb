//! Exact angles on the circle `R/Z` and the angle-multiplication map.
//!
//! An [`Angle`] is a reduced fraction `p/q` with `0 <= p < q`. All
//! arithmetic is exact; denominators are arbitrary precision because they
//! grow like `d^n` under repeated pullback.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A point of the circle `R/Z`, measured in full turns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle {
    num: BigUint,
    den: BigUint,
}

impl Angle {
    pub fn zero() -> Angle {
        Angle {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    /// Builds `p/q mod 1`, reducing the fraction. Panics when `q == 0`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Angle {
        let p = p.into();
        let q = q.into();
        assert!(!q.is_zero(), "angle with zero denominator");
        let (p, q) = if q.sign() == Sign::Minus {
            (-p, -q)
        } else {
            (p, q)
        };
        let q = q.to_biguint().expect("positive denominator");
        let p = p.mod_floor(&BigInt::from(q.clone()));
        let p = p.to_biguint().expect("non-negative residue");
        Angle::reduce(p, q)
    }

    /// Shorthand for small literal fractions.
    pub fn frac(p: i64, q: i64) -> Angle {
        Angle::new(p, q)
    }

    fn reduce(num: BigUint, den: BigUint) -> Angle {
        if num.is_zero() {
            return Angle::zero();
        }
        let g = num.gcd(&den);
        if g.is_one() {
            Angle { num, den }
        } else {
            Angle {
                num: num / &g,
                den: den / g,
            }
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        match (self.num.to_f64(), self.den.to_f64()) {
            (Some(n), Some(d)) if d.is_finite() && n.is_finite() => n / d,
            _ => {
                // Huge denominators: shift both down to fit a double.
                let bits = self.den.bits().saturating_sub(60);
                let n = (&self.num >> bits).to_f64().unwrap_or(0.0);
                let d = (&self.den >> bits).to_f64().unwrap_or(1.0);
                n / d
            }
        }
    }

    /// `d * self mod 1`.
    pub fn sigma(&self, d: u32) -> Result<Angle> {
        check_degree(d)?;
        Ok(self.times(d))
    }

    pub(crate) fn times(&self, d: u32) -> Angle {
        let n = (&self.num * d) % &self.den;
        Angle::reduce(n, self.den.clone())
    }

    /// The `d` solutions of `d * x = self (mod 1)`, ascending in `[0, 1)`.
    pub fn preimages(&self, d: u32) -> Result<Vec<Angle>> {
        check_degree(d)?;
        let den = &self.den * d;
        Ok((0..d)
            .map(|k| Angle::reduce(&self.num + &self.den * k, den.clone()))
            .collect())
    }

    /// Counter-clockwise distance from `self` to `other`, in `[0, 1)`.
    pub fn ccw_to(&self, other: &Angle) -> Angle {
        other - self
    }

    /// Compares this angle, read as a number in `[0,1)`, with `p/q`.
    pub fn cmp_frac(&self, p: u64, q: u64) -> Ordering {
        (&self.num * q).cmp(&(&self.den * p))
    }

    /// Preperiod and period of the angle under `x -> d x`.
    pub fn orbit_type(&self, d: u32) -> (usize, usize) {
        let mut seen: HashMap<Angle, usize> = HashMap::new();
        let mut x = self.clone();
        let mut i = 0;
        loop {
            if let Some(&j) = seen.get(&x) {
                return (j, i - j);
            }
            let next = x.times(d);
            seen.insert(x, i);
            x = next;
            i += 1;
        }
    }

    /// Forward orbit `self, d self, d^2 self, ...` until it repeats.
    pub fn orbit(&self, d: u32) -> Vec<Angle> {
        let (pre, per) = self.orbit_type(d);
        let mut out = Vec::with_capacity(pre + per);
        let mut x = self.clone();
        for _ in 0..pre + per {
            let next = x.times(d);
            out.push(x);
            x = next;
        }
        out
    }
}

pub(crate) fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        Err(Error::Degree(d))
    } else {
        Ok(())
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        if self.den == rhs.den {
            let n = (&self.num + &rhs.num) % &self.den;
            return Angle::reduce(n, self.den.clone());
        }
        let den = &self.den * &rhs.den;
        let n = (&self.num * &rhs.den + &rhs.num * &self.den) % &den;
        Angle::reduce(n, den)
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        &self + &rhs
    }
}

impl Neg for &Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        if self.num.is_zero() {
            Angle::zero()
        } else {
            Angle {
                num: &self.den - &self.num,
                den: self.den.clone(),
            }
        }
    }
}

impl Sub for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        self + &(-rhs)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        &self - &rhs
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Accepts `p/q` or a bare integer; the value is reduced mod 1.
    fn from_str(s: &str) -> Result<Angle> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad angle {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Angle::new(p, q))
    }
}

/// True iff `angles` are in (weakly or strictly) increasing circular order
/// starting from the first entry.
///
/// Equivalently, the counter-clockwise steps around the closed cycle
/// `x0 -> x1 -> ... -> x0` add up to at most one full turn (exactly one,
/// with every step positive, in the strict case).
pub fn cyclically_ordered(angles: &[Angle], strict: bool) -> bool {
    assert!(
        angles.len() >= 3,
        "circular order needs at least three points"
    );
    winding_ok(angles, strict)
}

/// Circular-order test without the length precondition.
pub(crate) fn winding_ok(angles: &[Angle], strict: bool) -> bool {
    let n = angles.len();
    let mut total = BigRational::zero();
    for i in 0..n {
        let step = angles[i].ccw_to(&angles[(i + 1) % n]);
        if strict && step.is_zero() {
            return false;
        }
        total += BigRational::new(step.num.clone().into(), step.den.clone().into());
    }
    total <= BigRational::one()
}

/// Which endpoints an [`Arc`] contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Closedness {
    Open,
    Closed,
    /// Contains `start` only.
    HalfOpenLeft,
    /// Contains `end` only.
    HalfOpenRight,
}

/// Positively oriented arc from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub start: Angle,
    pub end: Angle,
    pub closedness: Closedness,
}

impl Arc {
    pub fn new(start: Angle, end: Angle, closedness: Closedness) -> Arc {
        Arc {
            start,
            end,
            closedness,
        }
    }

    pub fn open(start: Angle, end: Angle) -> Arc {
        Arc::new(start, end, Closedness::Open)
    }

    /// `(end - start) mod 1`; a degenerate arc has length zero.
    pub fn length(&self) -> Angle {
        self.start.ccw_to(&self.end)
    }

    pub fn contains(&self, x: &Angle) -> bool {
        if x == &self.start {
            return matches!(
                self.closedness,
                Closedness::Closed | Closedness::HalfOpenLeft
            ) || (x == &self.end && matches!(self.closedness, Closedness::HalfOpenRight));
        }
        if x == &self.end {
            return matches!(
                self.closedness,
                Closedness::Closed | Closedness::HalfOpenRight
            );
        }
        let len = self.length();
        let off = self.start.ccw_to(x);
        // A zero-length arc with distinct endpoints does not exist; when
        // start == end the open part is the whole punctured circle.
        len.is_zero() || off < len
    }
}
